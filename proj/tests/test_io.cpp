#include <doctest.h>

#include "test_support.hpp"
#include "twistcoh/cli.hpp"
#include "twistcoh/fixtures.hpp"

using namespace twistcoh;
namespace fx = twistcoh::fixtures;
using io::Json;

namespace {

cli::RunResult run(const std::string& command, const std::string& input, std::function<void(cli::RunConfig&)> tweak = {}) {
  cli::RunConfig c;
  c.command = command;
  c.input = input;
  c.format = "json";
  if (tweak) tweak(c);
  return cli::run(c);
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("rationals are strings") {
    CHECK(io::rational_to_json(Rational(-3, 6)) == Json("-1/2"));
    CHECK(io::rational_from_json(Json("4/6")) == Rational(2, 3));
    CHECK_THROWS_AS(io::rational_from_json(Json(0.5)), io::ParseError);
    CHECK_THROWS_AS(io::rational_from_json(Json("1/0")), io::ParseError);
  }

  TEST_CASE("round trips") {
    for (auto c : {fx::s3(), fx::t3(), fx::t3_e23(), fx::cp(3)}) {
      auto back = io::cdga_from_json(io::cdga_to_json(*c));
      CHECK(io::cdga_to_json(*back) == io::cdga_to_json(*c));
      CHECK(back->top_degree() == c->top_degree());
    }
    for (const auto& s : fx::sites()) {
      auto back = io::site_from_json(io::site_to_json(s));
      CHECK(io::site_to_json(back) == io::site_to_json(s));
      auto f = fx::site_circle3().site.name == s.site.name ? point_functions_presheaf(s) : constant_presheaf(s.site);
      auto fj = io::presheaf_to_json(f, s.site.name);
      CHECK(io::presheaf_to_json(io::presheaf_from_json(fj), s.site.name) == fj);
    }
    for (const auto& g : fx::gerbes()) {
      auto j = io::gerbe_to_json(g.cover, g.connection);
      auto [cover, conn] = io::gerbe_from_json(j);
      CHECK(io::gerbe_to_json(cover, conn) == j);
    }
    auto m = testing::dense({{1, 0}, {0, -2}});
    CHECK(io::matrix_from_json(io::matrix_to_json(m)) == m);
  }

  TEST_CASE("malformed documents raise ParseError") {
    CHECK_THROWS_AS(io::cdga_from_json(Json::parse(R"({"kind":"cdga","degrees":[0]})")), io::ParseError);
    CHECK_THROWS_AS(io::vector_from_json(Json::parse(R"([[0, 1]])")), io::ParseError);
    CHECK_THROWS_AS(io::matrix_from_json(Json::parse(R"({"rows":1,"cols":1,"entries":[[3,0,"1"]]})")), io::ParseError);
  }

  TEST_CASE("bundled fixture files match their builders") {
    const auto& lib = testing::library();
    for (const auto& [name, doc] : fx::all_documents()) {
      INFO(name);
      REQUIRE(lib.has(name));
      CHECK(lib.raw(name) == doc);
    }
    CHECK(lib.names("gerbe").size() == fx::gerbes().size());
    CHECK(lib.names("site").size() == fx::sites().size());
    CHECK(lib.twist("tw_t3_k1").algebra->name() == "t3");
  }

  TEST_CASE("cli examples") {
    auto tw = run("twisted", "tw_t3_k1");
    CHECK(tw.exit_code == cli::kOk);
    CHECK(tw.report["schema"] == io::kReportSchema);
    CHECK(tw.report["result"]["two_periodic"] == Json{{"even", 3}, {"odd", 3}});

    auto bs1 = run("bs1", "", [](cli::RunConfig& c) { c.max_degree = 8; });
    CHECK(bs1.exit_code == cli::kOk);
    CHECK(bs1.report["result"]["dims"] == Json{1, 0, 1, 0, 1, 0, 1, 0, 1});

    // Lambda(x3) with x * x = 1: degrees and graded commutativity fail.
    auto bad = run("validate", R"({"kind":"cdga","name":"bad","degrees":[0,3],"differential":[],)"
                               R"("product":[[0,0,0,"1"],[0,1,1,"1"],[1,0,1,"1"],[1,1,0,"1"]],"top_degree":3})");
    CHECK(bad.exit_code == cli::kValidationFailure);
    CHECK_FALSE(bad.report["result"]["violations"].empty());

    CHECK(run("validate", "{not json").exit_code == cli::kParseError);
    CHECK(run("twisted", "no_such_fixture").exit_code == cli::kParseError);
    CHECK(run("twisted", "t3", [](cli::RunConfig& c) { c.lambda = R"([[7, 1]])"; }).exit_code == cli::kParseError);
  }

  TEST_CASE("seeded runs are byte-identical") {
    auto seeded = [](cli::RunConfig& c) {
      c.seed = 5;
      c.seeded = true;
    };
    auto a = run("site", "site_circle3", seeded), b = run("site", "site_circle3", seeded);
    CHECK(a.exit_code == cli::kOk);
    CHECK(a.render("json") == b.render("json"));
    CHECK(a.report["seed"] == 5);
    CHECK(run("site", "site_circle3").render("json") == run("site", "site_circle3").render("json"));
  }
}

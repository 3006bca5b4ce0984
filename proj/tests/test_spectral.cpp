#include <doctest.h>

#include "test_support.hpp"
#include "twistcoh/fixtures.hpp"
#include "twistcoh/spectral.hpp"

using namespace twistcoh;
namespace fx = twistcoh::fixtures;

namespace {

std::vector<std::pair<std::string, TwistClass>> fixture_twists() {
  std::vector<std::pair<std::string, TwistClass>> out;
  for (const auto& name : testing::library().names("twist")) out.emplace_back(name, testing::library().twist(name));
  return out;
}

TwistClass t3_abc(int k) {
  auto t3 = fx::t3();
  return make_twist(t3, SparseVector::unit(testing::basis_at(*t3, 3), k));
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("untwisted models have no higher differentials") {
    for (auto c : {fx::s3(), fx::t3(), fx::s2xs3(), fx::cp(2)}) {
      auto ss = pages(filtered_two_periodic(make_twist(c, {})), 6);
      for (std::size_t r = 1; r < ss.pages.size(); ++r) CHECK(ss.pages[r].d.is_zero());
      CHECK(ss.pages[1].dims() == ss.e_infinity().dims());
    }
  }

  TEST_CASE("T3 with lambda = abc") {
    auto t = t3_abc(1);
    auto f = filtered_two_periodic(t);
    auto ss = pages(f, 6);
    CHECK(ss.pages[1].parity_dims() == std::array<std::size_t, 2>{4, 4});
    CHECK(ss.pages[1].dims() == std::vector<std::size_t>{1, 3, 3, 1});
    CHECK(rank(ss.pages[3].d) == 1);
    CHECK(ss.pages[4].parity_dims() == std::array<std::size_t, 2>{3, 3});
    CHECK(ss.stable_from == 4);
    CHECK(ss.e_infinity().parity_dims() == std::array<std::size_t, 2>{3, 3});
  }

  TEST_CASE("S3 with lambda = x dies at E4") {
    auto s3 = fx::s3();
    auto ss = pages(filtered_two_periodic(make_twist(s3, SparseVector::unit(1))), 6);
    CHECK(ss.e_infinity().total_dim() == 0);
  }

  TEST_CASE("d3 is the cup product with lambda") {
    CHECK(d3_equals_lambda_cup(filtered_two_periodic(make_twist(fx::t3(), {})), make_twist(fx::t3(), {})).equal);
    auto t = t3_abc(1);
    auto check = d3_equals_lambda_cup(filtered_two_periodic(t), t);
    CHECK(check.equal);
    CHECK(rank(check.d3) == 1);
    auto s3 = fx::s3();
    for (int k : {1, 2, 5}) {
      auto ts = make_twist(s3, SparseVector::unit(1, k));
      auto c = d3_equals_lambda_cup(filtered_two_periodic(ts), ts);
      CHECK(c.equal);
      CHECK(c.cup.nnz() == 1);
      // k times the generator map; the lift of [x] is x itself.
      CHECK(c.cup.triplets()[0].value == k);
    }
    auto mixed = testing::library().twist("tw_s3_e23_mixed");
    CHECK_THROWS_AS(d3_equals_lambda_cup(filtered_two_periodic(mixed), mixed), NotApplicable);
  }

  TEST_CASE("check_filtered rejects bad filtrations") {
    // e0 -> e1 with e1 at a lower level.
    FilteredComplex lowering{SparseMatrix::from_triplets(2, 2, {{1, 0, 1}}), {1, 0}};
    CHECK_THROWS_AS(check_filtered(lowering), std::invalid_argument);
    FilteredComplex not_square{SparseMatrix::identity(2), {0, 0}};
    CHECK_THROWS_AS(check_filtered(not_square), std::invalid_argument);
    FilteredComplex fine{SparseMatrix::from_triplets(2, 2, {{1, 0, 1}}), {0, 1}};
    CHECK_NOTHROW(check_filtered(fine));
    CHECK(pages(fine, 3).e_infinity().total_dim() == 0);
  }

  TEST_CASE("property: E-infinity matches the twisted Betti numbers") {
    for (const auto& [name, t] : fixture_twists()) {
      INFO(name);
      auto ss = pages(filtered_two_periodic(t), t.algebra->top_degree() + 2);
      CHECK(ss.e_infinity().parity_dims() == twisted_betti(two_periodic_complex(t)));
    }
  }

  TEST_CASE("property: each page is the cohomology of the previous one") {
    for (const auto& [name, t] : fixture_twists()) {
      INFO(name);
      auto ss = pages(filtered_two_periodic(t), t.algebra->top_degree() + 2);
      for (std::size_t r = 0; r + 1 < ss.pages.size(); ++r) {
        const auto& page = ss.pages[r];
        CHECK((page.d * page.d).is_zero());
        CHECK(ss.pages[r + 1].total_dim() == page.total_dim() - 2 * rank(page.d));
      }
    }
  }

  TEST_CASE("property: even differentials vanish and pages settle by top + 1 on formal models") {
    for (const auto& [name, t] : fixture_twists()) {
      if (!t.algebra->d().is_zero()) continue;
      INFO(name);
      int top = t.algebra->top_degree();
      auto ss = pages(filtered_two_periodic(t), top + 2);
      for (std::size_t r = 0; r < ss.pages.size(); r += 2) CHECK(ss.pages[r].d.is_zero());
      CHECK(ss.stable_from <= top + 1);
      auto d3 = d3_equals_lambda_cup(filtered_two_periodic(t), t);
      CHECK(d3.equal);
    }
  }

  TEST_CASE("property: pages settle by top + 1 on every fixture") {
    for (const auto& [name, t] : fixture_twists()) {
      INFO(name);
      CHECK(pages(filtered_two_periodic(t), 2).stable_from <= t.algebra->top_degree() + 1);
    }
  }
}

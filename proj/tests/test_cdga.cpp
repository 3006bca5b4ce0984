#include <doctest.h>

#include "test_support.hpp"
#include "twistcoh/fixtures.hpp"
#include "twistcoh/twisted.hpp"

using namespace twistcoh;
namespace fx = twistcoh::fixtures;

namespace {

std::vector<CdgaPtr> fixture_algebras() {
  std::vector<CdgaPtr> out;
  for (const auto& name : testing::library().names("cdga")) out.push_back(testing::library().cdga(name));
  return out;
}

std::vector<std::size_t> convolve(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

}  // namespace

TEST_SUITE("cdga") {
  TEST_CASE("validate_cdga examples") {
    auto s3 = exterior_algebra({{3, std::nullopt, "x"}}).algebra;
    CHECK(validate_cdga(*s3).ok());

    auto t3 = fx::t3();
    auto ones = t3->basis_of_degree(1);
    std::size_t a = ones[0], b = ones[1];
    auto terms = t3->product_terms();
    for (auto& t : terms)
      if (t.left == a && t.right == b) t.coeff = -t.coeff;
    Cdga broken(t3->degrees(), t3->d(), terms, t3->top_degree(), "t3_flipped");
    auto report = validate_cdga(broken);
    REQUIRE_FALSE(report.ok());
    bool witnessed = false;
    for (const auto& v : report.violations)
      if (v.rule == "graded_commutativity" && v.witness == std::vector<long>{long(a), long(b)}) witnessed = true;
    CHECK(witnessed);

    auto us = fx::acyclic_us();
    CHECK(validate_cdga(*us).ok());
    CHECK(cohomology_ring(*us).dims == std::vector<std::size_t>{1, 0, 0});
  }

  TEST_CASE("free_cdga examples") {
    auto x = exterior_algebra({{3, std::nullopt, "x"}});
    CHECK(x.algebra->dim() == 2);
    CHECK(x.algebra->degrees() == std::vector<int>{0, 3});

    auto t3 = exterior_algebra({{1, std::nullopt, "a"}, {1, std::nullopt, "b"}, {1, std::nullopt, "c"}});
    CHECK(t3.algebra->dim() == 8);
    CHECK(cohomology_ring(*t3.algebra).dims == std::vector<std::size_t>{1, 3, 3, 1});
    CHECK(oracle::dense_betti(*t3.algebra) == std::vector<std::size_t>{1, 3, 3, 1});

    auto s = free_cdga({{2, 3, "s"}}, {{}}, 6);
    CHECK(s.algebra->degrees() == std::vector<int>{0, 2, 4, 6});
    CHECK(s.exponents == std::vector<std::vector<int>>{{0}, {1}, {2}, {3}});
    CHECK(validate_cdga(*s.algebra).ok());

    CHECK_THROWS_AS(free_cdga({{2, std::nullopt, "s"}}, {{}}, 4), CapRequired);
  }

  TEST_CASE("the free algebra on du = s keeps a top class the quotient removes") {
    // u s^cap is closed but not exact in the truncated free algebra.
    auto f = free_cdga({{1, std::nullopt, "u"}, {2, 1, "s"}}, {{{Rational(1), {0, 1}}}, {}}, 3);
    CHECK(validate_cdga(*f.algebra).ok());
    CHECK(cohomology_ring(*f.algebra).dims == std::vector<std::size_t>{1, 0, 0, 1});
    CHECK(fx::acyclic_us()->dim() == 3);
    CHECK(fx::e23()->dim() == 3);
    CHECK(fx::e23()->top_degree() == 3);
    CHECK(cohomology_ring(*fx::e23()).dims == std::vector<std::size_t>{1, 0, 0, 0});
  }

  TEST_CASE("tensor_cdga examples") {
    auto s3 = fx::s3();
    auto with_unit = tensor_cdga(*s3, *fx::point());
    REQUIRE(with_unit->dim() == s3->dim());
    CHECK(with_unit->degrees() == s3->degrees());
    CHECK(with_unit->d() == s3->d());
    for (std::size_t i = 0; i < s3->dim(); ++i)
      for (std::size_t j = 0; j < s3->dim(); ++j) CHECK(with_unit->product(i, j) == s3->product(i, j));

    auto y = exterior_algebra({{1, std::nullopt, "y"}}).algebra;
    auto xy = tensor_cdga(*s3, *y);
    CHECK(xy->dim() == 4);
    CHECK(validate_cdga(*xy).ok());
    CHECK(cohomology_ring(*xy).dims == std::vector<std::size_t>{1, 1, 0, 1, 1});
    CHECK(oracle::dense_betti(*xy) == std::vector<std::size_t>{1, 1, 0, 1, 1});

    auto left = tensor_left_inclusion(xy, s3, y->dim());
    auto right = tensor_right_inclusion(xy, y);
    CHECK(validate_morphism(left).ok());
    CHECK(validate_morphism(right).ok());
  }

  TEST_CASE("cohomology_ring examples") {
    CHECK(cohomology_ring(*fx::s3()).dims == std::vector<std::size_t>{1, 0, 0, 1});
    CHECK(cohomology_ring(*fx::acyclic_us()).dims == std::vector<std::size_t>{1, 0, 0});
    CHECK(cohomology_ring(*fx::t3()).dims == std::vector<std::size_t>{1, 3, 3, 1});
    auto ring = cohomology_ring(*fx::t3_e23());
    CHECK(ring.dims == std::vector<std::size_t>{1, 3, 3, 1, 0, 0, 0});
    for (const auto& reps : ring.representatives)
      for (const auto& r : reps) CHECK(fx::t3_e23()->differential(r).empty());
    // w = dv is exact in E23.
    auto e = fx::e23();
    CHECK(is_exact(*e, SparseVector::unit(testing::basis_at(*e, 3))));
    CHECK_FALSE(is_exact(*fx::s3(), SparseVector::unit(1)));
  }

  TEST_CASE("apply_morphism examples") {
    auto t3 = fx::t3();
    auto e = make_element(t3, testing::vec({{1, 2}, {2, -1}}), 1);
    auto id = identity_morphism(t3);
    CHECK(apply_morphism(id, e).coeffs == e.coeffs);

    auto inc = tensor_left_inclusion(fx::t3_e23(), t3, fx::e23()->dim());
    CHECK(apply_morphism(inc, make_element(t3, t3->unit(), 0)).coeffs == fx::t3_e23()->unit());

    auto g = fx::gerbe_t3_e23_two();
    SparseVector lambda = curvature(g.cover, g.connection);
    for (std::size_t i = 0; i < g.cover.charts; ++i) {
      CdgaMorphism r{g.cover.global, g.cover.pieces.at({i}), g.cover.restrictions[i]};
      auto image = apply_morphism(r, make_element(g.cover.global, lambda, 3));
      CHECK(image.coeffs == g.cover.piece({i}).differential(g.connection.beta[i]));
    }

    auto mixed = make_element(t3, testing::vec({{0, 1}, {1, 1}}));
    CHECK(mixed.is_mixed());
    CHECK_THROWS_AS(apply_morphism(id, mixed), DegreeMismatch);
    CHECK_THROWS_AS(make_element(t3, testing::vec({{0, 1}}), 2), DegreeMismatch);
    CHECK_THROWS_AS(apply_morphism(id, make_element(fx::s3(), SparseVector::unit(1), 3)), DegreeMismatch);
  }

  TEST_CASE("quotients carry a projection morphism") {
    auto f = exterior_algebra({{1, std::nullopt, "a"}, {1, std::nullopt, "b"}});
    std::size_t ab = monomial_index(f, {1, 1});
    auto q = quotient_cdga(f.algebra, {SparseVector::unit(ab)}, "ext2_mod_ab");
    CHECK(q.algebra->dim() == 3);
    CHECK(validate_cdga(*q.algebra).ok());
    CHECK(validate_morphism(q.projection).ok());
    CHECK(q.algebra->top_degree() == f.algebra->top_degree());
  }

  TEST_CASE("property: every fixture constructor validates, Leibniz included") {
    for (const auto& c : fixture_algebras()) {
      INFO(c->name());
      CHECK(validate_cdga(*c).ok());
    }
    for (auto c : {fx::cp(1), fx::cp(2), fx::cp(3), fx::s2xs3(), fx::t3_us(), fx::s3_e23()}) {
      INFO(c->name());
      CHECK(validate_cdga(*c).ok());
    }
  }

  TEST_CASE("property: random algebras validate and satisfy the Kunneth formula") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      oracle::SeededRng rng(seed);
      auto c = oracle::random_cdga(rng);
      INFO("seed " << seed);
      CHECK(validate_cdga(*c).ok());
      CHECK(cohomology_ring(*c).dims == oracle::dense_betti(*c));
    }
    auto fixtures = std::vector<CdgaPtr>{fx::s3(), fx::t3(), fx::acyclic_us(), fx::cp(2)};
    for (const auto& a : fixtures)
      for (const auto& b : fixtures) {
        auto ab = tensor_cdga(*a, *b);
        CHECK(cohomology_ring(*ab).dims == convolve(cohomology_ring(*a).dims, cohomology_ring(*b).dims));
      }
  }

  TEST_CASE("property: cohomology folded mod 2 matches the untwisted two-periodic complex") {
    for (const auto& c : fixture_algebras()) {
      auto dims = cohomology_ring(*c).dims;
      std::array<std::size_t, 2> folded{0, 0};
      for (std::size_t k = 0; k < dims.size(); ++k) folded[k % 2] += dims[k];
      CHECK(twisted_betti(two_periodic_complex(make_twist(c, {}))) == folded);
    }
  }
}

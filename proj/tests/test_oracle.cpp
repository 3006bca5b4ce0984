#include <doctest.h>

#include "test_support.hpp"
#include "twistcoh/fixtures.hpp"

using namespace twistcoh;
using oracle::DenseMatrix;

namespace {

DenseMatrix rows(const std::vector<std::vector<int>>& r) {
  std::vector<std::vector<Rational>> q;
  for (const auto& row : r) q.emplace_back(row.begin(), row.end());
  return DenseMatrix::from_rows(q);
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("dense rank examples") {
    CHECK(oracle::dense_rank(DenseMatrix(4, 3)) == 0);
    for (std::size_t n : {1, 4, 9}) CHECK(oracle::dense_rank(DenseMatrix::identity(n)) == n);
    auto h = oracle::hilbert_like(5);
    CHECK(oracle::cofactor_determinant(h) != 0);
    CHECK(oracle::dense_rank(h) == 5);
    CHECK(oracle::cofactor_determinant(rows({{1, 2}, {3, 4}})) == -2);
    CHECK(oracle::dense_kernel(rows({{1, 1, 1}})).size() == 2);
  }

  TEST_CASE("dense cohomology refuses non-complexes") {
    CHECK(oracle::dense_cohomology_dim(DenseMatrix(3, 2), DenseMatrix(1, 3)) == 3);
    CHECK_THROWS_AS(oracle::dense_cohomology_dim(DenseMatrix::identity(2), DenseMatrix::identity(2)),
                    CompositionNonzero);
  }

  TEST_CASE("exhaustive limit and colimit examples") {
    oracle::Diagram one{{3}, {}};
    CHECK(oracle::exhaustive_limit(one).dim == 3);
    CHECK(oracle::exhaustive_colimit(one) == 3);
    oracle::Diagram discrete{{2, 3}, {}};
    CHECK(oracle::exhaustive_limit(discrete).dim == 5);
    CHECK(oracle::exhaustive_colimit(discrete) == 5);

    // Two parallel maps Q^3 -> Q^2.
    auto f = rows({{1, 0, 2}, {0, 1, 1}}), g = rows({{1, 0, 0}, {0, 1, 1}});
    oracle::Diagram eq{{3, 2}, {{0, 1, f}, {0, 1, g}}};
    auto lim = oracle::exhaustive_limit(eq);
    auto diff = testing::dense({{0, 0, 2}, {0, 0, 0}});
    CHECK(lim.dim == kernel_basis(diff).dim());
    CHECK(lim.dim == 2);
    for (const auto& b : lim.basis) CHECK(b.size() == 5);
    CHECK(oracle::exhaustive_colimit(eq) == 2 - rank(diff));
  }

  TEST_CASE("simplicial oracle") {
    std::vector<std::set<int>> sphere3;
    for (int skip = 0; skip < 5; ++skip) {
      std::set<int> f;
      for (int v = 0; v < 5; ++v)
        if (v != skip) f.insert(v);
      sphere3.push_back(f);
    }
    CHECK(oracle::simplicial_betti(sphere3) == std::vector<std::size_t>{1, 0, 0, 1});
    CHECK(oracle::simplicial_betti(sphere3, 2) == std::vector<std::size_t>{1, 0, 0, 1});
    // A Moebius-free check of the prime: the boundary of a triangle is the same mod 3.
    CHECK(oracle::simplicial_betti({{0, 1}, {1, 2}, {0, 2}}, 3) == std::vector<std::size_t>{1, 1});
  }

  TEST_CASE("random fixtures are deterministic") {
    for (std::uint64_t seed : {0, 1, 42}) {
      oracle::SeededRng a(seed), b(seed);
      CHECK(io::cdga_to_json(*oracle::random_cdga(a)).dump() == io::cdga_to_json(*oracle::random_cdga(b)).dump());
      CHECK(io::matrix_to_json(oracle::random_matrix(a, 7, 5, 0.5, 3)).dump() ==
            io::matrix_to_json(oracle::random_matrix(b, 7, 5, 0.5, 3)).dump());
      auto circle = fixtures::site_circle3();
      CHECK(io::presheaf_to_json(oracle::random_presheaf(a, circle.site.category), "c").dump() ==
            io::presheaf_to_json(oracle::random_presheaf(b, circle.site.category), "c").dump());
    }
  }

  TEST_CASE("random matrices respect the rank cap") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      oracle::SeededRng rng(seed);
      auto m = oracle::random_matrix(rng, 8, 9, 0.8, 3);
      CHECK(oracle::dense_rank(testing::to_dense(m)) <= 3);
    }
  }

  TEST_CASE("generated algebras and presheaves are valid") {
    std::size_t with_d = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      oracle::SeededRng rng(seed);
      auto c = oracle::random_cdga(rng);
      CHECK(validate_cdga(*c).ok());
      if (!c->d().is_zero()) ++with_d;
      for (int k = 0; k <= c->max_degree(); ++k) {
        auto z = oracle::random_closed_element(rng, *c, k);
        CHECK(c->differential(z).empty());
        CHECK((z.empty() || c->is_homogeneous(z, k)));
      }
    }
    CHECK(with_d > 0);
    for (const auto& s : fixtures::sites())
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        oracle::SeededRng rng(seed);
        CHECK(validate_presheaf(s.site.category, oracle::random_presheaf(rng, s.site.category)).ok());
      }
  }

  TEST_CASE("dense model oracles agree with the main path") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      oracle::SeededRng rng(seed);
      auto c = oracle::random_cdga(rng);
      CHECK(oracle::dense_betti(*c) == cohomology_ring(*c).dims);
      auto lambda = oracle::random_closed_element(rng, *c, 3);
      CHECK(oracle::dense_twisted_betti(*c, lambda) == twisted_betti(two_periodic_complex(make_twist(c, lambda))));
    }
  }
}

#include <doctest.h>

#include "test_support.hpp"
#include "twistcoh/smith.hpp"

using namespace twistcoh;
using testing::dense;
using testing::vec;

namespace {

IntMatrix to_int(const SparseMatrix& m) {
  IntMatrix out(m.rows(), std::vector<Integer>(m.cols(), 0));
  for (const auto& t : m.triplets()) out[t.row][t.col] = t.value.get_num();
  return out;
}

SparseMatrix from_int(const IntMatrix& m, std::size_t rows, std::size_t cols) {
  std::vector<SparseMatrix::Triplet> t;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (m[r][c] != 0) t.push_back({r, c, Rational(m[r][c])});
  return SparseMatrix::from_triplets(rows, cols, std::move(t));
}

// Product of random elementary integer row operations.
IntMatrix random_unimodular(oracle::SeededRng& rng, std::size_t n) {
  IntMatrix u(n, std::vector<Integer>(n, 0));
  for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;
  for (int step = 0; step < 12 && n > 1; ++step) {
    auto i = static_cast<std::size_t>(rng.uniform(0, static_cast<int>(n) - 1));
    auto j = static_cast<std::size_t>(rng.uniform(0, static_cast<int>(n) - 2));
    if (j >= i) ++j;
    Integer k = rng.uniform(-2, 2);
    for (std::size_t c = 0; c < n; ++c) u[i][c] += k * u[j][c];
    if (rng.chance(0.2)) std::swap(u[i], u[j]);
  }
  return u;
}

// Random 6x6 pair with d_out d_in = 0: d_out kills the image of d_in.
std::pair<SparseMatrix, SparseMatrix> random_exact_pair(oracle::SeededRng& rng) {
  SparseMatrix d_in = oracle::random_matrix(rng, 6, 6, 0.6, static_cast<std::size_t>(rng.uniform(0, 4)));
  auto left_null = oracle::dense_kernel(testing::to_dense(d_in.transpose()));
  std::vector<std::vector<Rational>> rows;
  for (int r = 0; r < 6; ++r) {
    std::vector<Rational> row(6, 0);
    for (const auto& k : left_null) {
      Rational c = rng.small_rational();
      for (std::size_t j = 0; j < 6; ++j) row[j] += c * k[j];
    }
    rows.push_back(row);
  }
  return {d_in, SparseMatrix::from_dense(rows)};
}

}  // namespace

TEST_SUITE("linalg") {
  TEST_CASE("rationals stay in lowest terms and round-trip as text") {
    Rational q = parse_rational("-6/4");
    CHECK(format_rational(q) == "-3/2");
    CHECK(q.get_den() > 0);
    CHECK(format_rational(parse_rational("10/5")) == "2");
    CHECK(parse_rational(format_rational(Rational(-7, 9))) == Rational(-7, 9));
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1.5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("6/-4"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
    CHECK(binomial(6, 2) == 15);
    CHECK(factorial(5) == 120);
  }

  TEST_CASE("sparse vectors drop zeros and merge duplicates") {
    auto v = SparseVector::from_entries({{3, 1}, {1, 2}, {3, -1}, {0, 0}});
    REQUIRE(v.nnz() == 1);
    CHECK(v.entries()[0].index == 1);
    CHECK(v.at(3) == 0);
    CHECK((v - v).empty());
    CHECK(v.axpy(2, SparseVector::unit(1)) == vec({{1, 4}}));
  }

  TEST_CASE("kernel examples") {
    CHECK(kernel_basis(SparseMatrix::zero(2, 3)).dim() == 3);
    CHECK(kernel_basis(SparseMatrix::identity(3)).dim() == 0);
    auto m = dense({{1, 2}, {2, 4}});
    auto k = kernel_basis(m);
    REQUIRE(k.dim() == 1);
    CHECK(k.ambient_dim == 2);
    auto oracle_kernel = oracle::dense_kernel(testing::to_dense(m));
    REQUIRE(oracle_kernel.size() == 1);
    // Both must be multiples of (2, -1).
    const auto& b = k.basis[0];
    CHECK(b.at(0) == -2 * b.at(1));
    CHECK(oracle_kernel[0][0] == -2 * oracle_kernel[0][1]);
    CHECK(m.apply(b).empty());
  }

  TEST_CASE("cohomology_dim examples") {
    CHECK(cohomology_dim(SparseMatrix::zero(4, 4), SparseMatrix::zero(4, 4)) == 4);
    CHECK(cohomology_dim(SparseMatrix::identity(3), SparseMatrix::zero(3, 3)) == 0);
    CHECK_THROWS_AS(cohomology_dim(SparseMatrix::identity(2), SparseMatrix::identity(2)), CompositionNonzero);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      oracle::SeededRng rng(seed);
      auto [d_in, d_out] = random_exact_pair(rng);
      CHECK(cohomology_dim(d_in, d_out) ==
            oracle::dense_cohomology_dim(testing::to_dense(d_in), testing::to_dense(d_out)));
    }
  }

  TEST_CASE("solve_linear examples") {
    auto b = vec({{0, 3}, {2, -1}});
    auto x = solve_linear(SparseMatrix::identity(3), b);
    REQUIRE(x);
    CHECK(*x == b);
    CHECK_FALSE(solve_linear(SparseMatrix::zero(3, 3), b));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      oracle::SeededRng rng(seed);
      auto m = oracle::random_matrix(rng, 5, 4, 0.7, 3);
      std::vector<Rational> x0(4);
      for (auto& q : x0) q = rng.small_rational();
      auto rhs = m.apply(SparseVector::from_dense(x0));
      auto sol = solve_linear(m, rhs);
      REQUIRE(sol);
      CHECK((m.apply(*sol) - rhs).empty());
    }
  }

  TEST_CASE("smith normal form examples") {
    auto id = smith_normal_form(SparseMatrix::identity(3));
    CHECK(id.invariants == std::vector<Integer>{1, 1, 1});

    auto m = dense({{2, 0}, {0, 3}});
    auto s = smith_normal_form(m);
    CHECK(s.invariants == std::vector<Integer>{1, 6});
    CHECK(abs(int_determinant(s.U)) == 1);
    CHECK(abs(int_determinant(s.V)) == 1);
    CHECK(int_multiply(int_multiply(s.U, to_int(m), 2, 2, 2), s.V, 2, 2, 2) == s.D);

    // Coboundary of the hollow triangle: vertices -> edges {01, 02, 12}.
    auto delta = dense({{-1, 1, 0}, {-1, 0, 1}, {0, -1, 1}});
    auto sd = smith_normal_form(delta);
    CHECK(sd.invariants == std::vector<Integer>{1, 1});
    auto h = simplicial_integer_cohomology({{0, 1}, {1, 2}, {0, 2}});
    REQUIRE(h.size() == 2);
    CHECK(h[0] == IntegerGroup{1, {}});
    CHECK(h[1] == IntegerGroup{1, {}});
    CHECK(oracle::simplicial_betti({{0, 1}, {1, 2}, {0, 2}}) == std::vector<std::size_t>{1, 1});
    CHECK_THROWS_AS(smith_normal_form(SparseMatrix::from_dense({{Rational(1, 2)}})), std::invalid_argument);
  }

  TEST_CASE("torsion shows up in integer cohomology") {
    // Z -> Z multiplication by 2 has invariant 2.
    CHECK(smith_normal_form(dense({{2}})).invariants == std::vector<Integer>{2});
    CHECK(smith_normal_form(dense({{4, 6}, {6, 9}})).invariants == std::vector<Integer>{1});
  }

  TEST_CASE("property: rank plus nullity equals the column count") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      oracle::SeededRng rng(seed);
      auto rows = static_cast<std::size_t>(rng.uniform(1, 12));
      auto cols = static_cast<std::size_t>(rng.uniform(1, 12));
      auto m = oracle::random_matrix(rng, rows, cols, 0.4, static_cast<std::size_t>(rng.uniform(0, 12)));
      CHECK(rank(m) + kernel_basis(m).dim() == cols);
      CHECK(rank(m) == image_basis(m).dim());
      for (const auto& k : kernel_basis(m).basis) CHECK(m.apply(k).empty());
    }
  }

  TEST_CASE("property: sparse rank agrees with the dense oracle") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      oracle::SeededRng rng(1000 + seed);
      auto rows = static_cast<std::size_t>(rng.uniform(1, 40));
      auto cols = static_cast<std::size_t>(rng.uniform(1, 40));
      auto m = oracle::random_matrix(rng, rows, cols, 0.3, static_cast<std::size_t>(rng.uniform(0, 40)));
      CHECK(rank(m) == oracle::dense_rank(testing::to_dense(m)));
    }
  }

  TEST_CASE("property: smith invariants survive unimodular changes of basis") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      oracle::SeededRng rng(seed);
      auto rows = static_cast<std::size_t>(rng.uniform(1, 5));
      auto cols = static_cast<std::size_t>(rng.uniform(1, 5));
      auto m = oracle::random_matrix(rng, rows, cols, 0.6, static_cast<std::size_t>(rng.uniform(0, 5)));
      auto base = smith_normal_form(m).invariants;
      auto u = random_unimodular(rng, rows), v = random_unimodular(rng, cols);
      auto moved = int_multiply(int_multiply(u, to_int(m), rows, rows, cols), v, rows, cols, cols);
      auto s = smith_normal_form(from_int(moved, rows, cols));
      CHECK(s.invariants == base);
      CHECK(int_multiply(int_multiply(s.U, moved, rows, rows, cols), s.V, rows, cols, cols) == s.D);
    }
  }

  TEST_CASE("quotients and cochain complexes") {
    // span{e0, e1} / span{e0 + e1}
    Quotient q(3, {vec({{0, 1}, {1, 1}})}, {SparseVector::unit(0), SparseVector::unit(1)});
    CHECK(q.dim() == 1);
    CHECK(q.coordinates(SparseVector::unit(0)) == q.coordinates(SparseVector::unit(1)).scaled(-1));
    CHECK_THROWS_AS(q.coordinates(SparseVector::unit(2)), std::domain_error);

    CochainComplex c{{1, 2, 1}, {dense({{1}, {1}}), dense({{1, -1}})}};
    c.check_square_zero();
    CHECK(c.cohomology_dims() == std::vector<std::size_t>{0, 0, 0});
  }
}

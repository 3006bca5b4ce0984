#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "twistcoh/cdga.hpp"
#include "twistcoh/rational.hpp"
#include "twistcoh/site.hpp"

// Brute-force reference implementations. Nothing here calls the sparse elimination code, so the
// results can certify the main computations.
namespace twistcoh::oracle {

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_rows(const std::vector<std::vector<Rational>>& rows);
  // Reads the stored triplets only.
  static DenseMatrix from_sparse(const SparseMatrix& m);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& at(std::size_t r, std::size_t c) { return data_.at(r * cols_ + c); }
  const Rational& at(std::size_t r, std::size_t c) const { return data_.at(r * cols_ + c); }
  DenseMatrix operator*(const DenseMatrix& o) const;
  bool is_zero() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

// Gaussian elimination with a nonzero pivot search over the whole remaining block.
std::size_t dense_rank(DenseMatrix m);
// Basis of {x : m x = 0} from the reduced row echelon form.
std::vector<std::vector<Rational>> dense_kernel(DenseMatrix m);
// Laplace expansion along the first row; exponential, for small matrices only.
Rational cofactor_determinant(const DenseMatrix& m);
// Entries 1/(i+j+1) perturbed on the diagonal.
DenseMatrix hilbert_like(std::size_t n);
// dim ker(d_out) - rank(d_in); throws CompositionNonzero when d_out d_in != 0.
std::size_t dense_cohomology_dim(const DenseMatrix& d_in, const DenseMatrix& d_out);

// Ordinary Betti numbers per degree 0..max degree, from the raw differential.
std::vector<std::size_t> dense_betti(const Cdga& c);
// (even, odd) cohomology of x -> dx + lambda x, with lambda x read off the product table.
std::array<std::size_t, 2> dense_twisted_betti(const Cdga& c, const SparseVector& lambda);

// A finite diagram of vector spaces; arrow maps are dims[to] x dims[from].
struct Diagram {
  struct Arrow {
    std::size_t from;
    std::size_t to;
    DenseMatrix map;
  };
  std::vector<std::size_t> dims;
  std::vector<Arrow> arrows;
};

struct LimitResult {
  std::size_t dim = 0;
  std::vector<std::vector<Rational>> basis;  // in the coordinates of the product of all nodes
};
// Families (x_n) with map(x_from) = x_to for every arrow.
LimitResult exhaustive_limit(const Diagram& d);
// Direct sum modulo the relations from + (-map) to over every arrow.
std::size_t exhaustive_colimit(const Diagram& d);

// Diagram of F over the listed elements with common target: one arrow e -> e o g for every
// morphism g of the source category that composes with e.
Diagram pushforward_diagram(const Correspondence& p, const Presheaf& f, const std::vector<std::size_t>& elements);
// Diagram of F over the listed elements with common source: one arrow h o e -> e with map F(h).
Diagram pullback_diagram(const Correspondence& p, const Presheaf& f, const std::vector<std::size_t>& elements);

// Betti numbers of the simplicial complex generated by the facets, over Q (prime = 0) or F_prime.
std::vector<std::size_t> simplicial_betti(const std::vector<std::set<int>>& facets, std::uint64_t prime = 0);

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}
  int uniform(int lo, int hi);  // inclusive
  bool chance(double p);
  Rational small_rational(int range = 3, int max_den = 2);  // may be zero
  Rational nonzero_integer(int range = 3);
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Entries in [-3, 3] with the given density; rank at most max_rank when max_rank < min(rows, cols).
SparseMatrix random_matrix(SeededRng& rng, std::size_t rows, std::size_t cols, double density, std::size_t max_rank);
// Random free algebra on up to four generators; odd generators get a random closed differential
// image in the subalgebra of the earlier generators.
CdgaPtr random_cdga(SeededRng& rng);
SparseVector random_element(SeededRng& rng, const Cdga& c, int degree);
// Random cocycle of the given degree, zero when there is none.
SparseVector random_closed_element(SeededRng& rng, const Cdga& c, int degree);
// Quotient of a sum of representables and the all-Q presheaf by the subpresheaf generated by a
// few random sections.
Presheaf random_presheaf(SeededRng& rng, const FiniteCategory& c);

}  // namespace twistcoh::oracle

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "twistcoh/rational.hpp"

namespace twistcoh {

class CompositionNonzero : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Entry {
  std::size_t index;
  Rational value;
};

// Sparse vector: entries sorted by index, no stored zeros.
class SparseVector {
 public:
  SparseVector() = default;

  // Sums duplicate indices and drops zeros.
  static SparseVector from_entries(std::vector<Entry> entries);
  static SparseVector unit(std::size_t index, const Rational& value = 1);
  static SparseVector from_dense(const std::vector<Rational>& dense);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  Rational at(std::size_t index) const;
  // Largest stored index + 1 (0 when empty).
  std::size_t support_bound() const { return entries_.empty() ? 0 : entries_.back().index + 1; }

  SparseVector operator+(const SparseVector& o) const;
  SparseVector operator-(const SparseVector& o) const;
  SparseVector operator-() const;
  SparseVector scaled(const Rational& c) const;
  // this + c * o
  SparseVector axpy(const Rational& c, const SparseVector& o) const;
  // Applies index map (old index -> new index); indices mapped to npos are dropped.
  SparseVector reindexed(const std::vector<std::size_t>& map) const;
  std::vector<Rational> to_dense(std::size_t n) const;

  bool operator==(const SparseVector& o) const;
  bool operator!=(const SparseVector& o) const { return !(*this == o); }

 private:
  explicit SparseVector(std::vector<Entry> sorted) : entries_(std::move(sorted)) {}
  std::vector<Entry> entries_;
};

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

// Immutable column-compressed sparse matrix.
class SparseMatrix {
 public:
  struct Triplet {
    std::size_t row;
    std::size_t col;
    Rational value;
  };

  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols);

  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> t);
  static SparseMatrix from_columns(std::size_t rows, std::vector<SparseVector> columns);
  static SparseMatrix from_dense(const std::vector<std::vector<Rational>>& rows);
  static SparseMatrix identity(std::size_t n);
  static SparseMatrix zero(std::size_t rows, std::size_t cols) { return SparseMatrix(rows, cols); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const;
  const SparseVector& column(std::size_t j) const { return columns_.at(j); }
  const std::vector<SparseVector>& columns() const { return columns_; }
  Rational at(std::size_t r, std::size_t c) const { return columns_.at(c).at(r); }
  bool is_zero() const;
  bool is_identity() const;

  SparseVector apply(const SparseVector& v) const;
  SparseMatrix operator*(const SparseMatrix& o) const;
  SparseMatrix operator+(const SparseMatrix& o) const;
  SparseMatrix operator-(const SparseMatrix& o) const;
  SparseMatrix scaled(const Rational& c) const;
  SparseMatrix transpose() const;
  SparseMatrix select_columns(const std::vector<std::size_t>& cols) const;
  // Keeps the listed rows, renumbered in list order.
  SparseMatrix select_rows(const std::vector<std::size_t>& rows) const;
  // Row-major sorted triplets.
  std::vector<Triplet> triplets() const;
  std::vector<std::vector<Rational>> to_dense() const;

  bool operator==(const SparseMatrix& o) const;
  bool operator!=(const SparseMatrix& o) const { return !(*this == o); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<SparseVector> columns_;
};

SparseMatrix hstack(const std::vector<SparseMatrix>& blocks);
SparseMatrix vstack(const std::vector<SparseMatrix>& blocks);
SparseMatrix block_diagonal(const std::vector<SparseMatrix>& blocks);

struct Subspace {
  std::size_t ambient_dim = 0;
  std::vector<SparseVector> basis;
  std::size_t dim() const { return basis.size(); }
};

// Incremental semi-echelon basis. Each stored row has leading coefficient 1 at a
// column no other row leads at. With history on, rows also carry their expression
// in terms of the inserted vectors (numbered by insertion order). Fully reduced mode also
// clears every pivot column from the other rows; reductions of sparse vectors then stay
// sparse, at the price of back-substitution on each independent insertion.
class Echelon {
 public:
  explicit Echelon(std::size_t ambient_dim, bool track_history = false, bool fully_reduced = false);

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t rank() const { return rows_.size(); }
  std::size_t inserted() const { return inserted_; }

  // Returns true when v is independent of everything inserted so far.
  bool insert(const SparseVector& v);
  bool contains(const SparseVector& v) const;
  // Representative of v modulo the span that vanishes on every pivot column.
  SparseVector normal_form(const SparseVector& v) const;
  // Coefficients over inserted vectors reproducing v, or nullopt. Needs history.
  std::optional<SparseVector> express(const SparseVector& v) const;

  // For each dependent insertion k: r with r_k = 1 and sum_i r_i v_i = 0.
  const std::vector<SparseVector>& relations() const { return relations_; }
  // Insertion ids that were independent.
  const std::vector<std::size_t>& independent_ids() const { return independent_; }
  std::vector<SparseVector> rows() const;

 private:
  struct Row {
    SparseVector v;
    SparseVector hist;
  };
  SparseVector reduce(const SparseVector& v, SparseVector* hist, bool stop_at_free) const;

  std::size_t ambient_;
  bool track_;
  bool reduced_;
  std::size_t inserted_ = 0;
  std::vector<std::size_t> pivot_row_;  // per column, npos if none
  std::vector<Row> rows_;
  std::vector<SparseVector> relations_;
  std::vector<std::size_t> independent_;
};

std::size_t rank(const SparseMatrix& m);
Subspace kernel_basis(const SparseMatrix& m);
Subspace image_basis(const SparseMatrix& m);
std::optional<SparseVector> solve_linear(const SparseMatrix& m, const SparseVector& b);
// dim ker(d_out) - rank(d_in); throws CompositionNonzero unless d_out * d_in = 0.
std::size_t cohomology_dim(const SparseMatrix& d_in, const SparseMatrix& d_out);
bool in_span(const std::vector<SparseVector>& vectors, std::size_t ambient, const SparseVector& v);
// True when the square matrix is invertible.
bool is_invertible(const SparseMatrix& m);

// Z/W for subspaces W <= Z of a common ambient space, with explicit lifts.
class Quotient {
 public:
  Quotient(std::size_t ambient_dim, const std::vector<SparseVector>& sub, const std::vector<SparseVector>& ambient_span);

  std::size_t dim() const { return lifts_.size(); }
  const std::vector<SparseVector>& lifts() const { return lifts_; }
  // Coordinates of x in the lift basis modulo W. Throws std::domain_error if x is not in Z.
  SparseVector coordinates(const SparseVector& x) const;
  bool in_sub(const SparseVector& x) const { return sub_.contains(x); }

 private:
  Echelon sub_;
  Echelon reps_;
  std::vector<SparseVector> lifts_;
};

// Cochain complex C^0 -> C^1 -> ... ; differential[n] maps degree n to n+1.
struct CochainComplex {
  std::vector<std::size_t> dims;
  std::vector<SparseMatrix> differential;

  std::size_t size() const { return dims.size(); }
  // Throws CompositionNonzero if some d^{n+1} d^n != 0.
  void check_square_zero() const;
  std::vector<std::size_t> cohomology_dims() const;
  SparseMatrix d(std::size_t n) const;
};

}  // namespace twistcoh

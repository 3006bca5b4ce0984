#include "twistcoh/linalg.hpp"

#include <algorithm>
#include <functional>
#include <queue>

namespace twistcoh {

// ---------------------------------------------------------------- SparseVector

SparseVector SparseVector::from_entries(std::vector<Entry> entries) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.index < b.index; });
  std::vector<Entry> out;
  out.reserve(entries.size());
  for (auto& e : entries) {
    if (!out.empty() && out.back().index == e.index) {
      out.back().value += e.value;
    } else {
      if (!out.empty() && is_zero(out.back().value)) out.pop_back();
      out.push_back(std::move(e));
    }
  }
  if (!out.empty() && is_zero(out.back().value)) out.pop_back();
  return SparseVector(std::move(out));
}

SparseVector SparseVector::unit(std::size_t index, const Rational& value) {
  if (is_zero(value)) return {};
  return SparseVector(std::vector<Entry>{{index, value}});
}

SparseVector SparseVector::from_dense(const std::vector<Rational>& dense) {
  std::vector<Entry> out;
  for (std::size_t i = 0; i < dense.size(); ++i)
    if (!is_zero(dense[i])) out.push_back({i, dense[i]});
  return SparseVector(std::move(out));
}

Rational SparseVector::at(std::size_t index) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                             [](const Entry& e, std::size_t i) { return e.index < i; });
  if (it != entries_.end() && it->index == index) return it->value;
  return 0;
}

SparseVector SparseVector::axpy(const Rational& c, const SparseVector& o) const {
  if (is_zero(c) || o.empty()) return *this;
  std::vector<Entry> out;
  out.reserve(entries_.size() + o.entries_.size());
  auto a = entries_.begin();
  auto b = o.entries_.begin();
  while (a != entries_.end() || b != o.entries_.end()) {
    if (b == o.entries_.end() || (a != entries_.end() && a->index < b->index)) {
      out.push_back(*a++);
    } else if (a == entries_.end() || b->index < a->index) {
      out.push_back({b->index, c * b->value});
      ++b;
    } else {
      Rational v = a->value + c * b->value;
      if (!is_zero(v)) out.push_back({a->index, std::move(v)});
      ++a;
      ++b;
    }
  }
  return SparseVector(std::move(out));
}

SparseVector SparseVector::operator+(const SparseVector& o) const { return axpy(1, o); }
SparseVector SparseVector::operator-(const SparseVector& o) const { return axpy(-1, o); }
SparseVector SparseVector::operator-() const { return scaled(-1); }

SparseVector SparseVector::scaled(const Rational& c) const {
  if (is_zero(c)) return {};
  std::vector<Entry> out = entries_;
  for (auto& e : out) e.value *= c;
  return SparseVector(std::move(out));
}

SparseVector SparseVector::reindexed(const std::vector<std::size_t>& map) const {
  std::vector<Entry> out;
  for (const auto& e : entries_) {
    if (e.index >= map.size()) throw DimensionMismatch("reindex: index out of range");
    if (map[e.index] != npos) out.push_back({map[e.index], e.value});
  }
  return from_entries(std::move(out));
}

std::vector<Rational> SparseVector::to_dense(std::size_t n) const {
  std::vector<Rational> out(n);
  for (const auto& e : entries_) {
    if (e.index >= n) throw DimensionMismatch("to_dense: index out of range");
    out[e.index] = e.value;
  }
  return out;
}

bool SparseVector::operator==(const SparseVector& o) const {
  if (entries_.size() != o.entries_.size()) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].index != o.entries_[i].index || entries_[i].value != o.entries_[i].value) return false;
  return true;
}

// ---------------------------------------------------------------- SparseMatrix

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), columns_(cols) {}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> t) {
  std::vector<std::vector<Entry>> per_col(cols);
  for (auto& x : t) {
    if (x.row >= rows || x.col >= cols) throw DimensionMismatch("triplet index out of range");
    per_col[x.col].push_back({x.row, std::move(x.value)});
  }
  SparseMatrix m(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) m.columns_[j] = SparseVector::from_entries(std::move(per_col[j]));
  return m;
}

SparseMatrix SparseMatrix::from_columns(std::size_t rows, std::vector<SparseVector> columns) {
  SparseMatrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].support_bound() > rows) throw DimensionMismatch("column entry out of range");
    m.columns_[j] = std::move(columns[j]);
  }
  return m;
}

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<Rational>>& rows) {
  std::size_t r = rows.size();
  std::size_t c = r ? rows[0].size() : 0;
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw DimensionMismatch("ragged dense matrix");
    for (std::size_t j = 0; j < c; ++j)
      if (sgn(rows[i][j]) != 0) t.push_back({i, j, rows[i][j]});
  }
  return from_triplets(r, c, std::move(t));
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  SparseMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j) m.columns_[j] = SparseVector::unit(j);
  return m;
}

std::size_t SparseMatrix::nnz() const {
  std::size_t n = 0;
  for (const auto& c : columns_) n += c.nnz();
  return n;
}

bool SparseMatrix::is_zero() const {
  for (const auto& c : columns_)
    if (!c.empty()) return false;
  return true;
}

bool SparseMatrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t j = 0; j < cols_; ++j)
    if (columns_[j] != SparseVector::unit(j)) return false;
  return true;
}

SparseVector SparseMatrix::apply(const SparseVector& v) const {
  if (v.support_bound() > cols_) throw DimensionMismatch("apply: vector longer than column count");
  std::vector<Entry> acc;
  for (const auto& e : v.entries())
    for (const auto& x : columns_[e.index].entries()) acc.push_back({x.index, e.value * x.value});
  return SparseVector::from_entries(std::move(acc));
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& o) const {
  if (cols_ != o.rows_) throw DimensionMismatch("matrix product shape mismatch");
  SparseMatrix m(rows_, o.cols_);
  for (std::size_t j = 0; j < o.cols_; ++j) m.columns_[j] = apply(o.columns_[j]);
  return m;
}

SparseMatrix SparseMatrix::operator+(const SparseMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix sum shape mismatch");
  SparseMatrix m(rows_, cols_);
  for (std::size_t j = 0; j < cols_; ++j) m.columns_[j] = columns_[j] + o.columns_[j];
  return m;
}

SparseMatrix SparseMatrix::operator-(const SparseMatrix& o) const { return *this + o.scaled(-1); }

SparseMatrix SparseMatrix::scaled(const Rational& c) const {
  SparseMatrix m(rows_, cols_);
  for (std::size_t j = 0; j < cols_; ++j) m.columns_[j] = columns_[j].scaled(c);
  return m;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<Triplet> t;
  for (std::size_t j = 0; j < cols_; ++j)
    for (const auto& e : columns_[j].entries()) t.push_back({j, e.index, e.value});
  return from_triplets(cols_, rows_, std::move(t));
}

SparseMatrix SparseMatrix::select_columns(const std::vector<std::size_t>& cols) const {
  SparseMatrix m(rows_, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) m.columns_[j] = columns_.at(cols[j]);
  return m;
}

SparseMatrix SparseMatrix::select_rows(const std::vector<std::size_t>& rows) const {
  std::vector<std::size_t> map(rows_, npos);
  for (std::size_t i = 0; i < rows.size(); ++i) map.at(rows[i]) = i;
  SparseMatrix m(rows.size(), cols_);
  for (std::size_t j = 0; j < cols_; ++j) m.columns_[j] = columns_[j].reindexed(map);
  return m;
}

std::vector<SparseMatrix::Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> t;
  for (std::size_t j = 0; j < cols_; ++j)
    for (const auto& e : columns_[j].entries()) t.push_back({e.index, j, e.value});
  std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  return t;
}

std::vector<std::vector<Rational>> SparseMatrix::to_dense() const {
  std::vector<std::vector<Rational>> d(rows_, std::vector<Rational>(cols_));
  for (std::size_t j = 0; j < cols_; ++j)
    for (const auto& e : columns_[j].entries()) d[e.index][j] = e.value;
  return d;
}

bool SparseMatrix::operator==(const SparseMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && columns_ == o.columns_;
}

SparseMatrix hstack(const std::vector<SparseMatrix>& blocks) {
  if (blocks.empty()) return {};
  std::size_t rows = blocks[0].rows();
  std::vector<SparseVector> cols;
  for (const auto& b : blocks) {
    if (b.rows() != rows) throw DimensionMismatch("hstack row mismatch");
    cols.insert(cols.end(), b.columns().begin(), b.columns().end());
  }
  return SparseMatrix::from_columns(rows, std::move(cols));
}

SparseMatrix vstack(const std::vector<SparseMatrix>& blocks) {
  if (blocks.empty()) return {};
  std::size_t cols = blocks[0].cols();
  std::size_t rows = 0;
  std::vector<std::vector<Entry>> acc(cols);
  for (const auto& b : blocks) {
    if (b.cols() != cols) throw DimensionMismatch("vstack column mismatch");
    for (std::size_t j = 0; j < cols; ++j)
      for (const auto& e : b.column(j).entries()) acc[j].push_back({e.index + rows, e.value});
    rows += b.rows();
  }
  std::vector<SparseVector> out;
  for (auto& a : acc) out.push_back(SparseVector::from_entries(std::move(a)));
  return SparseMatrix::from_columns(rows, std::move(out));
}

SparseMatrix block_diagonal(const std::vector<SparseMatrix>& blocks) {
  std::size_t rows = 0;
  for (const auto& b : blocks) rows += b.rows();
  std::vector<SparseVector> cols;
  std::size_t offset = 0;
  for (const auto& b : blocks) {
    for (const auto& c : b.columns()) {
      std::vector<Entry> e;
      for (const auto& x : c.entries()) e.push_back({x.index + offset, x.value});
      cols.push_back(SparseVector::from_entries(std::move(e)));
    }
    offset += b.rows();
  }
  return SparseMatrix::from_columns(rows, std::move(cols));
}

// ---------------------------------------------------------------- Echelon

Echelon::Echelon(std::size_t ambient_dim, bool track_history, bool fully_reduced)
    : ambient_(ambient_dim), track_(track_history), reduced_(fully_reduced), pivot_row_(ambient_dim, npos) {}

SparseVector Echelon::reduce(const SparseVector& v, SparseVector* hist, bool stop_at_free) const {
  if (v.support_bound() > ambient_) throw DimensionMismatch("echelon: vector outside ambient space");
  // Rows only have entries at or after their pivot, so one ascending sweep over the live
  // columns suffices. Values accumulate in place in a per-thread scratch buffer.
  thread_local std::vector<Rational> acc;
  thread_local std::vector<char> live;
  if (acc.size() < ambient_) {
    acc.resize(ambient_);
    live.resize(ambient_, 0);
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> queue;
  for (const auto& e : v.entries()) {
    acc[e.index] = e.value;
    live[e.index] = 1;
    queue.push(e.index);
  }
  std::vector<Entry> out;
  std::vector<std::pair<std::size_t, Rational>> used;
  bool stopped = false;
  while (!queue.empty()) {
    std::size_t j = queue.top();
    queue.pop();
    live[j] = 0;
    if (sgn(acc[j]) == 0) continue;
    std::size_t r = pivot_row_[j];
    if (r == npos || stopped) {
      if (stop_at_free) stopped = true;
      out.push_back({j, acc[j]});
      acc[j] = 0;
      continue;
    }
    Rational c = acc[j];
    acc[j] = 0;
    for (const auto& e : rows_[r].v.entries()) {
      if (e.index == j) continue;
      acc[e.index] -= c * e.value;
      if (!live[e.index]) {
        live[e.index] = 1;
        queue.push(e.index);
      }
    }
    if (hist) used.emplace_back(r, std::move(c));
  }
  if (hist) {
    std::vector<Entry> h(hist->entries().begin(), hist->entries().end());
    for (const auto& [r, c] : used)
      for (const auto& e : rows_[r].hist.entries()) h.push_back({e.index, c * e.value});
    *hist = SparseVector::from_entries(std::move(h));
  }
  return SparseVector::from_entries(std::move(out));
}

bool Echelon::insert(const SparseVector& v) {
  std::size_t id = inserted_++;
  SparseVector h;
  SparseVector x = reduce(v, track_ ? &h : nullptr, !reduced_);
  if (x.empty()) {
    if (track_) relations_.push_back(SparseVector::unit(id) - h);
    return false;
  }
  Rational lead = x.entries().front().value;
  Rational inv = 1 / lead;
  Row row;
  row.v = x.scaled(inv);
  if (track_) row.hist = (SparseVector::unit(id) - h).scaled(inv);
  const std::size_t pivot = x.entries().front().index;
  if (reduced_)
    for (auto& other : rows_) {
      Rational c = other.v.at(pivot);
      if (sgn(c) == 0) continue;
      other.v = other.v.axpy(-c, row.v);
      if (track_) other.hist = other.hist.axpy(-c, row.hist);
    }
  pivot_row_[pivot] = rows_.size();
  rows_.push_back(std::move(row));
  independent_.push_back(id);
  return true;
}

bool Echelon::contains(const SparseVector& v) const { return reduce(v, nullptr, true).empty(); }

SparseVector Echelon::normal_form(const SparseVector& v) const { return reduce(v, nullptr, false); }

std::optional<SparseVector> Echelon::express(const SparseVector& v) const {
  if (!track_) throw std::logic_error("Echelon::express needs history tracking");
  SparseVector h;
  if (!reduce(v, &h, true).empty()) return std::nullopt;
  return h;
}

std::vector<SparseVector> Echelon::rows() const {
  std::vector<SparseVector> out;
  for (const auto& r : rows_) out.push_back(r.v);
  return out;
}

// ---------------------------------------------------------------- free functions

std::size_t rank(const SparseMatrix& m) {
  Echelon e(m.rows());
  for (const auto& c : m.columns()) e.insert(c);
  return e.rank();
}

Subspace kernel_basis(const SparseMatrix& m) {
  Echelon e(m.rows(), true);
  for (const auto& c : m.columns()) e.insert(c);
  return Subspace{m.cols(), e.relations()};
}

Subspace image_basis(const SparseMatrix& m) {
  Echelon e(m.rows());
  std::vector<SparseVector> basis;
  for (const auto& c : m.columns())
    if (e.insert(c)) basis.push_back(c);
  return Subspace{m.rows(), std::move(basis)};
}

std::optional<SparseVector> solve_linear(const SparseMatrix& m, const SparseVector& b) {
  if (b.support_bound() > m.rows()) throw DimensionMismatch("solve_linear: rhs longer than row count");
  Echelon e(m.rows(), true);
  for (const auto& c : m.columns()) e.insert(c);
  return e.express(b);
}

std::size_t cohomology_dim(const SparseMatrix& d_in, const SparseMatrix& d_out) {
  if (d_in.rows() != d_out.cols()) throw DimensionMismatch("cohomology_dim: middle dimensions differ");
  if (!(d_out * d_in).is_zero()) throw CompositionNonzero("d_out * d_in is nonzero");
  return d_out.cols() - rank(d_out) - rank(d_in);
}

bool in_span(const std::vector<SparseVector>& vectors, std::size_t ambient, const SparseVector& v) {
  Echelon e(ambient);
  for (const auto& x : vectors) e.insert(x);
  return e.contains(v);
}

bool is_invertible(const SparseMatrix& m) { return m.rows() == m.cols() && rank(m) == m.rows(); }

// ---------------------------------------------------------------- Quotient

Quotient::Quotient(std::size_t ambient_dim, const std::vector<SparseVector>& sub,
                   const std::vector<SparseVector>& ambient_span)
    : sub_(ambient_dim, false, true), reps_(ambient_dim, true) {
  for (const auto& w : sub) sub_.insert(w);
  for (const auto& z : ambient_span) {
    SparseVector r = sub_.normal_form(z);
    if (reps_.insert(r)) lifts_.push_back(z);
  }
}

SparseVector Quotient::coordinates(const SparseVector& x) const {
  SparseVector r = sub_.normal_form(x);
  auto c = reps_.express(r);
  if (!c) throw std::domain_error("Quotient::coordinates: vector outside the ambient span");
  // History is over all inserted representatives; independent ones are renumbered densely.
  std::vector<std::size_t> map(reps_.inserted(), npos);
  const auto& ids = reps_.independent_ids();
  for (std::size_t i = 0; i < ids.size(); ++i) map[ids[i]] = i;
  return c->reindexed(map);
}

// ---------------------------------------------------------------- CochainComplex

SparseMatrix CochainComplex::d(std::size_t n) const {
  if (n < differential.size()) return differential[n];
  std::size_t target = n + 1 < dims.size() ? dims[n + 1] : 0;
  return SparseMatrix(target, n < dims.size() ? dims[n] : 0);
}

void CochainComplex::check_square_zero() const {
  for (std::size_t n = 0; n + 1 < differential.size(); ++n)
    if (!(differential[n + 1] * differential[n]).is_zero())
      throw CompositionNonzero("d^" + std::to_string(n + 1) + " d^" + std::to_string(n) + " != 0");
}

std::vector<std::size_t> CochainComplex::cohomology_dims() const {
  std::vector<std::size_t> ranks(dims.size(), 0);
  for (std::size_t n = 0; n < dims.size() && n < differential.size(); ++n) ranks[n] = rank(differential[n]);
  std::vector<std::size_t> h(dims.size());
  for (std::size_t n = 0; n < dims.size(); ++n) h[n] = dims[n] - ranks[n] - (n ? ranks[n - 1] : 0);
  return h;
}

}  // namespace twistcoh

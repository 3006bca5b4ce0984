#include "twistcoh/smith.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace twistcoh {

namespace {

IntMatrix int_identity(std::size_t n) {
  IntMatrix m(n, std::vector<Integer>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

// Row operation row_a <- row_a + c * row_b.
void add_row(IntMatrix& m, std::size_t a, std::size_t b, const Integer& c) {
  if (c == 0) return;
  for (std::size_t j = 0; j < m[a].size(); ++j) m[a][j] += c * m[b][j];
}

void add_col(IntMatrix& m, std::size_t a, std::size_t b, const Integer& c) {
  if (c == 0) return;
  for (auto& row : m) row[a] += c * row[b];
}

void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (auto& row : m) std::swap(row[a], row[b]);
}

// Remainder of the floor quotient is smaller than the divisor in absolute value.
Integer floor_quotient(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

SmithResult smith_normal_form(const IntMatrix& input, std::size_t rows, std::size_t cols) {
  IntMatrix a = input;
  if (a.size() != rows) throw DimensionMismatch("smith_normal_form: row count");
  for (const auto& r : a)
    if (r.size() != cols) throw DimensionMismatch("smith_normal_form: ragged matrix");
  IntMatrix U = int_identity(rows);
  IntMatrix V = int_identity(cols);

  std::size_t t = 0;
  while (t < rows && t < cols) {
    // Smallest nonzero |entry| in the trailing block becomes the pivot.
    bool found = false;
    std::size_t pr = 0, pc = 0;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (a[i][j] != 0 && (!found || abs(a[i][j]) < abs(a[pr][pc]))) {
          found = true;
          pr = i;
          pc = j;
        }
    if (!found) break;
    std::swap(a[t], a[pr]);
    std::swap(U[t], U[pr]);
    swap_cols(a, t, pc);
    swap_cols(V, t, pc);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        Integer q = floor_quotient(a[i][t], a[t][t]);
        add_row(a, i, t, -q);
        add_row(U, i, t, -q);
        if (a[i][t] != 0) {
          std::swap(a[t], a[i]);
          std::swap(U[t], U[i]);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        Integer q = floor_quotient(a[t][j], a[t][t]);
        add_col(a, j, t, -q);
        add_col(V, j, t, -q);
        if (a[t][j] != 0) {
          swap_cols(a, t, j);
          swap_cols(V, t, j);
          clean = false;
        }
      }
      if (!clean) continue;
      // Divisibility: fold any offending row into the pivot row and redo.
      for (std::size_t i = t + 1; i < rows && clean; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            add_row(a, t, i, 1);
            add_row(U, t, i, 1);
            clean = false;
            break;
          }
    }
    if (a[t][t] < 0) {
      for (auto& x : a[t]) x = -x;
      for (auto& x : U[t]) x = -x;
    }
    ++t;
  }

  SmithResult res;
  for (std::size_t i = 0; i < std::min(rows, cols); ++i)
    if (a[i][i] != 0) res.invariants.push_back(a[i][i]);
  res.U = std::move(U);
  res.V = std::move(V);
  res.D = std::move(a);
  return res;
}

SmithResult smith_normal_form(const SparseMatrix& m) {
  IntMatrix a(m.rows(), std::vector<Integer>(m.cols(), 0));
  for (const auto& t : m.triplets()) {
    if (t.value.get_den() != 1) throw std::invalid_argument("smith_normal_form: non-integer entry");
    a[t.row][t.col] = t.value.get_num();
  }
  return smith_normal_form(a, m.rows(), m.cols());
}

IntMatrix int_multiply(const IntMatrix& a, const IntMatrix& b, std::size_t a_rows, std::size_t inner,
                       std::size_t b_cols) {
  IntMatrix c(a_rows, std::vector<Integer>(b_cols, 0));
  for (std::size_t i = 0; i < a_rows; ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < b_cols; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

Integer int_determinant(IntMatrix m) {
  // Bareiss fraction-free elimination.
  std::size_t n = m.size();
  if (n == 0) return 1;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t s = k + 1;
      while (s < n && m[s][k] == 0) ++s;
      if (s == n) return 0;
      std::swap(m[k], m[s]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

std::vector<IntegerGroup> simplicial_integer_cohomology(const std::vector<std::set<int>>& simplices) {
  std::vector<std::set<std::vector<int>>> by_dim;
  for (const auto& s : simplices) {
    std::vector<int> v(s.begin(), s.end());
    std::size_t n = v.size();
    if (n == 0) continue;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      std::vector<int> face;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (1u << i)) face.push_back(v[i]);
      std::size_t d = face.size() - 1;
      if (by_dim.size() <= d) by_dim.resize(d + 1);
      by_dim[d].insert(face);
    }
  }
  std::size_t top = by_dim.size();
  std::vector<std::map<std::vector<int>, std::size_t>> index(top);
  for (std::size_t d = 0; d < top; ++d) {
    std::size_t i = 0;
    for (const auto& f : by_dim[d]) index[d][f] = i++;
  }
  // Coboundary d^k : C^k -> C^{k+1}, (d c)(s) = sum_i (-1)^i c(s minus vertex i).
  std::vector<std::size_t> ranks(top, 0);
  std::vector<std::vector<Integer>> invariants(top);
  for (std::size_t k = 0; k + 1 < top; ++k) {
    std::size_t r = by_dim[k + 1].size(), c = by_dim[k].size();
    IntMatrix m(r, std::vector<Integer>(c, 0));
    for (const auto& [s, row] : index[k + 1])
      for (std::size_t i = 0; i < s.size(); ++i) {
        std::vector<int> face = s;
        face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
        m[row][index[k].at(face)] += (i % 2 == 0) ? 1 : -1;
      }
    SmithResult res = smith_normal_form(m, r, c);
    ranks[k] = res.invariants.size();
    invariants[k] = res.invariants;
  }
  std::vector<IntegerGroup> out(top);
  for (std::size_t k = 0; k < top; ++k) {
    std::size_t n = by_dim[k].size();
    out[k].free_rank = n - ranks[k] - (k ? ranks[k - 1] : 0);
    if (k)
      for (const auto& d : invariants[k - 1])
        if (d > 1) out[k].torsion.push_back(d);
  }
  return out;
}

}  // namespace twistcoh

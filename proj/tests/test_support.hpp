#pragma once

#include <initializer_list>
#include <utility>
#include <vector>

#include "twistcoh/io.hpp"
#include "twistcoh/oracle.hpp"

namespace testing {

using namespace twistcoh;

inline const io::FixtureLibrary& library() {
  static const io::FixtureLibrary lib(io::FixtureLibrary::default_directory());
  return lib;
}

inline SparseVector vec(std::initializer_list<std::pair<std::size_t, int>> entries) {
  std::vector<Entry> e;
  for (const auto& [i, q] : entries) e.push_back({i, Rational(q)});
  return SparseVector::from_entries(std::move(e));
}

inline SparseMatrix dense(const std::vector<std::vector<int>>& rows) {
  std::vector<std::vector<Rational>> q;
  for (const auto& r : rows) q.emplace_back(r.begin(), r.end());
  return SparseMatrix::from_dense(q);
}

inline oracle::DenseMatrix to_dense(const SparseMatrix& m) { return oracle::DenseMatrix::from_sparse(m); }

// Basis index of the generator with the given position among the degree-k basis elements.
inline std::size_t basis_at(const Cdga& c, int k, std::size_t pos = 0) { return c.basis_of_degree(k).at(pos); }

}  // namespace testing

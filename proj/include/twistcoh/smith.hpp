#pragma once

#include <set>
#include <vector>

#include "twistcoh/linalg.hpp"

namespace twistcoh {

using IntMatrix = std::vector<std::vector<Integer>>;

struct SmithResult {
  std::vector<Integer> invariants;  // nonzero diagonal entries, each dividing the next
  IntMatrix U;                      // rows x rows, unimodular
  IntMatrix V;                      // cols x cols, unimodular
  IntMatrix D;                      // U * m * V
};

SmithResult smith_normal_form(const IntMatrix& m, std::size_t rows, std::size_t cols);
// Throws std::invalid_argument if some entry is not an integer.
SmithResult smith_normal_form(const SparseMatrix& m);

IntMatrix int_multiply(const IntMatrix& a, const IntMatrix& b, std::size_t a_rows, std::size_t inner, std::size_t b_cols);
Integer int_determinant(IntMatrix m);

struct IntegerGroup {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;  // invariant factors > 1
  bool operator==(const IntegerGroup&) const = default;
};

// Simplicial cochain cohomology with integer coefficients of the complex generated by
// `simplices` (vertex sets; faces are added automatically). Degrees 0..max dimension.
std::vector<IntegerGroup> simplicial_integer_cohomology(const std::vector<std::set<int>>& simplices);

}  // namespace twistcoh

#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "twistcoh/twisted.hpp"

namespace twistcoh {

class NotApplicable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Square-zero differential on one space, with a decreasing filtration
// F^s = span{basis vectors with level >= s}. d must never lower the level.
struct FilteredComplex {
  SparseMatrix d;
  std::vector<int> level;
};

// Full algebra with d_lambda = d + lambda*, filtered by form degree.
FilteredComplex filtered_two_periodic(const TwistClass& t);
// Throws std::invalid_argument if d^2 != 0 or d lowers the filtration.
void check_filtered(const FilteredComplex& f);

struct PageBlock {
  int s;
  std::vector<SparseVector> lifts;  // representatives in the ambient space
};

// Cohomological indexing: E_r^s = Z_r^s / (Z_{r-1}^{s+1} + d Z_{r-1}^{s-r+1}),
// Z_r^s = {x in F^s : dx in F^{s+r}}, d_r : E_r^s -> E_r^{s+r}.
struct Page {
  int r = 0;
  std::vector<PageBlock> blocks;    // one per filtration level, ascending s
  std::vector<std::size_t> offset;  // start of each block in page coordinates
  SparseMatrix d;                   // d_r on the whole page

  std::size_t total_dim() const;
  std::size_t dim_at(int s) const;
  std::vector<std::size_t> dims() const;
  // Dimensions summed over levels of each parity.
  std::array<std::size_t, 2> parity_dims() const;
};

struct SpectralSequence {
  std::vector<Page> pages;  // E_0 .. E_{r_max}
  int stable_from = 0;      // first r after which every computed d_r vanishes
  int min_level = 0;
  int max_level = 0;

  const Page& e_infinity() const { return pages.at(static_cast<std::size_t>(stable_from)); }
};

// Pages E_0 .. E_R with R = max(r_max, filtration length), so stabilization is always observed.
SpectralSequence pages(const FilteredComplex& f, int r_max);

struct D3Check {
  bool equal = false;
  std::string witness;
  SparseMatrix d3;   // on E_3 in lift coordinates
  SparseMatrix cup;  // lambda * in the same coordinates
};

// Only for models with zero internal differential; throws NotApplicable otherwise or when
// E_3^s is not identified with the degree-s forms.
D3Check d3_equals_lambda_cup(const FilteredComplex& f, const TwistClass& t);

}  // namespace twistcoh

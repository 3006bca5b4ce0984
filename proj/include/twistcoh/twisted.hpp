#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "twistcoh/cdga.hpp"

namespace twistcoh {

class NotClosed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TwistClass {
  CdgaPtr algebra;
  SparseVector lambda;  // homogeneous of degree 3 (or zero)
};

// Throws DegreeMismatch unless lambda is homogeneous of degree 3. Closedness is checked by the
// complex constructors.
TwistClass make_twist(CdgaPtr algebra, SparseVector lambda);

// Omega^even <-> Omega^odd with d_lambda x = dx + lambda * x.
struct TwoPeriodicComplex {
  std::vector<std::size_t> even_basis;  // algebra indices
  std::vector<std::size_t> odd_basis;
  SparseMatrix d_even_to_odd;
  SparseMatrix d_odd_to_even;

  const std::vector<std::size_t>& basis(int parity) const { return parity % 2 ? odd_basis : even_basis; }
};

TwoPeriodicComplex two_periodic_complex(const TwistClass& t);
// (dim H^even, dim H^odd)
std::array<std::size_t, 2> twisted_betti(const TwoPeriodicComplex& c);

// A monomial z^n * e_form of the power-series complex.
struct ZMonomial {
  int n;
  std::size_t form;
  bool operator==(const ZMonomial&) const = default;
};

// Basis of the degree-p piece: form degree k ascending (k = p mod 2, k <= p), then algebra order.
std::vector<ZMonomial> z_degree_basis(const Cdga& c, int p);

// Omega[[z]] with d(z^n w) = z^n dw + n z^{n-1} lambda w, degrees 0..max_degree+1.
struct ZGradedComplex {
  int max_degree = 0;
  std::vector<std::vector<ZMonomial>> basis;  // per degree 0..max_degree+1
  std::vector<SparseMatrix> d;                 // d[p]: degree p -> p+1, p = 0..max_degree

  std::size_t index_of(int p, const ZMonomial& m) const;
  CochainComplex cochain() const;
};

ZGradedComplex z_graded_complex(const TwistClass& t, int max_degree);
// dim H^p for p = 0..max_degree
std::vector<std::size_t> twisted_betti(const ZGradedComplex& c);

// psi_p from the parity-(p mod 2) two-periodic space to the degree-p piece.
struct PsiMap {
  int p;
  SparseMatrix matrix;
};

// Sum over all i >= 0 with e + 2i <= top and m - i >= 0, where p = 2m + e.
PsiMap psi_map(const TwistClass& t, int p);
// Same formula with the summation cut at i <= floor(m / 2).
PsiMap psi_map_truncated_range(const TwistClass& t, int p);
// psi_{p+1} d_lambda - d_lambda psi_p; zero exactly when the chain-map identity holds at p.
SparseMatrix psi_chain_residual(const TwistClass& t, int p, bool truncated_range = false);

// Matrices of exp(-gamma T) per degree 0..max_degree+1, between the complexes for lambda and
// lambda + d gamma.
struct GaugeTransform {
  std::vector<SparseMatrix> forward;  // exp(-gamma T)
  std::vector<SparseMatrix> inverse;  // exp(+gamma T)
  TwistClass source;
  TwistClass target;
};

GaugeTransform gauge_transform(const TwistClass& t, const SparseVector& gamma, int max_degree);
// Checks d_{lambda+dgamma} G = G d_lambda and G G^{-1} = 1 in every degree.
bool gauge_is_chain_isomorphism(const GaugeTransform& g, const ZGradedComplex& src, const ZGradedComplex& tgt);
// exp(-gamma) as an automorphism of the two-periodic complex (even and odd blocks).
std::array<SparseMatrix, 2> gauge_two_periodic(const TwistClass& t, const SparseVector& gamma);

}  // namespace twistcoh

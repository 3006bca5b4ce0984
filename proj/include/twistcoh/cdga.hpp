#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "twistcoh/linalg.hpp"
#include "twistcoh/report.hpp"

namespace twistcoh {

class CapRequired : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DegreeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Finite-dimensional graded-commutative DG algebra over Q. Basis element 0 is the unit.
class Cdga {
 public:
  struct ProductTerm {
    std::size_t left;
    std::size_t right;
    std::size_t result;
    Rational coeff;
  };

  Cdga(std::vector<int> degrees, SparseMatrix differential, const std::vector<ProductTerm>& product,
       int top_degree, std::string name = {});
  // Product given as a full table, table[i][j] = e_i * e_j.
  Cdga(std::vector<int> degrees, SparseMatrix differential, std::vector<std::vector<SparseVector>> table,
       int top_degree, std::string name = {});

  std::size_t dim() const { return degrees_.size(); }
  int degree(std::size_t i) const { return degrees_.at(i); }
  const std::vector<int>& degrees() const { return degrees_; }
  int top_degree() const { return top_degree_; }
  int max_degree() const;
  const std::string& name() const { return name_; }
  const SparseMatrix& d() const { return d_; }
  const SparseVector& product(std::size_t i, std::size_t j) const { return table_.at(i).at(j); }
  std::vector<ProductTerm> product_terms() const;

  SparseVector multiply(const SparseVector& x, const SparseVector& y) const;
  SparseVector differential(const SparseVector& x) const { return d_.apply(x); }
  std::vector<std::size_t> basis_of_degree(int k) const;
  // Degree of a homogeneous vector; nullopt for zero or mixed vectors.
  std::optional<int> degree_of(const SparseVector& x) const;
  bool is_homogeneous(const SparseVector& x, int k) const;
  // Matrix of d from degree k to degree k+1 in the local bases of basis_of_degree.
  SparseMatrix d_block(int k) const;
  // Matrix of y -> x * y on the whole algebra.
  SparseMatrix left_multiplication(const SparseVector& x) const;
  SparseVector unit() const { return SparseVector::unit(0); }

 private:
  std::vector<int> degrees_;
  SparseMatrix d_;
  std::vector<std::vector<SparseVector>> table_;
  int top_degree_;
  std::string name_;
};

using CdgaPtr = std::shared_ptr<const Cdga>;

inline constexpr int kMixedDegree = -1;

struct Element {
  CdgaPtr parent;
  SparseVector coeffs;
  int degree = kMixedDegree;

  bool is_mixed() const { return degree == kMixedDegree; }
  bool is_zero() const { return coeffs.empty(); }
};

// Homogeneous element; throws DegreeMismatch if some coefficient sits in another degree.
Element make_element(CdgaPtr parent, SparseVector coeffs, int degree);
// Degree inferred; zero vectors get degree 0, mixed vectors kMixedDegree.
Element make_element(CdgaPtr parent, SparseVector coeffs);

struct CdgaMorphism {
  CdgaPtr source;
  CdgaPtr target;
  SparseMatrix matrix;  // target.dim x source.dim
};

CdgaMorphism identity_morphism(CdgaPtr c);
CdgaMorphism compose(const CdgaMorphism& g, const CdgaMorphism& f);  // g after f

ValidationReport validate_cdga(const Cdga& c);
ValidationReport validate_morphism(const CdgaMorphism& f);
Element apply_morphism(const CdgaMorphism& f, const Element& e);

struct Generator {
  int degree;
  std::optional<int> cap;  // maximal exponent, required for even degrees
  std::string name;
};

// Polynomial in generators: list of (coefficient, exponent vector).
using GeneratorPolynomial = std::vector<std::pair<Rational, std::vector<int>>>;

struct FreeCdga {
  CdgaPtr algebra;
  std::vector<std::vector<int>> exponents;   // per basis element
  std::vector<std::size_t> generator_index;  // basis index of each generator
};

// Free graded-commutative algebra on the generators (odd ones square to zero, even ones
// truncated at their cap) with d extended from the generator images by Leibniz.
FreeCdga free_cdga(const std::vector<Generator>& generators,
                   const std::vector<GeneratorPolynomial>& differential, int top_degree, std::string name = {});
FreeCdga exterior_algebra(const std::vector<Generator>& generators, int top_degree = -1, std::string name = {});
// Index of the monomial with the given exponents, npos if it is zero in the algebra.
std::size_t monomial_index(const FreeCdga& f, const std::vector<int>& exponents);

// Quotient by the dg-ideal generated by homogeneous elements. Returns the quotient and the
// projection morphism. The declared top degree is inherited unless given.
struct QuotientCdga {
  CdgaPtr algebra;
  CdgaMorphism projection;
  std::vector<std::size_t> kept;  // ambient basis indices used as quotient basis
};
QuotientCdga quotient_cdga(CdgaPtr c, const std::vector<SparseVector>& ideal_generators, std::string name = {},
                           std::optional<int> top_degree = std::nullopt);

// Koszul-signed tensor product; basis pair (i, j) has index i * b.dim() + j.
CdgaPtr tensor_cdga(const Cdga& a, const Cdga& b, std::string name = {});
CdgaMorphism tensor_left_inclusion(CdgaPtr tensor, CdgaPtr a, std::size_t b_dim);
CdgaMorphism tensor_right_inclusion(CdgaPtr tensor, CdgaPtr b);

struct CohomologyRing {
  std::vector<std::size_t> dims;                         // degrees 0..max_degree
  std::vector<std::vector<SparseVector>> representatives;  // cocycles in ambient coordinates
  std::vector<std::vector<SparseVector>> boundaries;       // spanning set of exact forms per degree
};
CohomologyRing cohomology_ring(const Cdga& c);
// Is the closed element x exact?
bool is_exact(const Cdga& c, const SparseVector& x);

}  // namespace twistcoh

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "twistcoh/cdga.hpp"
#include "twistcoh/twisted.hpp"

namespace twistcoh {

class ValidationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class NoGlobalForm : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class NotUnique : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class DegreeOverflow : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

using Simplex = std::vector<std::size_t>;  // strictly increasing chart indices

// Finite cover: an algebra per nonempty overlap, face restrictions Omega(s minus s[j]) -> Omega(s),
// and restrictions of the global algebra to each chart.
struct CoverDatum {
  std::string name;
  std::size_t charts = 0;
  std::map<Simplex, CdgaPtr> pieces;
  std::map<std::pair<Simplex, std::size_t>, SparseMatrix> faces;
  CdgaPtr global;
  std::vector<SparseMatrix> restrictions;  // per chart

  bool contains(const Simplex& s) const { return pieces.count(s) > 0; }
  const Cdga& piece(const Simplex& s) const;
  // Composite of face maps, from a subsimplex to s.
  SparseMatrix restriction(const Simplex& from, const Simplex& to) const;
  SparseMatrix global_restriction(const Simplex& to) const;
};

ValidationReport validate_cover(const CoverDatum& c);

// Values on strictly increasing simplices; other orderings follow by alternation, absent
// entries are zero.
struct GerbeConnection {
  std::map<Simplex, SparseVector> A;  // degree 1 on triples
  std::map<Simplex, SparseVector> a;  // degree 1 on pairs
  std::vector<SparseVector> beta;     // degree 2 per chart
};

// Rules: A_degree, a_degree, beta_degree, A_closed, A_cocycle, a_coboundary, beta_coboundary.
ValidationReport validate_connection(const CoverDatum& c, const GerbeConnection& g);

// The unique global 3-form restricting to d beta_i on every chart.
SparseVector curvature(const CoverDatum& c, const GerbeConnection& g);

// Basis element of the total complex: an ordered chart tuple (column = length - 1), a basis
// form of the overlap algebra and a set of fibre generators theta_1..theta_p.
struct TotBasis {
  std::size_t tuple;
  std::size_t form;
  std::uint32_t mask;
};

struct TotElement {
  int degree = 0;
  SparseVector v;
};

class TotalComplex {
 public:
  int deg_max() const { return deg_max_; }
  const std::vector<std::vector<std::size_t>>& tuples() const { return tuples_; }
  std::size_t column(std::size_t tuple) const { return tuples_.at(tuple).size() - 1; }
  const Simplex& tuple_set(std::size_t tuple) const { return sets_.at(tuple); }
  // Degrees 0..deg_max+1.
  const std::vector<TotBasis>& basis(int n) const { return basis_.at(static_cast<std::size_t>(n)); }
  // D[n] maps degree n to n+1, n = 0..deg_max.
  const SparseMatrix& D(int n) const { return D_.at(static_cast<std::size_t>(n)); }
  std::size_t tuple_index(const std::vector<std::size_t>& t) const;
  std::size_t index_of(int n, const TotBasis& b) const;
  CochainComplex cochain() const;
  bool square_zero() const;
  TotElement unit() const;
  const CoverDatum& cover() const { return *cover_; }
  const GerbeConnection& connection() const { return *conn_; }

  // Front-face/back-face product; throws DegreeOverflow past deg_max + 1.
  TotElement product(const TotElement& x, const TotElement& y) const;
  // Column-0 element restricting a global form to every chart.
  TotElement from_global(const SparseVector& omega, int degree) const;
  // l = (theta_1 + a_{i0 i1} in column 1, beta_i in column 0)
  TotElement connection_element() const;

  friend TotalComplex build_total_complex_unchecked(const CoverDatum&, const GerbeConnection&, int);

 private:
  int deg_max_ = 0;
  std::shared_ptr<const CoverDatum> cover_;
  std::shared_ptr<const GerbeConnection> conn_;
  std::vector<std::vector<std::size_t>> tuples_;
  std::vector<Simplex> sets_;
  std::map<std::vector<std::size_t>, std::size_t> tuple_id_;
  std::vector<std::vector<TotBasis>> basis_;
  std::vector<std::map<std::array<std::size_t, 3>, std::size_t>> index_;
  std::vector<SparseMatrix> D_;
};

// Validates the cover and connection (ValidationFailed) and checks D^2 = 0.
TotalComplex build_total_complex(const CoverDatum& c, const GerbeConnection& g, int deg_max);
// No validation; used for fault injection.
TotalComplex build_total_complex_unchecked(const CoverDatum& c, const GerbeConnection& g, int deg_max);

inline TotElement aw_product(const TotalComplex& t, const TotElement& x, const TotElement& y) {
  return t.product(x, y);
}

// phi(w z^k) = w l^k, from the power-series complex of the curvature into the total complex.
struct PhiMap {
  std::vector<SparseMatrix> matrix;  // per degree 0..deg_max+1
  TwistClass twist;
  ZGradedComplex source;
};
PhiMap phi_map(const TotalComplex& t);
bool phi_is_chain_map(const TotalComplex& t, const PhiMap& phi);

// Does the map send the cohomology of `from` isomorphically onto that of `to` in degree n?
struct InducedMap {
  std::size_t source_dim = 0;
  std::size_t target_dim = 0;
  std::size_t rank = 0;
  bool isomorphism() const { return source_dim == target_dim && rank == source_dim; }
};
InducedMap induced_on_cohomology(const CochainComplex& from, const CochainComplex& to, const SparseMatrix& f, int n);

struct TheoremReport {
  SparseVector lambda;
  std::vector<std::size_t> total_dims;  // 0..deg_max
  std::vector<std::size_t> power_series_dims;
  std::vector<InducedMap> induced;
  bool square_zero = false;
  bool chain_map = false;
  bool multiplicative = false;
  bool isomorphism = false;
};
// deg_max < 0 selects top_degree + 4 of the global algebra.
TheoremReport theorem_main_check(const CoverDatum& c, const GerbeConnection& g, int deg_max = -1);

// Equalizer of the form-degree-k parts of column 0 against column 1, compared with Omega^k(X).
struct H0ColumnReport {
  std::vector<std::size_t> equalizer_dims;
  std::vector<std::size_t> global_dims;
  std::vector<std::size_t> image_ranks;
  bool ok = false;
};
H0ColumnReport h0_column_check(const CoverDatum& c);

// Cohomology of the theta-free subcomplex (the ordered Cech-de Rham complex).
std::vector<std::size_t> cech_de_rham_dims(const TotalComplex& t);

struct BarComplexReport {
  std::vector<std::size_t> dims;          // 0..deg_max
  TotElement generator;                   // theta_1 on the degenerate 1-simplex
  std::vector<bool> powers_nonzero;       // generator^k in cohomology, k = 0..deg_max/2
};
BarComplexReport bs1_bar_complex(int deg_max);

// One chart over Omega with a single restriction; trivial connection unless beta is given.
CoverDatum single_chart_cover(CdgaPtr omega, std::string name = {});
// k identical charts with identity restrictions and all overlaps nonempty.
CoverDatum product_cover(CdgaPtr omega, std::size_t charts, std::string name = {});

}  // namespace twistcoh

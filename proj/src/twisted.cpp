#include "twistcoh/twisted.hpp"

#include <map>

namespace twistcoh {

namespace {

void require_closed(const TwistClass& t) {
  if (!t.algebra->differential(t.lambda).empty()) throw NotClosed("twist class is not closed");
}

// Powers gamma^0 .. gamma^k as algebra vectors.
std::vector<SparseVector> powers(const Cdga& c, const SparseVector& x, int k) {
  std::vector<SparseVector> out{c.unit()};
  for (int j = 1; j <= k; ++j) out.push_back(c.multiply(x, out.back()));
  return out;
}

PsiMap build_psi(const TwistClass& t, int p, bool truncated) {
  if (p < 1) throw std::invalid_argument("psi_map: p must be >= 1");
  const Cdga& c = *t.algebra;
  const int e = p % 2, m = p / 2;
  std::vector<std::size_t> parity;
  for (std::size_t i = 0; i < c.dim(); ++i)
    if (c.degree(i) % 2 == e) parity.push_back(i);
  auto tgt = z_degree_basis(c, p);
  std::map<std::pair<int, std::size_t>, std::size_t> tgt_index;
  for (std::size_t r = 0; r < tgt.size(); ++r) tgt_index[{tgt[r].n, tgt[r].form}] = r;
  std::vector<SparseMatrix::Triplet> trip;
  for (std::size_t col = 0; col < parity.size(); ++col) {
    std::size_t w = parity[col];
    int i = (c.degree(w) - e) / 2;
    if (m - i < 0) continue;
    if (truncated && i > m / 2) continue;
    trip.push_back({tgt_index.at({m - i, w}), col, 1 / factorial(m - i)});
  }
  return PsiMap{p, SparseMatrix::from_triplets(tgt.size(), parity.size(), std::move(trip))};
}

SparseMatrix z_gauge_matrix(const Cdga& c, const std::vector<ZMonomial>& basis,
                            const std::vector<SparseVector>& neg_gamma_powers) {
  std::map<std::pair<int, std::size_t>, std::size_t> index;
  for (std::size_t r = 0; r < basis.size(); ++r) index[{basis[r].n, basis[r].form}] = r;
  std::vector<SparseMatrix::Triplet> trip;
  for (std::size_t col = 0; col < basis.size(); ++col) {
    const auto& mono = basis[col];
    for (int j = 0; j <= mono.n; ++j) {
      if (j >= static_cast<int>(neg_gamma_powers.size())) break;
      SparseVector v = c.multiply(neg_gamma_powers[j], SparseVector::unit(mono.form));
      Rational b = binomial(mono.n, j);
      for (const auto& x : v.entries()) trip.push_back({index.at({mono.n - j, x.index}), col, b * x.value});
    }
  }
  return SparseMatrix::from_triplets(basis.size(), basis.size(), std::move(trip));
}

}  // namespace

TwistClass make_twist(CdgaPtr algebra, SparseVector lambda) {
  if (!algebra->is_homogeneous(lambda, 3)) throw DegreeMismatch("twist must be a degree-3 element");
  return TwistClass{std::move(algebra), std::move(lambda)};
}

TwoPeriodicComplex two_periodic_complex(const TwistClass& t) {
  require_closed(t);
  const Cdga& c = *t.algebra;
  SparseMatrix D = c.d() + c.left_multiplication(t.lambda);
  if (!(D * D).is_zero()) throw std::logic_error("two_periodic_complex: d_lambda^2 != 0");
  TwoPeriodicComplex out;
  for (std::size_t i = 0; i < c.dim(); ++i) (c.degree(i) % 2 ? out.odd_basis : out.even_basis).push_back(i);
  out.d_even_to_odd = D.select_columns(out.even_basis).select_rows(out.odd_basis);
  out.d_odd_to_even = D.select_columns(out.odd_basis).select_rows(out.even_basis);
  return out;
}

std::array<std::size_t, 2> twisted_betti(const TwoPeriodicComplex& c) {
  std::size_t r_eo = rank(c.d_even_to_odd), r_oe = rank(c.d_odd_to_even);
  return {c.even_basis.size() - r_eo - r_oe, c.odd_basis.size() - r_oe - r_eo};
}

std::vector<ZMonomial> z_degree_basis(const Cdga& c, int p) {
  std::vector<ZMonomial> out;
  if (p < 0) return out;
  const int top = c.max_degree();
  for (int k = p % 2; k <= std::min(p, top); k += 2)
    for (auto w : c.basis_of_degree(k)) out.push_back({(p - k) / 2, w});
  return out;
}

std::size_t ZGradedComplex::index_of(int p, const ZMonomial& m) const {
  const auto& b = basis.at(static_cast<std::size_t>(p));
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i] == m) return i;
  return npos;
}

CochainComplex ZGradedComplex::cochain() const {
  CochainComplex cc;
  for (int p = 0; p <= max_degree + 1; ++p) cc.dims.push_back(basis[p].size());
  cc.differential = d;
  return cc;
}

ZGradedComplex z_graded_complex(const TwistClass& t, int max_degree) {
  require_closed(t);
  if (max_degree < 0) throw std::invalid_argument("z_graded_complex: max_degree must be >= 0");
  const Cdga& c = *t.algebra;
  ZGradedComplex out;
  out.max_degree = max_degree;
  for (int p = 0; p <= max_degree + 1; ++p) out.basis.push_back(z_degree_basis(c, p));
  for (int p = 0; p <= max_degree; ++p) {
    std::map<std::pair<int, std::size_t>, std::size_t> tgt;
    for (std::size_t r = 0; r < out.basis[p + 1].size(); ++r) tgt[{out.basis[p + 1][r].n, out.basis[p + 1][r].form}] = r;
    std::vector<SparseMatrix::Triplet> trip;
    for (std::size_t col = 0; col < out.basis[p].size(); ++col) {
      const auto& m = out.basis[p][col];
      for (const auto& x : c.d().column(m.form).entries()) trip.push_back({tgt.at({m.n, x.index}), col, x.value});
      if (m.n > 0) {
        SparseVector lw = c.multiply(t.lambda, SparseVector::unit(m.form));
        for (const auto& x : lw.entries()) trip.push_back({tgt.at({m.n - 1, x.index}), col, m.n * x.value});
      }
    }
    out.d.push_back(SparseMatrix::from_triplets(out.basis[p + 1].size(), out.basis[p].size(), std::move(trip)));
  }
  out.cochain().check_square_zero();
  return out;
}

std::vector<std::size_t> twisted_betti(const ZGradedComplex& c) {
  auto h = c.cochain().cohomology_dims();
  h.resize(static_cast<std::size_t>(c.max_degree) + 1);
  return h;
}

PsiMap psi_map(const TwistClass& t, int p) { return build_psi(t, p, false); }

PsiMap psi_map_truncated_range(const TwistClass& t, int p) { return build_psi(t, p, true); }

SparseMatrix psi_chain_residual(const TwistClass& t, int p, bool truncated_range) {
  TwoPeriodicComplex per = two_periodic_complex(t);
  ZGradedComplex z = z_graded_complex(t, p);
  PsiMap a = build_psi(t, p, truncated_range);
  PsiMap b = build_psi(t, p + 1, truncated_range);
  const SparseMatrix& dper = p % 2 ? per.d_odd_to_even : per.d_even_to_odd;
  return b.matrix * dper - z.d[p] * a.matrix;
}

GaugeTransform gauge_transform(const TwistClass& t, const SparseVector& gamma, int max_degree) {
  const Cdga& c = *t.algebra;
  if (!c.is_homogeneous(gamma, 2)) throw DegreeMismatch("gauge parameter must have degree 2");
  require_closed(t);
  GaugeTransform g;
  g.source = t;
  g.target = TwistClass{t.algebra, t.lambda + c.differential(gamma)};
  const int kmax = max_degree / 2 + 1;
  auto neg = powers(c, -gamma, kmax);
  auto pos = powers(c, gamma, kmax);
  for (int p = 0; p <= max_degree + 1; ++p) {
    auto basis = z_degree_basis(c, p);
    g.forward.push_back(z_gauge_matrix(c, basis, neg));
    g.inverse.push_back(z_gauge_matrix(c, basis, pos));
  }
  return g;
}

bool gauge_is_chain_isomorphism(const GaugeTransform& g, const ZGradedComplex& src, const ZGradedComplex& tgt) {
  if (src.max_degree != tgt.max_degree || g.forward.size() < static_cast<std::size_t>(src.max_degree) + 2) return false;
  for (int p = 0; p <= src.max_degree; ++p)
    if (tgt.d[p] * g.forward[p] != g.forward[p + 1] * src.d[p]) return false;
  for (int p = 0; p <= src.max_degree + 1; ++p) {
    if (!(g.forward[p] * g.inverse[p]).is_identity()) return false;
    if (!(g.inverse[p] * g.forward[p]).is_identity()) return false;
  }
  return true;
}

std::array<SparseMatrix, 2> gauge_two_periodic(const TwistClass& t, const SparseVector& gamma) {
  const Cdga& c = *t.algebra;
  if (!c.is_homogeneous(gamma, 2)) throw DegreeMismatch("gauge parameter must have degree 2");
  // exp(-gamma) = sum_j (-gamma)^j / j!, finite because gamma is nilpotent.
  SparseVector e = c.unit();
  SparseVector term = c.unit();
  for (int j = 1; j <= c.max_degree() / 2 + 1; ++j) {
    term = c.multiply(-gamma, term).scaled(Rational(1, j));
    e = e + term;
  }
  SparseMatrix L = c.left_multiplication(e);
  std::vector<std::size_t> even, odd;
  for (std::size_t i = 0; i < c.dim(); ++i) (c.degree(i) % 2 ? odd : even).push_back(i);
  return {L.select_columns(even).select_rows(even), L.select_columns(odd).select_rows(odd)};
}

}  // namespace twistcoh

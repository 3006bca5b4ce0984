#include "twistcoh/gerbe.hpp"

#include <algorithm>
#include <bit>

namespace twistcoh {

namespace {

Simplex without(const Simplex& s, std::size_t j) {
  Simplex out;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (i != j) out.push_back(s[i]);
  return out;
}

Simplex sorted_set(std::vector<std::size_t> t) {
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

const SparseVector& lookup(const std::map<Simplex, SparseVector>& m, const Simplex& s) {
  static const SparseVector zero;
  auto it = m.find(s);
  return it == m.end() ? zero : it->second;
}

const SparseVector& beta_at(const GerbeConnection& g, std::size_t i) {
  static const SparseVector zero;
  return i < g.beta.size() ? g.beta[i] : zero;
}

// Sign and sorted simplex of an ordered tuple of distinct indices; sign 0 on repeats.
int alternation(const std::vector<std::size_t>& t, Simplex& sorted) {
  sorted = t;
  int sign = 1;
  for (std::size_t i = 0; i < sorted.size(); ++i)
    for (std::size_t j = 0; j + 1 < sorted.size() - i; ++j)
      if (sorted[j] > sorted[j + 1]) {
        std::swap(sorted[j], sorted[j + 1]);
        sign = -sign;
      } else if (sorted[j] == sorted[j + 1]) {
        return 0;
      }
  for (std::size_t j = 0; j + 1 < sorted.size(); ++j)
    if (sorted[j] == sorted[j + 1]) return 0;
  return sign;
}

}  // namespace

// ---------------------------------------------------------------- cover

const Cdga& CoverDatum::piece(const Simplex& s) const {
  auto it = pieces.find(s);
  if (it == pieces.end()) throw std::out_of_range("cover: no algebra on this overlap");
  return *it->second;
}

SparseMatrix CoverDatum::restriction(const Simplex& from, const Simplex& to) const {
  if (from == to) return SparseMatrix::identity(piece(to).dim());
  for (std::size_t j = to.size(); j-- > 0;)
    if (!std::binary_search(from.begin(), from.end(), to[j])) {
      auto it = faces.find({to, j});
      if (it == faces.end()) throw std::out_of_range("cover: missing face map");
      return it->second * restriction(from, without(to, j));
    }
  throw std::invalid_argument("cover: restriction target does not contain the source");
}

SparseMatrix CoverDatum::global_restriction(const Simplex& to) const {
  return restriction({to.front()}, to) * restrictions.at(to.front());
}

ValidationReport validate_cover(const CoverDatum& c) {
  ValidationReport r;
  if (!c.global || c.restrictions.size() != c.charts) {
    r.add("charts", {}, "one restriction per chart required");
    return r;
  }
  for (std::size_t i = 0; i < c.charts; ++i)
    if (!c.contains({i})) r.add("charts", {static_cast<long>(i)}, "chart without algebra");
  for (const auto& [s, alg] : c.pieces) {
    std::vector<long> w(s.begin(), s.end());
    if (s.empty() || !std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end() ||
        s.back() >= c.charts) {
      r.add("simplex", w);
      continue;
    }
    if (!validate_cdga(*alg).ok()) r.add("piece_cdga", w);
    if (s.size() < 2) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      Simplex f = without(s, j);
      if (!c.contains(f)) {
        r.add("downward_closed", w);
        continue;
      }
      auto it = c.faces.find({s, j});
      if (it == c.faces.end()) {
        r.add("face_missing", w, "deleting position " + std::to_string(j));
        continue;
      }
      if (it->second.rows() != alg->dim() || it->second.cols() != c.piece(f).dim()) {
        r.add("face_shape", w);
        continue;
      }
      if (!validate_morphism({c.pieces.at(f), alg, it->second}).ok()) r.add("face_morphism", w);
    }
  }
  if (!r.ok()) return r;
  for (std::size_t i = 0; i < c.charts; ++i) {
    const auto& m = c.restrictions[i];
    if (m.rows() != c.piece({i}).dim() || m.cols() != c.global->dim() ||
        !validate_morphism({c.global, c.pieces.at({i}), m}).ok())
      r.add("restriction_morphism", {static_cast<long>(i)});
  }
  if (!r.ok()) return r;
  for (const auto& [s, alg] : c.pieces) {
    std::vector<long> w(s.begin(), s.end());
    for (std::size_t j = 0; j < s.size(); ++j)
      for (std::size_t k = j + 1; k < s.size() && s.size() > 2; ++k) {
        SparseMatrix lhs = c.faces.at({s, j}) * c.faces.at({without(s, j), k - 1});
        SparseMatrix rhs = c.faces.at({s, k}) * c.faces.at({without(s, k), j});
        if (lhs != rhs) r.add("simplicial_identity", w);
      }
    SparseMatrix first = c.restriction({s[0]}, s) * c.restrictions[s[0]];
    for (std::size_t j = 1; j < s.size(); ++j)
      if (c.restriction({s[j]}, s) * c.restrictions[s[j]] != first) r.add("global_compatibility", w);
  }
  if (rank(vstack(c.restrictions)) != c.global->dim()) r.add("joint_injectivity", {});
  return r;
}

// ---------------------------------------------------------------- connection

ValidationReport validate_connection(const CoverDatum& c, const GerbeConnection& g) {
  ValidationReport r;
  for (const auto& [s, v] : g.A) {
    std::vector<long> w(s.begin(), s.end());
    if (s.size() != 3 || !c.contains(s)) {
      r.add("A_support", w);
      continue;
    }
    if (!v.empty() && !c.piece(s).is_homogeneous(v, 1)) r.add("A_degree", w);
    if (!c.piece(s).differential(v).empty()) r.add("A_closed", w);
  }
  for (const auto& [s, v] : g.a) {
    std::vector<long> w(s.begin(), s.end());
    if (s.size() != 2 || !c.contains(s)) {
      r.add("a_support", w);
      continue;
    }
    if (!v.empty() && !c.piece(s).is_homogeneous(v, 1)) r.add("a_degree", w);
  }
  if (g.beta.size() > c.charts) r.add("beta_support", {});
  for (std::size_t i = 0; i < g.beta.size() && i < c.charts; ++i)
    if (!g.beta[i].empty() && !c.piece({i}).is_homogeneous(g.beta[i], 2)) r.add("beta_degree", {static_cast<long>(i)});
  if (!r.ok()) return r;

  for (const auto& [s, alg] : c.pieces) {
    std::vector<long> w(s.begin(), s.end());
    if (s.size() == 4) {
      SparseVector acc;
      for (std::size_t m = 0; m < 4; ++m) {
        Simplex f = without(s, m);
        SparseVector x = c.restriction(f, s).apply(lookup(g.A, f));
        acc = m % 2 ? acc - x : acc + x;
      }
      if (!acc.empty()) r.add("A_cocycle", w);
    }
    if (s.size() == 3) {
      SparseVector acc;
      for (std::size_t m = 0; m < 3; ++m) {
        Simplex f = without(s, m);
        SparseVector x = c.restriction(f, s).apply(lookup(g.a, f));
        acc = m % 2 ? acc - x : acc + x;
      }
      if (acc != lookup(g.A, s)) r.add("a_coboundary", w);
    }
    if (s.size() == 2) {
      SparseVector lhs = c.restriction({s[1]}, s).apply(beta_at(g, s[1])) -
                         c.restriction({s[0]}, s).apply(beta_at(g, s[0]));
      if (lhs != alg->differential(lookup(g.a, s))) r.add("beta_coboundary", w);
    }
  }
  return r;
}

SparseVector curvature(const CoverDatum& c, const GerbeConnection& g) {
  const Cdga& X = *c.global;
  auto cols = X.basis_of_degree(3);
  std::vector<SparseMatrix> blocks;
  std::vector<Entry> rhs;
  std::size_t off = 0;
  for (std::size_t i = 0; i < c.charts; ++i) {
    blocks.push_back(c.restrictions[i].select_columns(cols));
    SparseVector dbeta = c.piece({i}).differential(beta_at(g, i));
    for (const auto& e : dbeta.entries()) rhs.push_back({off + e.index, e.value});
    off += c.piece({i}).dim();
  }
  SparseMatrix R = vstack(blocks);
  auto sol = solve_linear(R, SparseVector::from_entries(std::move(rhs)));
  if (!sol) throw NoGlobalForm("no global 3-form restricts to d beta on every chart");
  if (rank(R) != cols.size()) throw NotUnique("restrictions are not jointly injective in degree 3");
  SparseVector lambda = sol->reindexed(cols);
  if (!X.differential(lambda).empty()) throw std::logic_error("curvature is not closed");
  return lambda;
}

// ---------------------------------------------------------------- total complex

namespace {

// Elements of Omega (x) Lambda(theta_1..theta_p) keyed by (theta mask, form index); theta_a is bit a-1.
using FVec = std::map<std::pair<std::uint32_t, std::size_t>, Rational>;

FVec fmul(const Cdga& c, const FVec& x, const FVec& y) {
  FVec out;
  for (const auto& [kx, cx] : x)
    for (const auto& [ky, cy] : y) {
      if (kx.first & ky.first) continue;
      int parity = std::popcount(kx.first) * c.degree(ky.second);
      for (std::uint32_t t = ky.first; t; t &= t - 1) parity += std::popcount(kx.first >> (std::countr_zero(t) + 1));
      Rational s = cx * cy;
      if (parity % 2) s = -s;
      for (const auto& e : c.product(kx.second, ky.second).entries()) out[{kx.first | ky.first, e.index}] += s * e.value;
    }
  for (auto it = out.begin(); it != out.end();)
    it = sgn(it->second) == 0 ? out.erase(it) : std::next(it);
  return out;
}

FVec forms(const SparseVector& v, std::uint32_t mask = 0) {
  FVec out;
  for (const auto& e : v.entries()) out[{mask, e.index}] = e.value;
  return out;
}

class RestrictionCache {
 public:
  explicit RestrictionCache(const CoverDatum& c) : c_(c) {}
  const SparseMatrix& get(const Simplex& from, const Simplex& to) {
    auto key = std::make_pair(from, to);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    return cache_[key] = c_.restriction(from, to);
  }

 private:
  const CoverDatum& c_;
  std::map<std::pair<Simplex, Simplex>, SparseMatrix> cache_;
};

// Alternating extension of a connection component to an ordered tuple, restricted to `target`.
SparseVector alternating(const std::map<Simplex, SparseVector>& m, const std::vector<std::size_t>& t,
                         const Simplex& target, RestrictionCache& rc) {
  Simplex s;
  int sign = alternation(t, s);
  if (sign == 0) return {};
  const SparseVector& v = lookup(m, s);
  if (v.empty()) return {};
  SparseVector out = rc.get(s, target).apply(v);
  return sign < 0 ? -out : out;
}

}  // namespace

std::size_t TotalComplex::tuple_index(const std::vector<std::size_t>& t) const {
  auto it = tuple_id_.find(t);
  return it == tuple_id_.end() ? npos : it->second;
}

std::size_t TotalComplex::index_of(int n, const TotBasis& b) const {
  if (n < 0 || n > deg_max_ + 1) return npos;
  const auto& idx = index_[static_cast<std::size_t>(n)];
  auto it = idx.find({b.tuple, b.form, b.mask});
  return it == idx.end() ? npos : it->second;
}

CochainComplex TotalComplex::cochain() const {
  CochainComplex cc;
  for (const auto& b : basis_) cc.dims.push_back(b.size());
  cc.differential = D_;
  return cc;
}

bool TotalComplex::square_zero() const {
  for (std::size_t n = 0; n + 1 < D_.size(); ++n)
    if (!(D_[n + 1] * D_[n]).is_zero()) return false;
  return true;
}

TotElement TotalComplex::unit() const {
  std::vector<Entry> e;
  for (std::size_t i = 0; i < cover_->charts; ++i) e.push_back({index_of(0, {tuple_index({i}), 0, 0}), 1});
  return {0, SparseVector::from_entries(std::move(e))};
}

TotElement TotalComplex::from_global(const SparseVector& omega, int degree) const {
  if (degree < 0 || degree > deg_max_ + 1) throw DegreeOverflow("from_global: degree out of range");
  std::vector<Entry> e;
  for (std::size_t i = 0; i < cover_->charts; ++i) {
    SparseVector w = cover_->restrictions[i].apply(omega);
    std::size_t t = tuple_index({i});
    for (const auto& x : w.entries()) {
      std::size_t k = index_of(degree, {t, x.index, 0});
      if (k == npos) throw DegreeMismatch("from_global: form is not of the stated degree");
      e.push_back({k, x.value});
    }
  }
  return {degree, SparseVector::from_entries(std::move(e))};
}

TotElement TotalComplex::connection_element() const {
  if (deg_max_ + 1 < 2) throw DegreeOverflow("connection element needs deg_max >= 1");
  RestrictionCache rc(*cover_);
  std::vector<Entry> e;
  for (std::size_t t = 0; t < tuples_.size(); ++t) {
    const auto& tup = tuples_[t];
    if (tup.size() == 1) {
      for (const auto& x : beta_at(*conn_, tup[0]).entries()) e.push_back({index_of(2, {t, x.index, 0}), x.value});
    } else if (tup.size() == 2) {
      e.push_back({index_of(2, {t, 0, 1}), 1});
      SparseVector a = alternating(conn_->a, tup, sets_[t], rc);
      for (const auto& x : a.entries())
        e.push_back({index_of(2, {t, x.index, 0}), x.value});
    }
  }
  return {2, SparseVector::from_entries(std::move(e))};
}

TotElement TotalComplex::product(const TotElement& x, const TotElement& y) const {
  const int n = x.degree + y.degree;
  if (n > deg_max_ + 1) throw DegreeOverflow("product exceeds the truncation degree");
  RestrictionCache rc(*cover_);
  const auto& bx = basis(x.degree);
  const auto& by = basis(y.degree);
  std::map<std::size_t, Rational> acc;
  for (const auto& ex : x.v.entries())
    for (const auto& ey : y.v.entries()) {
      const TotBasis& a = bx[ex.index];
      const TotBasis& b = by[ey.index];
      const auto& ta = tuples_[a.tuple];
      const auto& tb = tuples_[b.tuple];
      if (ta.back() != tb.front()) continue;
      std::vector<std::size_t> tr = ta;
      tr.insert(tr.end(), tb.begin() + 1, tb.end());
      std::size_t r = tuple_index(tr);
      if (r == npos) continue;
      const std::size_t p = ta.size() - 1, q = tb.size() - 1;
      const Simplex& sr = sets_[r];
      const Cdga& alg = cover_->piece(sr);
      FVec fx = forms(rc.get(sets_[a.tuple], sr).apply(SparseVector::unit(a.form)), a.mask);
      FVec fy = forms(rc.get(sets_[b.tuple], sr).apply(SparseVector::unit(b.form)), b.mask << p);
      int vertical = cover_->piece(sets_[a.tuple]).degree(a.form) + std::popcount(a.mask);
      Rational s = ex.value * ey.value;
      if ((vertical * static_cast<int>(q)) % 2) s = -s;
      for (const auto& [k, v] : fmul(alg, fx, fy)) {
        std::size_t idx = index_of(n, {r, k.second, k.first});
        if (idx == npos) throw std::logic_error("product: basis element missing");
        acc[idx] += s * v;
      }
    }
  std::vector<Entry> e;
  for (auto& [k, v] : acc) e.push_back({k, v});
  return {n, SparseVector::from_entries(std::move(e))};
}

TotalComplex build_total_complex_unchecked(const CoverDatum& c, const GerbeConnection& g, int deg_max) {
  if (deg_max < 0) throw std::invalid_argument("total complex: deg_max must be >= 0");
  if (deg_max + 1 > 30) throw std::invalid_argument("total complex: deg_max too large");
  TotalComplex t;
  t.deg_max_ = deg_max;
  t.cover_ = std::make_shared<const CoverDatum>(c);
  t.conn_ = std::make_shared<const GerbeConnection>(g);
  const int top = deg_max + 1;

  // Ordered tuples whose underlying set is a nonempty overlap.
  std::vector<std::size_t> frontier;
  for (std::size_t i = 0; i < c.charts; ++i) {
    t.tuple_id_[{i}] = t.tuples_.size();
    frontier.push_back(t.tuples_.size());
    t.tuples_.push_back({i});
    t.sets_.push_back({i});
  }
  for (int p = 1; p <= top; ++p) {
    std::vector<std::size_t> next;
    for (auto f : frontier)
      for (std::size_t i = 0; i < c.charts; ++i) {
        auto tup = t.tuples_[f];
        tup.push_back(i);
        Simplex s = sorted_set(tup);
        if (!c.contains(s)) continue;
        t.tuple_id_[tup] = t.tuples_.size();
        next.push_back(t.tuples_.size());
        t.tuples_.push_back(tup);
        t.sets_.push_back(s);
      }
    frontier = std::move(next);
  }

  t.basis_.resize(static_cast<std::size_t>(top) + 1);
  t.index_.resize(static_cast<std::size_t>(top) + 1);
  for (int n = 0; n <= top; ++n) {
    auto& B = t.basis_[static_cast<std::size_t>(n)];
    auto& I = t.index_[static_cast<std::size_t>(n)];
    for (std::size_t tu = 0; tu < t.tuples_.size(); ++tu) {
      const int p = static_cast<int>(t.tuples_[tu].size()) - 1;
      if (p > n) continue;
      const Cdga& alg = c.piece(t.sets_[tu]);
      for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << p); ++mask) {
        int k = n - p - std::popcount(mask);
        if (k < 0) continue;
        for (auto f : alg.basis_of_degree(k)) {
          I[{tu, f, mask}] = B.size();
          B.push_back({tu, f, mask});
        }
      }
    }
  }

  RestrictionCache rc(c);
  for (int n = 0; n <= deg_max; ++n) {
    const auto& B = t.basis_[static_cast<std::size_t>(n)];
    std::vector<SparseMatrix::Triplet> trip;
    for (std::size_t col = 0; col < B.size(); ++col) {
      const TotBasis& b = B[col];
      const auto& tup = t.tuples_[b.tuple];
      const std::size_t p = tup.size() - 1;
      const Cdga& alg = c.piece(t.sets_[b.tuple]);
      // (-1)^p d
      for (const auto& e : alg.d().column(b.form).entries())
        trip.push_back({t.index_of(n + 1, {b.tuple, e.index, b.mask}), col, p % 2 ? Rational(-e.value) : e.value});
      // sum_j (-1)^j d_j^*
      for (std::size_t j = 0; j <= p + 1; ++j)
        for (std::size_t i = 0; i < c.charts; ++i) {
          auto big = tup;
          big.insert(big.begin() + static_cast<long>(j), i);
          std::size_t bt = t.tuple_index(big);
          if (bt == npos) continue;
          const Simplex& bs = t.sets_[bt];
          const Cdga& balg = c.piece(bs);
          FVec acc = forms(rc.get(t.sets_[b.tuple], bs).apply(SparseVector::unit(b.form)));
          for (std::size_t a = 1; a <= p; ++a) {
            if (!(b.mask >> (a - 1) & 1)) continue;
            FVec img;
            if (j == 0) {
              img[{std::uint32_t{1} << a, 0}] = 1;
            } else if (j == p + 1 || a < j) {
              img[{std::uint32_t{1} << (a - 1), 0}] = 1;
            } else if (a > j) {
              img[{std::uint32_t{1} << a, 0}] = 1;
            } else {
              img[{std::uint32_t{1} << (a - 1), 0}] = 1;
              img[{std::uint32_t{1} << a, 0}] = 1;
              SparseVector A = alternating(g.A, {big[j - 1], big[j], big[j + 1]}, bs, rc);
              for (const auto& e : A.entries())
                img[{0, e.index}] += e.value;
            }
            acc = fmul(balg, acc, img);
          }
          for (const auto& [k, v] : acc) {
            std::size_t row = t.index_of(n + 1, {bt, k.second, k.first});
            if (row == npos) throw std::logic_error("total complex: face image outside the basis");
            trip.push_back({row, col, j % 2 ? Rational(-v) : v});
          }
        }
    }
    t.D_.push_back(SparseMatrix::from_triplets(t.basis_[static_cast<std::size_t>(n) + 1].size(), B.size(),
                                               std::move(trip)));
  }
  return t;
}

TotalComplex build_total_complex(const CoverDatum& c, const GerbeConnection& g, int deg_max) {
  auto rc = validate_cover(c);
  if (!rc.ok()) throw ValidationFailed("cover: " + rc.violations.front().rule);
  auto rg = validate_connection(c, g);
  if (!rg.ok()) throw ValidationFailed("connection: " + rg.violations.front().rule);
  TotalComplex t = build_total_complex_unchecked(c, g, deg_max);
  if (!t.square_zero()) throw std::logic_error("total complex: D^2 != 0 for validated data");
  return t;
}

// ---------------------------------------------------------------- phi and the comparison

PhiMap phi_map(const TotalComplex& t) {
  const CoverDatum& c = t.cover();
  const int top = t.deg_max() + 1;
  PhiMap phi;
  phi.twist = TwistClass{c.global, curvature(c, t.connection())};
  phi.source = z_graded_complex(phi.twist, t.deg_max());
  std::vector<TotElement> powers{t.unit()};
  if (top >= 2) {
    TotElement l = t.connection_element();
    while (2 * static_cast<int>(powers.size()) <= top) powers.push_back(t.product(powers.back(), l));
  }
  for (int n = 0; n <= top; ++n) {
    const auto& src = phi.source.basis[static_cast<std::size_t>(n)];
    std::vector<SparseVector> cols;
    for (const auto& m : src) {
      TotElement w = t.from_global(SparseVector::unit(m.form), c.global->degree(m.form));
      cols.push_back(t.product(w, powers.at(static_cast<std::size_t>(m.n))).v);
    }
    phi.matrix.push_back(SparseMatrix::from_columns(t.basis(n).size(), std::move(cols)));
  }
  return phi;
}

bool phi_is_chain_map(const TotalComplex& t, const PhiMap& phi) {
  for (int n = 0; n <= t.deg_max(); ++n)
    if (t.D(n) * phi.matrix[n] != phi.matrix[n + 1] * phi.source.d[n]) return false;
  return true;
}

InducedMap induced_on_cohomology(const CochainComplex& from, const CochainComplex& to, const SparseMatrix& f, int n) {
  const auto k = static_cast<std::size_t>(n);
  InducedMap out;
  auto cycles = kernel_basis(from.differential.at(k)).basis;
  std::vector<SparseVector> bounds;
  if (n > 0) bounds = image_basis(from.differential.at(k - 1)).basis;
  Quotient h(from.dims.at(k), bounds, cycles);
  out.source_dim = h.dim();
  std::vector<SparseVector> tb;
  if (n > 0) tb = image_basis(to.differential.at(k - 1)).basis;
  out.target_dim = kernel_basis(to.differential.at(k)).dim() - tb.size();
  Echelon e(to.dims.at(k));
  for (const auto& b : tb) e.insert(b);
  for (const auto& l : h.lifts())
    if (e.insert(f.apply(l))) ++out.rank;
  return out;
}

TheoremReport theorem_main_check(const CoverDatum& c, const GerbeConnection& g, int deg_max) {
  if (deg_max < 0) deg_max = c.global->top_degree() + 4;
  TheoremReport rep;
  TotalComplex t = build_total_complex(c, g, deg_max);
  rep.square_zero = t.square_zero();
  PhiMap phi = phi_map(t);
  rep.lambda = phi.twist.lambda;
  rep.chain_map = phi_is_chain_map(t, phi);
  // phi(z^j) phi(z^k) = phi(z^{j+k})
  rep.multiplicative = true;
  auto z_power = [&](int k) {
    auto idx = phi.source.index_of(2 * k, {k, 0});
    return TotElement{2 * k, phi.matrix[2 * k].column(idx)};
  };
  for (int j = 0; 2 * j <= deg_max + 1; ++j)
    for (int k = 0; 2 * (j + k) <= deg_max + 1; ++k)
      if (t.product(z_power(j), z_power(k)).v != z_power(j + k).v) rep.multiplicative = false;
  auto tot = t.cochain();
  auto src = phi.source.cochain();
  rep.total_dims = tot.cohomology_dims();
  rep.total_dims.resize(static_cast<std::size_t>(deg_max) + 1);
  rep.power_series_dims = twisted_betti(phi.source);
  rep.isomorphism = rep.chain_map;
  for (int n = 0; n <= deg_max; ++n) {
    rep.induced.push_back(induced_on_cohomology(src, tot, phi.matrix[n], n));
    rep.isomorphism = rep.isomorphism && rep.induced.back().isomorphism();
  }
  return rep;
}

H0ColumnReport h0_column_check(const CoverDatum& c) {
  H0ColumnReport rep;
  int top = c.global->max_degree();
  for (const auto& [s, alg] : c.pieces) top = std::max(top, alg->max_degree());
  rep.ok = true;
  for (int k = 0; k <= top; ++k) {
    // (w_i) -> (w_j - w_i) on every pair overlap
    std::vector<std::vector<std::size_t>> local(c.charts);
    std::vector<std::size_t> off{0};
    for (std::size_t i = 0; i < c.charts; ++i) {
      local[i] = c.piece({i}).basis_of_degree(k);
      off.push_back(off.back() + local[i].size());
    }
    std::vector<SparseMatrix::Triplet> trip;
    std::size_t row = 0;
    for (const auto& [s, alg] : c.pieces) {
      if (s.size() != 2) continue;
      auto rows = alg->basis_of_degree(k);
      std::vector<std::size_t> rmap(alg->dim(), npos);
      for (std::size_t r = 0; r < rows.size(); ++r) rmap[rows[r]] = r;
      for (int side = 0; side < 2; ++side) {
        std::size_t i = s[static_cast<std::size_t>(side)];
        SparseMatrix res = c.restriction({i}, s);
        for (std::size_t q = 0; q < local[i].size(); ++q)
          for (const auto& e : res.column(local[i][q]).entries())
            trip.push_back({row + rmap[e.index], off[i] + q, side ? e.value : Rational(-e.value)});
      }
      row += rows.size();
    }
    std::size_t eq = kernel_basis(SparseMatrix::from_triplets(row, off.back(), std::move(trip))).dim();
    auto gcols = c.global->basis_of_degree(k);
    std::vector<SparseMatrix> blocks;
    for (std::size_t i = 0; i < c.charts; ++i) blocks.push_back(c.restrictions[i].select_columns(gcols).select_rows(local[i]));
    std::size_t img = gcols.empty() ? 0 : rank(vstack(blocks));
    rep.equalizer_dims.push_back(eq);
    rep.global_dims.push_back(gcols.size());
    rep.image_ranks.push_back(img);
    if (eq != gcols.size() || img != gcols.size()) rep.ok = false;
  }
  return rep;
}

std::vector<std::size_t> cech_de_rham_dims(const TotalComplex& t) {
  CochainComplex cc;
  std::vector<std::vector<std::size_t>> keep;
  for (int n = 0; n <= t.deg_max() + 1; ++n) {
    std::vector<std::size_t> k;
    const auto& B = t.basis(n);
    for (std::size_t i = 0; i < B.size(); ++i)
      if (B[i].mask == 0) k.push_back(i);
    cc.dims.push_back(k.size());
    keep.push_back(std::move(k));
  }
  for (int n = 0; n <= t.deg_max(); ++n)
    cc.differential.push_back(t.D(n).select_columns(keep[n]).select_rows(keep[n + 1]));
  auto h = cc.cohomology_dims();
  h.resize(static_cast<std::size_t>(t.deg_max()) + 1);
  return h;
}

// ---------------------------------------------------------------- covers

CoverDatum single_chart_cover(CdgaPtr omega, std::string name) {
  return product_cover(std::move(omega), 1, std::move(name));
}

CoverDatum product_cover(CdgaPtr omega, std::size_t charts, std::string name) {
  if (charts == 0 || charts > 16) throw std::invalid_argument("product_cover: 1..16 charts");
  CoverDatum c;
  c.name = std::move(name);
  c.charts = charts;
  c.global = omega;
  const SparseMatrix id = SparseMatrix::identity(omega->dim());
  for (std::size_t mask = 1; mask < (std::size_t{1} << charts); ++mask) {
    Simplex s;
    for (std::size_t i = 0; i < charts; ++i)
      if (mask >> i & 1) s.push_back(i);
    c.pieces[s] = omega;
    if (s.size() > 1)
      for (std::size_t j = 0; j < s.size(); ++j) c.faces[{s, j}] = id;
  }
  c.restrictions.assign(charts, id);
  return c;
}

BarComplexReport bs1_bar_complex(int deg_max) {
  auto point = std::make_shared<const Cdga>(std::vector<int>{0}, SparseMatrix::zero(1, 1),
                                            std::vector<Cdga::ProductTerm>{{0, 0, 0, 1}}, 0, "point");
  TotalComplex t = build_total_complex(single_chart_cover(point, "point"), GerbeConnection{}, deg_max);
  BarComplexReport rep;
  rep.dims = t.cochain().cohomology_dims();
  rep.dims.resize(static_cast<std::size_t>(deg_max) + 1);
  if (deg_max + 1 < 2) return rep;
  rep.generator = {2, SparseVector::unit(t.index_of(2, {t.tuple_index({0, 0}), 0, 1}))};
  TotElement power = t.unit();
  for (int k = 0; 2 * k <= deg_max; ++k) {
    if (k > 0) power = t.product(power, rep.generator);
    bool nonzero = !power.v.empty();
    if (nonzero && k > 0) nonzero = !in_span(image_basis(t.D(2 * k - 1)).basis, t.basis(2 * k).size(), power.v);
    rep.powers_nonzero.push_back(nonzero);
  }
  return rep;
}

}  // namespace twistcoh

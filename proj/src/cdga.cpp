#include "twistcoh/cdga.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace twistcoh {

namespace {

int koszul(int a, int b) { return ((a % 2) && (b % 2)) ? -1 : 1; }

std::vector<std::vector<SparseVector>> table_from_terms(std::size_t n, const std::vector<Cdga::ProductTerm>& terms) {
  std::vector<std::vector<std::vector<Entry>>> acc(n, std::vector<std::vector<Entry>>(n));
  for (const auto& t : terms) {
    if (t.left >= n || t.right >= n || t.result >= n) throw DimensionMismatch("product term index out of range");
    acc[t.left][t.right].push_back({t.result, t.coeff});
  }
  std::vector<std::vector<SparseVector>> table(n, std::vector<SparseVector>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) table[i][j] = SparseVector::from_entries(std::move(acc[i][j]));
  return table;
}

}  // namespace

Cdga::Cdga(std::vector<int> degrees, SparseMatrix differential, const std::vector<ProductTerm>& product,
           int top_degree, std::string name)
    : Cdga(degrees, std::move(differential), table_from_terms(degrees.size(), product), top_degree,
           std::move(name)) {}

Cdga::Cdga(std::vector<int> degrees, SparseMatrix differential, std::vector<std::vector<SparseVector>> table,
           int top_degree, std::string name)
    : degrees_(std::move(degrees)),
      d_(std::move(differential)),
      table_(std::move(table)),
      top_degree_(top_degree),
      name_(std::move(name)) {
  std::size_t n = degrees_.size();
  if (n == 0) throw std::invalid_argument("a CDGA needs at least the unit");
  if (d_.rows() != n || d_.cols() != n) throw DimensionMismatch("differential must be dim x dim");
  if (table_.size() != n) throw DimensionMismatch("product table must be dim x dim");
  for (const auto& row : table_) {
    if (row.size() != n) throw DimensionMismatch("product table must be dim x dim");
    for (const auto& v : row)
      if (v.support_bound() > n) throw DimensionMismatch("product result index out of range");
  }
  for (int k : degrees_)
    if (k < 0) throw std::invalid_argument("negative degree");
}

int Cdga::max_degree() const { return *std::max_element(degrees_.begin(), degrees_.end()); }

std::vector<Cdga::ProductTerm> Cdga::product_terms() const {
  std::vector<ProductTerm> out;
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = 0; j < dim(); ++j)
      for (const auto& e : table_[i][j].entries()) out.push_back({i, j, e.index, e.value});
  return out;
}

SparseVector Cdga::multiply(const SparseVector& x, const SparseVector& y) const {
  std::vector<Entry> acc;
  for (const auto& a : x.entries())
    for (const auto& b : y.entries())
      for (const auto& c : table_.at(a.index).at(b.index).entries())
        acc.push_back({c.index, a.value * b.value * c.value});
  return SparseVector::from_entries(std::move(acc));
}

std::vector<std::size_t> Cdga::basis_of_degree(int k) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dim(); ++i)
    if (degrees_[i] == k) out.push_back(i);
  return out;
}

std::optional<int> Cdga::degree_of(const SparseVector& x) const {
  if (x.empty()) return std::nullopt;
  int k = degrees_.at(x.entries().front().index);
  for (const auto& e : x.entries())
    if (degrees_.at(e.index) != k) return std::nullopt;
  return k;
}

bool Cdga::is_homogeneous(const SparseVector& x, int k) const {
  for (const auto& e : x.entries())
    if (e.index >= dim() || degrees_[e.index] != k) return false;
  return true;
}

SparseMatrix Cdga::d_block(int k) const {
  auto src = basis_of_degree(k);
  auto tgt = basis_of_degree(k + 1);
  return d_.select_columns(src).select_rows(tgt);
}

SparseMatrix Cdga::left_multiplication(const SparseVector& x) const {
  std::vector<SparseVector> cols;
  for (std::size_t j = 0; j < dim(); ++j) cols.push_back(multiply(x, SparseVector::unit(j)));
  return SparseMatrix::from_columns(dim(), std::move(cols));
}

// ---------------------------------------------------------------- elements and morphisms

Element make_element(CdgaPtr parent, SparseVector coeffs, int degree) {
  if (!parent) throw std::invalid_argument("element without parent algebra");
  if (coeffs.support_bound() > parent->dim()) throw DimensionMismatch("element longer than its algebra");
  if (!parent->is_homogeneous(coeffs, degree))
    throw DegreeMismatch("element is not homogeneous of degree " + std::to_string(degree));
  return Element{std::move(parent), std::move(coeffs), degree};
}

Element make_element(CdgaPtr parent, SparseVector coeffs) {
  if (!parent) throw std::invalid_argument("element without parent algebra");
  if (coeffs.support_bound() > parent->dim()) throw DimensionMismatch("element longer than its algebra");
  int degree = coeffs.empty() ? 0 : parent->degree_of(coeffs).value_or(kMixedDegree);
  return Element{std::move(parent), std::move(coeffs), degree};
}

CdgaMorphism identity_morphism(CdgaPtr c) {
  auto n = c->dim();
  return CdgaMorphism{c, c, SparseMatrix::identity(n)};
}

CdgaMorphism compose(const CdgaMorphism& g, const CdgaMorphism& f) {
  if (f.target->dim() != g.source->dim()) throw DimensionMismatch("compose: incompatible morphisms");
  return CdgaMorphism{f.source, g.target, g.matrix * f.matrix};
}

ValidationReport validate_morphism(const CdgaMorphism& f) {
  ValidationReport r;
  const Cdga& s = *f.source;
  const Cdga& t = *f.target;
  if (f.matrix.rows() != t.dim() || f.matrix.cols() != s.dim()) {
    r.add("shape", {static_cast<long>(f.matrix.rows()), static_cast<long>(f.matrix.cols())});
    return r;
  }
  for (std::size_t j = 0; j < s.dim(); ++j)
    if (!t.is_homogeneous(f.matrix.column(j), s.degree(j))) r.add("degree", {static_cast<long>(j)});
  if (f.matrix.column(0) != t.unit()) r.add("unital", {0});
  SparseMatrix lhs = f.matrix * s.d();
  SparseMatrix rhs = t.d() * f.matrix;
  for (std::size_t j = 0; j < s.dim(); ++j)
    if (lhs.column(j) != rhs.column(j)) r.add("commutes_with_d", {static_cast<long>(j)});
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (std::size_t j = 0; j < s.dim(); ++j) {
      SparseVector a = f.matrix.apply(s.product(i, j));
      SparseVector b = t.multiply(f.matrix.column(i), f.matrix.column(j));
      if (a != b) r.add("multiplicative", {static_cast<long>(i), static_cast<long>(j)});
    }
  return r;
}

Element apply_morphism(const CdgaMorphism& f, const Element& e) {
  if (e.is_mixed()) throw DegreeMismatch("apply_morphism: mixed-degree element");
  if (e.parent && e.parent->dim() != f.source->dim())
    throw DegreeMismatch("apply_morphism: element does not live in the source algebra");
  if (!f.source->is_homogeneous(e.coeffs, e.degree)) throw DegreeMismatch("apply_morphism: degree tag is wrong");
  SparseVector img = f.matrix.apply(e.coeffs);
  if (f.matrix.apply(f.source->differential(e.coeffs)) != f.target->differential(img))
    throw std::logic_error("apply_morphism: map does not commute with d on this element");
  return make_element(f.target, std::move(img), e.degree);
}

// ---------------------------------------------------------------- validation

ValidationReport validate_cdga(const Cdga& c) {
  ValidationReport r;
  const std::size_t n = c.dim();
  auto L = [](std::size_t i) { return static_cast<long>(i); };
  if (c.degree(0) != 0) r.add("unit_degree", {0});
  for (std::size_t i = 0; i < n; ++i)
    if (c.degree(i) > c.top_degree()) r.add("top_degree", {L(i)}, "basis degree exceeds declared top degree");

  for (std::size_t i = 0; i < n; ++i) {
    SparseVector e = SparseVector::unit(i);
    if (c.product(0, i) != e) r.add("unit", {0, L(i)}, "1 * e_i != e_i");
    if (c.product(i, 0) != e) r.add("unit", {L(i), 0}, "e_i * 1 != e_i");
  }
  for (std::size_t j = 0; j < n; ++j)
    if (!c.is_homogeneous(c.d().column(j), c.degree(j) + 1)) r.add("d_degree", {L(j)});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!c.is_homogeneous(c.product(i, j), c.degree(i) + c.degree(j))) r.add("product_degree", {L(i), L(j)});

  SparseMatrix dd = c.d() * c.d();
  for (std::size_t j = 0; j < n; ++j)
    if (!dd.column(j).empty()) r.add("d_squared", {L(j)});

  for (std::size_t i = 0; i < n; ++i) {
    SparseVector di = c.d().column(i);
    int sign = c.degree(i) % 2 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) {
      SparseVector lhs = c.differential(c.product(i, j));
      SparseVector rhs = c.multiply(di, SparseVector::unit(j))
                             .axpy(sign, c.multiply(SparseVector::unit(i), c.d().column(j)));
      if (lhs != rhs) r.add("leibniz", {L(i), L(j)});
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (c.product(i, j) != c.product(j, i).scaled(koszul(c.degree(i), c.degree(j))))
        r.add("graded_commutativity", {L(i), L(j)});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const SparseVector& ij = c.product(i, j);
      for (std::size_t k = 0; k < n; ++k) {
        SparseVector lhs = c.multiply(ij, SparseVector::unit(k));
        SparseVector rhs = c.multiply(SparseVector::unit(i), c.product(j, k));
        if (lhs != rhs) r.add("associativity", {L(i), L(j), L(k)});
      }
    }
  return r;
}

// ---------------------------------------------------------------- constructors

std::size_t monomial_index(const FreeCdga& f, const std::vector<int>& exponents) {
  auto it = std::find(f.exponents.begin(), f.exponents.end(), exponents);
  return it == f.exponents.end() ? npos : static_cast<std::size_t>(it - f.exponents.begin());
}

FreeCdga free_cdga(const std::vector<Generator>& gens, const std::vector<GeneratorPolynomial>& differential,
                   int top_degree, std::string name) {
  const std::size_t g = gens.size();
  std::vector<int> max_exp(g);
  for (std::size_t i = 0; i < g; ++i) {
    if (gens[i].degree < 1) throw std::invalid_argument("generator degrees must be >= 1");
    if (gens[i].degree % 2) {
      max_exp[i] = 1;
    } else {
      if (!gens[i].cap) throw CapRequired("even-degree generator '" + gens[i].name + "' needs a truncation cap");
      max_exp[i] = *gens[i].cap;
    }
  }
  if (!differential.empty() && differential.size() != g)
    throw DimensionMismatch("one differential image per generator expected");

  std::vector<std::vector<int>> monomials;
  std::vector<int> cur(g, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == g) {
      monomials.push_back(cur);
      return;
    }
    for (int e = 0; e <= max_exp[i]; ++e) {
      cur[i] = e;
      rec(i + 1);
    }
    cur[i] = 0;
  };
  rec(0);
  auto deg = [&](const std::vector<int>& m) {
    int s = 0;
    for (std::size_t i = 0; i < g; ++i) s += m[i] * gens[i].degree;
    return s;
  };
  std::stable_sort(monomials.begin(), monomials.end(), [&](const auto& a, const auto& b) {
    int da = deg(a), db = deg(b);
    if (da != db) return da < db;
    return a > b;
  });
  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t i = 0; i < monomials.size(); ++i) index[monomials[i]] = i;
  const std::size_t n = monomials.size();
  std::vector<int> degrees(n);
  for (std::size_t i = 0; i < n; ++i) degrees[i] = deg(monomials[i]);

  std::vector<std::vector<SparseVector>> table(n, std::vector<SparseVector>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      std::vector<int> e(g);
      bool zero = false;
      for (std::size_t i = 0; i < g && !zero; ++i) {
        e[i] = monomials[a][i] + monomials[b][i];
        if (e[i] > max_exp[i]) zero = true;
      }
      if (zero) continue;
      // Moving odd generators of the right factor past larger-indexed odd ones of the left.
      int swaps = 0;
      for (std::size_t i = 0; i < g; ++i)
        if (gens[i].degree % 2 && monomials[a][i])
          for (std::size_t j = 0; j < i; ++j)
            if (gens[j].degree % 2 && monomials[b][j]) ++swaps;
      table[a][b] = SparseVector::unit(index.at(e), swaps % 2 ? -1 : 1);
    }

  auto poly_vector = [&](const GeneratorPolynomial& p) {
    std::vector<Entry> acc;
    for (const auto& [coef, exps] : p) {
      if (exps.size() != g) throw DimensionMismatch("exponent vector length");
      auto it = index.find(exps);
      if (it != index.end()) acc.push_back({it->second, coef});
    }
    return SparseVector::from_entries(std::move(acc));
  };

  // d on monomials by Leibniz through the first generator present.
  std::vector<SparseVector> dcols(n);
  std::vector<SparseVector> dgen(g);
  for (std::size_t i = 0; i < g && !differential.empty(); ++i) dgen[i] = poly_vector(differential[i]);
  auto mult = [&](const SparseVector& x, const SparseVector& y) {
    std::vector<Entry> acc;
    for (const auto& a : x.entries())
      for (const auto& b : y.entries())
        for (const auto& c : table[a.index][b.index].entries()) acc.push_back({c.index, a.value * b.value * c.value});
    return SparseVector::from_entries(std::move(acc));
  };
  for (std::size_t m = 1; m < n; ++m) {
    std::size_t first = 0;
    while (monomials[m][first] == 0) ++first;
    std::vector<int> rest = monomials[m];
    --rest[first];
    std::size_t r = index.at(rest);
    std::vector<int> gexp(g, 0);
    gexp[first] = 1;
    SparseVector gv = SparseVector::unit(index.at(gexp));
    int sign = gens[first].degree % 2 ? -1 : 1;
    dcols[m] = mult(dgen[first], SparseVector::unit(r)).axpy(sign, mult(gv, dcols[r]));
  }

  FreeCdga out;
  if (top_degree < 0) top_degree = *std::max_element(degrees.begin(), degrees.end());
  out.algebra = std::make_shared<Cdga>(degrees, SparseMatrix::from_columns(n, std::move(dcols)), std::move(table),
                                       top_degree, std::move(name));
  out.exponents = std::move(monomials);
  for (std::size_t i = 0; i < g; ++i) {
    std::vector<int> e(g, 0);
    e[i] = 1;
    out.generator_index.push_back(index.count(e) ? index.at(e) : npos);
  }
  return out;
}

FreeCdga exterior_algebra(const std::vector<Generator>& generators, int top_degree, std::string name) {
  return free_cdga(generators, {}, top_degree, std::move(name));
}

QuotientCdga quotient_cdga(CdgaPtr c, const std::vector<SparseVector>& ideal_generators, std::string name,
                           std::optional<int> top_degree) {
  const std::size_t n = c->dim();
  Echelon ideal(n);
  std::vector<SparseVector> basis;
  std::vector<SparseVector> work;
  for (const auto& g : ideal_generators) {
    if (!g.empty() && !c->degree_of(g)) throw DegreeMismatch("ideal generators must be homogeneous");
    work.push_back(g);
  }
  while (!work.empty()) {
    SparseVector v = std::move(work.back());
    work.pop_back();
    if (!ideal.insert(v)) continue;
    basis.push_back(v);
    work.push_back(c->differential(v));
    for (std::size_t i = 1; i < n; ++i) work.push_back(c->multiply(SparseVector::unit(i), v));
  }
  std::vector<SparseVector> units;
  for (std::size_t i = 0; i < n; ++i) units.push_back(SparseVector::unit(i));
  Quotient q(n, basis, units);
  std::vector<std::size_t> kept;
  for (const auto& l : q.lifts()) kept.push_back(l.entries().front().index);
  if (kept.empty() || kept[0] != 0) throw std::invalid_argument("quotient_cdga: the ideal contains the unit");
  const std::size_t m = kept.size();

  std::vector<int> degrees;
  for (auto k : kept) degrees.push_back(c->degree(k));
  std::vector<SparseVector> dcols;
  std::vector<std::vector<SparseVector>> table(m, std::vector<SparseVector>(m));
  for (std::size_t a = 0; a < m; ++a) {
    dcols.push_back(q.coordinates(c->d().column(kept[a])));
    for (std::size_t b = 0; b < m; ++b) table[a][b] = q.coordinates(c->product(kept[a], kept[b]));
  }
  auto qa = std::make_shared<Cdga>(degrees, SparseMatrix::from_columns(m, std::move(dcols)), std::move(table),
                                   top_degree.value_or(c->top_degree()), name.empty() ? c->name() + "/I" : std::move(name));
  std::vector<SparseVector> proj;
  for (std::size_t i = 0; i < n; ++i) proj.push_back(q.coordinates(SparseVector::unit(i)));
  QuotientCdga out{qa, CdgaMorphism{c, qa, SparseMatrix::from_columns(m, std::move(proj))}, kept};
  return out;
}

CdgaPtr tensor_cdga(const Cdga& a, const Cdga& b, std::string name) {
  const std::size_t na = a.dim(), nb = b.dim(), n = na * nb;
  std::vector<int> degrees(n);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) degrees[i * nb + j] = a.degree(i) + b.degree(j);
  std::vector<SparseMatrix::Triplet> dt;
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      std::size_t col = i * nb + j;
      for (const auto& e : a.d().column(i).entries()) dt.push_back({e.index * nb + j, col, e.value});
      int s = a.degree(i) % 2 ? -1 : 1;
      for (const auto& e : b.d().column(j).entries()) dt.push_back({i * nb + e.index, col, s * e.value});
    }
  std::vector<std::vector<SparseVector>> table(n, std::vector<SparseVector>(n));
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      for (std::size_t k = 0; k < na; ++k)
        for (std::size_t l = 0; l < nb; ++l) {
          const auto& ak = a.product(i, k);
          const auto& bl = b.product(j, l);
          if (ak.empty() || bl.empty()) continue;
          int s = koszul(b.degree(j), a.degree(k));
          std::vector<Entry> acc;
          for (const auto& x : ak.entries())
            for (const auto& y : bl.entries()) acc.push_back({x.index * nb + y.index, s * x.value * y.value});
          table[i * nb + j][k * nb + l] = SparseVector::from_entries(std::move(acc));
        }
  if (name.empty()) name = a.name() + "*" + b.name();
  return std::make_shared<Cdga>(degrees, SparseMatrix::from_triplets(n, n, std::move(dt)), std::move(table),
                                a.top_degree() + b.top_degree(), std::move(name));
}

CdgaMorphism tensor_left_inclusion(CdgaPtr tensor, CdgaPtr a, std::size_t b_dim) {
  std::vector<SparseVector> cols;
  for (std::size_t i = 0; i < a->dim(); ++i) cols.push_back(SparseVector::unit(i * b_dim));
  return CdgaMorphism{a, tensor, SparseMatrix::from_columns(tensor->dim(), std::move(cols))};
}

CdgaMorphism tensor_right_inclusion(CdgaPtr tensor, CdgaPtr b) {
  std::vector<SparseVector> cols;
  for (std::size_t j = 0; j < b->dim(); ++j) cols.push_back(SparseVector::unit(j));
  return CdgaMorphism{b, tensor, SparseMatrix::from_columns(tensor->dim(), std::move(cols))};
}

// ---------------------------------------------------------------- cohomology

CohomologyRing cohomology_ring(const Cdga& c) {
  CohomologyRing out;
  const int top = c.max_degree();
  const std::size_t n = c.dim();
  for (int k = 0; k <= top; ++k) {
    auto src = c.basis_of_degree(k);
    auto prev = c.basis_of_degree(k - 1);
    std::vector<SparseVector> cycles;
    for (const auto& z : kernel_basis(c.d_block(k)).basis) {
      std::vector<std::size_t> map(src.begin(), src.end());
      cycles.push_back(z.reindexed(map));
    }
    std::vector<SparseVector> bounds;
    for (auto j : prev) bounds.push_back(c.d().column(j));
    Quotient q(n, bounds, cycles);
    out.dims.push_back(q.dim());
    out.representatives.push_back(q.lifts());
    out.boundaries.push_back(std::move(bounds));
  }
  return out;
}

bool is_exact(const Cdga& c, const SparseVector& x) { return solve_linear(c.d(), x).has_value(); }

}  // namespace twistcoh

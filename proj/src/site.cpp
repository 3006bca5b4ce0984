#include "twistcoh/site.hpp"

#include <algorithm>
#include <functional>

namespace twistcoh {

// ---------------------------------------------------------------- categories

FiniteCategory::FiniteCategory(std::vector<std::string> objects, std::vector<Morphism> morphisms,
                               std::vector<std::size_t> identities,
                               const std::vector<std::array<std::size_t, 3>>& compositions)
    : objects_(std::move(objects)), morphisms_(std::move(morphisms)), identities_(std::move(identities)) {
  const std::size_t n = objects_.size(), m = morphisms_.size();
  if (identities_.size() != n) throw std::invalid_argument("category: one identity per object required");
  for (const auto& f : morphisms_)
    if (f.source >= n || f.target >= n) throw std::invalid_argument("category: morphism endpoint out of range");
  for (auto i : identities_)
    if (i >= m) throw std::invalid_argument("category: identity out of range");
  comp_.assign(m, std::vector<std::size_t>(m, npos));
  for (const auto& t : compositions) {
    if (t[0] >= m || t[1] >= m || t[2] >= m) throw std::invalid_argument("category: composition out of range");
    comp_[t[0]][t[1]] = t[2];
  }
  hom_.assign(n, std::vector<std::vector<std::size_t>>(n));
  for (std::size_t f = 0; f < m; ++f) hom_[morphisms_[f].source][morphisms_[f].target].push_back(f);
}

std::size_t FiniteCategory::compose(std::size_t g, std::size_t f) const {
  if (g >= morphisms_.size() || f >= morphisms_.size()) return npos;
  return comp_[g][f];
}

std::vector<std::size_t> FiniteCategory::into(std::size_t target) const {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < morphisms_.size(); ++f)
    if (morphisms_[f].target == target) out.push_back(f);
  return out;
}

std::vector<std::array<std::size_t, 3>> FiniteCategory::composition_triples() const {
  std::vector<std::array<std::size_t, 3>> out;
  for (std::size_t g = 0; g < comp_.size(); ++g)
    for (std::size_t f = 0; f < comp_.size(); ++f)
      if (comp_[g][f] != npos) out.push_back({g, f, comp_[g][f]});
  return out;
}

ValidationReport FiniteCategory::validate() const {
  ValidationReport r;
  const std::size_t m = morphisms_.size();
  for (std::size_t o = 0; o < objects_.size(); ++o) {
    const auto& id = morphisms_[identities_[o]];
    if (id.source != o || id.target != o) r.add("identity", {static_cast<long>(o)}, "identity endpoints");
  }
  for (std::size_t g = 0; g < m; ++g)
    for (std::size_t f = 0; f < m; ++f) {
      bool composable = morphisms_[f].target == morphisms_[g].source;
      std::size_t c = comp_[g][f];
      if (!composable) {
        if (c != npos) r.add("composition_spurious", {static_cast<long>(g), static_cast<long>(f)});
        continue;
      }
      if (c == npos) {
        r.add("composition_missing", {static_cast<long>(g), static_cast<long>(f)});
        continue;
      }
      if (morphisms_[c].source != morphisms_[f].source || morphisms_[c].target != morphisms_[g].target)
        r.add("composition_endpoints", {static_cast<long>(g), static_cast<long>(f)});
    }
  if (!r.ok()) return r;
  for (std::size_t f = 0; f < m; ++f) {
    if (comp_[f][identities_[morphisms_[f].source]] != f || comp_[identities_[morphisms_[f].target]][f] != f)
      r.add("unit_law", {static_cast<long>(f)});
  }
  for (std::size_t h = 0; h < m; ++h)
    for (std::size_t g = 0; g < m; ++g) {
      if (comp_[h][g] == npos) continue;
      for (std::size_t f = 0; f < m; ++f) {
        if (comp_[g][f] == npos) continue;
        if (comp_[comp_[h][g]][f] != comp_[h][comp_[g][f]])
          r.add("associativity", {static_cast<long>(h), static_cast<long>(g), static_cast<long>(f)});
      }
    }
  return r;
}

// ---------------------------------------------------------------- sites

namespace {

bool same_set(Covering a, Covering b) {
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return a == b;
}

}  // namespace

const PullbackWitness& FiniteSite::pullback(std::size_t cover, std::size_t along) const {
  auto it = pullbacks.find({cover, along});
  if (it == pullbacks.end())
    throw MissingPullback("no fibre product recorded for covering morphism " + std::to_string(cover) + " along " +
                          std::to_string(along));
  return it->second;
}

bool FiniteSite::is_empty_object(std::size_t object) const {
  for (const auto& c : coverings.at(object))
    if (c.empty()) return true;
  return false;
}

std::size_t FiniteSite::find_covering(std::size_t object, const Covering& family) const {
  const auto& cs = coverings.at(object);
  for (std::size_t i = 0; i < cs.size(); ++i)
    if (same_set(cs[i], family)) return i;
  return npos;
}

ValidationReport validate_site(const FiniteSite& site) {
  ValidationReport r;
  const FiniteCategory& c = site.category;
  r.merge(c.validate(), "category.");
  if (!r.ok()) return r;
  if (site.coverings.size() != c.object_count()) {
    r.add("coverings_shape", {}, "one covering list per object required");
    return r;
  }
  std::set<std::size_t> covering_morphisms;
  for (std::size_t v = 0; v < c.object_count(); ++v) {
    bool has_identity = false;
    for (std::size_t k = 0; k < site.coverings[v].size(); ++k) {
      const auto& tau = site.coverings[v][k];
      for (auto m : tau) {
        if (m >= c.morphism_count() || c.morphism(m).target != v)
          r.add("covering_target", {static_cast<long>(v), static_cast<long>(k)});
        else
          covering_morphisms.insert(m);
      }
      if (tau.size() == 1 && tau[0] == c.identity(v)) has_identity = true;
    }
    if (!has_identity) r.add("identity_covers", {static_cast<long>(v)});
  }
  if (!r.ok()) return r;

  for (auto cov : covering_morphisms) {
    const auto& cm = c.morphism(cov);
    for (auto along : c.into(cm.target)) {
      auto it = site.pullbacks.find({cov, along});
      if (it == site.pullbacks.end()) {
        r.add("pullback_missing", {static_cast<long>(cov), static_cast<long>(along)});
        continue;
      }
      const auto& w = it->second;
      const auto& am = c.morphism(along);
      if (w.object >= c.object_count() || w.proj_along >= c.morphism_count() || w.proj_cover >= c.morphism_count() ||
          c.morphism(w.proj_along).source != w.object || c.morphism(w.proj_along).target != am.source ||
          c.morphism(w.proj_cover).source != w.object || c.morphism(w.proj_cover).target != cm.source) {
        r.add("pullback_shape", {static_cast<long>(cov), static_cast<long>(along)});
        continue;
      }
      if (c.compose(cov, w.proj_cover) != c.compose(along, w.proj_along)) {
        r.add("pullback_commutes", {static_cast<long>(cov), static_cast<long>(along)});
        continue;
      }
      for (std::size_t t = 0; t < c.object_count(); ++t)
        for (auto a : c.hom(t, am.source))
          for (auto b : c.hom(t, cm.source)) {
            if (c.compose(along, a) != c.compose(cov, b)) continue;
            int factorizations = 0;
            for (auto u : c.hom(t, w.object))
              if (c.compose(w.proj_along, u) == a && c.compose(w.proj_cover, u) == b) ++factorizations;
            if (factorizations != 1)
              r.add("pullback_universal",
                    {static_cast<long>(cov), static_cast<long>(along), static_cast<long>(t), static_cast<long>(a),
                     static_cast<long>(b)},
                    std::to_string(factorizations) + " factorizations");
          }
    }
  }
  if (!r.ok()) return r;

  for (std::size_t v = 0; v < c.object_count(); ++v)
    for (std::size_t k = 0; k < site.coverings[v].size(); ++k)
      for (auto along : c.into(v)) {
        Covering pulled;
        for (auto m : site.coverings[v][k]) pulled.push_back(site.pullback(m, along).proj_along);
        if (site.find_covering(c.morphism(along).source, pulled) == npos)
          r.add("covering_stability", {static_cast<long>(v), static_cast<long>(k), static_cast<long>(along)});
      }
  return r;
}

TopologicalSite topological_site(int points, std::vector<std::set<int>> opens, std::string name) {
  TopologicalSite t;
  t.points = points;
  std::set<int> whole;
  for (int i = 0; i < points; ++i) whole.insert(i);
  if (std::find(opens.begin(), opens.end(), whole) == opens.end())
    throw std::invalid_argument("topological_site: the whole space must be an open");
  auto index_of = [&](const std::set<int>& s) -> std::size_t {
    auto it = std::find(opens.begin(), opens.end(), s);
    return it == opens.end() ? npos : static_cast<std::size_t>(it - opens.begin());
  };
  auto subset = [](const std::set<int>& a, const std::set<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  const std::size_t n = opens.size();
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("O" + std::to_string(i));
  std::vector<Morphism> mor;
  std::vector<std::vector<std::size_t>> inc(n, std::vector<std::size_t>(n, npos));
  std::vector<std::size_t> ids(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (subset(opens[a], opens[b])) {
        inc[a][b] = mor.size();
        if (a == b) ids[a] = mor.size();
        mor.push_back({a, b, names[a] + "<" + names[b]});
      }
  std::vector<std::array<std::size_t, 3>> comp;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (inc[a][b] != npos && inc[b][c] != npos) comp.push_back({inc[b][c], inc[a][b], inc[a][c]});
  t.site.name = std::move(name);
  t.site.category = FiniteCategory(names, mor, ids, comp);
  t.site.coverings.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<std::size_t> subs;
    for (std::size_t a = 0; a < n; ++a)
      if (inc[a][v] != npos) subs.push_back(inc[a][v]);
    if (subs.size() > 20) throw std::invalid_argument("topological_site: too many subopens to enumerate coverings");
    for (std::size_t mask = 0; mask < (std::size_t{1} << subs.size()); ++mask) {
      std::set<int> u;
      Covering fam;
      for (std::size_t i = 0; i < subs.size(); ++i)
        if (mask >> i & 1) {
          fam.push_back(subs[i]);
          const auto& s = opens[mor[subs[i]].source];
          u.insert(s.begin(), s.end());
        }
      if (u == opens[v]) t.site.coverings[v].push_back(fam);
    }
    // Identity covering first.
    auto& cs = t.site.coverings[v];
    std::stable_partition(cs.begin(), cs.end(), [&](const Covering& f) { return f.size() == 1 && f[0] == ids[v]; });
  }
  for (std::size_t cov = 0; cov < mor.size(); ++cov)
    for (std::size_t along = 0; along < mor.size(); ++along) {
      if (mor[cov].target != mor[along].target) continue;
      std::set<int> meet;
      const auto& a = opens[mor[cov].source];
      const auto& b = opens[mor[along].source];
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(meet, meet.begin()));
      std::size_t p = index_of(meet);
      if (p == npos) throw std::invalid_argument("topological_site: opens not closed under intersection");
      t.site.pullbacks[{cov, along}] = {cov, along, p, inc[p][mor[along].source], inc[p][mor[cov].source]};
    }
  t.opens = std::move(opens);
  return t;
}

// ---------------------------------------------------------------- presheaves

ValidationReport validate_presheaf(const FiniteCategory& c, const Presheaf& f) {
  ValidationReport r;
  if (f.dims.size() != c.object_count() || f.maps.size() != c.morphism_count()) {
    r.add("shape", {}, "dims per object and one matrix per morphism required");
    return r;
  }
  for (std::size_t m = 0; m < c.morphism_count(); ++m) {
    const auto& mm = c.morphism(m);
    if (f.maps[m].rows() != f.dims[mm.source] || f.maps[m].cols() != f.dims[mm.target])
      r.add("map_shape", {static_cast<long>(m)});
  }
  if (!r.ok()) return r;
  for (std::size_t o = 0; o < c.object_count(); ++o)
    if (!f.maps[c.identity(o)].is_identity()) r.add("identity", {static_cast<long>(o)});
  for (const auto& t : c.composition_triples())
    if (f.maps[t[2]] != f.maps[t[1]] * f.maps[t[0]])
      r.add("functoriality", {static_cast<long>(t[0]), static_cast<long>(t[1])});
  return r;
}

Presheaf constant_presheaf(const FiniteSite& site, std::size_t k) {
  const auto& c = site.category;
  Presheaf f;
  for (std::size_t o = 0; o < c.object_count(); ++o) f.dims.push_back(site.is_empty_object(o) ? 0 : k);
  for (const auto& m : c.morphisms())
    f.maps.push_back(f.dims[m.source] && f.dims[m.target] ? SparseMatrix::identity(k)
                                                          : SparseMatrix::zero(f.dims[m.source], f.dims[m.target]));
  return f;
}

namespace {

// Q^{points of V restricted to `pts`} with restriction of functions.
Presheaf functions_on(const TopologicalSite& t, const std::set<int>& pts) {
  const auto& c = t.site.category;
  Presheaf f;
  std::vector<std::vector<int>> support;
  for (std::size_t o = 0; o < c.object_count(); ++o) {
    std::vector<int> s;
    for (int p : t.opens[o])
      if (pts.count(p)) s.push_back(p);
    support.push_back(s);
    f.dims.push_back(s.size());
  }
  for (const auto& m : c.morphisms()) {
    std::vector<SparseMatrix::Triplet> trip;
    const auto& src = support[m.source];
    const auto& tgt = support[m.target];
    for (std::size_t i = 0; i < src.size(); ++i) {
      auto it = std::find(tgt.begin(), tgt.end(), src[i]);
      trip.push_back({i, static_cast<std::size_t>(it - tgt.begin()), 1});
    }
    f.maps.push_back(SparseMatrix::from_triplets(src.size(), tgt.size(), std::move(trip)));
  }
  return f;
}

}  // namespace

Presheaf skyscraper_presheaf(const TopologicalSite& t, int point) {
  if (point < 0 || point >= t.points) throw std::invalid_argument("skyscraper_presheaf: point out of range");
  return functions_on(t, {point});
}

Presheaf point_functions_presheaf(const TopologicalSite& t) {
  std::set<int> all;
  for (int i = 0; i < t.points; ++i) all.insert(i);
  return functions_on(t, all);
}

bool is_natural(const FiniteCategory& c, const Presheaf& a, const Presheaf& b, const PresheafMap& t) {
  if (t.size() != c.object_count()) return false;
  for (std::size_t o = 0; o < c.object_count(); ++o)
    if (t[o].rows() != b.dims[o] || t[o].cols() != a.dims[o]) return false;
  for (std::size_t m = 0; m < c.morphism_count(); ++m) {
    const auto& mm = c.morphism(m);
    if (b.maps[m] * t[mm.target] != t[mm.source] * a.maps[m]) return false;
  }
  return true;
}

bool is_natural_isomorphism(const FiniteCategory& c, const Presheaf& a, const Presheaf& b, const PresheafMap& t) {
  if (!is_natural(c, a, b, t)) return false;
  for (std::size_t o = 0; o < c.object_count(); ++o)
    if (a.dims[o] != b.dims[o] || !is_invertible(t[o])) return false;
  return true;
}

PresheafMap identity_map(const Presheaf& f) {
  PresheafMap out;
  for (auto d : f.dims) out.push_back(SparseMatrix::identity(d));
  return out;
}

PresheafMap compose_maps(const PresheafMap& g, const PresheafMap& f) {
  if (g.size() != f.size()) throw DimensionMismatch("compose_maps: different object counts");
  PresheafMap out;
  for (std::size_t o = 0; o < f.size(); ++o) out.push_back(g[o] * f[o]);
  return out;
}

namespace {

std::vector<std::size_t> nat_offsets(const Presheaf& a, const Presheaf& b) {
  std::vector<std::size_t> off{0};
  for (std::size_t o = 0; o < a.dims.size(); ++o) off.push_back(off.back() + a.dims[o] * b.dims[o]);
  return off;
}

SparseVector flatten(const PresheafMap& t, const Presheaf& a, const Presheaf& b) {
  auto off = nat_offsets(a, b);
  std::vector<Entry> e;
  for (std::size_t o = 0; o < t.size(); ++o)
    for (std::size_t col = 0; col < t[o].cols(); ++col)
      for (const auto& x : t[o].column(col).entries()) e.push_back({off[o] + col * b.dims[o] + x.index, x.value});
  return SparseVector::from_entries(std::move(e));
}

PresheafMap unflatten(const SparseVector& v, const Presheaf& a, const Presheaf& b) {
  auto off = nat_offsets(a, b);
  std::vector<std::vector<SparseMatrix::Triplet>> trip(a.dims.size());
  for (const auto& x : v.entries()) {
    auto o = static_cast<std::size_t>(std::upper_bound(off.begin(), off.end(), x.index) - off.begin() - 1);
    std::size_t local = x.index - off[o];
    trip[o].push_back({local % b.dims[o], local / b.dims[o], x.value});
  }
  PresheafMap out;
  for (std::size_t o = 0; o < a.dims.size(); ++o)
    out.push_back(SparseMatrix::from_triplets(b.dims[o], a.dims[o], std::move(trip[o])));
  return out;
}

}  // namespace

std::vector<PresheafMap> natural_transformations(const FiniteCategory& c, const Presheaf& a, const Presheaf& b) {
  auto off = nat_offsets(a, b);
  std::vector<SparseMatrix::Triplet> trip;
  std::size_t row = 0;
  for (std::size_t m = 0; m < c.morphism_count(); ++m) {
    const auto& mm = c.morphism(m);
    const std::size_t S = mm.source, T = mm.target;
    // b(m) t_T - t_S a(m), a dims_b[S] x dims_a[T] block of equations.
    for (std::size_t col = 0; col < a.dims[T]; ++col) {
      for (std::size_t k = 0; k < b.dims[T]; ++k)
        for (const auto& x : b.maps[m].column(k).entries())
          trip.push_back({row + col * b.dims[S] + x.index, off[T] + col * b.dims[T] + k, x.value});
      for (const auto& x : a.maps[m].column(col).entries())
        for (std::size_t r = 0; r < b.dims[S]; ++r)
          trip.push_back({row + col * b.dims[S] + r, off[S] + x.index * b.dims[S] + r, -x.value});
    }
    row += b.dims[S] * a.dims[T];
  }
  SparseMatrix eq = SparseMatrix::from_triplets(row, off.back(), std::move(trip));
  std::vector<PresheafMap> out;
  for (const auto& k : kernel_basis(eq).basis) out.push_back(unflatten(k, a, b));
  return out;
}

// ---------------------------------------------------------------- Cech complex

namespace {

struct FibreProduct {
  std::size_t object;
  std::size_t structure;            // to the covered object
  std::vector<std::size_t> proj;    // to each factor
};

std::size_t face_map(const FiniteCategory& c, const FibreProduct& big, const FibreProduct& small, std::size_t skip) {
  for (auto u : c.hom(big.object, small.object)) {
    bool ok = true;
    for (std::size_t k = 0; k < small.proj.size() && ok; ++k) {
      std::size_t kk = k < skip ? k : k + 1;
      ok = c.compose(small.proj[k], u) == big.proj[kk];
    }
    if (ok) return u;
  }
  throw MissingPullback("recorded fibre products admit no face map");
}

}  // namespace

CechComplex cech_complex(const FiniteSite& site, std::size_t object, const Covering& tau, const Presheaf& f,
                         int p_max) {
  const auto& c = site.category;
  if (p_max < 0) throw std::invalid_argument("cech_complex: p_max must be >= 0");
  for (auto m : tau)
    if (c.morphism(m).target != object) throw std::invalid_argument("cech_complex: family does not cover the object");
  const std::size_t n = tau.size();
  CechComplex out;
  std::vector<std::vector<FibreProduct>> fp;
  std::vector<std::vector<std::size_t>> offsets;
  for (int p = 0; p <= p_max + 1; ++p) {
    std::vector<std::vector<std::size_t>> tuples;
    std::vector<FibreProduct> prods;
    if (p == 0) {
      for (std::size_t i = 0; i < n; ++i) {
        tuples.push_back({i});
        std::size_t a = c.morphism(tau[i]).source;
        prods.push_back({a, tau[i], {c.identity(a)}});
      }
    } else {
      const auto& prev = out.tuples.back();
      for (std::size_t t = 0; t < prev.size(); ++t)
        for (std::size_t i = 0; i < n; ++i) {
          auto tup = prev[t];
          tup.push_back(i);
          tuples.push_back(tup);
          const auto& q = fp.back()[t];
          const auto& w = site.pullback(tau[i], q.structure);
          FibreProduct r;
          r.object = w.object;
          r.structure = c.compose(q.structure, w.proj_along);
          for (auto pr : q.proj) r.proj.push_back(c.compose(pr, w.proj_along));
          r.proj.push_back(w.proj_cover);
          prods.push_back(r);
        }
    }
    std::vector<std::size_t> off{0};
    std::vector<std::size_t> objs;
    for (const auto& pr : prods) {
      off.push_back(off.back() + f.dims.at(pr.object));
      objs.push_back(pr.object);
    }
    out.complex.dims.push_back(off.back());
    out.tuples.push_back(std::move(tuples));
    out.objects.push_back(std::move(objs));
    fp.push_back(std::move(prods));
    offsets.push_back(std::move(off));
  }
  // (delta x)_t = sum_j (-1)^j F(face_j) x_{t minus j}
  for (int p = 0; p <= p_max; ++p) {
    const auto& big = fp[p + 1];
    std::vector<SparseMatrix::Triplet> trip;
    for (std::size_t t = 0; t < big.size(); ++t) {
      const auto& tup = out.tuples[p + 1][t];
      for (int j = 0; j <= p + 1; ++j) {
        std::size_t idx = 0;
        for (int k = 0; k <= p + 1; ++k)
          if (k != j) idx = idx * n + tup[k];
        const auto& small = fp[p][idx];
        std::size_t u = face_map(c, big[t], small, static_cast<std::size_t>(j));
        Rational sign = j % 2 ? -1 : 1;
        for (const auto& tr : f.maps[u].triplets())
          trip.push_back({offsets[p + 1][t] + tr.row, offsets[p][idx] + tr.col, sign * tr.value});
      }
    }
    out.complex.differential.push_back(
        SparseMatrix::from_triplets(out.complex.dims[p + 1], out.complex.dims[p], std::move(trip)));
  }
  return out;
}

FlabbyResult is_flabby(const FiniteSite& site, const Presheaf& f, int k_max) {
  const auto& c = site.category;
  for (std::size_t v = 0; v < c.object_count(); ++v)
    for (std::size_t k = 0; k < site.coverings[v].size(); ++k) {
      const auto& tau = site.coverings[v][k];
      int top = std::min(k_max, static_cast<int>(tau.size()) - 1);
      if (top < 1) continue;
      auto h = cech_complex(site, v, tau, f, top).complex.cohomology_dims();
      for (int d = 1; d <= top; ++d)
        if (h[d] != 0) return {false, v, k, d};
    }
  return {};
}

namespace {

// F(V) -> C^0(tau, F)
SparseMatrix restriction_to_cover(const Covering& tau, const Presheaf& f, std::size_t v) {
  std::vector<SparseMatrix> blocks;
  for (auto m : tau) blocks.push_back(f.maps[m]);
  if (blocks.empty()) return SparseMatrix::zero(0, f.dims[v]);
  return vstack(blocks);
}

}  // namespace

std::optional<DescentFailure> descent_failure(const FiniteSite& site, const Presheaf& f) {
  const auto& c = site.category;
  for (std::size_t v = 0; v < c.object_count(); ++v)
    for (std::size_t k = 0; k < site.coverings[v].size(); ++k) {
      const auto& tau = site.coverings[v][k];
      auto cc = cech_complex(site, v, tau, f, 0);
      SparseMatrix r = restriction_to_cover(tau, f, v);
      if (rank(r) != f.dims[v]) return DescentFailure{v, k, "restriction to the covering is not injective"};
      std::size_t h0 = cc.complex.dims[0] - rank(cc.complex.differential[0]);
      if (h0 != f.dims[v]) return DescentFailure{v, k, "compatible families do not all glue"};
    }
  return std::nullopt;
}

// ---------------------------------------------------------------- plus construction

namespace {

struct CoverZero {
  std::vector<std::size_t> offsets;  // per member, into C^0
  std::size_t dim = 0;
  std::vector<SparseVector> basis;   // H^0 in C^0 coordinates
  std::shared_ptr<Echelon> solver;
};

struct PlusObject {
  std::vector<CoverZero> covers;
  std::vector<std::size_t> offset;  // per covering, into the direct sum
  std::size_t sum_dim = 0;
  std::shared_ptr<Quotient> quotient;
};

SparseVector express_in(const CoverZero& z, const SparseVector& x) {
  auto e = z.solver->express(x);
  if (!e) throw std::logic_error("plus construction: family is not compatible");
  return *e;
}

SparseVector from_coords(const CoverZero& z, const SparseVector& coords) {
  SparseVector out;
  for (const auto& e : coords.entries()) out = out.axpy(e.value, z.basis[e.index]);
  return out;
}

// Matrix C^0(tau) -> C^0(sigma) given per member of sigma a member of tau and a morphism between their sources.
SparseMatrix transfer(const Presheaf& f, const CoverZero& from, const CoverZero& to,
                      const std::vector<std::pair<std::size_t, std::size_t>>& choice) {
  std::vector<SparseMatrix::Triplet> trip;
  for (std::size_t j = 0; j < choice.size(); ++j)
    for (const auto& t : f.maps[choice[j].second].triplets())
      trip.push_back({to.offsets[j] + t.row, from.offsets[choice[j].first] + t.col, t.value});
  return SparseMatrix::from_triplets(to.dim, from.dim, std::move(trip));
}

}  // namespace

PlusResult plus_construction(const FiniteSite& site, const Presheaf& f) {
  const auto& c = site.category;
  const std::size_t N = c.object_count();
  std::vector<PlusObject> obj(N);
  for (std::size_t v = 0; v < N; ++v) {
    auto& po = obj[v];
    const auto& covs = site.coverings[v];
    for (const auto& tau : covs) {
      CoverZero z;
      auto cc = cech_complex(site, v, tau, f, 0);
      std::size_t off = 0;
      for (auto m : tau) {
        z.offsets.push_back(off);
        off += f.dims[c.morphism(m).source];
      }
      z.dim = off;
      z.basis = kernel_basis(cc.complex.differential[0]).basis;
      z.solver = std::make_shared<Echelon>(z.dim, true);
      for (const auto& b : z.basis) z.solver->insert(b);
      po.offset.push_back(po.sum_dim);
      po.sum_dim += z.basis.size();
      po.covers.push_back(std::move(z));
    }
    // Relations from every refinement, with the first factorization found for each member.
    std::vector<SparseVector> rel;
    for (std::size_t a = 0; a < covs.size(); ++a)
      for (std::size_t b = 0; b < covs.size(); ++b) {
        std::vector<std::pair<std::size_t, std::size_t>> choice;
        bool refines = true;
        for (auto s : covs[b]) {
          bool found = false;
          for (std::size_t i = 0; i < covs[a].size() && !found; ++i)
            for (auto g : c.hom(c.morphism(s).source, c.morphism(covs[a][i]).source))
              if (c.compose(covs[a][i], g) == s) {
                choice.push_back({i, g});
                found = true;
                break;
              }
          if (!found) {
            refines = false;
            break;
          }
        }
        if (!refines) continue;
        SparseMatrix rho = transfer(f, po.covers[a], po.covers[b], choice);
        for (std::size_t k = 0; k < po.covers[a].basis.size(); ++k) {
          SparseVector image = express_in(po.covers[b], rho.apply(po.covers[a].basis[k]));
          SparseVector r = SparseVector::unit(po.offset[a] + k);
          for (const auto& e : image.entries()) r = r.axpy(-e.value, SparseVector::unit(po.offset[b] + e.index));
          rel.push_back(r);
        }
      }
    std::vector<SparseVector> units;
    for (std::size_t i = 0; i < po.sum_dim; ++i) units.push_back(SparseVector::unit(i));
    po.quotient = std::make_shared<Quotient>(po.sum_dim, rel, units);
  }

  PlusResult out;
  for (std::size_t v = 0; v < N; ++v) out.presheaf.dims.push_back(obj[v].quotient->dim());
  for (std::size_t g = 0; g < c.morphism_count(); ++g) {
    const std::size_t W = c.morphism(g).source, V = c.morphism(g).target;
    const auto& pv = obj[V];
    const auto& pw = obj[W];
    // Per covering of V: the pulled-back covering of W and the transfer between their C^0.
    std::vector<std::size_t> target_cover;
    std::vector<SparseMatrix> rho;
    for (std::size_t a = 0; a < site.coverings[V].size(); ++a) {
      const auto& tau = site.coverings[V][a];
      Covering pulled;
      for (auto m : tau) pulled.push_back(site.pullback(m, g).proj_along);
      std::size_t b = site.find_covering(W, pulled);
      if (b == npos) throw std::logic_error("plus construction: pulled-back family is not a covering");
      std::vector<std::pair<std::size_t, std::size_t>> choice;
      for (auto s : site.coverings[W][b]) {
        auto it = std::find(pulled.begin(), pulled.end(), s);
        auto i = static_cast<std::size_t>(it - pulled.begin());
        choice.push_back({i, site.pullback(tau[i], g).proj_cover});
      }
      target_cover.push_back(b);
      rho.push_back(transfer(f, pv.covers[a], pw.covers[b], choice));
    }
    std::vector<SparseVector> cols;
    for (const auto& lift : pv.quotient->lifts()) {
      SparseVector image;
      for (std::size_t a = 0; a < pv.covers.size(); ++a) {
        std::vector<Entry> part;
        for (const auto& e : lift.entries())
          if (e.index >= pv.offset[a] && e.index < pv.offset[a] + pv.covers[a].basis.size())
            part.push_back({e.index - pv.offset[a], e.value});
        if (part.empty()) continue;
        SparseVector x = from_coords(pv.covers[a], SparseVector::from_entries(std::move(part)));
        std::size_t b = target_cover[a];
        SparseVector y = express_in(pw.covers[b], rho[a].apply(x));
        for (const auto& e : y.entries()) image = image.axpy(e.value, SparseVector::unit(pw.offset[b] + e.index));
      }
      cols.push_back(pw.quotient->coordinates(image));
    }
    out.presheaf.maps.push_back(SparseMatrix::from_columns(out.presheaf.dims[W], std::move(cols)));
  }
  for (std::size_t v = 0; v < N; ++v) {
    std::size_t a = site.find_covering(v, {c.identity(v)});
    const auto& z = obj[v].covers[a];
    std::vector<SparseVector> cols;
    for (std::size_t i = 0; i < f.dims[v]; ++i) {
      SparseVector coords = express_in(z, SparseVector::unit(i));
      SparseVector s;
      for (const auto& e : coords.entries()) s = s.axpy(e.value, SparseVector::unit(obj[v].offset[a] + e.index));
      cols.push_back(obj[v].quotient->coordinates(s));
    }
    out.unit.push_back(SparseMatrix::from_columns(out.presheaf.dims[v], std::move(cols)));
  }
  return out;
}

PlusResult sheafify(const FiniteSite& site, const Presheaf& f) {
  PlusResult once = plus_construction(site, f);
  PlusResult twice = plus_construction(site, once.presheaf);
  twice.unit = compose_maps(twice.unit, once.unit);
  return twice;
}

// ---------------------------------------------------------------- correspondences

std::vector<std::size_t> Correspondence::with_target(std::size_t u) const {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < elements.size(); ++e)
    if (elements[e].u == u) out.push_back(e);
  return out;
}

std::vector<std::size_t> Correspondence::with_source(std::size_t v) const {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < elements.size(); ++e)
    if (elements[e].v == v) out.push_back(e);
  return out;
}

ValidationReport Correspondence::validate() const {
  ValidationReport r;
  const std::size_t E = elements.size();
  if (pre.size() != E || post.size() != target.morphism_count()) {
    r.add("shape", {});
    return r;
  }
  for (std::size_t e = 0; e < E; ++e) {
    if (pre[e].size() != source.morphism_count()) {
      r.add("shape", {static_cast<long>(e)});
      return r;
    }
    for (std::size_t g = 0; g < source.morphism_count(); ++g) {
      bool composable = source.morphism(g).target == elements[e].v;
      std::size_t x = pre[e][g];
      if (composable != (x != npos) ||
          (x != npos && (x >= E || elements[x].v != source.morphism(g).source || elements[x].u != elements[e].u)))
        r.add("precomposition", {static_cast<long>(e), static_cast<long>(g)});
    }
    for (std::size_t h = 0; h < target.morphism_count(); ++h) {
      bool composable = target.morphism(h).source == elements[e].u;
      std::size_t x = post[h].size() == E ? post[h][e] : npos;
      if (composable != (x != npos) ||
          (x != npos && (x >= E || elements[x].u != target.morphism(h).target || elements[x].v != elements[e].v)))
        r.add("postcomposition", {static_cast<long>(e), static_cast<long>(h)});
    }
  }
  if (!r.ok()) return r;
  for (std::size_t e = 0; e < E; ++e) {
    if (pre[e][source.identity(elements[e].v)] != e) r.add("pre_identity", {static_cast<long>(e)});
    if (post[target.identity(elements[e].u)][e] != e) r.add("post_identity", {static_cast<long>(e)});
  }
  for (const auto& t : source.composition_triples())
    for (std::size_t e = 0; e < E; ++e)
      if (pre[e][t[0]] != npos && pre[pre[e][t[0]]][t[1]] != pre[e][t[2]])
        r.add("pre_associative", {static_cast<long>(e), static_cast<long>(t[0]), static_cast<long>(t[1])});
  for (const auto& t : target.composition_triples())
    for (std::size_t e = 0; e < E; ++e)
      if (post[t[1]][e] != npos && post[t[0]][post[t[1]][e]] != post[t[2]][e])
        r.add("post_associative", {static_cast<long>(e), static_cast<long>(t[0]), static_cast<long>(t[1])});
  for (std::size_t e = 0; e < E; ++e)
    for (std::size_t g = 0; g < source.morphism_count(); ++g) {
      if (pre[e][g] == npos) continue;
      for (std::size_t h = 0; h < target.morphism_count(); ++h) {
        if (post[h][e] == npos) continue;
        if (post[h][pre[e][g]] != pre[post[h][e]][g])
          r.add("bimodule", {static_cast<long>(e), static_cast<long>(g), static_cast<long>(h)});
      }
    }
  return r;
}

ValidationReport validate_functor(const FiniteCategory& a, const FiniteCategory& b, const FunctorData& f) {
  ValidationReport r;
  if (f.objects.size() != a.object_count() || f.morphisms.size() != a.morphism_count()) {
    r.add("shape", {});
    return r;
  }
  for (auto o : f.objects)
    if (o >= b.object_count()) {
      r.add("shape", {static_cast<long>(o)});
      return r;
    }
  for (std::size_t m = 0; m < a.morphism_count(); ++m) {
    std::size_t fm = f.morphisms[m];
    if (fm >= b.morphism_count() || b.morphism(fm).source != f.objects[a.morphism(m).source] ||
        b.morphism(fm).target != f.objects[a.morphism(m).target])
      r.add("endpoints", {static_cast<long>(m)});
  }
  if (!r.ok()) return r;
  for (std::size_t o = 0; o < a.object_count(); ++o)
    if (f.morphisms[a.identity(o)] != b.identity(f.objects[o])) r.add("identity", {static_cast<long>(o)});
  for (const auto& t : a.composition_triples())
    if (b.compose(f.morphisms[t[0]], f.morphisms[t[1]]) != f.morphisms[t[2]])
      r.add("composition", {static_cast<long>(t[0]), static_cast<long>(t[1])});
  return r;
}

Correspondence correspondence_from_ambient(const FiniteCategory& g, const FiniteCategory& h, const FiniteCategory& k,
                                           const FunctorData& fg, const FunctorData& fh) {
  auto rg = validate_functor(g, k, fg);
  auto rh = validate_functor(h, k, fh);
  if (!rg.ok() || !rh.ok()) throw std::invalid_argument("correspondence: inclusions are not functors");
  Correspondence p;
  p.source = g;
  p.target = h;
  std::map<std::array<std::size_t, 3>, std::size_t> index;
  for (std::size_t v = 0; v < g.object_count(); ++v)
    for (std::size_t u = 0; u < h.object_count(); ++u)
      for (auto m : k.hom(fg.objects[v], fh.objects[u])) {
        index[{v, u, m}] = p.elements.size();
        p.elements.push_back({v, u, m});
      }
  const std::size_t E = p.elements.size();
  p.pre.assign(E, std::vector<std::size_t>(g.morphism_count(), npos));
  p.post.assign(h.morphism_count(), std::vector<std::size_t>(E, npos));
  for (std::size_t e = 0; e < E; ++e) {
    const auto& el = p.elements[e];
    for (std::size_t gm = 0; gm < g.morphism_count(); ++gm)
      if (g.morphism(gm).target == el.v)
        p.pre[e][gm] = index.at({g.morphism(gm).source, el.u, k.compose(el.tag, fg.morphisms[gm])});
    for (std::size_t hm = 0; hm < h.morphism_count(); ++hm)
      if (h.morphism(hm).source == el.u)
        p.post[hm][e] = index.at({el.v, h.morphism(hm).target, k.compose(fh.morphisms[hm], el.tag)});
  }
  return p;
}

Correspondence correspondence_from_functor(const FiniteCategory& g, const FiniteCategory& h, const FunctorData& f) {
  FunctorData id;
  for (std::size_t o = 0; o < h.object_count(); ++o) id.objects.push_back(o);
  for (std::size_t m = 0; m < h.morphism_count(); ++m) id.morphisms.push_back(m);
  return correspondence_from_ambient(g, h, h, f, id);
}

Correspondence identity_correspondence(const FiniteCategory& c) {
  FunctorData id;
  for (std::size_t o = 0; o < c.object_count(); ++o) id.objects.push_back(o);
  for (std::size_t m = 0; m < c.morphism_count(); ++m) id.morphisms.push_back(m);
  return correspondence_from_functor(c, c, id);
}

// ---------------------------------------------------------------- pushforward / pullback

namespace {

template <class Data>
void layout(Data& d, std::size_t objects, const std::vector<std::size_t>& owner, const std::vector<std::size_t>& dim_of) {
  d.elements.assign(objects, {});
  d.offsets.assign(objects, {});
  d.ambient_dim.assign(objects, 0);
  d.position.assign(owner.size(), npos);
  for (std::size_t e = 0; e < owner.size(); ++e) {
    std::size_t o = owner[e];
    d.position[e] = d.elements[o].size();
    d.elements[o].push_back(e);
    d.offsets[o].push_back(d.ambient_dim[o]);
    d.ambient_dim[o] += dim_of[e];
  }
}

SparseVector shift(const SparseVector& v, std::size_t off) {
  std::vector<Entry> e;
  for (const auto& x : v.entries()) e.push_back({x.index + off, x.value});
  return SparseVector::from_entries(std::move(e));
}

SparseVector block(const SparseVector& v, std::size_t off, std::size_t len) {
  std::vector<Entry> e;
  for (const auto& x : v.entries())
    if (x.index >= off && x.index < off + len) e.push_back({x.index - off, x.value});
  return SparseVector::from_entries(std::move(e));
}

}  // namespace

PushforwardData pushforward(const Correspondence& p, const Presheaf& f) {
  const auto& G = p.source;
  const auto& H = p.target;
  if (f.dims.size() != G.object_count()) throw DimensionMismatch("pushforward: presheaf lives on another category");
  PushforwardData d;
  std::vector<std::size_t> owner, dim_of;
  for (const auto& el : p.elements) {
    owner.push_back(el.u);
    dim_of.push_back(f.dims[el.v]);
  }
  layout(d, H.object_count(), owner, dim_of);
  for (std::size_t u = 0; u < H.object_count(); ++u) {
    // F(g) x_e = x_{e o g}
    std::vector<SparseMatrix::Triplet> trip;
    std::size_t row = 0;
    for (std::size_t i = 0; i < d.elements[u].size(); ++i) {
      std::size_t e = d.elements[u][i];
      for (std::size_t g = 0; g < G.morphism_count(); ++g) {
        std::size_t e2 = p.pre[e][g];
        if (e2 == npos) continue;
        for (const auto& t : f.maps[g].triplets()) trip.push_back({row + t.row, d.offsets[u][i] + t.col, t.value});
        std::size_t off2 = d.offsets[u][d.position[e2]];
        for (std::size_t r = 0; r < f.dims[G.morphism(g).source]; ++r) trip.push_back({row + r, off2 + r, -1});
        row += f.dims[G.morphism(g).source];
      }
    }
    auto ker = kernel_basis(SparseMatrix::from_triplets(row, d.ambient_dim[u], std::move(trip))).basis;
    auto solver = std::make_shared<Echelon>(d.ambient_dim[u], true);
    for (const auto& k : ker) solver->insert(k);
    d.result.dims.push_back(ker.size());
    d.basis.push_back(std::move(ker));
    d.solver.push_back(std::move(solver));
  }
  for (std::size_t h = 0; h < H.morphism_count(); ++h) {
    const std::size_t U = H.morphism(h).source, U2 = H.morphism(h).target;
    std::vector<SparseVector> cols;
    for (const auto& x : d.basis[U2]) {
      std::vector<Entry> y;
      for (std::size_t i = 0; i < d.elements[U].size(); ++i) {
        std::size_t e = d.elements[U][i];
        std::size_t e2 = p.post[h][e];
        std::size_t len = f.dims[p.elements[e].v];
        SparseVector part = block(x, d.offsets[U2][d.position[e2]], len);
        for (const auto& z : part.entries())
          y.push_back({d.offsets[U][i] + z.index, z.value});
      }
      cols.push_back(pushforward_coordinates(d, U, SparseVector::from_entries(std::move(y))));
    }
    d.result.maps.push_back(SparseMatrix::from_columns(d.result.dims[U], std::move(cols)));
  }
  return d;
}

SparseVector pushforward_coordinates(const PushforwardData& d, std::size_t u, const SparseVector& ambient) {
  auto c = d.solver.at(u)->express(ambient);
  if (!c) throw std::domain_error("pushforward: vector is not a compatible family");
  return *c;
}

PullbackData pullback(const Correspondence& p, const Presheaf& f) {
  const auto& G = p.source;
  const auto& H = p.target;
  if (f.dims.size() != H.object_count()) throw DimensionMismatch("pullback: presheaf lives on another category");
  PullbackData d;
  std::vector<std::size_t> owner, dim_of;
  for (const auto& el : p.elements) {
    owner.push_back(el.v);
    dim_of.push_back(f.dims[el.u]);
  }
  layout(d, G.object_count(), owner, dim_of);
  for (std::size_t v = 0; v < G.object_count(); ++v) {
    // iota_e(F(h) x) ~ iota_{h o e}(x)
    std::vector<SparseVector> rel;
    for (std::size_t i = 0; i < d.elements[v].size(); ++i) {
      std::size_t e = d.elements[v][i];
      for (std::size_t h = 0; h < H.morphism_count(); ++h) {
        std::size_t e2 = p.post[h][e];
        if (e2 == npos) continue;
        std::size_t off2 = d.offsets[v][d.position[e2]];
        for (std::size_t k = 0; k < f.dims[H.morphism(h).target]; ++k)
          rel.push_back(shift(f.maps[h].column(k), d.offsets[v][i]) - SparseVector::unit(off2 + k));
      }
    }
    std::vector<SparseVector> units;
    for (std::size_t i = 0; i < d.ambient_dim[v]; ++i) units.push_back(SparseVector::unit(i));
    d.quotient.push_back(std::make_shared<Quotient>(d.ambient_dim[v], rel, units));
    d.result.dims.push_back(d.quotient.back()->dim());
  }
  for (std::size_t g = 0; g < G.morphism_count(); ++g) {
    const std::size_t V2 = G.morphism(g).source, V = G.morphism(g).target;
    std::vector<SparseVector> cols;
    for (const auto& l : d.quotient[V]->lifts()) {
      std::vector<Entry> y;
      for (std::size_t i = 0; i < d.elements[V].size(); ++i) {
        std::size_t e = d.elements[V][i];
        std::size_t e2 = p.pre[e][g];
        SparseVector part = block(l, d.offsets[V][i], f.dims[p.elements[e].u]);
        for (const auto& z : part.entries())
          y.push_back({d.offsets[V2][d.position[e2]] + z.index, z.value});
      }
      cols.push_back(d.quotient[V2]->coordinates(SparseVector::from_entries(std::move(y))));
    }
    d.result.maps.push_back(SparseMatrix::from_columns(d.result.dims[V2], std::move(cols)));
  }
  return d;
}

SparseVector pullback_coordinates(const PullbackData& d, std::size_t v, const SparseVector& ambient) {
  return d.quotient.at(v)->coordinates(ambient);
}

PresheafMap pushforward_map(const Correspondence& p, const PushforwardData& a, const PushforwardData& b,
                            const PresheafMap& t) {
  PresheafMap out;
  for (std::size_t u = 0; u < a.basis.size(); ++u) {
    std::vector<SparseVector> cols;
    for (const auto& x : a.basis[u]) {
      std::vector<Entry> y;
      for (std::size_t i = 0; i < a.elements[u].size(); ++i) {
        std::size_t e = a.elements[u][i];
        std::size_t v = p.elements[e].v;
        SparseVector img = t.at(v).apply(block(x, a.offsets[u][i], t[v].cols()));
        for (const auto& z : img.entries()) y.push_back({b.offsets[u][i] + z.index, z.value});
      }
      cols.push_back(pushforward_coordinates(b, u, SparseVector::from_entries(std::move(y))));
    }
    out.push_back(SparseMatrix::from_columns(b.result.dims[u], std::move(cols)));
  }
  return out;
}

PresheafMap pullback_map(const Correspondence& p, const PullbackData& a, const PullbackData& b, const PresheafMap& t) {
  PresheafMap out;
  for (std::size_t v = 0; v < a.quotient.size(); ++v) {
    std::vector<SparseVector> cols;
    for (const auto& l : a.quotient[v]->lifts()) {
      std::vector<Entry> y;
      for (std::size_t i = 0; i < a.elements[v].size(); ++i) {
        std::size_t u = p.elements[a.elements[v][i]].u;
        SparseVector img = t.at(u).apply(block(l, a.offsets[v][i], t[u].cols()));
        for (const auto& z : img.entries()) y.push_back({b.offsets[v][i] + z.index, z.value});
      }
      cols.push_back(pullback_coordinates(b, v, SparseVector::from_entries(std::move(y))));
    }
    out.push_back(SparseMatrix::from_columns(b.result.dims[v], std::move(cols)));
  }
  return out;
}

// ---------------------------------------------------------------- adjunction

namespace {

// F -> f_* f^* F, x |-> ([iota_e x])_e
PresheafMap unit_map(const Correspondence& p, const Presheaf& f, const PullbackData& pb, const PushforwardData& pf) {
  PresheafMap out;
  for (std::size_t u = 0; u < f.dims.size(); ++u) {
    std::vector<SparseVector> cols;
    for (std::size_t k = 0; k < f.dims[u]; ++k) {
      std::vector<Entry> y;
      for (std::size_t i = 0; i < pf.elements[u].size(); ++i) {
        std::size_t e = pf.elements[u][i];
        std::size_t v = p.elements[e].v;
        SparseVector cls = pullback_coordinates(pb, v, SparseVector::unit(pb.offsets[v][pb.position[e]] + k));
        for (const auto& z : cls.entries()) y.push_back({pf.offsets[u][i] + z.index, z.value});
      }
      cols.push_back(pushforward_coordinates(pf, u, SparseVector::from_entries(std::move(y))));
    }
    out.push_back(SparseMatrix::from_columns(pf.result.dims[u], std::move(cols)));
  }
  return out;
}

// f^* f_* G -> G, [iota_e (y_q)_q] |-> y_e
PresheafMap counit_map(const Correspondence& p, const Presheaf& g, const PushforwardData& pf, const PullbackData& pb) {
  PresheafMap out;
  for (std::size_t v = 0; v < g.dims.size(); ++v) {
    std::vector<SparseVector> cols;
    for (const auto& l : pb.quotient[v]->lifts()) {
      SparseVector y;
      for (std::size_t i = 0; i < pb.elements[v].size(); ++i) {
        std::size_t e = pb.elements[v][i];
        std::size_t u = p.elements[e].u;
        SparseVector coords = block(l, pb.offsets[v][i], pf.result.dims[u]);
        SparseVector amb;
        for (const auto& z : coords.entries()) amb = amb.axpy(z.value, pf.basis[u][z.index]);
        y = y + block(amb, pf.offsets[u][pf.position[e]], g.dims[v]);
      }
      cols.push_back(y);
    }
    out.push_back(SparseMatrix::from_columns(g.dims[v], std::move(cols)));
  }
  return out;
}

bool all_identity(const PresheafMap& m) {
  for (const auto& x : m)
    if (!x.is_identity()) return false;
  return true;
}

}  // namespace

AdjunctionReport adjunction_check(const Correspondence& p, const Presheaf& f_on_h, const Presheaf& g_on_g) {
  AdjunctionReport rep;
  const auto& G = p.source;
  const auto& H = p.target;
  PullbackData pbF = pullback(p, f_on_h);
  PushforwardData pfpbF = pushforward(p, pbF.result);
  PresheafMap eta = unit_map(p, f_on_h, pbF, pfpbF);
  rep.unit_natural = is_natural(H, f_on_h, pfpbF.result, eta);

  PushforwardData pfG = pushforward(p, g_on_g);
  PullbackData pbpfG = pullback(p, pfG.result);
  PresheafMap eps = counit_map(p, g_on_g, pfG, pbpfG);
  rep.counit_natural = is_natural(G, pbpfG.result, g_on_g, eps);

  // counit_{f^* F} o f^*(eta_F)
  PullbackData pbpfpbF = pullback(p, pfpbF.result);
  PresheafMap left = compose_maps(counit_map(p, pbF.result, pfpbF, pbpfpbF), pullback_map(p, pbF, pbpfpbF, eta));
  rep.triangle_left = all_identity(left);

  // f_*(counit_G) o eta_{f_* G}
  PushforwardData pfpbpfG = pushforward(p, pbpfG.result);
  PresheafMap right =
      compose_maps(pushforward_map(p, pfpbpfG, pfG, eps), unit_map(p, pfG.result, pbpfG, pfpbpfG));
  rep.triangle_right = all_identity(right);

  auto lhs = natural_transformations(G, pbF.result, g_on_g);
  auto rhs = natural_transformations(H, f_on_h, pfG.result);
  rep.hom_pullback_dim = lhs.size();
  rep.hom_pushforward_dim = rhs.size();
  if (lhs.size() == rhs.size()) {
    std::vector<SparseVector> basis;
    for (const auto& t : rhs) basis.push_back(flatten(t, f_on_h, pfG.result));
    std::size_t n = nat_offsets(f_on_h, pfG.result).back();
    SparseMatrix B = SparseMatrix::from_columns(n, basis);
    std::vector<SparseVector> cols;
    bool ok = true;
    for (const auto& tau : lhs) {
      PresheafMap phi = compose_maps(pushforward_map(p, pfpbF, pfG, tau), eta);
      auto c = solve_linear(B, flatten(phi, f_on_h, pfG.result));
      if (!c) {
        ok = false;
        break;
      }
      cols.push_back(*c);
    }
    rep.bijection_invertible = ok && is_invertible(SparseMatrix::from_columns(rhs.size(), std::move(cols)));
  }
  return rep;
}

// ---------------------------------------------------------------- composition

CompositionLaw ambient_composition_law(const Correspondence& p, const Correspondence& q, const Correspondence& r,
                                       const FiniteCategory& k) {
  std::map<std::array<std::size_t, 3>, std::size_t> index;
  for (std::size_t e = 0; e < r.elements.size(); ++e)
    index[{r.elements[e].v, r.elements[e].u, r.elements[e].tag}] = e;
  CompositionLaw law;
  for (std::size_t a = 0; a < p.elements.size(); ++a)
    for (std::size_t b = 0; b < q.elements.size(); ++b) {
      if (p.elements[a].u != q.elements[b].v) continue;
      std::size_t m = k.compose(q.elements[b].tag, p.elements[a].tag);
      auto it = index.find({p.elements[a].v, q.elements[b].u, m});
      if (it == index.end()) throw std::invalid_argument("composition law: composite has no matching element");
      law[{a, b}] = it->second;
    }
  return law;
}

CompositionLaw functor_composition_law(const Correspondence& p, const Correspondence& q, const Correspondence& r,
                                       const FunctorData& g) {
  std::map<std::array<std::size_t, 3>, std::size_t> index;
  for (std::size_t e = 0; e < r.elements.size(); ++e)
    index[{r.elements[e].v, r.elements[e].u, r.elements[e].tag}] = e;
  CompositionLaw law;
  for (std::size_t a = 0; a < p.elements.size(); ++a)
    for (std::size_t b = 0; b < q.elements.size(); ++b) {
      if (p.elements[a].u != q.elements[b].v) continue;
      std::size_t m = r.target.compose(q.elements[b].tag, g.morphisms.at(p.elements[a].tag));
      auto it = index.find({p.elements[a].v, q.elements[b].u, m});
      if (it == index.end()) throw std::invalid_argument("composition law: composite has no matching element");
      law[{a, b}] = it->second;
    }
  return law;
}

ValidationReport validate_composition_law(const Correspondence& p, const Correspondence& q, const Correspondence& r,
                                          const CompositionLaw& law) {
  ValidationReport rep;
  auto at = [&](std::size_t a, std::size_t b) {
    auto it = law.find({a, b});
    return it == law.end() ? npos : it->second;
  };
  for (std::size_t a = 0; a < p.elements.size(); ++a)
    for (std::size_t b = 0; b < q.elements.size(); ++b) {
      if (p.elements[a].u != q.elements[b].v) continue;
      std::size_t c = at(a, b);
      if (c == npos || c >= r.elements.size() || r.elements[c].v != p.elements[a].v ||
          r.elements[c].u != q.elements[b].u) {
        rep.add("endpoints", {static_cast<long>(a), static_cast<long>(b)});
        continue;
      }
      for (std::size_t g = 0; g < p.source.morphism_count(); ++g)
        if (p.pre[a][g] != npos && at(p.pre[a][g], b) != r.pre[c][g])
          rep.add("source_equivariant", {static_cast<long>(a), static_cast<long>(b), static_cast<long>(g)});
      for (std::size_t l = 0; l < q.target.morphism_count(); ++l)
        if (q.post[l][b] != npos && at(a, q.post[l][b]) != r.post[l][c])
          rep.add("target_equivariant", {static_cast<long>(a), static_cast<long>(b), static_cast<long>(l)});
    }
  // Balanced over the middle category: law(h o a, b) = law(a, b o h).
  for (std::size_t a = 0; a < p.elements.size(); ++a)
    for (std::size_t h = 0; h < p.target.morphism_count(); ++h) {
      std::size_t ha = p.post[h][a];
      if (ha == npos) continue;
      for (std::size_t b = 0; b < q.elements.size(); ++b) {
        std::size_t bh = q.pre[b][h];
        if (bh == npos) continue;
        if (at(ha, b) != at(a, bh))
          rep.add("balanced", {static_cast<long>(a), static_cast<long>(h), static_cast<long>(b)});
      }
    }
  return rep;
}

ComparisonResult compose_pushforward_compare(const Correspondence& p, const Correspondence& q, const Correspondence& r,
                                             const CompositionLaw& law, const Presheaf& f) {
  PushforwardData pf = pushforward(p, f);
  PushforwardData qpf = pushforward(q, pf.result);
  PushforwardData rf = pushforward(r, f);
  ComparisonResult out;
  out.source_dims = rf.result.dims;
  out.target_dims = qpf.result.dims;
  const std::size_t L = r.target.object_count();
  for (std::size_t u = 0; u < L; ++u) {
    std::vector<SparseVector> cols;
    for (const auto& x : rf.basis[u]) {
      std::vector<Entry> y;
      for (std::size_t j = 0; j < qpf.elements[u].size(); ++j) {
        std::size_t b = qpf.elements[u][j];
        std::size_t w = q.elements[b].v;
        std::vector<Entry> amb;
        for (std::size_t i = 0; i < pf.elements[w].size(); ++i) {
          std::size_t a = pf.elements[w][i];
          auto it = law.find({a, b});
          if (it == law.end()) throw std::invalid_argument("compose_pushforward_compare: law is not total");
          std::size_t c = it->second;
          std::size_t len = f.dims[p.elements[a].v];
          SparseVector part = block(x, rf.offsets[u][rf.position[c]], len);
          for (const auto& z : part.entries())
            amb.push_back({pf.offsets[w][i] + z.index, z.value});
        }
        SparseVector coords = pushforward_coordinates(pf, w, SparseVector::from_entries(std::move(amb)));
        for (const auto& z : coords.entries()) y.push_back({qpf.offsets[u][j] + z.index, z.value});
      }
      cols.push_back(pushforward_coordinates(qpf, u, SparseVector::from_entries(std::move(y))));
    }
    out.map.push_back(SparseMatrix::from_columns(qpf.result.dims[u], std::move(cols)));
  }
  out.natural = is_natural(r.target, rf.result, qpf.result, out.map);
  out.isomorphism = out.natural;
  for (std::size_t u = 0; u < L && out.isomorphism; ++u)
    out.isomorphism = out.map[u].rows() == out.map[u].cols() && is_invertible(out.map[u]);
  return out;
}

}  // namespace twistcoh

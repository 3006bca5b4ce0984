#include "twistcoh/oracle.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace twistcoh::oracle {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<Rational>>& rows) {
  DenseMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (rows[r].size() != m.cols()) throw std::invalid_argument("ragged dense matrix");
    for (std::size_t c = 0; c < m.cols(); ++c) m.at(r, c) = rows[r][c];
  }
  return m;
}

DenseMatrix DenseMatrix::from_sparse(const SparseMatrix& s) {
  DenseMatrix m(s.rows(), s.cols());
  for (const auto& t : s.triplets()) m.at(t.row, t.col) = t.value;
  return m;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("dense product shape mismatch");
  DenseMatrix out(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& a = at(i, k);
      if (sgn(a) == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) out.at(i, j) += a * o.at(k, j);
    }
  return out;
}

bool DenseMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational& q) { return sgn(q) == 0; });
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(DenseMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && sgn(m.at(p, col)) == 0) ++p;
    if (p == m.rows()) continue;
    for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m.at(p, c), m.at(row, c));
    Rational inv = 1 / m.at(row, col);
    for (std::size_t c = 0; c < m.cols(); ++c) m.at(row, c) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || sgn(m.at(r, col)) == 0) continue;
      Rational f = m.at(r, col);
      for (std::size_t c = 0; c < m.cols(); ++c) m.at(r, c) -= f * m.at(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

DenseMatrix stack_rows(const std::vector<std::vector<Rational>>& rows, std::size_t cols) {
  DenseMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = rows[r][c];
  return m;
}

}  // namespace

std::size_t dense_rank(DenseMatrix m) {
  std::size_t rank = 0;
  std::vector<bool> used(m.cols(), false);
  for (std::size_t row = 0; row < m.rows(); ++row) {
    // Pivot anywhere in the remaining block.
    std::size_t pr = m.rows(), pc = m.cols();
    for (std::size_t r = row; r < m.rows() && pr == m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c)
        if (!used[c] && sgn(m.at(r, c)) != 0) {
          pr = r;
          pc = c;
          break;
        }
    if (pr == m.rows()) break;
    for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m.at(pr, c), m.at(row, c));
    used[pc] = true;
    for (std::size_t r = row + 1; r < m.rows(); ++r) {
      if (sgn(m.at(r, pc)) == 0) continue;
      Rational f = m.at(r, pc) / m.at(row, pc);
      for (std::size_t c = 0; c < m.cols(); ++c) m.at(r, c) -= f * m.at(row, c);
    }
    ++rank;
  }
  return rank;
}

std::vector<std::vector<Rational>> dense_kernel(DenseMatrix m) {
  auto pivots = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<Rational>> out;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(m.cols());
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m.at(i, free);
    out.push_back(std::move(v));
  }
  return out;
}

Rational cofactor_determinant(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  if (n == 1) return m.at(0, 0);
  Rational det = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (sgn(m.at(0, j)) == 0) continue;
    DenseMatrix minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t c = 0, k = 0; c < n; ++c)
        if (c != j) minor.at(r - 1, k++) = m.at(r, c);
    Rational term = m.at(0, j) * cofactor_determinant(minor);
    if (j % 2) det -= term;
    else det += term;
  }
  return det;
}

DenseMatrix hilbert_like(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      m.at(i, j) = Rational(1, static_cast<unsigned long>(i + j + 1));
      m.at(i, j).canonicalize();
    }
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) += Rational(1, static_cast<unsigned long>(n + i + 2));
  for (std::size_t i = 0; i < n; ++i) m.at(i, i).canonicalize();
  return m;
}

std::size_t dense_cohomology_dim(const DenseMatrix& d_in, const DenseMatrix& d_out) {
  if (d_in.rows() != d_out.cols()) throw std::invalid_argument("cohomology: shape mismatch");
  if (!(d_out * d_in).is_zero()) throw CompositionNonzero("d_out * d_in != 0");
  return d_out.cols() - dense_rank(d_out) - dense_rank(d_in);
}

namespace {

// The block of a full-space operator between the listed row and column indices.
DenseMatrix block(const DenseMatrix& full, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
  DenseMatrix m(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) m.at(r, c) = full.at(rows[r], cols[c]);
  return m;
}

DenseMatrix raw_differential(const Cdga& c) {
  DenseMatrix d(c.dim(), c.dim());
  for (const auto& t : c.d().triplets()) d.at(t.row, t.col) = t.value;
  return d;
}

}  // namespace

std::vector<std::size_t> dense_betti(const Cdga& c) {
  DenseMatrix d = raw_differential(c);
  int top = 0;
  for (auto k : c.degrees()) top = std::max(top, k);
  std::vector<std::vector<std::size_t>> by_degree(static_cast<std::size_t>(top) + 2);
  for (std::size_t i = 0; i < c.dim(); ++i) by_degree[static_cast<std::size_t>(c.degree(i))].push_back(i);
  std::vector<std::size_t> out;
  for (int k = 0; k <= top; ++k) {
    auto K = static_cast<std::size_t>(k);
    DenseMatrix d_out = block(d, by_degree[K + 1], by_degree[K]);
    std::size_t rank_in = k == 0 ? 0 : dense_rank(block(d, by_degree[K], by_degree[K - 1]));
    out.push_back(by_degree[K].size() - dense_rank(d_out) - rank_in);
  }
  return out;
}

std::array<std::size_t, 2> dense_twisted_betti(const Cdga& c, const SparseVector& lambda) {
  DenseMatrix op = raw_differential(c);
  for (const auto& l : lambda.entries())
    for (std::size_t j = 0; j < c.dim(); ++j)
      for (const auto& e : c.product(l.index, j).entries()) op.at(e.index, j) += l.value * e.value;
  std::vector<std::size_t> even, odd;
  for (std::size_t i = 0; i < c.dim(); ++i) (c.degree(i) % 2 ? odd : even).push_back(i);
  DenseMatrix eo = block(op, odd, even), oe = block(op, even, odd);
  if (!(oe * eo).is_zero() || !(eo * oe).is_zero()) throw CompositionNonzero("twisted operator does not square to zero");
  std::size_t re = dense_rank(eo), ro = dense_rank(oe);
  return {even.size() - re - ro, odd.size() - ro - re};
}

LimitResult exhaustive_limit(const Diagram& d) {
  std::vector<std::size_t> off(d.dims.size() + 1, 0);
  for (std::size_t i = 0; i < d.dims.size(); ++i) off[i + 1] = off[i] + d.dims[i];
  std::vector<std::vector<Rational>> rows;
  for (const auto& a : d.arrows) {
    for (std::size_t r = 0; r < d.dims[a.to]; ++r) {
      std::vector<Rational> row(off.back());
      for (std::size_t c = 0; c < d.dims[a.from]; ++c) row[off[a.from] + c] += a.map.at(r, c);
      row[off[a.to] + r] -= 1;
      rows.push_back(std::move(row));
    }
  }
  LimitResult out;
  if (rows.empty()) {
    for (std::size_t i = 0; i < off.back(); ++i) {
      std::vector<Rational> v(off.back());
      v[i] = 1;
      out.basis.push_back(std::move(v));
    }
  } else {
    out.basis = dense_kernel(stack_rows(rows, off.back()));
  }
  out.dim = out.basis.size();
  return out;
}

std::size_t exhaustive_colimit(const Diagram& d) {
  std::vector<std::size_t> off(d.dims.size() + 1, 0);
  for (std::size_t i = 0; i < d.dims.size(); ++i) off[i + 1] = off[i] + d.dims[i];
  std::vector<std::vector<Rational>> rel;
  for (const auto& a : d.arrows)
    for (std::size_t c = 0; c < d.dims[a.from]; ++c) {
      std::vector<Rational> v(off.back());
      v[off[a.from] + c] += 1;
      for (std::size_t r = 0; r < d.dims[a.to]; ++r) v[off[a.to] + r] -= a.map.at(r, c);
      rel.push_back(std::move(v));
    }
  return off.back() - (rel.empty() ? 0 : dense_rank(stack_rows(rel, off.back())));
}

Diagram pushforward_diagram(const Correspondence& p, const Presheaf& f, const std::vector<std::size_t>& elements) {
  Diagram d;
  std::map<std::size_t, std::size_t> node;
  for (auto e : elements) {
    node[e] = d.dims.size();
    d.dims.push_back(f.dims.at(p.elements.at(e).v));
  }
  for (auto e : elements)
    for (std::size_t g = 0; g < p.source.morphism_count(); ++g) {
      std::size_t e2 = p.pre.at(e).at(g);
      if (e2 == npos) continue;
      if (!node.count(e2)) throw std::logic_error("pushforward diagram: element list not closed under precomposition");
      d.arrows.push_back({node[e], node[e2], DenseMatrix::from_sparse(f.maps.at(g))});
    }
  return d;
}

Diagram pullback_diagram(const Correspondence& p, const Presheaf& f, const std::vector<std::size_t>& elements) {
  Diagram d;
  std::map<std::size_t, std::size_t> node;
  for (auto e : elements) {
    node[e] = d.dims.size();
    d.dims.push_back(f.dims.at(p.elements.at(e).u));
  }
  for (std::size_t h = 0; h < p.target.morphism_count(); ++h)
    for (auto e : elements) {
      std::size_t e2 = p.post.at(h).at(e);
      if (e2 == npos) continue;
      if (!node.count(e2)) throw std::logic_error("pullback diagram: element list not closed under postcomposition");
      d.arrows.push_back({node[e2], node[e], DenseMatrix::from_sparse(f.maps.at(h))});
    }
  return d;
}

namespace {

std::int64_t mod_inverse(std::int64_t a, std::int64_t p) {
  std::int64_t r = 1, b = a % p, e = p - 2;
  if (b < 0) b += p;
  while (e) {
    if (e & 1) r = static_cast<std::int64_t>((static_cast<__int128>(r) * b) % p);
    b = static_cast<std::int64_t>((static_cast<__int128>(b) * b) % p);
    e >>= 1;
  }
  return r;
}

std::size_t rank_mod(std::vector<std::vector<std::int64_t>> m, std::int64_t p) {
  std::size_t rank = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t piv = rank;
    while (piv < m.size() && m[piv][c] % p == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    std::int64_t inv = mod_inverse(m[rank][c], p);
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      std::int64_t f = ((m[r][c] % p + p) % p) * inv % p;
      if (!f) continue;
      for (std::size_t k = 0; k < cols; ++k) m[r][k] = ((m[r][k] - f * m[rank][k]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

}  // namespace

std::vector<std::size_t> simplicial_betti(const std::vector<std::set<int>>& facets, std::uint64_t prime) {
  std::set<std::vector<int>> all;
  for (const auto& f : facets) {
    std::vector<int> v(f.begin(), f.end());
    const std::size_t n = v.size();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
      std::vector<int> s;
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1) s.push_back(v[i]);
      all.insert(s);
    }
  }
  std::size_t top = 0;
  for (const auto& s : all) top = std::max(top, s.size() - 1);
  std::vector<std::vector<std::vector<int>>> simplices(top + 1);
  for (const auto& s : all) simplices[s.size() - 1].push_back(s);
  // Boundary from dimension k to k-1, as integer rows.
  auto boundary_rank = [&](std::size_t k) -> std::size_t {
    if (k == 0 || k > top) return 0;
    std::map<std::vector<int>, std::size_t> index;
    for (std::size_t i = 0; i < simplices[k - 1].size(); ++i) index[simplices[k - 1][i]] = i;
    std::vector<std::vector<std::int64_t>> rows(simplices[k - 1].size(),
                                                std::vector<std::int64_t>(simplices[k].size(), 0));
    for (std::size_t j = 0; j < simplices[k].size(); ++j)
      for (std::size_t i = 0; i <= k; ++i) {
        auto face = simplices[k][j];
        face.erase(face.begin() + static_cast<long>(i));
        rows[index.at(face)][j] = i % 2 ? -1 : 1;
      }
    if (prime) return rank_mod(rows, static_cast<std::int64_t>(prime));
    DenseMatrix m(rows.size(), simplices[k].size());
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < rows[r].size(); ++c) m.at(r, c) = static_cast<long>(rows[r][c]);
    return dense_rank(m);
  };
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k <= top; ++k) out.push_back(simplices[k].size() - boundary_rank(k) - boundary_rank(k + 1));
  return out;
}

int SeededRng::uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

bool SeededRng::chance(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_) < p; }

Rational SeededRng::small_rational(int range, int max_den) {
  Rational q(uniform(-range, range), uniform(1, max_den));
  q.canonicalize();
  return q;
}

Rational SeededRng::nonzero_integer(int range) {
  int v = uniform(1, range);
  return chance(0.5) ? Rational(v) : Rational(-v);
}

SparseMatrix random_matrix(SeededRng& rng, std::size_t rows, std::size_t cols, double density, std::size_t max_rank) {
  auto fill = [&](std::size_t r, std::size_t c) {
    std::vector<SparseMatrix::Triplet> t;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (rng.chance(density)) t.push_back({i, j, rng.nonzero_integer(3)});
    return SparseMatrix::from_triplets(r, c, std::move(t));
  };
  if (max_rank >= std::min(rows, cols)) return fill(rows, cols);
  return fill(rows, max_rank) * fill(max_rank, cols);
}

namespace {

// Cocycles of a degree, in ambient coordinates, via the raw differential.
std::vector<SparseVector> cocycles(const Cdga& c, int degree) {
  std::vector<std::size_t> src = c.basis_of_degree(degree), tgt = c.basis_of_degree(degree + 1);
  if (src.empty()) return {};
  DenseMatrix d = raw_differential(c);
  std::vector<std::vector<Rational>> ker;
  if (tgt.empty()) {
    for (std::size_t i = 0; i < src.size(); ++i) {
      std::vector<Rational> v(src.size());
      v[i] = 1;
      ker.push_back(std::move(v));
    }
  } else {
    ker = dense_kernel(block(d, tgt, src));
  }
  std::vector<SparseVector> out;
  for (const auto& k : ker) {
    std::vector<Entry> e;
    for (std::size_t i = 0; i < k.size(); ++i)
      if (sgn(k[i]) != 0) e.push_back({src[i], k[i]});
    out.push_back(SparseVector::from_entries(std::move(e)));
  }
  return out;
}

}  // namespace

SparseVector random_element(SeededRng& rng, const Cdga& c, int degree) {
  SparseVector v;
  for (auto i : c.basis_of_degree(degree)) v = v + SparseVector::unit(i, rng.small_rational());
  return v;
}

SparseVector random_closed_element(SeededRng& rng, const Cdga& c, int degree) {
  SparseVector v;
  for (const auto& z : cocycles(c, degree)) v = v.axpy(rng.small_rational(), z);
  return v;
}

CdgaPtr random_cdga(SeededRng& rng) {
  const int n = rng.uniform(1, 4);
  std::vector<Generator> gens;
  int size = 1;
  for (int i = 0; i < n; ++i) {
    int deg = rng.uniform(1, 3);
    std::optional<int> cap;
    if (deg % 2 == 0) cap = rng.uniform(1, 2);
    int factor = deg % 2 ? 2 : *cap + 1;
    if (size * factor > 36) break;
    size *= factor;
    gens.push_back({deg, cap, std::string(1, static_cast<char>('a' + i))});
  }
  const std::size_t g = gens.size();
  std::vector<GeneratorPolynomial> diff(g);
  for (std::size_t i = 0; i < g; ++i) {
    // Only odd generators get a differential: truncated even generators would break Leibniz.
    if (gens[i].degree % 2 == 0 || i == 0 || !rng.chance(0.7)) continue;
    std::vector<Generator> prefix(gens.begin(), gens.begin() + static_cast<long>(i));
    std::vector<GeneratorPolynomial> pdiff(diff.begin(), diff.begin() + static_cast<long>(i));
    for (auto& poly : pdiff)
      for (auto& term : poly) term.second.resize(i);
    FreeCdga sub = free_cdga(prefix, pdiff, -1);
    SparseVector z = random_closed_element(rng, *sub.algebra, gens[i].degree + 1);
    for (const auto& e : z.entries()) {
      auto expo = sub.exponents.at(e.index);
      expo.resize(g, 0);
      diff[i].push_back({e.value, expo});
    }
  }
  std::string name = "random";
  for (const auto& gen : gens) name += "_" + std::to_string(gen.degree);
  return free_cdga(gens, diff, -1, name).algebra;
}

Presheaf random_presheaf(SeededRng& rng, const FiniteCategory& c) {
  const std::size_t objs = c.object_count(), morphs = c.morphism_count();
  // Summands: representables h_X (X = object id) and the all-Q presheaf (X = npos).
  std::vector<std::size_t> summands;
  int reps = rng.uniform(1, 3);
  for (int i = 0; i < reps; ++i) summands.push_back(static_cast<std::size_t>(rng.uniform(0, static_cast<int>(objs) - 1)));
  if (rng.chance(0.5)) summands.push_back(npos);

  // Coordinates of the sum at each object: (summand, morphism into X) pairs.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> coords(objs);
  for (std::size_t y = 0; y < objs; ++y)
    for (std::size_t s = 0; s < summands.size(); ++s) {
      if (summands[s] == npos) {
        coords[y].push_back({s, npos});
      } else {
        for (auto m : c.hom(y, summands[s])) coords[y].push_back({s, m});
      }
    }
  auto coord_index = [&](std::size_t y, std::pair<std::size_t, std::size_t> key) {
    auto it = std::find(coords[y].begin(), coords[y].end(), key);
    return static_cast<std::size_t>(it - coords[y].begin());
  };
  // S(m) for m: A -> B sends the coordinate (s, f: B -> X) to (s, f o m).
  std::vector<DenseMatrix> smap(morphs);
  for (std::size_t m = 0; m < morphs; ++m) {
    std::size_t a = c.morphism(m).source, b = c.morphism(m).target;
    DenseMatrix M(coords[a].size(), coords[b].size());
    for (std::size_t j = 0; j < coords[b].size(); ++j) {
      auto [s, f] = coords[b][j];
      std::size_t i = coord_index(a, {s, f == npos ? npos : c.compose(f, m)});
      M.at(i, j) = 1;
    }
    smap[m] = std::move(M);
  }
  // Subpresheaf generated by random sections.
  std::vector<std::vector<std::vector<Rational>>> sub(objs);
  int gens = rng.uniform(0, 2);
  for (int k = 0; k < gens; ++k) {
    std::size_t x = static_cast<std::size_t>(rng.uniform(0, static_cast<int>(objs) - 1));
    if (coords[x].empty()) continue;
    std::vector<Rational> sec(coords[x].size());
    for (auto& q : sec) q = rng.small_rational(2, 1);
    for (std::size_t y = 0; y < objs; ++y)
      for (auto m : c.hom(y, x)) {
        std::vector<Rational> img(coords[y].size());
        for (std::size_t i = 0; i < coords[y].size(); ++i)
          for (std::size_t j = 0; j < coords[x].size(); ++j) img[i] += smap[m].at(i, j) * sec[j];
        sub[y].push_back(std::move(img));
      }
  }
  // Quotient at each object: complement of the pivot columns of the reduced relations.
  std::vector<DenseMatrix> reduced(objs);
  std::vector<std::vector<std::size_t>> pivots(objs), free(objs);
  Presheaf f;
  for (std::size_t y = 0; y < objs; ++y) {
    reduced[y] = stack_rows(sub[y], coords[y].size());
    pivots[y] = rref(reduced[y]);
    std::vector<bool> piv(coords[y].size(), false);
    for (auto p : pivots[y]) piv[p] = true;
    for (std::size_t i = 0; i < coords[y].size(); ++i)
      if (!piv[i]) free[y].push_back(i);
    f.dims.push_back(free[y].size());
  }
  for (std::size_t m = 0; m < morphs; ++m) {
    std::size_t a = c.morphism(m).source, b = c.morphism(m).target;
    std::vector<SparseMatrix::Triplet> t;
    for (std::size_t j = 0; j < free[b].size(); ++j) {
      std::vector<Rational> v(coords[a].size());
      for (std::size_t i = 0; i < coords[a].size(); ++i) v[i] = smap[m].at(i, free[b][j]);
      for (std::size_t r = 0; r < pivots[a].size(); ++r) {
        Rational coef = v[pivots[a][r]];
        if (sgn(coef) == 0) continue;
        for (std::size_t i = 0; i < coords[a].size(); ++i) v[i] -= coef * reduced[a].at(r, i);
      }
      for (std::size_t i = 0; i < free[a].size(); ++i)
        if (sgn(v[free[a][i]]) != 0) t.push_back({i, j, v[free[a][i]]});
    }
    f.maps.push_back(SparseMatrix::from_triplets(f.dims[a], f.dims[b], std::move(t)));
  }
  return f;
}

}  // namespace twistcoh::oracle

#include "twistcoh/spectral.hpp"

#include <algorithm>
#include <map>
#include <memory>

namespace twistcoh {

FilteredComplex filtered_two_periodic(const TwistClass& t) {
  two_periodic_complex(t);  // closedness and d_lambda^2 = 0
  const Cdga& c = *t.algebra;
  FilteredComplex f;
  f.d = c.d() + c.left_multiplication(t.lambda);
  f.level = c.degrees();
  return f;
}

void check_filtered(const FilteredComplex& f) {
  if (f.d.rows() != f.d.cols() || f.d.cols() != f.level.size())
    throw std::invalid_argument("filtered complex: shape mismatch");
  if (!(f.d * f.d).is_zero()) throw std::invalid_argument("filtered complex: d^2 != 0");
  for (std::size_t j = 0; j < f.d.cols(); ++j)
    for (const auto& e : f.d.column(j).entries())
      if (f.level[e.index] < f.level[j]) throw std::invalid_argument("filtered complex: d lowers the filtration");
}

std::size_t Page::total_dim() const {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.lifts.size();
  return n;
}

std::size_t Page::dim_at(int s) const {
  for (const auto& b : blocks)
    if (b.s == s) return b.lifts.size();
  return 0;
}

std::vector<std::size_t> Page::dims() const {
  std::vector<std::size_t> out;
  for (const auto& b : blocks) out.push_back(b.lifts.size());
  return out;
}

std::array<std::size_t, 2> Page::parity_dims() const {
  std::array<std::size_t, 2> out{0, 0};
  for (const auto& b : blocks) out[static_cast<std::size_t>(((b.s % 2) + 2) % 2)] += b.lifts.size();
  return out;
}

namespace {

class Filtration {
 public:
  explicit Filtration(const FilteredComplex& f) : f_(f) {
    lo_ = f.level.empty() ? 0 : *std::min_element(f.level.begin(), f.level.end());
    hi_ = f.level.empty() ? 0 : *std::max_element(f.level.begin(), f.level.end());
  }
  int lo() const { return lo_; }
  int hi() const { return hi_; }
  std::size_t n() const { return f_.level.size(); }

  // Z_r^s; r = -1 gives F^s.
  const std::vector<SparseVector>& cycles(int r, int s) {
    auto key = std::make_pair(r, s);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::vector<std::size_t> cols, rows;
    for (std::size_t i = 0; i < n(); ++i) {
      if (f_.level[i] >= s) cols.push_back(i);
      if (r >= 0 && f_.level[i] < s + r) rows.push_back(i);
    }
    std::vector<SparseVector> out;
    if (r < 0 || rows.empty()) {
      for (auto c : cols) out.push_back(SparseVector::unit(c));
    } else {
      SparseMatrix m = f_.d.select_columns(cols).select_rows(rows);
      for (const auto& k : kernel_basis(m).basis) out.push_back(k.reindexed(cols));
    }
    return cache_[key] = std::move(out);
  }

  const SparseMatrix& d() const { return f_.d; }

 private:
  const FilteredComplex& f_;
  int lo_ = 0, hi_ = 0;
  std::map<std::pair<int, int>, std::vector<SparseVector>> cache_;
};

}  // namespace

SpectralSequence pages(const FilteredComplex& f, int r_max) {
  check_filtered(f);
  Filtration filt(f);
  SpectralSequence ss;
  ss.min_level = filt.lo();
  ss.max_level = filt.hi();
  const int length = filt.hi() - filt.lo() + 1;
  const int R = std::max(r_max, length);
  const std::size_t N = filt.n();
  for (int r = 0; r <= R; ++r) {
    Page page;
    page.r = r;
    std::vector<std::unique_ptr<Quotient>> quot;
    std::size_t off = 0;
    for (int s = filt.lo(); s <= filt.hi(); ++s) {
      std::vector<SparseVector> denom = filt.cycles(r - 1, s + 1);
      for (const auto& x : filt.cycles(r - 1, s - r + 1)) denom.push_back(f.d.apply(x));
      quot.push_back(std::make_unique<Quotient>(N, denom, filt.cycles(r, s)));
      page.blocks.push_back({s, quot.back()->lifts()});
      page.offset.push_back(off);
      off += quot.back()->dim();
    }
    std::vector<SparseMatrix::Triplet> trip;
    for (std::size_t b = 0; b < page.blocks.size(); ++b) {
      int target = page.blocks[b].s + r;
      for (std::size_t i = 0; i < page.blocks[b].lifts.size(); ++i) {
        SparseVector y = f.d.apply(page.blocks[b].lifts[i]);
        if (target > filt.hi()) {
          if (!y.empty()) throw std::logic_error("spectral: d_r leaves the filtration range");
          continue;
        }
        auto tb = static_cast<std::size_t>(target - filt.lo());
        SparseVector coords = quot[tb]->coordinates(y);
        for (const auto& e : coords.entries())
          trip.push_back({page.offset[tb] + e.index, page.offset[b] + i, e.value});
      }
    }
    page.d = SparseMatrix::from_triplets(off, off, std::move(trip));
    ss.pages.push_back(std::move(page));
  }
  ss.stable_from = R;
  while (ss.stable_from > 0 && ss.pages[static_cast<std::size_t>(ss.stable_from - 1)].d.is_zero()) --ss.stable_from;
  return ss;
}

D3Check d3_equals_lambda_cup(const FilteredComplex& f, const TwistClass& t) {
  const Cdga& c = *t.algebra;
  if (!c.d().is_zero()) throw NotApplicable("d3_equals_lambda_cup needs a model with zero differential");
  if (f.level != c.degrees()) throw NotApplicable("filtration is not the form-degree filtration of this model");
  SpectralSequence ss = pages(f, 3);
  const Page& e3 = ss.pages.at(3);

  // Degree-s component of each lift, expressed in the basis of degree-s forms.
  std::map<int, SparseMatrix> proj;
  for (const auto& b : e3.blocks) {
    auto forms = c.basis_of_degree(b.s);
    std::vector<std::size_t> map(c.dim(), npos);
    for (std::size_t i = 0; i < forms.size(); ++i) map[forms[i]] = i;
    std::vector<SparseVector> cols;
    for (const auto& l : b.lifts) cols.push_back(l.reindexed(map));
    SparseMatrix P = SparseMatrix::from_columns(forms.size(), std::move(cols));
    if (!is_invertible(P))
      throw NotApplicable("E_3 at level " + std::to_string(b.s) + " is not identified with the degree-" +
                          std::to_string(b.s) + " forms");
    proj[b.s] = P;
  }

  std::vector<SparseMatrix::Triplet> trip;
  for (std::size_t bi = 0; bi < e3.blocks.size(); ++bi) {
    const auto& b = e3.blocks[bi];
    int target = b.s + 3;
    if (!proj.count(target)) continue;
    auto forms = c.basis_of_degree(b.s);
    auto tforms = c.basis_of_degree(target);
    std::vector<std::size_t> tmap(c.dim(), npos);
    for (std::size_t i = 0; i < tforms.size(); ++i) tmap[tforms[i]] = i;
    std::size_t tb = static_cast<std::size_t>(target - ss.min_level);
    for (std::size_t i = 0; i < b.lifts.size(); ++i) {
      SparseVector x = proj[b.s].column(i).reindexed(std::vector<std::size_t>(forms.begin(), forms.end()));
      SparseVector y = c.multiply(t.lambda, x).reindexed(tmap);
      auto coords = solve_linear(proj[target], y);
      if (!coords) throw std::logic_error("d3 check: cup image outside the identified page");
      for (const auto& e : coords->entries()) trip.push_back({e3.offset[tb] + e.index, e3.offset[bi] + i, e.value});
    }
  }
  D3Check out;
  out.d3 = e3.d;
  out.cup = SparseMatrix::from_triplets(e3.total_dim(), e3.total_dim(), std::move(trip));
  out.equal = out.d3 == out.cup;
  if (!out.equal) {
    for (std::size_t j = 0; j < out.d3.cols() && out.witness.empty(); ++j)
      if (out.d3.column(j) != out.cup.column(j)) out.witness = "page column " + std::to_string(j);
  }
  return out;
}

}  // namespace twistcoh

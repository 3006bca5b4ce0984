#include "twistcoh/fixtures.hpp"

#include <stdexcept>

#include "twistcoh/oracle.hpp"

namespace twistcoh::fixtures {

namespace {

SparseVector e(std::size_t i, const Rational& c = 1) { return SparseVector::unit(i, c); }

std::size_t only_of_degree(const Cdga& c, int k) {
  auto b = c.basis_of_degree(k);
  if (b.size() != 1) throw std::logic_error("fixture: expected a single basis element in degree " + std::to_string(k));
  return b[0];
}

// Index of (i in the left factor) (x) (j in the right factor).
std::size_t pair_index(const Cdga& right, std::size_t i, std::size_t j) { return i * right.dim() + j; }

}  // namespace

CdgaPtr point() {
  return std::make_shared<Cdga>(std::vector<int>{0}, SparseMatrix::zero(1, 1),
                                std::vector<Cdga::ProductTerm>{{0, 0, 0, 1}}, 0, "point");
}

CdgaPtr s3() { return exterior_algebra({{3, {}, "x"}}, 3, "s3").algebra; }

CdgaPtr t3() { return exterior_algebra({{1, {}, "a"}, {1, {}, "b"}, {1, {}, "c"}}, 3, "t3").algebra; }

CdgaPtr s2xs3() { return free_cdga({{2, 1, "s"}, {3, {}, "y"}}, {}, 5, "s2xs3").algebra; }

CdgaPtr cp(int n) { return free_cdga({{2, n, "s"}}, {}, 2 * n, "cp" + std::to_string(n)).algebra; }

CdgaPtr acyclic_us() {
  FreeCdga f = free_cdga({{1, {}, "u"}, {2, 1, "s"}}, {{{1, {0, 1}}}, {}}, -1, "us_free");
  return quotient_cdga(f.algebra, {e(monomial_index(f, {1, 1}))}, "acyclic_us", 2).algebra;
}

CdgaPtr e23() {
  FreeCdga f = free_cdga({{2, 1, "v"}, {3, {}, "w"}}, {{{1, {0, 1}}}, {}}, -1, "vw_free");
  return quotient_cdga(f.algebra, {e(monomial_index(f, {1, 1}))}, "e23", 3).algebra;
}

CdgaPtr t3_us() { return tensor_cdga(*t3(), *acyclic_us(), "t3_us"); }
CdgaPtr t3_e23() { return tensor_cdga(*t3(), *e23(), "t3_e23"); }
CdgaPtr s3_e23() { return tensor_cdga(*s3(), *e23(), "s3_e23"); }

std::vector<NamedTwist> twists() {
  std::vector<NamedTwist> out;
  auto add = [&](std::string name, std::string model, CdgaPtr c, SparseVector lambda) {
    out.push_back({std::move(name), std::move(model), make_twist(std::move(c), std::move(lambda))});
  };
  CdgaPtr S3 = s3(), T3 = t3();
  const std::size_t x = only_of_degree(*S3, 3), abc = only_of_degree(*T3, 3);
  for (int k : {0, 1, 2, 5}) {
    add("tw_s3_k" + std::to_string(k), "s3", S3, k ? e(x, k) : SparseVector());
    add("tw_t3_k" + std::to_string(k), "t3", T3, k ? e(abc, k) : SparseVector());
  }
  CdgaPtr S2S3 = s2xs3();
  add("tw_s2xs3_y", "s2xs3", S2S3, e(only_of_degree(*S2S3, 3)));
  add("tw_s2xs3_0", "s2xs3", S2S3, {});
  add("tw_cp2_0", "cp2", cp(2), {});
  add("tw_point_0", "point", point(), {});
  add("tw_acyclic_us_0", "acyclic_us", acyclic_us(), {});

  CdgaPtr US = acyclic_us(), TU = t3_us();
  const std::size_t a = T3->basis_of_degree(1)[0], u = only_of_degree(*US, 1);
  add("tw_t3_us_exact", "t3_us", TU, TU->differential(e(pair_index(*US, a, u))));

  CdgaPtr E = e23(), TE = t3_e23(), SE = s3_e23();
  const std::size_t w = only_of_degree(*E, 3);
  add("tw_t3_e23_exact", "t3_e23", TE, e(pair_index(*E, 0, w)));
  add("tw_t3_e23_mixed", "t3_e23", TE, e(pair_index(*E, abc, 0)) + e(pair_index(*E, 0, w)));
  add("tw_s3_e23_mixed", "s3_e23", SE, e(pair_index(*E, x, 0)) + e(pair_index(*E, 0, w)));
  return out;
}

TopologicalSite site_point() { return topological_site(1, {{0}}, "site_point"); }

TopologicalSite site_two_cover() {
  // points a = 0, c = 1, b = 2; A = {a, c}, B = {c, b}, C = A n B
  return topological_site(3, {{0, 1, 2}, {0, 1}, {1, 2}, {1}}, "site_two_cover");
}

TopologicalSite site_disjoint() { return topological_site(2, {{0, 1}, {0}, {1}, {}}, "site_disjoint"); }

TopologicalSite site_circle3() {
  // Three arcs A, B, C with pairwise intersections {3}, {4}, {5} and no triple point.
  return topological_site(6, {{0, 1, 2, 3, 4, 5}, {0, 3, 4}, {1, 3, 5}, {2, 4, 5}, {3}, {4}, {5}, {}}, "site_circle3");
}

TopologicalSite site_line3() {
  // points a, ab, b, bc, c; A = {a, ab}, B = {ab, b, bc}, C = {bc, c}
  return topological_site(5, {{0, 1, 2, 3, 4}, {0, 1}, {1, 2, 3}, {3, 4}, {1}, {3}, {}}, "site_line3");
}

std::vector<TopologicalSite> sites() {
  return {site_point(), site_two_cover(), site_disjoint(), site_circle3(), site_line3()};
}

FunctorData inclusion_functor(const TopologicalSite& source, const TopologicalSite& target,
                              const std::vector<std::size_t>& objects) {
  const auto& sc = source.site.category;
  const auto& tc = target.site.category;
  if (objects.size() != sc.object_count()) throw std::invalid_argument("inclusion_functor: one image per object");
  FunctorData f;
  f.objects = objects;
  for (const auto& m : sc.morphisms()) {
    const auto& h = tc.hom(objects.at(m.source), objects.at(m.target));
    if (h.empty()) throw std::invalid_argument("inclusion_functor: the object map does not preserve inclusions");
    f.morphisms.push_back(h[0]);
  }
  return f;
}

std::vector<NamedFunctor> functors() {
  auto point = site_point(), two = site_two_cover(), disjoint = site_disjoint(), circle = site_circle3(),
       line = site_line3();
  return {
      {"fun_id_circle3", "site_circle3", "site_circle3", inclusion_functor(circle, circle, {0, 1, 2, 3, 4, 5, 6, 7})},
      {"fun_point_two_cover", "site_point", "site_two_cover", inclusion_functor(point, two, {3})},
      {"fun_disjoint_circle3", "site_disjoint", "site_circle3", inclusion_functor(disjoint, circle, {0, 1, 2, 7})},
      {"fun_disjoint_line3", "site_disjoint", "site_line3", inclusion_functor(disjoint, line, {0, 1, 3, 6})},
      {"fun_line3_circle3", "site_line3", "site_circle3", inclusion_functor(line, circle, {0, 1, 2, 3, 4, 6, 7})},
  };
}

NamedGerbe gerbe_point() {
  NamedGerbe g{"gerbe_point", single_chart_cover(point(), "gerbe_point"), {}};
  g.connection.beta = {SparseVector()};
  return g;
}

NamedGerbe gerbe_t3_e23_single() {
  CdgaPtr E = e23();
  NamedGerbe g{"gerbe_t3_e23_single", single_chart_cover(t3_e23(), "gerbe_t3_e23_single"), {}};
  g.connection.beta = {e(pair_index(*E, 0, only_of_degree(*E, 2)))};
  return g;
}

NamedGerbe gerbe_s3_e23_single() {
  CdgaPtr E = e23();
  NamedGerbe g{"gerbe_s3_e23_single", single_chart_cover(s3_e23(), "gerbe_s3_e23_single"), {}};
  g.connection.beta = {e(pair_index(*E, 0, only_of_degree(*E, 2)))};
  return g;
}

NamedGerbe gerbe_t3_e23_two() {
  CdgaPtr E = e23(), T3 = t3();
  NamedGerbe g{"gerbe_t3_e23_two", product_cover(t3_e23(), 2, "gerbe_t3_e23_two"), {}};
  // beta_i = r_i(v), so the curvature is dv = w; a_01 = a is closed, so delta beta = d a = 0.
  SparseVector v = e(pair_index(*E, 0, only_of_degree(*E, 2)));
  g.connection.beta = {v, v};
  g.connection.a[{0, 1}] = e(pair_index(*E, T3->basis_of_degree(1)[0], 0));
  return g;
}

NamedGerbe gerbe_mv_circle() {
  // Two contractible charts whose overlap has two contractible components.
  CdgaPtr q = point();
  auto qq = std::make_shared<const Cdga>(
      std::vector<int>{0, 0}, SparseMatrix::zero(2, 2),
      std::vector<Cdga::ProductTerm>{{0, 0, 0, 1}, {0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 1, 1}}, 0, "point_pair");
  NamedGerbe g;
  g.name = "gerbe_mv_circle";
  CoverDatum& c = g.cover;
  c.name = g.name;
  c.charts = 2;
  c.global = q;
  c.pieces[{0}] = q;
  c.pieces[{1}] = q;
  c.pieces[{0, 1}] = qq;
  // Basis of the overlap: the unit and the idempotent of one component.
  auto unit = SparseMatrix::from_triplets(2, 1, {{0, 0, 1}});
  c.faces[{{0, 1}, 0}] = unit;
  c.faces[{{0, 1}, 1}] = unit;
  c.restrictions = {SparseMatrix::identity(1), SparseMatrix::identity(1)};
  g.connection.beta = {SparseVector(), SparseVector()};
  return g;
}

GerbeConnection stretch_connection(const CoverDatum& cover, std::uint64_t seed) {
  oracle::SeededRng rng(seed);
  CdgaPtr E = e23(), T3 = t3();
  auto one_form = [&](bool nonzero) {
    SparseVector f;
    do {
      f = SparseVector();
      for (auto i : T3->basis_of_degree(1)) f = f + e(pair_index(*E, i, 0), rng.small_rational(2, 1));
    } while (nonzero && f.empty());
    return f;
  };
  if (cover.charts != 3) throw std::invalid_argument("stretch_connection: three charts expected");
  GerbeConnection g;
  SparseVector A = one_form(true), a02 = one_form(false), a12 = one_form(false);
  g.A[{0, 1, 2}] = A;
  g.a[{0, 2}] = a02;
  g.a[{1, 2}] = a12;
  g.a[{0, 1}] = A - a12 + a02;  // a_12 - a_02 + a_01 = A
  SparseVector beta = e(pair_index(*E, 0, only_of_degree(*E, 2)));
  for (auto i : T3->basis_of_degree(2)) beta = beta + e(pair_index(*E, i, 0), rng.small_rational(2, 1));
  g.beta = {beta, beta, beta};
  return g;
}

NamedGerbe gerbe_t3_stretch(std::uint64_t seed) {
  NamedGerbe g{"gerbe_t3_stretch", product_cover(t3_e23(), 3, "gerbe_t3_stretch"), {}};
  g.connection = stretch_connection(g.cover, seed);
  return g;
}

std::vector<NamedGerbe> gerbes() {
  return {gerbe_point(),      gerbe_t3_e23_single(), gerbe_s3_e23_single(),
          gerbe_t3_e23_two(), gerbe_mv_circle(),     gerbe_t3_stretch()};
}

std::vector<std::pair<std::string, io::Json>> all_documents() {
  std::vector<std::pair<std::string, io::Json>> out;
  for (const auto& c : {point(), s3(), t3(), s2xs3(), cp(2), cp(3), acyclic_us(), e23(), t3_us(), t3_e23(), s3_e23()})
    out.push_back({c->name(), io::cdga_to_json(*c)});
  for (const auto& t : twists()) out.push_back({t.name, io::twist_to_json(t.twist, t.name, t.model)});
  for (const auto& s : sites()) out.push_back({s.site.name, io::site_to_json(s)});
  for (const auto& f : functors()) out.push_back({f.name, io::functor_to_json(f.data, f.source, f.target, f.name)});
  auto circle = site_circle3(), line = site_line3(), disjoint = site_disjoint(), two = site_two_cover();
  out.push_back({"psh_constant_circle3", io::presheaf_to_json(constant_presheaf(circle.site), circle.site.name)});
  out.push_back({"psh_points_circle3", io::presheaf_to_json(point_functions_presheaf(circle), circle.site.name)});
  out.push_back({"psh_skyscraper_line3", io::presheaf_to_json(skyscraper_presheaf(line, 1), line.site.name)});
  out.push_back({"psh_constant_disjoint", io::presheaf_to_json(constant_presheaf(disjoint.site), disjoint.site.name)});
  out.push_back({"psh_constant_two_cover", io::presheaf_to_json(constant_presheaf(two.site), two.site.name)});
  for (const auto& g : gerbes()) out.push_back({g.name, io::gerbe_to_json(g.cover, g.connection)});
  for (auto& [name, doc] : out)
    if (!doc.contains("name")) doc["name"] = name;
  return out;
}

}  // namespace twistcoh::fixtures

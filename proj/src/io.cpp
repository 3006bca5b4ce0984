#include "twistcoh/io.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#ifndef TWISTCOH_DEFAULT_FIXTURES
#define TWISTCOH_DEFAULT_FIXTURES "fixtures"
#endif

namespace twistcoh::io {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::size_t index_from(const Json& j) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw ParseError("expected a non-negative integer, got " + j.dump());
  return j.get<std::size_t>();
}

template <typename T>
std::vector<T> list_of(const Json& j, T (*conv)(const Json&)) {
  if (!j.is_array()) throw ParseError("expected an array, got " + j.dump());
  std::vector<T> out;
  for (const auto& x : j) out.push_back(conv(x));
  return out;
}

std::vector<std::size_t> indices_from(const Json& j) { return list_of<std::size_t>(j, index_from); }

int int_from(const Json& j) {
  if (!j.is_number_integer()) throw ParseError("expected an integer, got " + j.dump());
  return j.get<int>();
}

std::string string_from(const Json& j) {
  if (!j.is_string()) throw ParseError("expected a string, got " + j.dump());
  return j.get<std::string>();
}

void expect_kind(const Json& j, const std::string& kind) {
  if (j.contains("kind") && string_from(j.at("kind")) != kind)
    throw ParseError("expected a '" + kind + "' document, got '" + j.at("kind").get<std::string>() + "'");
}

}  // namespace

Json rational_to_json(const Rational& q) { return format_rational(q); }

Rational rational_from_json(const Json& j) {
  if (!j.is_string()) throw ParseError("rational values must be \"p/q\" strings, got " + j.dump());
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

Json vector_to_json(const SparseVector& v) {
  Json out = Json::array();
  for (const auto& e : v.entries()) out.push_back({e.index, rational_to_json(e.value)});
  return out;
}

SparseVector vector_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("sparse vector must be an array of [index, value] pairs");
  std::vector<Entry> entries;
  std::set<std::size_t> seen;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw ParseError("sparse vector entry must be [index, value]");
    std::size_t i = index_from(e[0]);
    if (!seen.insert(i).second) throw ParseError("duplicate sparse vector index " + std::to_string(i));
    entries.push_back({i, rational_from_json(e[1])});
  }
  return SparseVector::from_entries(std::move(entries));
}

Json matrix_to_json(const SparseMatrix& m) {
  Json entries = Json::array();
  for (const auto& t : m.triplets()) entries.push_back({t.row, t.col, rational_to_json(t.value)});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

SparseMatrix matrix_from_json(const Json& j) {
  std::size_t rows = index_from(field(j, "rows")), cols = index_from(field(j, "cols"));
  std::vector<SparseMatrix::Triplet> t;
  for (const auto& e : field(j, "entries")) {
    if (!e.is_array() || e.size() != 3) throw ParseError("matrix entry must be [row, col, value]");
    std::size_t r = index_from(e[0]), c = index_from(e[1]);
    if (r >= rows || c >= cols) throw ParseError("matrix entry out of range");
    t.push_back({r, c, rational_from_json(e[2])});
  }
  return SparseMatrix::from_triplets(rows, cols, std::move(t));
}

Json cdga_to_json(const Cdga& c) {
  Json d = Json::array();
  for (const auto& t : c.d().triplets()) d.push_back({t.row, t.col, rational_to_json(t.value)});
  Json prod = Json::array();
  for (const auto& p : c.product_terms()) prod.push_back({p.left, p.right, p.result, rational_to_json(p.coeff)});
  return {{"kind", "cdga"},      {"name", c.name()},   {"degrees", c.degrees()},
          {"differential", d},   {"product", prod},    {"top_degree", c.top_degree()}};
}

CdgaPtr cdga_from_json(const Json& j) {
  expect_kind(j, "cdga");
  std::vector<int> degrees = list_of<int>(field(j, "degrees"), int_from);
  const std::size_t n = degrees.size();
  if (n == 0) throw ParseError("cdga needs at least the unit");
  std::vector<SparseMatrix::Triplet> t;
  for (const auto& e : field(j, "differential")) {
    if (!e.is_array() || e.size() != 3) throw ParseError("differential entry must be [row, col, value]");
    std::size_t r = index_from(e[0]), c = index_from(e[1]);
    if (r >= n || c >= n) throw ParseError("differential entry out of range");
    t.push_back({r, c, rational_from_json(e[2])});
  }
  std::vector<Cdga::ProductTerm> prod;
  for (const auto& e : field(j, "product")) {
    if (!e.is_array() || e.size() != 4) throw ParseError("product entry must be [left, right, result, value]");
    std::size_t a = index_from(e[0]), b = index_from(e[1]), c = index_from(e[2]);
    if (a >= n || b >= n || c >= n) throw ParseError("product entry out of range");
    prod.push_back({a, b, c, rational_from_json(e[3])});
  }
  std::string name = j.contains("name") ? string_from(j.at("name")) : std::string();
  return std::make_shared<Cdga>(std::move(degrees), SparseMatrix::from_triplets(n, n, std::move(t)), prod,
                                int_from(field(j, "top_degree")), std::move(name));
}

Json site_to_json(const FiniteSite& s) {
  const auto& c = s.category;
  Json mor = Json::array();
  for (const auto& m : c.morphisms()) mor.push_back({m.source, m.target, m.name});
  Json comp = Json::array();
  for (const auto& t : c.composition_triples()) comp.push_back({t[0], t[1], t[2]});
  Json cov = Json::array();
  for (const auto& per : s.coverings) cov.push_back(per);
  Json pb = Json::array();
  for (const auto& [key, w] : s.pullbacks) pb.push_back({w.cover, w.along, w.object, w.proj_along, w.proj_cover});
  return {{"kind", "site"},      {"name", s.name},       {"objects", c.objects()},
          {"morphisms", mor},    {"identities", c.identities()}, {"compositions", comp},
          {"coverings", cov},    {"pullbacks", pb}};
}

Json site_to_json(const TopologicalSite& t) {
  Json j = site_to_json(t.site);
  if (!t.opens.empty()) {
    Json opens = Json::array();
    for (const auto& o : t.opens) opens.push_back(std::vector<int>(o.begin(), o.end()));
    j["topology"] = {{"points", t.points}, {"opens", opens}};
  }
  return j;
}

TopologicalSite site_from_json(const Json& j) {
  expect_kind(j, "site");
  std::string name = j.contains("name") ? string_from(j.at("name")) : std::string();
  if (j.contains("topology") && !j.contains("objects")) {
    const Json& top = j.at("topology");
    std::vector<std::set<int>> opens;
    for (const auto& o : field(top, "opens")) {
      auto v = list_of<int>(o, int_from);
      opens.emplace_back(v.begin(), v.end());
    }
    try {
      return topological_site(int_from(field(top, "points")), opens, name);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
  }
  std::vector<std::string> objects = list_of<std::string>(field(j, "objects"), string_from);
  std::vector<Morphism> mor;
  for (const auto& m : field(j, "morphisms")) {
    if (!m.is_array() || m.size() != 3) throw ParseError("morphism must be [source, target, name]");
    mor.push_back({index_from(m[0]), index_from(m[1]), string_from(m[2])});
  }
  for (const auto& m : mor)
    if (m.source >= objects.size() || m.target >= objects.size()) throw ParseError("morphism endpoint out of range");
  std::vector<std::size_t> ids = indices_from(field(j, "identities"));
  std::vector<std::array<std::size_t, 3>> comp;
  for (const auto& t : field(j, "compositions")) {
    auto v = indices_from(t);
    if (v.size() != 3) throw ParseError("composition must be [g, f, g o f]");
    for (auto x : v)
      if (x >= mor.size()) throw ParseError("composition refers to an unknown morphism");
    comp.push_back({v[0], v[1], v[2]});
  }
  if (ids.size() != objects.size()) throw ParseError("one identity per object expected");
  TopologicalSite t;
  t.site.name = name;
  try {
    t.site.category = FiniteCategory(objects, mor, ids, comp);
  } catch (const std::exception& e) {
    throw ParseError(std::string("category: ") + e.what());
  }
  for (const auto& per : field(j, "coverings")) {
    std::vector<Covering> list;
    for (const auto& fam : per) list.push_back(indices_from(fam));
    t.site.coverings.push_back(std::move(list));
  }
  if (t.site.coverings.size() != objects.size()) throw ParseError("one covering list per object expected");
  for (const auto& p : field(j, "pullbacks")) {
    auto v = indices_from(p);
    if (v.size() != 5) throw ParseError("pullback must be [cover, along, object, proj_along, proj_cover]");
    t.site.pullbacks[{v[0], v[1]}] = PullbackWitness{v[0], v[1], v[2], v[3], v[4]};
  }
  if (j.contains("topology")) {
    const Json& top = j.at("topology");
    t.points = int_from(field(top, "points"));
    for (const auto& o : field(top, "opens")) {
      auto v = list_of<int>(o, int_from);
      t.opens.emplace_back(v.begin(), v.end());
    }
    if (t.opens.size() != objects.size()) throw ParseError("topology: one open per object expected");
  }
  return t;
}

Json presheaf_to_json(const Presheaf& f, const std::string& site_name) {
  Json maps = Json::array();
  for (const auto& m : f.maps) maps.push_back(matrix_to_json(m));
  return {{"kind", "presheaf"}, {"site", site_name}, {"dims", f.dims}, {"maps", maps}};
}

Presheaf presheaf_from_json(const Json& j) {
  expect_kind(j, "presheaf");
  Presheaf f;
  f.dims = indices_from(field(j, "dims"));
  for (const auto& m : field(j, "maps")) f.maps.push_back(matrix_from_json(m));
  return f;
}

Json functor_to_json(const FunctorData& f, const std::string& source, const std::string& target,
                     const std::string& name) {
  return {{"kind", "functor"}, {"name", name},          {"source", source},
          {"target", target},  {"objects", f.objects}, {"morphisms", f.morphisms}};
}

FunctorData functor_from_json(const Json& j) {
  expect_kind(j, "functor");
  return {indices_from(field(j, "objects")), indices_from(field(j, "morphisms"))};
}

namespace {

Json simplex_entries(const std::map<Simplex, SparseVector>& m) {
  Json out = Json::array();
  for (const auto& [s, v] : m) out.push_back({{"simplex", s}, {"form", vector_to_json(v)}});
  return out;
}

std::map<Simplex, SparseVector> simplex_entries_from(const Json& j) {
  std::map<Simplex, SparseVector> out;
  if (!j.is_array()) throw ParseError("expected a list of {simplex, form}");
  for (const auto& e : j) out[indices_from(field(e, "simplex"))] = vector_from_json(field(e, "form"));
  return out;
}

}  // namespace

Json gerbe_to_json(const CoverDatum& c, const GerbeConnection& g) {
  // Algebras are stored once and referenced by name.
  std::map<const Cdga*, std::string> names;
  Json algebras = Json::object();
  auto ref = [&](const CdgaPtr& p) {
    auto it = names.find(p.get());
    if (it != names.end()) return it->second;
    std::string base = p->name().empty() ? "algebra" : p->name(), n = base;
    for (int k = 1; algebras.contains(n); ++k) n = base + "_" + std::to_string(k);
    names[p.get()] = n;
    algebras[n] = cdga_to_json(*p);
    return n;
  };
  Json out;
  out["kind"] = "gerbe";
  out["name"] = c.name;
  out["charts"] = c.charts;
  out["global"] = ref(c.global);
  Json pieces = Json::array();
  for (const auto& [s, p] : c.pieces) pieces.push_back({{"simplex", s}, {"algebra", ref(p)}});
  out["pieces"] = pieces;
  Json faces = Json::array();
  for (const auto& [key, m] : c.faces)
    faces.push_back({{"simplex", key.first}, {"index", key.second}, {"matrix", matrix_to_json(m)}});
  out["faces"] = faces;
  Json res = Json::array();
  for (const auto& m : c.restrictions) res.push_back(matrix_to_json(m));
  out["restrictions"] = res;
  out["algebras"] = algebras;
  Json beta = Json::array();
  for (const auto& b : g.beta) beta.push_back(vector_to_json(b));
  out["connection"] = {{"A", simplex_entries(g.A)}, {"a", simplex_entries(g.a)}, {"beta", beta}};
  return out;
}

std::pair<CoverDatum, GerbeConnection> gerbe_from_json(const Json& j) {
  expect_kind(j, "gerbe");
  std::map<std::string, CdgaPtr> algebras;
  for (const auto& [name, a] : field(j, "algebras").items()) algebras[name] = cdga_from_json(a);
  auto lookup = [&](const Json& r) {
    auto it = algebras.find(string_from(r));
    if (it == algebras.end()) throw ParseError("unknown algebra '" + r.get<std::string>() + "'");
    return it->second;
  };
  CoverDatum c;
  c.name = j.contains("name") ? string_from(j.at("name")) : std::string();
  c.charts = index_from(field(j, "charts"));
  c.global = lookup(field(j, "global"));
  for (const auto& p : field(j, "pieces")) c.pieces[indices_from(field(p, "simplex"))] = lookup(field(p, "algebra"));
  for (const auto& f : field(j, "faces"))
    c.faces[{indices_from(field(f, "simplex")), index_from(field(f, "index"))}] = matrix_from_json(field(f, "matrix"));
  for (const auto& m : field(j, "restrictions")) c.restrictions.push_back(matrix_from_json(m));
  GerbeConnection g;
  if (j.contains("connection")) {
    const Json& con = j.at("connection");
    if (con.contains("A")) g.A = simplex_entries_from(con.at("A"));
    if (con.contains("a")) g.a = simplex_entries_from(con.at("a"));
    if (con.contains("beta")) g.beta = list_of<SparseVector>(con.at("beta"), vector_from_json);
  }
  return {std::move(c), std::move(g)};
}

Json twist_to_json(const TwistClass& t, const std::string& name, const std::string& model_name) {
  return {{"kind", "twist"}, {"name", name}, {"model", model_name}, {"lambda", vector_to_json(t.lambda)}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(1) << '\n';
}

FixtureLibrary::FixtureLibrary(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path FixtureLibrary::default_directory() {
  if (const char* env = std::getenv("TWISTCOH_FIXTURES"); env && *env) return env;
  return TWISTCOH_DEFAULT_FIXTURES;
}

bool FixtureLibrary::has(const std::string& name) const { return std::filesystem::exists(dir_ / (name + ".json")); }

Json FixtureLibrary::raw(const std::string& name) const {
  if (!has(name)) throw ParseError("no fixture named '" + name + "' in " + dir_.string());
  return read_json_file(dir_ / (name + ".json"));
}

std::string FixtureLibrary::kind(const std::string& name) const { return string_from(field(raw(name), "kind")); }

CdgaPtr FixtureLibrary::resolve_cdga(const Json& j) const {
  if (j.is_string()) return cdga(j.get<std::string>());
  return cdga_from_json(j);
}

CdgaPtr FixtureLibrary::cdga(const std::string& name) const { return cdga_from_json(raw(name)); }

TwistClass FixtureLibrary::twist_from_json(const Json& j) const {
  expect_kind(j, "twist");
  CdgaPtr model = resolve_cdga(field(j, "model"));
  SparseVector lambda = vector_from_json(field(j, "lambda"));
  if (lambda.support_bound() > model->dim()) throw ParseError("twist class refers to a basis element out of range");
  return make_twist(model, lambda);
}

TwistClass FixtureLibrary::twist(const std::string& name) const { return twist_from_json(raw(name)); }

TopologicalSite FixtureLibrary::site(const std::string& name) const { return site_from_json(raw(name)); }

Presheaf FixtureLibrary::presheaf(const std::string& name) const { return presheaf_from_json(raw(name)); }

FixtureLibrary::Functor FixtureLibrary::functor(const std::string& name) const {
  Json j = raw(name);
  return {site(string_from(field(j, "source"))), site(string_from(field(j, "target"))), functor_from_json(j)};
}

std::pair<CoverDatum, GerbeConnection> FixtureLibrary::gerbe(const std::string& name) const {
  return gerbe_from_json(raw(name));
}

std::vector<std::string> FixtureLibrary::names(const std::string& kind) const {
  std::vector<std::string> out;
  if (!std::filesystem::is_directory(dir_)) return out;
  for (const auto& e : std::filesystem::directory_iterator(dir_)) {
    if (e.path().extension() != ".json") continue;
    Json j = read_json_file(e.path());
    if (j.is_object() && j.value("kind", "") == kind) out.push_back(e.path().stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace twistcoh::io

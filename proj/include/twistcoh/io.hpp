#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "twistcoh/cdga.hpp"
#include "twistcoh/gerbe.hpp"
#include "twistcoh/site.hpp"
#include "twistcoh/twisted.hpp"

namespace twistcoh::io {

using Json = nlohmann::json;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kReportSchema = "twistcoh-report/1";

Json rational_to_json(const Rational& q);
Rational rational_from_json(const Json& j);
// [[index, "p/q"], ...]
Json vector_to_json(const SparseVector& v);
SparseVector vector_from_json(const Json& j);
// {"rows": r, "cols": c, "entries": [[row, col, "p/q"], ...]}
Json matrix_to_json(const SparseMatrix& m);
SparseMatrix matrix_from_json(const Json& j);

// {"kind": "cdga", "name", "degrees", "differential": [[r, c, q]], "product": [[i, j, k, q]], "top_degree"}
Json cdga_to_json(const Cdga& c);
CdgaPtr cdga_from_json(const Json& j);

// Full form: objects, morphisms [[source, target, name]], identities, compositions [[g, f, gf]],
// coverings (per object, lists of morphism ids), pullbacks [[cover, along, object, proj_along,
// proj_cover]]; an optional "topology" block {"points", "opens"} records the space it came from.
Json site_to_json(const TopologicalSite& t);
Json site_to_json(const FiniteSite& s);
// A site with only a "topology" block is rebuilt from it.
TopologicalSite site_from_json(const Json& j);

// {"kind": "presheaf", "site": name, "dims": [...], "maps": [matrix, ...]}
Json presheaf_to_json(const Presheaf& f, const std::string& site_name);
Presheaf presheaf_from_json(const Json& j);

// {"kind": "functor", "source": site, "target": site, "objects": [...], "morphisms": [...]}
Json functor_to_json(const FunctorData& f, const std::string& source, const std::string& target,
                     const std::string& name);
FunctorData functor_from_json(const Json& j);

// {"kind": "gerbe", "name", "charts", "algebras": {name: cdga}, "global": name,
//  "pieces": [{"simplex", "algebra"}], "faces": [{"simplex", "index", "matrix"}],
//  "restrictions": [matrix], "connection": {"A": [{"simplex", "form"}], "a": [...], "beta": [vector]}}
Json gerbe_to_json(const CoverDatum& c, const GerbeConnection& g);
std::pair<CoverDatum, GerbeConnection> gerbe_from_json(const Json& j);

// {"kind": "twist", "name", "model": cdga name or inline cdga, "lambda": vector}
Json twist_to_json(const TwistClass& t, const std::string& name, const std::string& model_name);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

// Named fixtures in a directory; references between files are resolved by name.
class FixtureLibrary {
 public:
  explicit FixtureLibrary(std::filesystem::path dir);
  // $TWISTCOH_FIXTURES if set, else the directory the build was configured with.
  static std::filesystem::path default_directory();

  const std::filesystem::path& directory() const { return dir_; }
  bool has(const std::string& name) const;
  Json raw(const std::string& name) const;
  std::string kind(const std::string& name) const;

  CdgaPtr cdga(const std::string& name) const;
  TwistClass twist(const std::string& name) const;
  TopologicalSite site(const std::string& name) const;
  Presheaf presheaf(const std::string& name) const;
  struct Functor {
    TopologicalSite source;
    TopologicalSite target;
    FunctorData data;
  };
  Functor functor(const std::string& name) const;
  std::pair<CoverDatum, GerbeConnection> gerbe(const std::string& name) const;
  // Names of every fixture of the given kind, sorted.
  std::vector<std::string> names(const std::string& kind) const;

  // Resolves a cdga given inline or by name.
  CdgaPtr resolve_cdga(const Json& j) const;
  TwistClass twist_from_json(const Json& j) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace twistcoh::io

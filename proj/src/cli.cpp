#include "twistcoh/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "twistcoh/fixtures.hpp"
#include "twistcoh/oracle.hpp"
#include "twistcoh/spectral.hpp"

namespace fs = std::filesystem;

namespace twistcoh::cli {

using io::Json;

namespace {

using Options = RunConfig;

struct Outcome {
  bool ok = true;
  Json result = Json::object();
  std::vector<std::string> text;
};

std::string join(const std::vector<std::size_t>& v) {
  std::ostringstream s;
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? " " : "") << v[i];
  return s.str();
}

Json report_json(const ValidationReport& r) {
  Json out = Json::array();
  for (const auto& v : r.violations) out.push_back({{"rule", v.rule}, {"witness", v.witness}, {"detail", v.detail}});
  return out;
}

void report_text(const ValidationReport& r, const std::string& what, std::vector<std::string>& text) {
  if (r.ok()) {
    text.push_back(what + ": valid");
    return;
  }
  text.push_back(what + ": " + std::to_string(r.violations.size()) + " violation(s)");
  for (const auto& v : r.violations) {
    std::string w;
    for (auto x : v.witness) w += (w.empty() ? "" : ",") + std::to_string(x);
    text.push_back("  " + v.rule + " [" + w + "] " + v.detail);
  }
}

// Resolves a path or a fixture name; documents are read together with the library they live in,
// so references by name resolve next to them.
struct Input {
  Json doc;
  io::FixtureLibrary lib;
};

Input load_input(const std::string& arg, const Options& o) {
  fs::path dir = o.fixtures.empty() ? io::FixtureLibrary::default_directory() : fs::path(o.fixtures);
  if (!arg.empty() && arg.front() == '{') {
    try {
      return {Json::parse(arg), io::FixtureLibrary(dir)};
    } catch (const Json::parse_error& e) {
      throw io::ParseError(std::string("inline document: ") + e.what());
    }
  }
  if (fs::exists(arg) && fs::is_regular_file(arg)) {
    fs::path p(arg);
    return {io::read_json_file(p), io::FixtureLibrary(p.has_parent_path() ? p.parent_path() : fs::path("."))};
  }
  io::FixtureLibrary lib(dir);
  if (!lib.has(arg)) throw io::ParseError("'" + arg + "' is neither a file nor a fixture in " + dir.string());
  return {lib.raw(arg), lib};
}

std::string kind_of(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) throw io::ParseError("document has no 'kind'");
  return j.at("kind").get<std::string>();
}

TwistClass twist_from(const Input& in, const Options& o) {
  std::string kind = kind_of(in.doc);
  if (kind == "twist") {
    if (!o.lambda.empty()) throw io::ParseError("--lambda given for a twist document");
    return in.lib.twist_from_json(in.doc);
  }
  if (kind != "cdga") throw io::ParseError("expected a cdga or twist document, got '" + kind + "'");
  CdgaPtr c = io::cdga_from_json(in.doc);
  SparseVector lambda;
  if (!o.lambda.empty()) {
    try {
      lambda = io::vector_from_json(Json::parse(o.lambda));
    } catch (const Json::parse_error& e) {
      throw io::ParseError(std::string("--lambda: ") + e.what());
    }
  }
  if (lambda.support_bound() > c->dim()) throw io::ParseError("--lambda refers to a basis element out of range");
  return make_twist(c, lambda);
}

Outcome cmd_validate(const Options& o) {
  Outcome out;
  Input in = load_input(o.input, o);
  std::string kind = kind_of(in.doc);
  out.result["kind"] = kind;
  ValidationReport r;
  if (kind == "cdga") {
    r = validate_cdga(*io::cdga_from_json(in.doc));
  } else if (kind == "twist") {
    TwistClass t = in.lib.twist_from_json(in.doc);
    r = validate_cdga(*t.algebra);
    if (!t.algebra->differential(t.lambda).empty()) r.add("lambda_closed", {}, "d lambda != 0");
  } else if (kind == "site") {
    r = validate_site(io::site_from_json(in.doc).site);
  } else if (kind == "presheaf") {
    std::string site = in.doc.value("site", "");
    r = validate_presheaf(in.lib.site(site).site.category, io::presheaf_from_json(in.doc));
  } else if (kind == "functor") {
    auto f = in.lib.functor(in.doc.value("name", o.input));
    r = validate_functor(f.source.site.category, f.target.site.category, f.data);
  } else if (kind == "gerbe") {
    auto [c, g] = io::gerbe_from_json(in.doc);
    r = validate_cover(c);
    if (r.ok()) r.merge(validate_connection(c, g));
  } else {
    throw io::ParseError("cannot validate documents of kind '" + kind + "'");
  }
  out.ok = r.ok();
  out.result["valid"] = r.ok();
  out.result["violations"] = report_json(r);
  report_text(r, kind, out.text);
  return out;
}

Outcome cmd_twisted(const Options& o) {
  Outcome out;
  TwistClass t = twist_from(load_input(o.input, o), o);
  const Cdga& c = *t.algebra;
  int max_degree = o.max_degree >= 0 ? o.max_degree : c.top_degree() + 4;
  auto ordinary = cohomology_ring(c).dims;
  auto per = twisted_betti(two_periodic_complex(t));
  auto z = twisted_betti(z_graded_complex(t, max_degree));
  out.result = {{"model", c.name()},
                {"lambda", io::vector_to_json(t.lambda)},
                {"betti", ordinary},
                {"two_periodic", {{"even", per[0]}, {"odd", per[1]}}},
                {"z_graded", z},
                {"max_degree", max_degree}};
  out.text.push_back("model " + c.name() + ", top degree " + std::to_string(c.top_degree()));
  out.text.push_back("ordinary Betti: " + join(ordinary));
  out.text.push_back("two-periodic (H^ev, H^odd) = (" + std::to_string(per[0]) + ", " + std::to_string(per[1]) + ")");
  out.text.push_back("z-graded H^0.." + std::to_string(max_degree) + ": " + join(z));
  return out;
}

Outcome cmd_psi(const Options& o) {
  Outcome out;
  TwistClass t = twist_from(load_input(o.input, o), o);
  const int top = t.algebra->top_degree();
  int p_max = o.p_max >= 0 ? o.p_max : top + 4;
  Json rows = Json::array();
  out.text.push_back("p  chain_map  invertible  expected_invertible  printed_range_chain_map");
  for (int p = std::max(1, o.p_min); p <= p_max; ++p) {
    bool chain = psi_chain_residual(t, p).is_zero();
    bool printed = psi_chain_residual(t, p, true).is_zero();
    bool inv = is_invertible(psi_map(t, p).matrix);
    bool expected = p > top;
    out.ok = out.ok && chain;
    rows.push_back({{"p", p}, {"chain_map", chain}, {"invertible", inv}, {"expected_invertible", expected},
                    {"printed_range_chain_map", printed}});
    std::ostringstream s;
    s << p << "  " << chain << "  " << inv << "  " << expected << "  " << printed;
    out.text.push_back(s.str());
  }
  out.result = {{"model", t.algebra->name()}, {"top_degree", top}, {"rows", rows}};
  return out;
}

Outcome cmd_spectral(const Options& o) {
  Outcome out;
  TwistClass t = twist_from(load_input(o.input, o), o);
  FilteredComplex f = filtered_two_periodic(t);
  SpectralSequence ss = pages(f, o.r_max >= 0 ? o.r_max : t.algebra->top_degree() + 1);
  Json pj = Json::array();
  for (const auto& p : ss.pages) {
    pj.push_back({{"r", p.r}, {"dims", p.dims()}, {"d_rank", rank(p.d)}});
    out.text.push_back("E_" + std::to_string(p.r) + ": " + join(p.dims()) + "  (rank d_" + std::to_string(p.r) +
                       " = " + std::to_string(rank(p.d)) + ")");
  }
  auto einf = ss.e_infinity().parity_dims();
  auto betti = twisted_betti(two_periodic_complex(t));
  bool match = einf == betti;
  out.ok = match;
  out.result = {{"model", t.algebra->name()},
                {"levels", {ss.min_level, ss.max_level}},
                {"pages", pj},
                {"stable_from", ss.stable_from},
                {"e_infinity_parity", einf},
                {"twisted_betti", betti},
                {"e_infinity_matches", match}};
  out.text.push_back("stable from r = " + std::to_string(ss.stable_from));
  out.text.push_back("E_inf (even, odd) = (" + std::to_string(einf[0]) + ", " + std::to_string(einf[1]) +
                     "), twisted Betti (" + std::to_string(betti[0]) + ", " + std::to_string(betti[1]) + ")");
  try {
    D3Check d3 = d3_equals_lambda_cup(f, t);
    out.result["d3_equals_cup"] = d3.equal;
    out.ok = out.ok && d3.equal;
    out.text.push_back(std::string("d_3 equals [lambda] cup: ") + (d3.equal ? "yes" : "no " + d3.witness));
  } catch (const NotApplicable& e) {
    out.result["d3_equals_cup"] = nullptr;
    out.result["d3_not_applicable"] = e.what();
    out.text.push_back(std::string("d_3 check not applicable: ") + e.what());
  }
  return out;
}

Outcome cmd_gerbe(const Options& o) {
  Outcome out;
  Input in = load_input(o.input, o);
  if (kind_of(in.doc) != "gerbe") throw io::ParseError("expected a gerbe document");
  auto [c, g] = io::gerbe_from_json(in.doc);
  ValidationReport r = validate_cover(c);
  if (r.ok()) r.merge(validate_connection(c, g));
  if (!r.ok()) {
    out.ok = false;
    out.result = {{"valid", false}, {"violations", report_json(r)}};
    report_text(r, "gerbe", out.text);
    return out;
  }
  SparseVector lambda = curvature(c, g);
  TheoremReport rep = theorem_main_check(c, g, o.max_degree);
  H0ColumnReport h0 = h0_column_check(c);
  Json induced = Json::array();
  for (const auto& m : rep.induced)
    induced.push_back({{"source", m.source_dim}, {"target", m.target_dim}, {"rank", m.rank}});
  out.ok = rep.square_zero && rep.chain_map && rep.multiplicative && h0.ok;
  out.result = {{"cover", c.name},
                {"valid", true},
                {"curvature", io::vector_to_json(lambda)},
                {"total_dims", rep.total_dims},
                {"power_series_dims", rep.power_series_dims},
                {"induced", induced},
                {"square_zero", rep.square_zero},
                {"chain_map", rep.chain_map},
                {"multiplicative", rep.multiplicative},
                {"isomorphism", rep.isomorphism},
                {"h0_equalizer", {{"ok", h0.ok}, {"equalizer_dims", h0.equalizer_dims}, {"global_dims", h0.global_dims}}}};
  std::string lam;
  for (const auto& e : lambda.entries()) lam += " " + std::to_string(e.index) + ":" + format_rational(e.value);
  out.text.push_back("cover " + c.name + ", " + std::to_string(c.charts) + " chart(s)");
  out.text.push_back("curvature:" + (lam.empty() ? std::string(" 0") : lam));
  out.text.push_back("total complex H: " + join(rep.total_dims));
  out.text.push_back("power series H:  " + join(rep.power_series_dims));
  out.text.push_back(std::string("D^2 = 0: ") + (rep.square_zero ? "yes" : "no") +
                     ", phi chain map: " + (rep.chain_map ? "yes" : "no") +
                     ", multiplicative: " + (rep.multiplicative ? "yes" : "no") +
                     ", iso on cohomology: " + (rep.isomorphism ? "yes" : "no"));
  out.text.push_back(std::string("H0 equalizer matches global forms: ") + (h0.ok ? "yes" : "no"));
  return out;
}

Outcome cmd_site(const Options& o) {
  Outcome out;
  Input in = load_input(o.input, o);
  if (kind_of(in.doc) != "site") throw io::ParseError("expected a site document");
  TopologicalSite t = io::site_from_json(in.doc);
  const FiniteSite& s = t.site;
  ValidationReport r = validate_site(s);
  if (!r.ok()) {
    out.ok = false;
    out.result = {{"valid", false}, {"violations", report_json(r)}};
    report_text(r, "site", out.text);
    return out;
  }
  Presheaf f;
  std::string source = "constant";
  if (!o.presheaf.empty()) {
    Input p = load_input(o.presheaf, o);
    f = io::presheaf_from_json(p.doc);
    source = o.presheaf;
  } else if (o.seeded) {
    oracle::SeededRng rng(o.seed);
    f = oracle::random_presheaf(rng, s.category);
    source = "random seed " + std::to_string(o.seed);
  } else {
    f = constant_presheaf(s);
  }
  ValidationReport pr = validate_presheaf(s.category, f);
  if (!pr.ok()) {
    out.ok = false;
    out.result = {{"valid", false}, {"violations", report_json(pr)}};
    report_text(pr, "presheaf", out.text);
    return out;
  }
  FlabbyResult fl = is_flabby(s, f);
  auto failure = descent_failure(s, f);
  PlusResult sh = sheafify(s, f);
  bool sheaf_ok = satisfies_descent(s, sh.presheaf);
  PlusResult again = sheafify(s, sh.presheaf);
  bool idempotent = is_natural_isomorphism(s.category, sh.presheaf, again.presheaf, again.unit);
  out.ok = sheaf_ok && idempotent;
  out.result = {{"site", s.name},
                {"objects", s.category.object_count()},
                {"morphisms", s.category.morphism_count()},
                {"presheaf", source},
                {"dims", f.dims},
                {"is_sheaf", !failure},
                {"flabby", fl.flabby},
                {"sheafified_dims", sh.presheaf.dims},
                {"sheafified_satisfies_descent", sheaf_ok},
                {"sheafification_idempotent", idempotent}};
  if (!fl.flabby) out.result["flabby_witness"] = {{"object", fl.object}, {"covering", fl.covering}, {"degree", fl.degree}};
  out.text.push_back("site " + s.name + ": " + std::to_string(s.category.object_count()) + " objects, " +
                     std::to_string(s.category.morphism_count()) + " morphisms");
  out.text.push_back("presheaf (" + source + ") dims: " + join(f.dims));
  out.text.push_back(std::string("sheaf: ") + (failure ? "no (" + failure->reason + ")" : "yes"));
  out.text.push_back(std::string("flabby: ") + (fl.flabby ? "yes" : "no, object " + std::to_string(fl.object) +
                                                                        " covering " + std::to_string(fl.covering) +
                                                                        " degree " + std::to_string(fl.degree)));
  out.text.push_back("sheafification dims: " + join(sh.presheaf.dims) +
                     (sheaf_ok ? " (descent holds)" : " (descent FAILS)") +
                     (idempotent ? ", idempotent" : ", NOT idempotent"));
  if (!o.functor.empty()) {
    Input fin = load_input(o.functor, o);
    if (kind_of(fin.doc) != "functor") throw io::ParseError("--functor expects a functor document");
    auto fun = fin.lib.functor(fin.doc.value("name", o.functor));
    if (fun.target.site.name != s.name)
      throw io::ParseError("--functor target '" + fun.target.site.name + "' is not the site '" + s.name + "'");
    ValidationReport fr = validate_functor(fun.source.site.category, s.category, fun.data);
    if (!fr.ok()) {
      out.ok = false;
      out.result["functor_violations"] = report_json(fr);
      report_text(fr, "functor", out.text);
      return out;
    }
    Correspondence p = correspondence_from_functor(fun.source.site.category, s.category, fun.data);
    Presheaf g = constant_presheaf(fun.source.site);
    AdjunctionReport a = adjunction_check(p, f, g);
    out.ok = out.ok && a.ok();
    out.result["adjunction"] = {{"ok", a.ok()},
                                {"unit_natural", a.unit_natural},
                                {"counit_natural", a.counit_natural},
                                {"triangle_left", a.triangle_left},
                                {"triangle_right", a.triangle_right},
                                {"hom_pullback_dim", a.hom_pullback_dim},
                                {"hom_pushforward_dim", a.hom_pushforward_dim},
                                {"bijection_invertible", a.bijection_invertible}};
    out.text.push_back("adjunction along " + fun.source.site.name + " -> " + s.name + ": " +
                       (a.ok() ? "holds" : "FAILS") + " (Hom dims " + std::to_string(a.hom_pullback_dim) + " = " +
                       std::to_string(a.hom_pushforward_dim) + ")");
  }
  return out;
}

Outcome cmd_bs1(const Options& o) {
  Outcome out;
  int max_degree = o.max_degree >= 0 ? o.max_degree : 10;
  BarComplexReport b = bs1_bar_complex(max_degree);
  std::vector<bool> powers(b.powers_nonzero.begin(), b.powers_nonzero.end());
  bool all = std::all_of(powers.begin(), powers.end(), [](bool x) { return x; });
  out.ok = all;
  out.result = {{"max_degree", max_degree}, {"dims", b.dims}, {"generator_powers_nonzero", powers}};
  std::ostringstream s;
  for (std::size_t i = 0; i < b.dims.size(); ++i) s << (i ? "," : "") << b.dims[i];
  out.text.push_back("H^0.." + std::to_string(max_degree) + ": " + s.str());
  out.text.push_back(std::string("powers of the degree-2 generator nonzero: ") + (all ? "yes" : "no"));
  return out;
}

Outcome cmd_export(const Options& o) {
  Outcome out;
  fs::path dir = o.out_dir.empty() ? io::FixtureLibrary::default_directory() : fs::path(o.out_dir);
  fs::create_directories(dir);
  Json names = Json::array();
  for (const auto& [name, doc] : fixtures::all_documents()) {
    io::write_json_file(dir / (name + ".json"), doc);
    names.push_back(name);
  }
  out.result = {{"directory", dir.string()}, {"written", names}};
  out.text.push_back("wrote " + std::to_string(names.size()) + " fixtures to " + dir.string());
  return out;
}

}  // namespace

RunResult run(const RunConfig& o) {
  Outcome out;
  RunResult res;
  try {
    if (o.command == "validate") out = cmd_validate(o);
    else if (o.command == "twisted") out = cmd_twisted(o);
    else if (o.command == "psi") out = cmd_psi(o);
    else if (o.command == "spectral") out = cmd_spectral(o);
    else if (o.command == "gerbe") out = cmd_gerbe(o);
    else if (o.command == "site") out = cmd_site(o);
    else if (o.command == "bs1") out = cmd_bs1(o);
    else if (o.command == "export-fixtures") out = cmd_export(o);
    else throw io::ParseError("unknown command '" + o.command + "'");
  } catch (const io::ParseError& e) {
    res.exit_code = kParseError;
    res.error = std::string("parse error: ") + e.what();
  } catch (const Json::exception& e) {
    res.exit_code = kParseError;
    res.error = std::string("parse error: ") + e.what();
  } catch (const std::exception& e) {
    // Malformed models surface as construction errors (shape, degree, closedness).
    res.exit_code = kValidationFailure;
    res.error = std::string("invalid input: ") + e.what();
  }
  res.report = {{"schema", io::kReportSchema}, {"command", o.command}, {"input", o.input}};
  if (o.seeded) res.report["seed"] = o.seed;
  if (!res.error.empty()) {
    res.report["ok"] = false;
    res.report["error"] = res.error;
    res.text = res.error + "\n";
    return res;
  }
  res.exit_code = out.ok ? kOk : kValidationFailure;
  res.report["ok"] = out.ok;
  res.report["result"] = out.result;
  for (const auto& line : out.text) res.text += line + "\n";
  return res;
}

std::string RunResult::render(const std::string& format) const {
  return format == "json" ? report.dump(2) + "\n" : text;
}

}  // namespace twistcoh::cli

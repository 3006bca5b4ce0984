#include <iostream>

#include <CLI11.hpp>

#include "twistcoh/cli.hpp"

using twistcoh::cli::RunConfig;

int main(int argc, char** argv) {
  CLI::App app{"Exact twisted de Rham, gerbe and finite-site computations"};
  app.require_subcommand(1);
  RunConfig o;
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--fixtures", o.fixtures, "Fixture directory (default: $TWISTCOH_FIXTURES or the bundled one)");
  app.add_option("--seed", o.seed, "Seed for randomized inputs")->each([&](const std::string&) { o.seeded = true; });

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("input", o.input, "JSON file, fixture name or inline JSON document")->required();
  };
  auto add_lambda = [&](CLI::App* sub) {
    sub->add_option("--lambda", o.lambda, "Twist class as a sparse vector, e.g. [[7,\"1\"]]");
  };
  auto* validate = app.add_subcommand("validate", "Validate a cdga, twist, site, presheaf, functor or gerbe document");
  add_input(validate);
  auto* twisted = app.add_subcommand("twisted", "Betti numbers of both twisted complexes");
  add_input(twisted);
  add_lambda(twisted);
  twisted->add_option("--max-degree", o.max_degree)->check(CLI::NonNegativeNumber);
  auto* psi = app.add_subcommand("psi", "Chain-map and invertibility verdicts for the comparison maps");
  add_input(psi);
  add_lambda(psi);
  psi->add_option("--p-min", o.p_min)->check(CLI::PositiveNumber);
  psi->add_option("--p-max", o.p_max)->check(CLI::PositiveNumber);
  auto* spectral = app.add_subcommand("spectral", "Pages of the form-degree spectral sequence");
  add_input(spectral);
  add_lambda(spectral);
  spectral->add_option("--r-max", o.r_max)->check(CLI::NonNegativeNumber);
  auto* gerbe = app.add_subcommand("gerbe", "Curvature, total complex cohomology and the comparison verdict");
  add_input(gerbe);
  gerbe->add_option("--max-degree", o.max_degree)->check(CLI::NonNegativeNumber);
  auto* site = app.add_subcommand("site", "Sheaf checks, sheafification and adjunction on a finite site");
  add_input(site);
  site->add_option("--presheaf", o.presheaf, "Presheaf file or fixture name (default: constant)");
  site->add_option("--functor", o.functor, "Functor into this site for the adjunction check");
  auto* bs1 = app.add_subcommand("bs1", "Cohomology of the bar complex of the circle");
  bs1->add_option("--max-degree", o.max_degree)->check(CLI::NonNegativeNumber);
  auto* exp = app.add_subcommand("export-fixtures", "Write the bundled fixture library as JSON");
  exp->add_option("--dir", o.out_dir, "Target directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return twistcoh::cli::kParseError;
  }
  o.command = app.get_subcommands().front()->get_name();

  auto result = twistcoh::cli::run(o);
  if (!result.error.empty()) std::cerr << result.error << '\n';
  if (result.error.empty() || o.format == "json") std::cout << result.render(o.format);
  return result.exit_code;
}

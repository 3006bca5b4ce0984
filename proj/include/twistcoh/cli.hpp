#pragma once

#include <cstdint>
#include <string>

#include "twistcoh/io.hpp"

namespace twistcoh::cli {

enum ExitCode { kOk = 0, kValidationFailure = 1, kParseError = 2 };

struct RunConfig {
  // validate | twisted | psi | spectral | gerbe | site | bs1 | export-fixtures
  std::string command;
  // File path, fixture name, or an inline JSON document starting with '{'.
  std::string input;
  std::string lambda;    // sparse vector JSON, for cdga inputs
  std::string presheaf;  // site: presheaf file or fixture (default: constant)
  std::string functor;   // site: functor into the site for the adjunction check
  std::string fixtures;  // fixture directory override
  std::string format = "text";
  std::string out_dir;   // export-fixtures target
  int max_degree = -1;   // -1: top degree + 4 (bs1: 10)
  int p_min = 1;
  int p_max = -1;        // -1: top degree + 4
  int r_max = -1;
  std::uint64_t seed = 0;
  bool seeded = false;
};

struct RunResult {
  int exit_code = kOk;
  io::Json report;  // schema twistcoh-report/1
  std::string text;
  std::string error;

  std::string render(const std::string& format) const;
};

RunResult run(const RunConfig& config);

}  // namespace twistcoh::cli

#pragma once

#include <string>
#include <vector>

namespace twistcoh {

struct Violation {
  std::string rule;
  std::vector<long> witness;  // basis indices, multi-indices or object ids depending on the rule
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  void add(std::string rule, std::vector<long> witness, std::string detail = {}) {
    violations.push_back({std::move(rule), std::move(witness), std::move(detail)});
  }
  void merge(const ValidationReport& o, const std::string& prefix = {}) {
    for (const auto& v : o.violations) violations.push_back({prefix + v.rule, v.witness, v.detail});
  }
  bool has(const std::string& rule) const {
    for (const auto& v : violations)
      if (v.rule == rule) return true;
    return false;
  }
};

}  // namespace twistcoh

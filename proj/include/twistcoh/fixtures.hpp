#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "twistcoh/gerbe.hpp"
#include "twistcoh/io.hpp"
#include "twistcoh/site.hpp"
#include "twistcoh/twisted.hpp"

// Builders for the bundled fixture library. The JSON files under fixtures/ are generated from
// these by `twistcoh export-fixtures`.
namespace twistcoh::fixtures {

CdgaPtr point();
CdgaPtr s3();     // Lambda(x3)
CdgaPtr t3();     // Lambda(a1, b1, c1)
CdgaPtr s2xs3();  // Q[s2]/s^2 (x) Lambda(y3)
CdgaPtr cp(int n);  // Q[s2]/s^(n+1)
// Lambda(u1, s2; du = s) divided by u s, so the cohomology is Q.
CdgaPtr acyclic_us();
// Lambda(v2, w3; dv = w) divided by v w, cohomology Q; carries the exact twists.
CdgaPtr e23();
CdgaPtr t3_us();
CdgaPtr t3_e23();
CdgaPtr s3_e23();

struct NamedTwist {
  std::string name;
  std::string model;
  TwistClass twist;
};
std::vector<NamedTwist> twists();

TopologicalSite site_point();
TopologicalSite site_two_cover();
TopologicalSite site_disjoint();
TopologicalSite site_circle3();
TopologicalSite site_line3();
std::vector<TopologicalSite> sites();

// The functor between topological sites induced by an order-preserving map of opens.
FunctorData inclusion_functor(const TopologicalSite& source, const TopologicalSite& target,
                              const std::vector<std::size_t>& objects);

struct NamedFunctor {
  std::string name;
  std::string source;
  std::string target;
  FunctorData data;
};
std::vector<NamedFunctor> functors();

struct NamedGerbe {
  std::string name;
  CoverDatum cover;
  GerbeConnection connection;
};
NamedGerbe gerbe_point();
NamedGerbe gerbe_t3_e23_single();
NamedGerbe gerbe_s3_e23_single();
NamedGerbe gerbe_t3_e23_two();
NamedGerbe gerbe_mv_circle();
NamedGerbe gerbe_t3_stretch(std::uint64_t seed = 0);
std::vector<NamedGerbe> gerbes();
// Fresh random connection on the three-chart stretch cover: nonzero A on the triple overlap.
GerbeConnection stretch_connection(const CoverDatum& cover, std::uint64_t seed);

// Every bundled fixture as (file stem, document).
std::vector<std::pair<std::string, io::Json>> all_documents();

}  // namespace twistcoh::fixtures

#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "twistcoh/linalg.hpp"
#include "twistcoh/report.hpp"

namespace twistcoh {

class MissingPullback : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Morphism {
  std::size_t source;
  std::size_t target;
  std::string name;
};

class FiniteCategory {
 public:
  FiniteCategory() = default;
  // compositions: triples (g, f, g after f) for every composable pair.
  FiniteCategory(std::vector<std::string> objects, std::vector<Morphism> morphisms, std::vector<std::size_t> identities,
                 const std::vector<std::array<std::size_t, 3>>& compositions);

  std::size_t object_count() const { return objects_.size(); }
  std::size_t morphism_count() const { return morphisms_.size(); }
  const std::string& object_name(std::size_t i) const { return objects_.at(i); }
  const std::vector<std::string>& objects() const { return objects_; }
  const Morphism& morphism(std::size_t m) const { return morphisms_.at(m); }
  const std::vector<Morphism>& morphisms() const { return morphisms_; }
  std::size_t identity(std::size_t object) const { return identities_.at(object); }
  const std::vector<std::size_t>& identities() const { return identities_; }
  // g after f; npos when not composable or undefined.
  std::size_t compose(std::size_t g, std::size_t f) const;
  const std::vector<std::size_t>& hom(std::size_t a, std::size_t b) const { return hom_.at(a).at(b); }
  // Morphisms with the given target.
  std::vector<std::size_t> into(std::size_t target) const;
  std::vector<std::array<std::size_t, 3>> composition_triples() const;

  ValidationReport validate() const;

 private:
  std::vector<std::string> objects_;
  std::vector<Morphism> morphisms_;
  std::vector<std::size_t> identities_;
  std::vector<std::vector<std::size_t>> comp_;
  std::vector<std::vector<std::vector<std::size_t>>> hom_;
};

using Covering = std::vector<std::size_t>;  // morphism ids with a common target

// Fibre product of a covering morphism c: A -> V with a morphism m: W -> V.
struct PullbackWitness {
  std::size_t cover;
  std::size_t along;
  std::size_t object;      // P
  std::size_t proj_along;  // P -> W, the pulled-back covering morphism
  std::size_t proj_cover;  // P -> A
};

struct FiniteSite {
  std::string name;
  FiniteCategory category;
  std::vector<std::vector<Covering>> coverings;  // per object
  std::map<std::pair<std::size_t, std::size_t>, PullbackWitness> pullbacks;

  const PullbackWitness& pullback(std::size_t cover, std::size_t along) const;
  // Objects covered by the empty family.
  bool is_empty_object(std::size_t object) const;
  // Index of the covering of `object` with the same morphism set, or npos.
  std::size_t find_covering(std::size_t object, const Covering& family) const;
};

ValidationReport validate_site(const FiniteSite& site);

// Site of a finite topological space: objects are the given opens (must include the whole
// space and be closed under intersection), morphisms are inclusions, coverings are all
// families with union equal to the target, fibre products are intersections.
struct TopologicalSite {
  FiniteSite site;
  std::vector<std::set<int>> opens;
  int points = 0;
};
TopologicalSite topological_site(int points, std::vector<std::set<int>> opens, std::string name);

struct Presheaf {
  std::vector<std::size_t> dims;     // per object
  std::vector<SparseMatrix> maps;    // per morphism m: A -> B, a dims[A] x dims[B] matrix
};

ValidationReport validate_presheaf(const FiniteCategory& c, const Presheaf& f);
// Q^k on objects not covered by the empty family, 0 on those that are.
Presheaf constant_presheaf(const FiniteSite& site, std::size_t k = 1);
Presheaf skyscraper_presheaf(const TopologicalSite& t, int point);
// Functions on points: the product of all skyscrapers.
Presheaf point_functions_presheaf(const TopologicalSite& t);

// A morphism of presheaves: per object a dims_target x dims_source matrix.
using PresheafMap = std::vector<SparseMatrix>;
bool is_natural(const FiniteCategory& c, const Presheaf& a, const Presheaf& b, const PresheafMap& t);
bool is_natural_isomorphism(const FiniteCategory& c, const Presheaf& a, const Presheaf& b, const PresheafMap& t);
PresheafMap identity_map(const Presheaf& f);
PresheafMap compose_maps(const PresheafMap& g, const PresheafMap& f);
// Basis of Nat(a, b), each transformation flattened column-major object by object.
std::vector<PresheafMap> natural_transformations(const FiniteCategory& c, const Presheaf& a, const Presheaf& b);

// Iterated fibre products over a covering.
struct CechComplex {
  CochainComplex complex;
  std::vector<std::vector<std::vector<std::size_t>>> tuples;  // per degree p, the index tuples
  std::vector<std::vector<std::size_t>> objects;              // per degree, fibre product object
};
CechComplex cech_complex(const FiniteSite& site, std::size_t object, const Covering& tau, const Presheaf& f, int p_max);

struct FlabbyResult {
  bool flabby = true;
  std::size_t object = npos;
  std::size_t covering = npos;
  int degree = 0;
};
// Higher Cech cohomology of every covering, degrees 1..min(k_max, |tau|-1).
FlabbyResult is_flabby(const FiniteSite& site, const Presheaf& f, int k_max = 2);

struct DescentFailure {
  std::size_t object;
  std::size_t covering;
  std::string reason;
};
// First covering where F(V) -> H^0(tau, F) is not an isomorphism.
std::optional<DescentFailure> descent_failure(const FiniteSite& site, const Presheaf& f);
inline bool satisfies_descent(const FiniteSite& site, const Presheaf& f) { return !descent_failure(site, f); }

struct PlusResult {
  Presheaf presheaf;
  PresheafMap unit;  // F -> P(F)
};
PlusResult plus_construction(const FiniteSite& site, const Presheaf& f);
PlusResult sheafify(const FiniteSite& site, const Presheaf& f);  // P(P(F)) with the composite unit

// A correspondence (profunctor) from G to H: elements e = (v in G, u in H) with actions
// e o g for g: v' -> v in G and h o e for h: u -> u' in H. A functor f: G -> H gives the
// elements H(f v, u); inclusions into an ambient category give K(f v, i u).
struct Correspondence {
  struct Element {
    std::size_t v;
    std::size_t u;
    std::size_t tag;  // ambient morphism when built from an ambient category, else npos
  };
  FiniteCategory source;  // G
  FiniteCategory target;  // H
  std::vector<Element> elements;
  std::vector<std::vector<std::size_t>> pre;   // pre[e][g] = e o g, npos if not composable
  std::vector<std::vector<std::size_t>> post;  // post[h][e] = h o e

  std::vector<std::size_t> with_target(std::size_t u) const;
  std::vector<std::size_t> with_source(std::size_t v) const;
  ValidationReport validate() const;
};

struct FunctorData {
  std::vector<std::size_t> objects;    // per source object
  std::vector<std::size_t> morphisms;  // per source morphism
};
ValidationReport validate_functor(const FiniteCategory& a, const FiniteCategory& b, const FunctorData& f);

Correspondence correspondence_from_functor(const FiniteCategory& g, const FiniteCategory& h, const FunctorData& f);
Correspondence correspondence_from_ambient(const FiniteCategory& g, const FiniteCategory& h, const FiniteCategory& k,
                                           const FunctorData& fg, const FunctorData& fh);
Correspondence identity_correspondence(const FiniteCategory& c);

// f_* F(U) = lim over elements with target U; f^* F(V) = colim over elements with source V.
// Ambient space at an object: the direct sum of F over the elements attached to it.
struct PushforwardData {
  Presheaf result;
  std::vector<std::vector<std::size_t>> elements;  // per H object, elements with that target
  std::vector<std::vector<std::size_t>> offsets;
  std::vector<std::size_t> ambient_dim;
  std::vector<std::size_t> position;               // per element, index in its object's list
  std::vector<std::vector<SparseVector>> basis;    // kernel basis in ambient coordinates
  std::vector<std::shared_ptr<const Echelon>> solver;
};
struct PullbackData {
  Presheaf result;
  std::vector<std::vector<std::size_t>> elements;  // per G object, elements with that source
  std::vector<std::vector<std::size_t>> offsets;
  std::vector<std::size_t> ambient_dim;
  std::vector<std::size_t> position;
  std::vector<std::shared_ptr<const Quotient>> quotient;
};

PushforwardData pushforward(const Correspondence& p, const Presheaf& f);
PullbackData pullback(const Correspondence& p, const Presheaf& f);
// Coordinates in the kernel basis of an ambient vector at H object u.
SparseVector pushforward_coordinates(const PushforwardData& d, std::size_t u, const SparseVector& ambient);
// Throws std::domain_error if the vector is not a compatible family.
SparseVector pullback_coordinates(const PullbackData& d, std::size_t v, const SparseVector& ambient);
// f_* t and f^* t for a presheaf map t between the presheaves a and b were built from.
PresheafMap pushforward_map(const Correspondence& p, const PushforwardData& a, const PushforwardData& b,
                            const PresheafMap& t);
PresheafMap pullback_map(const Correspondence& p, const PullbackData& a, const PullbackData& b, const PresheafMap& t);

struct AdjunctionReport {
  bool unit_natural = false;
  bool counit_natural = false;
  bool triangle_left = false;   // counit f^* after f^* unit = id on f^* F
  bool triangle_right = false;  // f_* counit after unit f_* = id on f_* G
  std::size_t hom_pullback_dim = 0;  // dim Nat(f^* F, G)
  std::size_t hom_pushforward_dim = 0;  // dim Nat(F, f_* G)
  bool bijection_invertible = false;
  bool ok() const {
    return unit_natural && counit_natural && triangle_left && triangle_right && hom_pullback_dim == hom_pushforward_dim &&
           bijection_invertible;
  }
};
// f from G to H, F on H, G on G.
AdjunctionReport adjunction_check(const Correspondence& p, const Presheaf& f_on_h, const Presheaf& g_on_g);

// law(p_elem, q_elem) = r_elem for composable elements of P: G -> H and Q: H -> L into R: G -> L.
using CompositionLaw = std::map<std::pair<std::size_t, std::size_t>, std::size_t>;
CompositionLaw ambient_composition_law(const Correspondence& p, const Correspondence& q, const Correspondence& r,
                                       const FiniteCategory& k);
CompositionLaw functor_composition_law(const Correspondence& p, const Correspondence& q, const Correspondence& r,
                                       const FunctorData& g);
ValidationReport validate_composition_law(const Correspondence& p, const Correspondence& q, const Correspondence& r,
                                          const CompositionLaw& law);

struct ComparisonResult {
  PresheafMap map;  // (g f)_* F -> g_* f_* F
  bool natural = false;
  bool isomorphism = false;
  std::vector<std::size_t> source_dims;
  std::vector<std::size_t> target_dims;
};
ComparisonResult compose_pushforward_compare(const Correspondence& p, const Correspondence& q, const Correspondence& r,
                                             const CompositionLaw& law, const Presheaf& f);

}  // namespace twistcoh

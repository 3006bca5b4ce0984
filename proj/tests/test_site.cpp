#include <doctest.h>

#include <map>

#include "test_support.hpp"
#include "twistcoh/fixtures.hpp"
#include "twistcoh/site.hpp"

using namespace twistcoh;
namespace fx = twistcoh::fixtures;

namespace {

TopologicalSite site_named(const std::string& name) {
  for (auto& s : fx::sites())
    if (s.site.name == name) return s;
  throw std::invalid_argument(name);
}

struct NamedCorrespondence {
  std::string name;
  TopologicalSite source;
  TopologicalSite target;
  FunctorData functor;
  Correspondence corr;
};

std::vector<NamedCorrespondence> functor_fixtures() {
  std::vector<NamedCorrespondence> out;
  for (const auto& f : fx::functors()) {
    auto s = site_named(f.source), t = site_named(f.target);
    out.push_back({f.name, s, t, f.data, correspondence_from_functor(s.site.category, t.site.category, f.data)});
  }
  return out;
}

FunctorData identity_functor(const TopologicalSite& s) {
  std::vector<std::size_t> objects(s.site.category.object_count());
  for (std::size_t i = 0; i < objects.size(); ++i) objects[i] = i;
  return fx::inclusion_functor(s, s, objects);
}

std::size_t object_of(const TopologicalSite& t, const std::set<int>& open) {
  for (std::size_t i = 0; i < t.opens.size(); ++i)
    if (t.opens[i] == open) return i;
  throw std::invalid_argument("no such open");
}

std::size_t inclusion(const TopologicalSite& t, std::size_t from, std::size_t to) {
  return t.site.category.hom(from, to).at(0);
}

// Presheaf with the given dimensions whose restriction maps are identities between equal
// nonzero dimensions and zero otherwise.
Presheaf identity_presheaf(const FiniteCategory& c, std::vector<std::size_t> dims) {
  Presheaf f{std::move(dims), {}};
  for (const auto& m : c.morphisms()) {
    std::size_t r = f.dims[m.source], k = f.dims[m.target];
    f.maps.push_back(r == k ? SparseMatrix::identity(r) : SparseMatrix::zero(r, k));
  }
  return f;
}

// Cohomology in degrees below n; the complex is built one degree further.
std::vector<std::size_t> low(const CochainComplex& c, std::size_t n) {
  auto d = c.cohomology_dims();
  d.resize(n);
  return d;
}

}  // namespace

TEST_SUITE("site") {
  TEST_CASE("fixture sites and functors validate") {
    for (const auto& s : fx::sites()) {
      INFO(s.site.name);
      CHECK(validate_site(s.site).ok());
      CHECK(validate_presheaf(s.site.category, constant_presheaf(s.site)).ok());
      CHECK(validate_presheaf(s.site.category, point_functions_presheaf(s)).ok());
    }
    for (const auto& f : functor_fixtures()) {
      INFO(f.name);
      CHECK(validate_functor(f.source.site.category, f.target.site.category, f.functor).ok());
      CHECK(f.corr.validate().ok());
    }
    auto circle = fx::site_circle3();
    CHECK(circle.site.is_empty_object(object_of(circle, {})));
    CHECK_FALSE(circle.site.is_empty_object(0));
  }

  TEST_CASE("Cech complex examples") {
    auto two = fx::site_two_cover();
    auto f = constant_presheaf(two.site);
    std::size_t U = 0, A = 1, B = 2;
    auto id_cover = two.site.find_covering(U, {two.site.category.identity(U)});
    REQUIRE(id_cover != npos);
    auto id_complex = cech_complex(two.site, U, two.site.coverings[U][id_cover], point_functions_presheaf(two), 3);
    CHECK(low(id_complex.complex, 4) == std::vector<std::size_t>{3, 0, 0, 0});

    Covering ab{inclusion(two, A, U), inclusion(two, B, U)};
    CHECK(low(cech_complex(two.site, U, ab, f, 2).complex, 3) == std::vector<std::size_t>{1, 0, 0});

    auto circle = fx::site_circle3();
    Covering arcs{inclusion(circle, 1, 0), inclusion(circle, 2, 0), inclusion(circle, 3, 0)};
    auto cech = cech_complex(circle.site, 0, arcs, constant_presheaf(circle.site), 2);
    cech.complex.check_square_zero();
    CHECK(low(cech.complex, 3) == std::vector<std::size_t>{1, 1, 0});
  }

  TEST_CASE("is_flabby examples") {
    auto point = fx::site_point();
    CHECK(is_flabby(point.site, constant_presheaf(point.site, 3)).flabby);
    auto circle = fx::site_circle3();
    auto r = is_flabby(circle.site, constant_presheaf(circle.site));
    CHECK_FALSE(r.flabby);
    CHECK(r.degree == 1);
    CHECK(r.object == 0);
    auto two = fx::site_two_cover();
    CHECK(is_flabby(two.site, point_functions_presheaf(two)).flabby);
  }

  TEST_CASE("plus construction examples") {
    auto circle = fx::site_circle3();
    auto sheaf = point_functions_presheaf(circle);
    CHECK(satisfies_descent(circle.site, sheaf));
    auto plus = plus_construction(circle.site, sheaf);
    CHECK(is_natural_isomorphism(circle.site.category, sheaf, plus.presheaf, plus.unit));

    // Zero on the whole space, Q on the three smaller opens: gluing fails on {A, B}.
    auto two = fx::site_two_cover();
    auto no_glue = identity_presheaf(two.site.category, {0, 1, 1, 1});
    CHECK(validate_presheaf(two.site.category, no_glue).ok());
    CHECK_FALSE(satisfies_descent(two.site, no_glue));
    auto sh = sheafify(two.site, no_glue);
    CHECK(satisfies_descent(two.site, sh.presheaf));
    CHECK(sh.presheaf.dims == std::vector<std::size_t>{1, 1, 1, 1});
    CHECK(is_natural(two.site.category, no_glue, sh.presheaf, sh.unit));

    // Constant presheaf on two disjoint opens: sections over the union double.
    auto disjoint = fx::site_disjoint();
    auto all_q = identity_presheaf(disjoint.site.category, {1, 1, 1, 1});
    CHECK(sheafify(disjoint.site, all_q).presheaf.dims == std::vector<std::size_t>{2, 1, 1, 0});
    CHECK(sheafify(disjoint.site, constant_presheaf(disjoint.site)).presheaf.dims ==
          std::vector<std::size_t>{2, 1, 1, 0});
  }

  TEST_CASE("pushforward examples") {
    auto circle = fx::site_circle3();
    auto id = identity_correspondence(circle.site.category);
    for (const auto& f : {constant_presheaf(circle.site), point_functions_presheaf(circle)}) {
      auto push = pushforward(id, f);
      CHECK(push.result.dims == f.dims);
      CHECK(validate_presheaf(circle.site.category, push.result).ok());
      auto pull = pullback(id, f);
      CHECK(pull.result.dims == f.dims);
    }

    // The point sent to {0} in the disjoint site: nothing maps into {1} or the empty open.
    auto point = fx::site_point(), disjoint = fx::site_disjoint();
    auto p = correspondence_from_functor(point.site.category, disjoint.site.category,
                                         fx::inclusion_functor(point, disjoint, {1}));
    auto push = pushforward(p, constant_presheaf(point.site, 2));
    CHECK(push.result.dims == std::vector<std::size_t>{2, 2, 0, 0});
    CHECK(p.with_target(2).empty());
  }

  TEST_CASE("pullback examples") {
    auto point = fx::site_point(), line = fx::site_line3(), circle = fx::site_circle3();
    auto line_in_circle = fx::inclusion_functor(line, circle, {0, 1, 2, 3, 4, 6, 7});
    oracle::SeededRng rng(7);
    auto f = oracle::random_presheaf(rng, line.site.category);

    // Through {3}: the line's {ab} is initial among opens containing it.
    auto initial = correspondence_from_ambient(point.site.category, line.site.category, circle.site.category,
                                               fx::inclusion_functor(point, circle, {4}), line_in_circle);
    CHECK(pullback(initial, f).result.dims[0] == f.dims[object_of(line, {1})]);

    // Through {4}: only U, A and C contain it and A, C have no common lower bound among them.
    auto no_initial = correspondence_from_ambient(point.site.category, line.site.category, circle.site.category,
                                                  fx::inclusion_functor(point, circle, {5}), line_in_circle);
    auto elems = no_initial.with_source(0);
    CHECK(elems.size() == 3);
    auto pulled = pullback(no_initial, f);
    CHECK(pulled.result.dims[0] == oracle::exhaustive_colimit(oracle::pullback_diagram(no_initial, f, elems)));

    for (const auto& nc : functor_fixtures()) {
      auto g = constant_presheaf(nc.target.site);
      auto pb = pullback(nc.corr, g);
      for (std::size_t v = 0; v < nc.functor.objects.size(); ++v)
        CHECK(pb.result.dims[v] == g.dims[nc.functor.objects[v]]);
    }
  }

  TEST_CASE("adjunction examples") {
    auto circle = fx::site_circle3();
    auto id = identity_correspondence(circle.site.category);
    auto f = point_functions_presheaf(circle);
    auto rep = adjunction_check(id, f, f);
    CHECK(rep.ok());
    CHECK(rep.hom_pullback_dim == natural_transformations(circle.site.category, f, f).size());

    for (const auto& nc : functor_fixtures()) {
      INFO(nc.name);
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        oracle::SeededRng rng(seed);
        auto on_h = oracle::random_presheaf(rng, nc.target.site.category);
        auto on_g = oracle::random_presheaf(rng, nc.source.site.category);
        auto r = adjunction_check(nc.corr, on_h, on_g);
        CHECK(r.triangle_left);
        CHECK(r.triangle_right);
        CHECK(r.hom_pullback_dim == r.hom_pushforward_dim);
        CHECK(r.ok());
      }
    }
  }

  TEST_CASE("comparison map for composite pushforwards") {
    auto disjoint = fx::site_disjoint(), line = fx::site_line3(), circle = fx::site_circle3();
    auto fd = fx::inclusion_functor(disjoint, line, {0, 1, 3, 6});
    auto gd = fx::inclusion_functor(line, circle, {0, 1, 2, 3, 4, 6, 7});
    auto gf = fx::inclusion_functor(disjoint, circle, {0, 1, 3, 7});
    auto p = correspondence_from_functor(disjoint.site.category, line.site.category, fd);
    auto q = correspondence_from_functor(line.site.category, circle.site.category, gd);
    auto r = correspondence_from_functor(disjoint.site.category, circle.site.category, gf);
    auto law = functor_composition_law(p, q, r, gd);
    CHECK(validate_composition_law(p, q, r, law).ok());
    auto cmp = compose_pushforward_compare(p, q, r, law, point_functions_presheaf(disjoint));
    CHECK(cmp.natural);
    MESSAGE("disjoint -> line3 -> circle3 comparison is an isomorphism: " << cmp.isomorphism);

    // f = id and g = id.
    auto idd = identity_functor(disjoint);
    auto pid = correspondence_from_functor(disjoint.site.category, disjoint.site.category, idd);
    auto law_f = functor_composition_law(pid, p, p, fd);
    CHECK(compose_pushforward_compare(pid, p, p, law_f, constant_presheaf(disjoint.site)).isomorphism);
    auto idl = identity_functor(line);
    auto qid = correspondence_from_functor(line.site.category, line.site.category, idl);
    auto law_g = functor_composition_law(p, qid, p, idl);
    CHECK(compose_pushforward_compare(p, qid, p, law_g, constant_presheaf(disjoint.site)).isomorphism);
  }

  TEST_CASE("property: sheafification of random presheaves") {
    for (const auto& s : fx::sites()) {
      INFO(s.site.name);
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        oracle::SeededRng rng(seed);
        auto f = oracle::random_presheaf(rng, s.site.category);
        REQUIRE(validate_presheaf(s.site.category, f).ok());
        auto sh = sheafify(s.site, f);
        CHECK(satisfies_descent(s.site, sh.presheaf));
        CHECK(is_natural(s.site.category, f, sh.presheaf, sh.unit));
        auto again = plus_construction(s.site, sh.presheaf);
        CHECK(is_natural_isomorphism(s.site.category, sh.presheaf, again.presheaf, again.unit));
      }
    }
  }

  TEST_CASE("property: Cech differentials square to zero") {
    for (const auto& s : fx::sites()) {
      oracle::SeededRng rng(3);
      auto f = oracle::random_presheaf(rng, s.site.category);
      for (std::size_t v = 0; v < s.site.coverings.size(); ++v)
        for (const auto& tau : s.site.coverings[v]) CHECK_NOTHROW(cech_complex(s.site, v, tau, f, 2).complex.check_square_zero());
    }
  }

  TEST_CASE("property: limits and colimits agree with the exhaustive oracle") {
    for (const auto& nc : functor_fixtures()) {
      INFO(nc.name);
      oracle::SeededRng rng(11);
      auto on_g = oracle::random_presheaf(rng, nc.source.site.category);
      auto on_h = oracle::random_presheaf(rng, nc.target.site.category);
      auto push = pushforward(nc.corr, on_g);
      for (std::size_t u = 0; u < nc.target.site.category.object_count(); ++u)
        CHECK(push.result.dims[u] ==
              oracle::exhaustive_limit(oracle::pushforward_diagram(nc.corr, on_g, nc.corr.with_target(u))).dim);
      auto pull = pullback(nc.corr, on_h);
      for (std::size_t v = 0; v < nc.source.site.category.object_count(); ++v)
        CHECK(pull.result.dims[v] ==
              oracle::exhaustive_colimit(oracle::pullback_diagram(nc.corr, on_h, nc.corr.with_source(v))));
    }
  }
}

// Runs the ten acceptance criteria against the bundled fixture library and prints one
// PASS/FAIL line per criterion. Usage: acceptance [criterion numbers...]
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <optional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "twistcoh/fixtures.hpp"
#include "twistcoh/io.hpp"
#include "twistcoh/oracle.hpp"
#include "twistcoh/smith.hpp"
#include "twistcoh/spectral.hpp"

using namespace twistcoh;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: ";
      else detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

const io::FixtureLibrary& lib() {
  static const io::FixtureLibrary l(io::FixtureLibrary::default_directory());
  return l;
}

std::vector<std::pair<std::string, TwistClass>> twists() {
  std::vector<std::pair<std::string, TwistClass>> out;
  for (const auto& n : lib().names("twist")) out.emplace_back(n, lib().twist(n));
  return out;
}

std::string dims_text(const std::vector<std::size_t>& d) {
  std::string s;
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
  return s;
}

// 1. d^2 = 0 and Leibniz on every fixture algebra and 100 random ones.
void criterion_1(Verdict& v) {
  std::size_t count = 0;
  auto check = [&](const Cdga& c, const std::string& label) {
    auto r = validate_cdga(c);
    v.require(r.ok(), label + " fails " + (r.ok() ? "" : r.violations.front().rule));
    ++count;
  };
  for (const auto& n : lib().names("cdga")) check(*lib().cdga(n), n);
  for (const auto& [n, t] : twists()) check(*t.algebra, n + " model");
  for (const auto& n : lib().names("gerbe")) {
    auto [cover, conn] = lib().gerbe(n);
    check(*cover.global, n + " global");
    for (const auto& [s, alg] : cover.pieces) check(*alg, n + " piece");
  }
  std::size_t with_d = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    oracle::SeededRng rng(seed);
    auto c = oracle::random_cdga(rng);
    if (!c->d().is_zero()) ++with_d;
    check(*c, "random seed " + std::to_string(seed));
  }
  v.detail << count << " algebras checked, " << with_d << " of the 100 random ones with d != 0";
}

// 2. Twisted Betti numbers of S3 and T3, oracle first.
void criterion_2(Verdict& v) {
  auto s3 = lib().cdga("s3"), t3 = lib().cdga("t3");
  const std::size_t x = s3->basis_of_degree(3).at(0), abc = t3->basis_of_degree(3).at(0);
  using Pair = std::array<std::size_t, 2>;
  struct Case {
    CdgaPtr model;
    std::size_t top;
    int k;
    Pair expected;
  };
  std::vector<Case> cases{{s3, x, 0, {1, 1}}, {s3, x, 1, {0, 0}}, {s3, x, 2, {0, 0}}, {s3, x, 5, {0, 0}},
                          {t3, abc, 1, {3, 3}}, {t3, abc, 2, {3, 3}}, {t3, abc, 5, {3, 3}}};
  for (const auto& c : cases) {
    SparseVector lambda = c.k ? SparseVector::unit(c.top, c.k) : SparseVector();
    std::string label = c.model->name() + " k=" + std::to_string(c.k);
    auto certified = oracle::dense_twisted_betti(*c.model, lambda);
    v.require(certified == c.expected, label + " oracle disagrees with the expected value");
    v.require(twisted_betti(two_periodic_complex(make_twist(c.model, lambda))) == certified,
              label + " main path disagrees with the oracle");
  }
  for (int k : {0, 1, 2, 5}) {
    std::string name = "tw_s3_k" + std::to_string(k);
    auto t = lib().twist(name);
    v.require(twisted_betti(two_periodic_complex(t)) == oracle::dense_twisted_betti(*t.algebra, t.lambda), name);
  }
  v.detail << "S3 k=0,1,2,5 -> (1,1),(0,0),(0,0),(0,0); T3 k=1,2,5 -> (3,3) certified by the dense oracle";
}

// 3. psi chain maps on [1, top+4]; invertible exactly when p > top.
void criterion_3(Verdict& v) {
  std::size_t checked = 0;
  std::vector<std::string> early, late;
  for (const auto& [n, t] : twists()) {
    int top = t.algebra->top_degree();
    for (int p = 1; p <= top + 4; ++p) {
      ++checked;
      v.require(psi_chain_residual(t, p).is_zero(), n + " residual nonzero at p=" + std::to_string(p));
      bool inv = is_invertible(psi_map(t, p).matrix);
      if (p > top && !inv) late.push_back(n + " p=" + std::to_string(p));
      if (p <= top && inv) early.push_back(n + " p=" + std::to_string(p));
    }
  }
  v.require(late.empty(), "not invertible above the top degree: " + (late.empty() ? "" : late.front()));
  std::string list;
  for (const auto& e : early) list += (list.empty() ? "" : ", ") + e;
  v.require(early.empty(), "invertible at or below the top degree (" + std::to_string(early.size()) + "): " + list);
  v.detail << "; " << checked << " (fixture, p) pairs, residual zero on all, invertible on all p > top";
}

// 4. Gauge transformations for 20 random gamma per fixture.
void criterion_4(Verdict& v) {
  std::size_t count = 0;
  for (const auto& [n, t] : twists()) {
    int max = t.algebra->top_degree() + 4;
    auto src = z_graded_complex(t, max);
    auto src_dims = twisted_betti(src);
    auto periodic = twisted_betti(two_periodic_complex(t));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      oracle::SeededRng rng(seed);
      SparseVector gamma = oracle::random_element(rng, *t.algebra, 2);
      auto g = gauge_transform(t, gamma, max);
      auto tgt = z_graded_complex(g.target, max);
      std::string label = n + " seed " + std::to_string(seed);
      v.require(gauge_is_chain_isomorphism(g, src, tgt), label + " not a chain isomorphism");
      v.require(twisted_betti(tgt) == src_dims, label + " z-graded Betti numbers differ");
      v.require(twisted_betti(two_periodic_complex(g.target)) == periodic, label + " two-periodic Betti numbers differ");
      ++count;
    }
  }
  v.detail << count << " gauge transformations";
}

// 5. E-infinity against twisted Betti everywhere; d3 against the cup product on formal models.
void criterion_5(Verdict& v) {
  std::size_t cups = 0;
  for (const auto& [n, t] : twists()) {
    auto f = filtered_two_periodic(t);
    auto ss = pages(f, t.algebra->top_degree() + 1);
    v.require(ss.e_infinity().parity_dims() == twisted_betti(two_periodic_complex(t)), n + " E_inf mismatch");
    const std::string& model = t.algebra->name();
    if (model == "s3" || model == "t3" || model == "s2xs3") {
      v.require(t.algebra->d().is_zero(), n + " expected a formal model");
      v.require(d3_equals_lambda_cup(f, t).equal, n + " d3 differs from the cup product");
      ++cups;
    }
  }
  v.detail << twists().size() << " fixtures, d3 = cup checked on " << cups;
}

// 6. Bar complex of the circle up to degree 10.
void criterion_6(Verdict& v) {
  auto rep = bs1_bar_complex(10);
  v.require(rep.dims == std::vector<std::size_t>{1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1}, "dims " + dims_text(rep.dims));
  auto t = build_total_complex(single_chart_cover(fixtures::point()), GerbeConnection{}, 10);
  v.require(rep.generator.degree == 2 && t.D(2).apply(rep.generator.v).empty(), "generator is not a cocycle");
  v.require(!in_span(t.D(1).columns(), t.basis(2).size(), rep.generator.v), "generator is a coboundary");
  bool all = rep.powers_nonzero.size() == 6;
  for (bool b : rep.powers_nonzero) all = all && b;
  v.require(all, "some power of the generator vanishes");
  v.detail << "dims " << dims_text(rep.dims) << ", powers 0..5 nonzero";
}

// 7. phi on the single-chart and point gerbes; the product-cover stretch fixture across seeds.
void criterion_7(Verdict& v) {
  for (const std::string n : {"gerbe_point", "gerbe_t3_e23_single", "gerbe_s3_e23_single"}) {
    auto [cover, conn] = lib().gerbe(n);
    auto rep = theorem_main_check(cover, conn);
    v.require(rep.square_zero && rep.chain_map && rep.multiplicative, n + " structural check failed");
    v.require(rep.isomorphism, n + " phi is not an isomorphism on cohomology");
    v.detail << n << " iso in degrees 0.." << cover.global->top_degree() + 4 << "; ";
  }
  const int stretch_degree = 4;
  std::optional<bool> verdict;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto g = fixtures::gerbe_t3_stretch(seed);
    v.require(validate_connection(g.cover, g.connection).ok(), "stretch seed " + std::to_string(seed) + " invalid");
    auto rep = theorem_main_check(g.cover, g.connection, stretch_degree);
    std::string label = "stretch seed " + std::to_string(seed);
    v.require(rep.square_zero, label + " D^2 != 0");
    v.require(rep.chain_map, label + " phi is not a chain map");
    if (verdict) v.require(*verdict == rep.isomorphism, label + " verdict differs from seed 0");
    else verdict = rep.isomorphism;
  }
  v.detail << "stretch seeds 0..4 at degree " << stretch_degree << ": D^2 = 0, chain map, iso verdict "
           << (verdict.value_or(false) ? "yes" : "no") << " on every seed";
}

// 8. Sheafification, adjunction and the H0 column check.
void criterion_8(Verdict& v) {
  std::size_t presheaves = 0;
  for (const auto& n : lib().names("site")) {
    auto s = lib().site(n);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      oracle::SeededRng rng(seed);
      auto f = oracle::random_presheaf(rng, s.site.category);
      auto sh = sheafify(s.site, f);
      std::string label = n + " seed " + std::to_string(seed);
      v.require(satisfies_descent(s.site, sh.presheaf), label + " P(P(F)) fails descent");
      auto again = plus_construction(s.site, sh.presheaf);
      v.require(is_natural_isomorphism(s.site.category, sh.presheaf, again.presheaf, again.unit),
                label + " sheafification not idempotent");
      ++presheaves;
    }
  }
  std::size_t adjunctions = 0;
  for (const auto& n : lib().names("functor")) {
    auto fn = lib().functor(n);
    auto p = correspondence_from_functor(fn.source.site.category, fn.target.site.category, fn.data);
    std::vector<std::pair<Presheaf, Presheaf>> inputs{{constant_presheaf(fn.target.site), constant_presheaf(fn.source.site)}};
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      oracle::SeededRng rng(seed);
      auto h = oracle::random_presheaf(rng, fn.target.site.category);
      inputs.emplace_back(h, oracle::random_presheaf(rng, fn.source.site.category));
    }
    for (const auto& [on_h, on_g] : inputs) {
      auto r = adjunction_check(p, on_h, on_g);
      v.require(r.ok(), n + " adjunction check failed");
      ++adjunctions;
    }
  }
  for (const auto& n : lib().names("gerbe")) {
    auto [cover, conn] = lib().gerbe(n);
    v.require(h0_column_check(cover).ok, n + " H0 column check failed");
  }
  v.detail << presheaves << " random presheaves, " << adjunctions << " adjunction checks, "
           << lib().names("gerbe").size() << " gerbe H0 checks";
}

// 9. Sparse against dense rank; limits and colimits against the exhaustive oracle.
void criterion_9(Verdict& v) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    oracle::SeededRng rng(seed);
    auto rows = static_cast<std::size_t>(rng.uniform(1, 40));
    auto cols = static_cast<std::size_t>(rng.uniform(1, 40));
    double density = rng.uniform(5, 60) / 100.0;
    auto m = oracle::random_matrix(rng, rows, cols, density, static_cast<std::size_t>(rng.uniform(0, 40)));
    v.require(rank(m) == oracle::dense_rank(oracle::DenseMatrix::from_sparse(m)), "rank seed " + std::to_string(seed));
  }
  std::size_t objects = 0;
  auto compare = [&](const std::string& label, const Correspondence& p, const Presheaf& on_g, const Presheaf& on_h) {
    auto push = pushforward(p, on_g);
    for (std::size_t u = 0; u < p.target.object_count(); ++u, ++objects)
      v.require(push.result.dims[u] == oracle::exhaustive_limit(oracle::pushforward_diagram(p, on_g, p.with_target(u))).dim,
                label + " limit at object " + std::to_string(u));
    auto pull = pullback(p, on_h);
    for (std::size_t w = 0; w < p.source.object_count(); ++w, ++objects)
      v.require(pull.result.dims[w] == oracle::exhaustive_colimit(oracle::pullback_diagram(p, on_h, p.with_source(w))),
                label + " colimit at object " + std::to_string(w));
  };
  for (const auto& n : lib().names("functor")) {
    auto fn = lib().functor(n);
    auto p = correspondence_from_functor(fn.source.site.category, fn.target.site.category, fn.data);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      oracle::SeededRng rng(seed);
      auto on_g = oracle::random_presheaf(rng, fn.source.site.category);
      compare(n, p, on_g, oracle::random_presheaf(rng, fn.target.site.category));
    }
  }
  for (const auto& n : lib().names("site")) {
    auto s = lib().site(n);
    auto p = identity_correspondence(s.site.category);
    oracle::SeededRng rng(1);
    auto f = oracle::random_presheaf(rng, s.site.category);
    compare(n + " identity", p, f, f);
  }
  v.detail << "500 matrices up to 40x40, " << objects << " limit/colimit objects";
}

// 10. Integer cohomology of the nerves of the boundaries of the 2- and 4-simplex.
void criterion_10(Verdict& v) {
  auto boundary = [](int n) {
    std::vector<std::set<int>> facets;
    for (int skip = 0; skip <= n; ++skip) {
      std::set<int> f;
      for (int i = 0; i <= n; ++i)
        if (i != skip) f.insert(i);
      facets.push_back(f);
    }
    return facets;
  };
  auto check = [&](int n, const std::vector<std::size_t>& expected) {
    auto facets = boundary(n);
    auto rational = oracle::simplicial_betti(facets);
    v.require(rational == expected, "oracle Betti numbers of the boundary of the " + std::to_string(n) + "-simplex");
    for (std::uint64_t prime : {2, 3, 5})
      v.require(oracle::simplicial_betti(facets, prime) == expected, "torsion detected by the oracle mod " + std::to_string(prime));
    auto groups = simplicial_integer_cohomology(facets);
    v.require(groups.size() == expected.size(), "degree range");
    for (std::size_t k = 0; k < groups.size() && k < expected.size(); ++k) {
      v.require(groups[k].free_rank == expected[k] && groups[k].torsion.empty(),
                "H^" + std::to_string(k) + " of the boundary of the " + std::to_string(n) + "-simplex");
    }
  };
  check(2, {1, 1});
  check(4, {1, 0, 0, 1});
  v.detail << "(Z, Z) and (Z, 0, 0, Z) with no torsion";
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
      {"d^2 = 0 and Leibniz on fixtures and 100 random algebras", criterion_1},
      {"twisted Betti numbers of S3 and T3, oracle-certified", criterion_2},
      {"psi chain maps on [1, top+4], invertible exactly above top", criterion_3},
      {"gauge transformations intertwine and preserve Betti numbers", criterion_4},
      {"E_infinity equals twisted Betti, d3 equals the cup product", criterion_5},
      {"bar complex of the circle up to degree 10", criterion_6},
      {"phi isomorphism on single-chart and point gerbes, stretch cover", criterion_7},
      {"sheafification, adjunction and H0 column checks", criterion_8},
      {"sparse/dense rank and limit/colimit oracle agreement", criterion_9},
      {"integer Cech cohomology of simplex boundaries", criterion_10},
  };
  std::vector<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    int k = std::atoi(argv[i]);
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::cerr << "unknown criterion " << argv[i] << '\n';
      return 2;
    }
    selected.push_back(static_cast<std::size_t>(k));
  }
  if (selected.empty())
    for (std::size_t k = 1; k <= criteria.size(); ++k) selected.push_back(k);

  bool all = true;
  for (std::size_t k : selected) {
    const auto& [title, fn] = criteria[k - 1];
    Verdict v;
    auto start = std::chrono::steady_clock::now();
    try {
      fn(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << k << ": " << title << " [" << v.detail.str() << "] ("
              << std::fixed << std::setprecision(2) << secs << " s)" << std::endl;
    all = all && v.pass;
  }
  return all ? 0 : 1;
}

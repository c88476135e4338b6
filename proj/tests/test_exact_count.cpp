#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

#include "lipvol/exact_count.hpp"
#include "lipvol/graph.hpp"
#include "lipvol/rng.hpp"

using namespace lipvol;
using namespace lipvol::exact;

namespace {

// Enumerates every rooted assignment with |f(v)| <= h * dist(root, v) and
// counts the h-Lipschitz ones. Independent of the DP's frontier logic.
BigInt brute_force_count(const Graph& g, unsigned h) {
  const auto cd = components(g);
  std::vector<long> bound(g.num_vertices());
  std::vector<char> is_root(g.num_vertices(), 0);
  for (auto r : cd.roots) {
    is_root[r] = 1;
    const auto dist = bfs_distances(g, r);
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      if (cd.component_id[v] == cd.component_id[r]) bound[v] = long(h) * dist[v];
    }
  }
  std::vector<long> f(g.num_vertices(), 0);
  BigInt total = 0;
  std::function<void(Vertex)> rec = [&](Vertex v) {
    if (v == g.num_vertices()) {
      for (const auto& [a, b] : g.edges()) {
        if (std::labs(f[a] - f[b]) > long(h)) return;
      }
      total += 1;
      return;
    }
    if (is_root[v]) {
      f[v] = 0;
      rec(v + 1);
      return;
    }
    for (long x = -bound[v]; x <= bound[v]; ++x) {
      f[v] = x;
      rec(v + 1);
    }
  };
  rec(0);
  return total;
}

Graph random_tree(std::size_t n, Rng& rng) {
  // Prufer decoding.
  std::vector<Vertex> code(n - 2);
  for (auto& c : code) c = static_cast<Vertex>(rng.next_u64() % n);
  std::vector<unsigned> deg(n, 1);
  for (auto c : code) ++deg[c];
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (auto c : code) {
    Vertex leaf = 0;
    while (deg[leaf] != 1) ++leaf;
    edges.emplace_back(leaf, c);
    --deg[leaf];
    --deg[c];
  }
  Vertex a = n, b = n;
  for (Vertex v = 0; v < n; ++v) {
    if (deg[v] == 1) (a == n ? a : b) = v;
  }
  edges.emplace_back(a, b);
  return Graph(n, edges);
}

BigInt ipow(const BigInt& b, unsigned e) {
  BigInt r = 1;
  for (unsigned i = 0; i < e; ++i) r *= b;
  return r;
}

ExactRational factorial_q(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return ExactRational(r);
}

}  // namespace

TEST_CASE("count_lipschitz examples") {
  CHECK(count_lipschitz(make_complete(2), 3) == 7);
  const auto k3 = make_complete(3);
  for (unsigned h = 1; h <= 3; ++h) {
    CHECK(count_lipschitz(k3, h) == 3 * h * h + 3 * h + 1);
    CHECK(count_lipschitz(k3, h) == brute_force_count(k3, h));
  }
  CHECK(count_lipschitz(make_path(3), 2) == 25);
  CHECK(count_lipschitz(Graph(4, {}), 5) == 1);
  CHECK(count_lipschitz(make_cycle(5), 0) == 1);
}

TEST_CASE("count_lipschitz against brute force on random graphs") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto g = gen_gnp_p(5, 0.5, seed);
    for (unsigned h = 1; h <= 2; ++h) CHECK(count_lipschitz(g, h) == brute_force_count(g, h));
  }
}

TEST_CASE("trees have c = 2") {
  Rng rng(12);
  for (std::size_t n : {2, 3, 5, 7, 8}) {
    const auto t = n == 2 ? make_path(2) : random_tree(n, rng);
    REQUIRE(components(t).k == 1);
    for (unsigned h = 0; h <= 3; ++h) CHECK(count_lipschitz(t, h) == ipow(2 * h + 1, n - 1));
    const auto e = ehrhart_c(t);
    CHECK(e.leading == ExactRational(ipow(2, n - 1)));
    CHECK(e.c == doctest::Approx(2.0));
  }
}

TEST_CASE("ehrhart_c closed forms") {
  const auto k3 = ehrhart_c(make_complete(3));
  CHECK(k3.D == 2);
  CHECK(k3.leading == 3);
  CHECK(k3.c == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));

  const auto c4 = ehrhart_c(make_cycle(4));
  CHECK(c4.leading == make_rational(16, 3));
  CHECK(c4.c == doctest::Approx(1.7472).epsilon(1e-4));
  // With the root at 0, the opposite corner is free given its two
  // neighbours b1, b2 in [-1, 1]: its range has length 2 - |b1 - b2|.
  double grid = 0.0;
  const int m = 2000;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double b1 = -1 + (i + 0.5) * 2.0 / m, b2 = -1 + (j + 0.5) * 2.0 / m;
      grid += (2 - std::abs(b1 - b2)) * (4.0 / (double(m) * m));
    }
  }
  CHECK(grid == doctest::Approx(16.0 / 3.0).epsilon(1e-5));

  const auto single = ehrhart_c(Graph(1, {}));
  CHECK(single.D == 0);
  CHECK(single.c == 1.0);
  CHECK(single.counts == std::vector<BigInt>{1});
}

TEST_CASE("ehrhart invariants") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto g = gen_gnp_p(6 + seed % 2, 0.45, 100 + seed);
    const auto e = ehrhart_c(g);
    CHECK(e.counts[0] == 1);
    CHECK(e.leading > 0);
    if (g.num_edges() > 0) {
      for (std::size_t h = 1; h < e.counts.size(); ++h) CHECK(e.counts[h] > e.counts[h - 1]);
    }
    // polynomiality: the (D+1)-th difference over h = 0..D+3 vanishes
    const auto values = lipschitz_counts(g, e.D + 3);
    const auto diffs = forward_differences(values, e.D + 1);
    REQUIRE(!diffs.empty());
    for (const auto& v : diffs) CHECK(v == 0);
    CHECK(ExactRational(forward_differences(values, e.D).front()) / factorial_q(e.D) ==
          e.leading);

    // multiplicativity over components
    const auto cd = components(g);
    for (unsigned h = 1; h <= 2; ++h) {
      BigInt prod = 1;
      for (std::size_t c = 0; c < cd.k; ++c) {
        const auto members = component_vertices(cd, static_cast<std::uint32_t>(c));
        prod *= count_lipschitz(induced_subgraph(g, members), h);
      }
      CHECK(prod == count_lipschitz(g, h));
    }
    ExactRational vol = 1;
    for (std::size_t c = 0; c < cd.k; ++c) {
      const auto members = component_vertices(cd, static_cast<std::uint32_t>(c));
      vol *= ehrhart_c(induced_subgraph(g, members)).leading;
    }
    CHECK(vol == e.leading);
  }
}

TEST_CASE("root invariance") {
  Rng rng(77);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = gen_gnp_p(4 + seed % 4, 0.5, 500 + seed);
    const auto cd = components(g);
    std::vector<Vertex> roots;
    for (std::size_t c = 0; c < cd.k; ++c) {
      const auto members = component_vertices(cd, static_cast<std::uint32_t>(c));
      roots.push_back(members[rng.next_u64() % members.size()]);
    }
    CountOptions opts;
    opts.roots = roots;
    for (unsigned h = 1; h <= 2; ++h) CHECK(count_lipschitz(g, h, opts) == count_lipschitz(g, h));
  }
}

TEST_CASE("work budget") {
  CountOptions tight;
  tight.work_budget = 50;
  CHECK_THROWS_AS(count_lipschitz(make_complete(5), 4, tight), ResourceError);
  CHECK_THROWS_AS(ehrhart_c(make_hypercube(3), tight), ResourceError);
}

TEST_CASE("hom examples") {
  const auto t51 = make_circular_target(5, 1);
  CHECK(count_hom(Graph(1, {}), t51).count == 5);
  CHECK(count_hom(make_complete(2), t51).count == 15);
  CHECK(count_hom(make_complete(2), t51).target_M == 5);
  CHECK(count_hom(make_hypercube(2), t51).count == 5 * count_lipschitz(make_hypercube(2), 1));
  // loops in the source are rejected, oversize sources too
  CHECK_THROWS(count_hom(t51, t51));
  CHECK_THROWS(count_hom(make_path(20), t51));
}

TEST_CASE("hom against brute force") {
  const auto target = make_circular_target(7, 2);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto g = gen_gnp_p(5, 0.5, seed);
    BigInt brute = 0;
    std::vector<Vertex> img(5, 0);
    for (int code = 0; code < 7 * 7 * 7 * 7 * 7; ++code) {
      int c = code;
      for (auto& x : img) {
        x = c % 7;
        c /= 7;
      }
      bool ok = true;
      for (const auto& [a, b] : g.edges()) ok = ok && target.adjacent(img[a], img[b]);
      if (ok) brute += 1;
    }
    CHECK(count_hom(g, target).count == brute);
  }
}

TEST_CASE("cycle space generated by 4-cycles") {
  CHECK(cycle_space_generated_by_4_cycles(make_hypercube(2)));
  CHECK(cycle_space_generated_by_4_cycles(make_hypercube(3)));
  CHECK(cycle_space_generated_by_4_cycles(make_complete_bipartite(2, 3)));
  CHECK(cycle_space_generated_by_4_cycles(make_path(5)));
  CHECK_FALSE(cycle_space_generated_by_4_cycles(make_cycle(6)));
  CHECK_FALSE(cycle_space_generated_by_4_cycles(make_complete(3)));
}

TEST_CASE("lifting grid") {
  for (const auto& g : {make_hypercube(2), make_hypercube(3), make_complete_bipartite(2, 2),
                        make_complete_bipartite(2, 3)}) {
    for (unsigned h : {1u, 2u}) {
      for (unsigned L : {5u, 7u}) {
        const auto r = lifting_check(g, h, L);
        CHECK(r.M == L * h);
        CHECK(r.hom == r.M_times_N);
        CHECK(r.M_times_N == BigInt(L * h) * count_lipschitz(g, h));
        CHECK(r.pass);
      }
    }
  }
  CHECK_THROWS_AS(lifting_check(make_cycle(6), 1, 5), std::invalid_argument);
  CHECK_THROWS_AS(lifting_check(make_hypercube(2), 1, 4), std::invalid_argument);
  CHECK_THROWS_AS(lifting_check(make_hypercube(2), 0, 5), std::invalid_argument);
  CHECK_THROWS_AS(lifting_check(Graph(4, {{0, 1}, {2, 3}}), 1, 5), std::invalid_argument);
}

TEST_CASE("kdd volume") {
  CHECK(kdd_volume_exact(2) == make_rational(16, 3));
  CHECK(kdd_volume_exact(3) == make_rational(48, 5));
  CHECK_THROWS(kdd_volume_exact(1));
  for (unsigned d : {2u, 3u}) {
    CHECK(kdd_volume_exact(d) == ehrhart_c(make_complete_bipartite(d, d)).leading);
  }
  // factorial oracle: 2^{2d-1} d (d-1) (d-2)! d! / (2d-1)!
  for (unsigned d = 2; d <= 20; ++d) {
    const ExactRational v = ExactRational(ipow(2, 2 * d - 1) * d * (d - 1)) * factorial_q(d - 2) *
                            factorial_q(d) / factorial_q(2 * d - 1);
    CHECK(kdd_volume_exact(d) == v);
    CHECK(kdd_volume_log(d) == doctest::Approx(std::log(to_double(v))).epsilon(1e-12));
  }
  const double ratio = std::exp(kdd_volume_log(50)) / (std::sqrt(std::numbers::pi) * std::pow(50.0, 1.5));
  CHECK(ratio >= 0.95);
  CHECK(ratio <= 1.05);
  CHECK(to_double(kdd_volume_exact(50)) ==
        doctest::Approx(std::exp(kdd_volume_log(50))).epsilon(1e-10));
}

TEST_CASE("galvin-tetali checks") {
  const auto a = galvin_tetali_check(2, 1, 5);
  CHECK(a.pass);
  CHECK(a.hom_cube == a.hom_kdd);
  const auto b = galvin_tetali_check(3, 1, 5);
  CHECK(b.pass);
  CHECK(b.hom_cube == count_hom(make_hypercube(3), make_circular_target(5, 1)).count);
  CHECK(ipow(b.hom_cube, 6) <= ipow(b.hom_kdd, 8));
  CHECK(b.lhs_log <= b.rhs_log);
  CHECK(galvin_tetali_check(3, 2, 5).pass);
  CHECK_THROWS(galvin_tetali_check(5, 1, 5));
}

TEST_CASE("hypercube coefficient bound") {
  const double c_q2 = std::cbrt(16.0 / 3.0);
  CHECK(hypercube_c_upper(2, 5) >= c_q2);
  CHECK(hypercube_bound_holds(2, 5, ehrhart_c(make_hypercube(2)).leading));
  CHECK(hypercube_bound_holds(3, 5, ehrhart_c(make_hypercube(3)).leading));
  CHECK(hypercube_c_upper_log(7, 5) == doctest::Approx(std::log(hypercube_c_upper(7, 5))));
  // d log(bound) / log d drifts down toward 3/4 as d grows
  double prev = 1e9;
  for (unsigned d : {10u, 20u, 40u, 80u, 160u}) {
    const double s = hypercube_c_upper_log(d, 5) * d / std::log(double(d));
    CHECK(s < prev);
    CHECK(s > 0.75);
    prev = s;
  }
}

TEST_CASE("hypercube bound envelope at d = 30" * doctest::should_fail()) {
  const double d = 30.0;
  CHECK(hypercube_c_upper_log(30, 5) <= 0.80 * std::log(d) / d * 1.2);
}

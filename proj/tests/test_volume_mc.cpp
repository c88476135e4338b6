#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <vector>

#include "lipvol/exact_count.hpp"
#include "lipvol/graph.hpp"
#include "lipvol/profile.hpp"
#include "lipvol/rng.hpp"
#include "lipvol/volume_mc.hpp"

using namespace lipvol;
using namespace lipvol::mc;
using profile::ProfileParams;

namespace {

std::uint64_t pairs_brute(const std::vector<double>& x) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) c += std::abs(x[i] - x[j]) > 1;
  }
  return c;
}

FlatnessAnchor anchor_brute(const std::vector<double>& x) {
  FlatnessAnchor best{0, std::numeric_limits<std::size_t>::max()};
  for (std::size_t v = 0; v < x.size(); ++v) {
    std::size_t out = 0;
    for (double xi : x) out += !(xi - x[v] >= 0.0 && xi - x[v] <= 1.0);
    if (out < best.outside_count) best = {v, out};
  }
  return best;
}

// Vol{x in [0, L]^3 : pairwise |x_i - x_j| <= 1} by a midpoint grid over
// (x, y) with the z-range exact.
double k3_slice_oracle(double L, int m) {
  double total = 0.0;
  const double h = L / m;
  for (int i = 0; i < m; ++i) {
    const double x = (i + 0.5) * h;
    for (int j = 0; j < m; ++j) {
      const double y = (j + 0.5) * h;
      if (std::abs(x - y) > 1) continue;
      const double lo = std::max(0.0, std::max(x, y) - 1), hi = std::min(L, std::min(x, y) + 1);
      total += std::max(0.0, hi - lo) * h * h;
    }
  }
  return total;
}

void check_within(const VolumeEstimate& e, double exact, double k = 4.0) {
  CHECK(e.stderr > 0.0);
  CHECK(std::abs(e.mean - exact) <= k * e.stderr);
}

}  // namespace

TEST_CASE("sis small graphs") {
  const auto k2 = sis_volume(make_complete(2), 1000, 1);
  CHECK(k2.mean == 2.0);
  CHECK(k2.stderr == 0.0);
  CHECK(k2.zero_weight_fraction == 0.0);
  check_within(sis_volume(make_complete(3), 200000, 2), 3.0);
  check_within(sis_volume(make_cycle(4), 200000, 3), 16.0 / 3.0);
  const auto k4 = make_complete(4);
  check_within(sis_volume(k4, 200000, 4), exact::ehrhart_c(k4).volume);
  CHECK_THROWS(sis_volume(Graph(3, {{0, 1}}), 100, 1));
  CHECK(sis_volume(make_cycle(5), 5000, 9).mean == sis_volume(make_cycle(5), 5000, 9).mean);

  const auto lg = sis_log_volume(make_cycle(4), 200000, 3);
  const auto lin = sis_volume(make_cycle(4), 200000, 3);
  CHECK(std::exp(lg.log_mean) == doctest::Approx(lin.mean).epsilon(1e-10));
}

TEST_CASE("sis observer sees every sample") {
  std::uint64_t seen = 0;
  double sum = 0.0;
  const auto e = sis_volume(make_cycle(4), 1000, 5, [&](std::uint64_t, std::span<const double> x,
                                                       double logw) {
    ++seen;
    CHECK(x.size() == 4);
    CHECK(x[0] == 0.0);
    if (std::isfinite(logw)) sum += std::exp(logw);
  });
  CHECK(seen == 1000);
  CHECK(sum / 1000 == doctest::Approx(e.mean));
}

TEST_CASE("smc against exact volumes") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    Graph g = gen_gnp_p(8, 0.45, 900 + seed);
    if (components(g).k != 1) g = make_cycle(8);
    const double exact = exact::ehrhart_c(g).volume;
    const auto e = smc_log_volume(g, 40000, seed);
    CHECK(std::abs(e.log_mean - std::log(exact)) <= 4 * e.stderr_log);
  }
  CHECK_THROWS(smc_log_volume(Graph(3, {{0, 1}}), 1000, 1));
  CHECK_THROWS(smc_log_volume(make_cycle(4), 8, 1));
  const auto a = smc_log_volume(make_hypercube(3), 4000, 3);
  CHECK(a.log_mean == smc_log_volume(make_hypercube(3), 4000, 3).log_mean);
}

TEST_CASE("max cardinality order") {
  const auto g = gen_gnp(200, 6.0, 4);
  const auto comp = largest_component(g);
  const auto sub = induced_subgraph(g, comp);
  const auto order = max_cardinality_order(sub);
  REQUIRE(order.size() == sub.num_vertices());
  CHECK(order.front() == 0);
  CHECK(std::set<Vertex>(order.begin(), order.end()).size() == order.size());
  std::vector<char> done(sub.num_vertices(), 0);
  for (auto v : order) {
    if (v != 0) {
      const auto nb = sub.neighbors(v);
      CHECK(std::any_of(nb.begin(), nb.end(), [&](Vertex u) { return done[u]; }));
    }
    done[v] = 1;
  }
}

TEST_CASE("violating pairs") {
  CHECK(count_violating_pairs(std::vector<double>{0, 0.5, 2}) == 2);
  CHECK(count_violating_pairs(std::vector<double>(10, 3.0)) == 0);
  CHECK(count_violating_pairs(std::vector<double>{}) == 0);
  std::vector<double> grid(50);
  for (int i = 0; i < 50; ++i) grid[i] = 5.0 * i / 49;
  CHECK(count_violating_pairs(grid) == pairs_brute(grid));
  Rng rng(8);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x(1 + rng.next_u64() % 200);
    for (auto& v : x) v = 4.0 * rng.uniform01();
    CHECK(count_violating_pairs(x) == pairs_brute(x));
  }
}

TEST_CASE("quenched slice volume") {
  const ProfileParams p(20.0, 3.0);
  const double L = p.window_length();
  const auto empty = quenched_slice_volume(Graph(5, {}), p, 50000, 1);
  check_within(empty, std::pow(L, 5));

  // two triangles of leg L - 1 are cut from the square
  const double k2 = L * L - (L - 1) * (L - 1);
  CHECK(k2 == doctest::Approx(1.6));
  check_within(quenched_slice_volume(make_complete(2), p, 200000, 2), k2);

  const double k3 = k3_slice_oracle(L, 3000);
  CHECK(k3 == doctest::Approx(1.9).epsilon(1e-3));
  check_within(quenched_slice_volume(make_complete(3), p, 200000, 3), k3);

  const auto lg = quenched_slice_log_volume(make_complete(3), p, 200000, 3);
  CHECK(std::exp(lg.log_mean) ==
        doctest::Approx(quenched_slice_volume(make_complete(3), p, 200000, 3).mean).epsilon(1e-10));
}

TEST_CASE("annealed slice mean") {
  const auto p = ProfileParams::with_default_window(20.0);
  const auto flat = annealed_slice_mean(500, 0.0, p, 1000, 1);
  CHECK(flat.analytic);
  CHECK(flat.log_mean_over_n == doctest::Approx(std::log(p.window_length())).epsilon(1e-14));
  CHECK(flat.stderr_log == 0.0);

  const auto r = annealed_slice_mean(400, 10.0, ProfileParams::with_default_window(10.0), 2000, 3);
  const auto g = profile::profile_gain(ProfileParams::with_default_window(10.0),
                                       profile::Mode::Truncated);
  CHECK(r.profile_prediction == doctest::Approx(g.gain));
  CHECK(r.H == doctest::Approx(g.H));
  CHECK(r.Q == doctest::Approx(g.Q));
  CHECK(std::isfinite(r.log_mean_over_n));
  CHECK(r.stderr_log > 0.0);
  CHECK(r.mean_bad_pairs > 0.0);
  CHECK(r.log_mean_over_n ==
        annealed_slice_mean(400, 10.0, ProfileParams::with_default_window(10.0), 2000, 3)
            .log_mean_over_n);
  CHECK_THROWS(annealed_slice_mean(kMaxAnnealedN + 1, 10.0, p, 1000, 1));
}

TEST_CASE("flatness anchor") {
  const auto a = flatness_anchor(std::vector<double>{0, 0.2, 0.9, 1.5});
  CHECK(a.outside_count == 1);
  CHECK(a.anchor_index == 0);
  CHECK(flatness_anchor(std::vector<double>(7, 2.5)).outside_count == 0);
  CHECK(flatness_anchor(std::vector<double>(7, 2.5)).anchor_index == 0);
  // every anchor keeps only itself in [0, 1]
  CHECK(flatness_anchor(std::vector<double>{0, 2, 4, 6}).outside_count == 3);
  CHECK(anchor_brute({0, 2, 4, 6}).outside_count == 3);

  Rng rng(21);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x(1 + rng.next_u64() % 60);
    for (auto& v : x) v = 3.0 * rng.uniform01();
    if (t % 10 == 0) {
      for (auto& v : x) v = std::round(v * 4) / 4;  // exact ties and boundary hits
    }
    const auto fast = flatness_anchor(x), slow = anchor_brute(x);
    CHECK(fast.outside_count == slow.outside_count);
    CHECK(fast.anchor_index == slow.anchor_index);
  }
}

TEST_CASE("flatness anchor example (0, 2, 4, 6) -> 2" * doctest::should_fail()) {
  CHECK(flatness_anchor(std::vector<double>{0, 2, 4, 6}).outside_count == 2);
}

TEST_CASE("tail census") {
  const auto c = tail_census(std::vector<double>{0, 0.5, 1.5, -0.3, 2.7}, 0);
  CHECK(c.S == 2);
  CHECK(c.U == 1);
  CHECK(c.W == 1);
  CHECK(c.D == 1);
  const auto shifted = tail_census(std::vector<double>{1, 1.5, 2.5, 0.7, 3.7}, 0);
  CHECK(shifted.S == 2);
  CHECK(shifted.D == 1);
  const auto flat = tail_census(std::vector<double>{0.1, 0.4, 1.0, 0.9}, 0);
  CHECK(flat.S == 4);
  CHECK(flat.outside() == 0);
  // boundary values: 1 in S, 2 in U, -1 in W, -1.0001 and 2.0001 in D
  const auto edge = tail_census(std::vector<double>{0, 1, 2, -1, -1.0001, 2.0001}, 0);
  CHECK(edge.S == 2);
  CHECK(edge.U == 1);
  CHECK(edge.W == 1);
  CHECK(edge.D == 2);
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> x(1 + rng.next_u64() % 40);
    for (auto& v : x) v = 6.0 * rng.uniform01() - 3.0;
    const std::size_t a = rng.next_u64() % x.size();
    const auto k = tail_census(x, a);
    CHECK(k.total() == x.size());
    CHECK(k.S >= 1);
  }
}

TEST_CASE("flatness survey") {
  const auto g = gen_gnp(400, 16.0, 7);
  const auto s = lipschitz_sampler_flatness_survey(g, ProfileParams::with_default_window(16.0),
                                                   400, 2);
  CHECK(s.n == 400);
  CHECK(s.sis_vertices == largest_component(g).size());
  REQUIRE(s.sis.accepted > 0);
  CHECK(s.sis.median_fraction <= 0.25);
  CHECK(s.sis.max_fraction >= s.sis.median_fraction);
  // an empty quenched acceptance is reported, not fatal
  CHECK(s.quenched.accepted <= 400);

  const auto tree = lipschitz_sampler_flatness_survey(make_path(30),
                                                      ProfileParams::with_default_window(4.0), 50, 1);
  CHECK(tree.sis.accepted == 50);
}

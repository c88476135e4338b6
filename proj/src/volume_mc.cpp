#include "lipvol/volume_mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <utility>
#include <stdexcept>

#include "lipvol/rng.hpp"
#include "lipvol/stats.hpp"

namespace lipvol::mc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct SisPlan {
  std::vector<Vertex> order;
  std::vector<std::vector<Vertex>> earlier;  // assigned neighbours of order[i]
};

SisPlan make_sis_plan(const Graph& g) {
  if (g.num_vertices() == 0) throw std::invalid_argument("sis_volume: empty graph");
  if (g.has_loops()) throw std::invalid_argument("sis_volume: graph must be loop-free");
  SisPlan plan;
  plan.order = bfs_order(g, 0);
  if (plan.order.size() != g.num_vertices()) {
    throw std::invalid_argument("sis_volume: graph must be connected");
  }
  std::vector<std::size_t> position(g.num_vertices());
  for (std::size_t i = 0; i < plan.order.size(); ++i) position[plan.order[i]] = i;
  plan.earlier.resize(plan.order.size());
  for (std::size_t i = 0; i < plan.order.size(); ++i) {
    for (Vertex w : g.neighbors(plan.order[i])) {
      if (position[w] < i) plan.earlier[i].push_back(w);
    }
  }
  return plan;
}

// One SIS pass; returns the log weight (-inf on an empty interval).
double sis_pass(const SisPlan& plan, std::vector<double>& x, Rng& rng) {
  x[plan.order[0]] = 0.0;
  double log_w = 0.0;
  for (std::size_t i = 1; i < plan.order.size(); ++i) {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (Vertex u : plan.earlier[i]) {
      lo = std::max(lo, x[u] - 1.0);
      hi = std::min(hi, x[u] + 1.0);
    }
    const double len = hi - lo;
    if (!(len > 0.0)) return kNegInf;
    x[plan.order[i]] = lo + len * rng.uniform01();
    log_w += std::log(len);
  }
  return log_w;
}

// Draws a profile sample for every vertex; returns the log weight or -inf if
// some edge is violated.
double quenched_pass(const Graph& g, const profile::TruncatedSampler& sampler,
                     std::vector<double>& x, Rng& rng) {
  double log_w = 0.0;
  for (auto& xi : x) {
    xi = sampler.draw(rng);
    log_w += sampler.weight_exponent(xi);
  }
  for (const auto& [u, v] : g.edges()) {
    if (std::abs(x[u] - x[v]) > 1.0) return kNegInf;
  }
  return log_w;
}

template <typename Pass>
VolumeEstimate linear_estimate(std::uint64_t samples, std::uint64_t seed, Pass&& pass) {
  if (samples == 0) throw std::invalid_argument("samples must be >= 1");
  RunningStats stats;
  std::uint64_t zeros = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const double log_w = pass(s);
    if (log_w == kNegInf) ++zeros;
    stats.add(log_w == kNegInf ? 0.0 : std::exp(log_w));
  }
  VolumeEstimate est;
  est.mean = stats.mean();
  est.stderr = stats.stderr_of_mean();
  est.samples = samples;
  est.zero_weight_fraction = static_cast<double>(zeros) / static_cast<double>(samples);
  est.seed = seed;
  return est;
}

template <typename Pass>
LogVolumeEstimate log_estimate(std::uint64_t samples, std::uint64_t seed, Pass&& pass) {
  if (samples == 0) throw std::invalid_argument("samples must be >= 1");
  LogMeanExp acc;
  std::uint64_t zeros = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const double log_w = pass(s);
    if (log_w == kNegInf) ++zeros;
    acc.add(log_w);
  }
  LogVolumeEstimate est;
  est.log_mean = acc.log_mean();
  est.stderr_log = acc.stderr_log();
  est.samples = samples;
  est.zero_weight_fraction = static_cast<double>(zeros) / static_cast<double>(samples);
  est.seed = seed;
  return est;
}

SurveySummary summarize(std::vector<double> fractions) {
  SurveySummary s;
  s.accepted = fractions.size();
  if (fractions.empty()) return s;
  std::sort(fractions.begin(), fractions.end());
  const std::size_t m = fractions.size();
  s.median_fraction = m % 2 ? fractions[m / 2] : 0.5 * (fractions[m / 2 - 1] + fractions[m / 2]);
  s.mean_fraction = std::accumulate(fractions.begin(), fractions.end(), 0.0) / static_cast<double>(m);
  s.max_fraction = fractions.back();
  return s;
}

}  // namespace

VolumeEstimate sis_volume(const Graph& g, std::uint64_t samples, std::uint64_t seed,
                          const SampleObserver& observer) {
  const auto plan = make_sis_plan(g);
  Rng rng(seed);
  std::vector<double> x(g.num_vertices(), 0.0);
  return linear_estimate(samples, seed, [&](std::uint64_t s) {
    const double lw = sis_pass(plan, x, rng);
    if (observer) observer(s, x, lw);
    return lw;
  });
}

LogVolumeEstimate sis_log_volume(const Graph& g, std::uint64_t samples, std::uint64_t seed,
                                 const SampleObserver& observer) {
  const auto plan = make_sis_plan(g);
  Rng rng(seed);
  std::vector<double> x(g.num_vertices(), 0.0);
  return log_estimate(samples, seed, [&](std::uint64_t s) {
    const double lw = sis_pass(plan, x, rng);
    if (observer) observer(s, x, lw);
    return lw;
  });
}

std::vector<Vertex> max_cardinality_order(const Graph& g) {
  const std::size_t n = g.num_vertices();
  if (n == 0) return {};
  std::vector<std::uint32_t> count(n, 0);
  std::vector<char> done(n, 0);
  // max-heap on (count, -index) with lazy deletion
  std::priority_queue<std::pair<std::uint32_t, std::int64_t>> heap;
  std::vector<Vertex> order;
  order.reserve(n);
  heap.emplace(0, 0);
  while (!heap.empty()) {
    const auto [c, neg] = heap.top();
    heap.pop();
    const auto v = static_cast<Vertex>(-neg);
    if (done[v] || c != count[v]) continue;
    done[v] = 1;
    order.push_back(v);
    for (Vertex u : g.neighbors(v)) {
      if (done[u]) continue;
      heap.emplace(++count[u], -static_cast<std::int64_t>(u));
    }
  }
  return order;
}

namespace {

// One island; returns log of the unbiased volume estimate (-inf if every
// particle died).
double smc_island(const std::vector<Vertex>& order,
                  const std::vector<std::vector<Vertex>>& earlier,
                  const std::vector<std::size_t>& last_use, std::size_t N, Rng& rng) {
  const std::size_t n = order.size();
  // Column-major by vertex: value of particle i at vertex v is x[v * N + i].
  std::vector<double> x(n * N, 0.0);
  std::vector<double> buf(N);
  std::vector<double> lw(N, 0.0);
  std::vector<double> w(N);
  std::vector<std::size_t> ancestor(N);
  double log_z = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const Vertex v = order[k];
    for (std::size_t i = 0; i < N; ++i) {
      if (lw[i] == kNegInf) continue;
      double lo = -std::numeric_limits<double>::infinity();
      double hi = std::numeric_limits<double>::infinity();
      for (Vertex u : earlier[k]) {
        lo = std::max(lo, x[u * N + i] - 1.0);
        hi = std::min(hi, x[u * N + i] + 1.0);
      }
      const double len = hi - lo;
      if (!(len > 0.0)) {
        lw[i] = kNegInf;
        continue;
      }
      x[v * N + i] = lo + len * rng.uniform01();
      lw[i] += std::log(len);
    }
    const double m = *std::max_element(lw.begin(), lw.end());
    if (m == kNegInf) return kNegInf;
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      w[i] = std::exp(lw[i] - m);
      s += w[i];
      s2 += w[i] * w[i];
    }
    const bool final_step = k + 1 == n;
    if (!final_step && s * s >= 0.5 * static_cast<double>(N) * s2) continue;
    log_z += m + std::log(s / static_cast<double>(N));
    if (final_step) break;

    // Systematic resampling.
    const double step = s / static_cast<double>(N);
    double target = step * rng.uniform01();
    double cum = w[0];
    std::size_t j = 0;
    for (std::size_t i = 0; i < N; ++i) {
      while (target >= cum && j + 1 < N) cum += w[++j];
      ancestor[i] = j;
      target += step;
    }
    // Only vertices with a later neighbour are read again.
    for (std::size_t t = 0; t <= k; ++t) {
      const Vertex u = order[t];
      if (last_use[u] <= k) continue;
      double* col = &x[u * N];
      for (std::size_t i = 0; i < N; ++i) buf[i] = col[ancestor[i]];
      std::copy(buf.begin(), buf.end(), col);
    }
    std::fill(lw.begin(), lw.end(), 0.0);
  }
  return log_z;
}

}  // namespace

LogVolumeEstimate smc_log_volume(const Graph& g, std::uint64_t particles, std::uint64_t seed) {
  if (g.num_vertices() == 0) throw std::invalid_argument("smc_log_volume: empty graph");
  if (g.has_loops()) throw std::invalid_argument("smc_log_volume: graph must be loop-free");
  if (particles < 2 * kSmcIslands) {
    throw std::invalid_argument("smc_log_volume: need at least 2 particles per island");
  }
  const auto order = max_cardinality_order(g);
  if (order.size() != g.num_vertices()) {
    throw std::invalid_argument("smc_log_volume: graph must be connected");
  }
  const std::size_t n = order.size();
  std::vector<std::size_t> position(n);
  for (std::size_t i = 0; i < n; ++i) position[order[i]] = i;
  std::vector<std::vector<Vertex>> earlier(n);
  std::vector<std::size_t> last_use(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (Vertex w : g.neighbors(order[i])) {
      if (position[w] < i) earlier[i].push_back(w);
      last_use[order[i]] = std::max(last_use[order[i]], position[w]);
    }
  }
  const std::size_t per_island = particles / kSmcIslands;
  LogMeanExp acc;
  std::uint64_t dead = 0;
  for (std::uint64_t isl = 0; isl < kSmcIslands; ++isl) {
    Rng rng = Rng::substream(seed, isl);
    const double lz = smc_island(order, earlier, last_use, per_island, rng);
    if (lz == kNegInf) ++dead;
    acc.add(lz);
  }
  LogVolumeEstimate est;
  est.log_mean = acc.log_mean();
  est.stderr_log = acc.stderr_log();
  est.samples = per_island * kSmcIslands;
  est.zero_weight_fraction = static_cast<double>(dead) / static_cast<double>(kSmcIslands);
  est.seed = seed;
  return est;
}

std::uint64_t count_violating_pairs(std::span<const double> x) {
  std::vector<double> y(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    // First j > i with y[j] - y[i] > 1; the difference is monotone in y[j].
    const auto it = std::partition_point(y.begin() + static_cast<std::ptrdiff_t>(i) + 1, y.end(),
                                         [&](double v) { return !(v - y[i] > 1.0); });
    total += static_cast<std::uint64_t>(y.end() - it);
  }
  return total;
}

VolumeEstimate quenched_slice_volume(const Graph& g, const profile::ProfileParams& p,
                                     std::uint64_t samples, std::uint64_t seed,
                                     const SampleObserver& observer) {
  const profile::TruncatedSampler sampler(p);
  Rng rng(seed);
  std::vector<double> x(g.num_vertices(), 0.0);
  return linear_estimate(samples, seed, [&](std::uint64_t s) {
    const double lw = quenched_pass(g, sampler, x, rng);
    if (observer) observer(s, x, lw);
    return lw;
  });
}

LogVolumeEstimate quenched_slice_log_volume(const Graph& g, const profile::ProfileParams& p,
                                            std::uint64_t samples, std::uint64_t seed,
                                            const SampleObserver& observer) {
  const profile::TruncatedSampler sampler(p);
  Rng rng(seed);
  std::vector<double> x(g.num_vertices(), 0.0);
  return log_estimate(samples, seed, [&](std::uint64_t s) {
    const double lw = quenched_pass(g, sampler, x, rng);
    if (observer) observer(s, x, lw);
    return lw;
  });
}

AnnealedReport annealed_slice_mean(std::size_t n, double graph_d, const profile::ProfileParams& p,
                                   std::uint64_t samples, std::uint64_t seed) {
  if (n < 2 || n > kMaxAnnealedN) {
    throw std::invalid_argument("annealed_slice_mean: need 2 <= n <= 10^4");
  }
  if (!(graph_d >= 0.0) || graph_d >= static_cast<double>(n)) {
    throw std::invalid_argument("annealed_slice_mean: need 0 <= d < n");
  }
  if (samples == 0) throw std::invalid_argument("annealed_slice_mean: samples >= 1");
  AnnealedReport rep;
  rep.samples = samples;
  const auto summary = profile::profile_gain(p, profile::Mode::Truncated);
  rep.H = summary.H;
  rep.Q = summary.Q;
  rep.profile_prediction = summary.gain;
  if (graph_d == 0.0) {
    // q = 1: E_rho[exp(sum W)] = |I|^n exactly.
    rep.analytic = true;
    rep.log_mean_over_n = std::log(p.window_length());
    rep.stderr_log = 0.0;
    rep.profile_prediction = summary.H;
    return rep;
  }
  const double log_q = std::log1p(-graph_d / static_cast<double>(n));
  const profile::TruncatedSampler sampler(p);
  Rng rng(seed);
  std::vector<double> x(n);
  LogMeanExp acc;
  RunningStats bad;
  for (std::uint64_t s = 0; s < samples; ++s) {
    double sum_w = 0.0;
    for (auto& xi : x) {
      xi = sampler.draw(rng);
      sum_w += sampler.weight_exponent(xi);
    }
    const auto b = count_violating_pairs(x);
    bad.add(static_cast<double>(b));
    acc.add(sum_w + static_cast<double>(b) * log_q);
  }
  const double nn = static_cast<double>(n);
  rep.log_mean_over_n = acc.log_mean() / nn;
  rep.stderr_log = acc.stderr_log() / nn;
  rep.mean_bad_pairs = bad.mean();
  return rep;
}

FlatnessAnchor flatness_anchor(std::span<const double> x) {
  if (x.empty()) return {};
  std::vector<double> y(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  FlatnessAnchor best{0, x.size() + 1};
  for (std::size_t v = 0; v < x.size(); ++v) {
    const double base = x[v];
    const auto first = std::lower_bound(y.begin(), y.end(), base);
    const auto last =
        std::partition_point(first, y.end(), [&](double val) { return val - base <= 1.0; });
    const auto outside = x.size() - static_cast<std::size_t>(last - first);
    if (outside < best.outside_count) best = {v, outside};
  }
  return best;
}

TailCensus tail_census(std::span<const double> x, std::size_t anchor_index) {
  if (anchor_index >= x.size()) throw std::invalid_argument("tail_census: anchor out of range");
  TailCensus c;
  const double base = x[anchor_index];
  for (double xi : x) {
    const double y = xi - base;
    if (y >= 0.0 && y <= 1.0) {
      ++c.S;
    } else if (y > 1.0 && y <= 2.0) {
      ++c.U;
    } else if (y >= -1.0 && y < 0.0) {
      ++c.W;
    } else {
      ++c.D;
    }
  }
  return c;
}

FlatnessSurvey lipschitz_sampler_flatness_survey(const Graph& g, const profile::ProfileParams& p,
                                                 std::uint64_t samples, std::uint64_t seed) {
  FlatnessSurvey out;
  out.n = g.num_vertices();
  if (out.n == 0) return out;

  std::vector<double> quenched_fracs;
  quenched_slice_log_volume(g, p, samples, substream_seed(seed, 0),
                            [&](std::uint64_t, std::span<const double> x, double lw) {
                              if (lw == kNegInf) return;
                              quenched_fracs.push_back(
                                  static_cast<double>(flatness_anchor(x).outside_count) /
                                  static_cast<double>(x.size()));
                            });
  out.quenched = summarize(std::move(quenched_fracs));

  const auto giant = largest_component(g);
  out.sis_vertices = giant.size();
  if (giant.size() >= 2) {
    const Graph sub = induced_subgraph(g, giant);
    std::vector<double> sis_fracs;
    sis_log_volume(sub, samples, substream_seed(seed, 1),
                   [&](std::uint64_t, std::span<const double> x, double lw) {
                     if (lw == kNegInf) return;
                     sis_fracs.push_back(static_cast<double>(flatness_anchor(x).outside_count) /
                                         static_cast<double>(x.size()));
                   });
    out.sis = summarize(std::move(sis_fracs));
  }
  return out;
}

}  // namespace lipvol::mc

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lipvol/graph.hpp"
#include "lipvol/profile.hpp"

namespace lipvol::mc {

/// Result contract for every stochastic estimate.
struct VolumeEstimate {
  double mean = 0.0;
  double stderr = 0.0;
  std::uint64_t samples = 0;
  double zero_weight_fraction = 0.0;
  std::uint64_t seed = 0;
};

/// Same estimate kept in the log domain (for weights far outside double
/// range). stderr_log is the delta-method standard error of log_mean.
struct LogVolumeEstimate {
  double log_mean = 0.0;
  double stderr_log = 0.0;
  std::uint64_t samples = 0;
  double zero_weight_fraction = 0.0;
  std::uint64_t seed = 0;
};

/// Optional per-sample observer: (sample index, vertex values indexed by
/// vertex, log weight). Zero-weight samples are reported with -inf and
/// partially assigned values.
using SampleObserver = std::function<void(std::uint64_t, std::span<const double>, double)>;

/// Sequential importance sampling of Vol(P_G) for connected g.
///
/// Vertices are visited in BFS order from vertex 0 (the component root), which
/// is pinned at 0. Each later vertex v draws x_v uniformly from
/// A_v = intersection of [x_u - 1, x_u + 1] over assigned neighbours u and
/// multiplies the weight by |A_v|; an empty A_v gives weight 0. The mean
/// weight is an unbiased estimate of the volume.
VolumeEstimate sis_volume(const Graph& g, std::uint64_t samples, std::uint64_t seed,
                          const SampleObserver& observer = {});
LogVolumeEstimate sis_log_volume(const Graph& g, std::uint64_t samples, std::uint64_t seed,
                                 const SampleObserver& observer = {});

inline constexpr std::uint64_t kSmcIslands = 8;

/// Vertex order starting at 0 that always takes next the unassigned vertex with
/// the most assigned neighbours (smallest index on ties). For connected g
/// every later vertex has an assigned neighbour.
std::vector<Vertex> max_cardinality_order(const Graph& g);

/// Sequential Monte Carlo version of the SIS estimator for large connected
/// graphs: the same interval proposal along max_cardinality_order, run on
/// kSmcIslands independent populations of particles / kSmcIslands particles
/// with systematic resampling whenever the effective sample size drops below
/// half. Each island gives an unbiased volume estimate; log_mean combines the
/// islands and stderr_log is the delta-method error across them.
/// zero_weight_fraction is the fraction of islands that died out.
LogVolumeEstimate smc_log_volume(const Graph& g, std::uint64_t particles, std::uint64_t seed);

/// #{ {i, j} : |x_i - x_j| > 1 } in O(n log n).
std::uint64_t count_violating_pairs(std::span<const double> x);

/// Importance-sampling estimate of the unrooted slice volume
/// Z_I(G) = Vol{x in I^n : |x_i - x_j| <= 1 on every edge}, with x drawn from
/// the truncated profile and weight exp(sum W(x_i)) on satisfying samples.
VolumeEstimate quenched_slice_volume(const Graph& g, const profile::ProfileParams& p,
                                     std::uint64_t samples, std::uint64_t seed,
                                     const SampleObserver& observer = {});
LogVolumeEstimate quenched_slice_log_volume(const Graph& g, const profile::ProfileParams& p,
                                            std::uint64_t samples, std::uint64_t seed,
                                            const SampleObserver& observer = {});

struct AnnealedReport {
  double log_mean_over_n = 0.0;    // (1/n) log E_G[Z_I]
  double stderr_log = 0.0;         // standard error of log_mean_over_n
  double profile_prediction = 0.0; // H - (d/2) Q of the truncated profile
  double H = 0.0;
  double Q = 0.0;
  double mean_bad_pairs = 0.0;
  std::uint64_t samples = 0;
  bool analytic = false;           // graph_d == 0: exact log|I|
};

inline constexpr std::size_t kMaxAnnealedN = 10000;

/// Annealed mean over G(n, graph_d/n): E_G Z_I = E_rho[exp(sum W) q^{B(x)}]
/// with q = 1 - graph_d/n, accumulated in the log domain.
AnnealedReport annealed_slice_mean(std::size_t n, double graph_d, const profile::ProfileParams& p,
                                   std::uint64_t samples, std::uint64_t seed);

struct FlatnessAnchor {
  std::size_t anchor_index = 0;
  std::size_t outside_count = 0;
};

/// Anchor v minimizing #{i : x_i - x_v not in [0, 1]}; ties go to the
/// smaller index. O(n log n).
FlatnessAnchor flatness_anchor(std::span<const double> x);

struct TailCensus {
  std::size_t S = 0;  // [0, 1]
  std::size_t U = 0;  // (1, 2]
  std::size_t W = 0;  // [-1, 0)
  std::size_t D = 0;  // everything else
  std::size_t total() const { return S + U + W + D; }
  std::size_t outside() const { return U + W + D; }
};

/// Partition of x - x_anchor into the four value bands.
TailCensus tail_census(std::span<const double> x, std::size_t anchor_index);

struct SurveySummary {
  std::uint64_t accepted = 0;
  double median_fraction = 0.0;  // median of outside_count / n over accepted samples
  double mean_fraction = 0.0;
  double max_fraction = 0.0;
};

struct FlatnessSurvey {
  std::size_t n = 0;
  SurveySummary quenched;  // accepted profile samples on g
  SurveySummary sis;       // SIS samples on the largest component of g
  std::size_t sis_vertices = 0;
};

FlatnessSurvey lipschitz_sampler_flatness_survey(const Graph& g, const profile::ProfileParams& p,
                                                 std::uint64_t samples, std::uint64_t seed);

}  // namespace lipvol::mc

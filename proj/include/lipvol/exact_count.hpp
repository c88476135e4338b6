#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lipvol/graph.hpp"
#include "lipvol/rational.hpp"

namespace lipvol::exact {

/// Thrown when a counting routine would exceed its node-expansion budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultWorkBudget = 1'000'000'000;
inline constexpr std::size_t kDefaultHomVertexLimit = 16;

struct CountOptions {
  /// Maximum number of DP node expansions (state x candidate value).
  std::uint64_t work_budget = kDefaultWorkBudget;
  /// Root per component (indexed like components(g).roots). Defaults to the
  /// minimum-index vertex of each component.
  std::optional<std::vector<Vertex>> roots;
};

/// Number of integer functions f with |f(u) - f(v)| <= h on every edge and
/// f = 0 at one root per component.
///
/// Forward transfer-matrix DP over a BFS order of each component: the state
/// is the tuple of values on the frontier (assigned vertices that still have
/// unassigned neighbors). A vertex at BFS distance k from its root takes
/// values in [-hk, hk] intersected with [x_u - h, x_u + h] for each assigned
/// neighbor u. Components are counted separately and multiplied.
BigInt count_lipschitz(const Graph& g, unsigned h, const CountOptions& opts = {});

/// N_G(0..h_max).
std::vector<BigInt> lipschitz_counts(const Graph& g, unsigned h_max,
                                     const CountOptions& opts = {});

/// k-th forward differences of a sequence, i.e. Delta^k a(0), ..., as many
/// as the sequence length allows.
std::vector<BigInt> forward_differences(const std::vector<BigInt>& values, unsigned order);

struct EhrhartResult {
  std::vector<BigInt> counts;  // N_G(h), h = 0..D
  unsigned D = 0;              // |V| - k
  ExactRational leading;       // Delta^D N(0) / D!  = Vol(P_G)
  double c = 1.0;              // leading^{1/D}; 1 by convention when D = 0
  double volume = 1.0;         // leading as a double
};

/// Exact leading coefficient of the Ehrhart polynomial N_G(h) from its values
/// at h = 0..D. Throws ResourceError if the counts exceed the budget.
EhrhartResult ehrhart_c(const Graph& g, const CountOptions& opts = {});

struct HomCount {
  BigInt count;
  std::size_t target_M = 0;
};

/// Number of maps V(g) -> V(target) sending every edge of g to an edge or a
/// loop of target. g must be loop-free with at most `vertex_limit` vertices.
HomCount count_hom(const Graph& g, const Graph& target, const CountOptions& opts = {},
                   std::size_t vertex_limit = kDefaultHomVertexLimit);

/// True iff the GF(2) cycle space of g is spanned by its 4-cycles.
bool cycle_space_generated_by_4_cycles(const Graph& g);

struct LiftingReport {
  BigInt hom;         // Hom(g, T_{M,h})
  BigInt M_times_N;   // M * N_g(h)
  std::size_t M = 0;
  bool pass = false;
};

/// Checks Hom(g, T_{Lh,h}) = Lh * N_g(h). Requires g connected with cycle
/// space generated by 4-cycles, h >= 1 and L >= 5. Throws
/// std::invalid_argument on precondition violations.
LiftingReport lifting_check(const Graph& g, unsigned h, unsigned L,
                            const CountOptions& opts = {});

/// V_d = Vol(P_{K_{d,d}}) = 2^{2d-1} d (d-1) (d-2)! d! / (2d-1)!, d >= 2.
ExactRational kdd_volume_exact(unsigned d);
/// log V_d through lgamma; for d where the rational is inconvenient.
double kdd_volume_log(unsigned d);

struct GalvinTetaliReport {
  BigInt hom_cube;      // Hom(Q_d, T_{M,h})
  BigInt hom_kdd;       // Hom(K_{d,d}, T_{M,h})
  double lhs_log = 0.0; // log hom_cube
  double rhs_log = 0.0; // (2^d / 2d) log hom_kdd
  bool pass = false;    // hom_cube^{2d} <= hom_kdd^{2^d}, exactly
};

/// d in {2, 3} (Q_d homomorphism counting must be feasible).
GalvinTetaliReport galvin_tetali_check(unsigned d, unsigned h, unsigned L,
                                       const CountOptions& opts = {});

/// log of the hypercube bound ((1/L)(L V_d)^{N/(2d)})^{1/(N-1)}, N = 2^d.
double hypercube_c_upper_log(unsigned d, unsigned L);
double hypercube_c_upper(unsigned d, unsigned L);

/// Exact test of leading <= L^{-1} (L V_d)^{N/(2d)} (i.e. c(Q_d) <= bound),
/// done as leading^{2d} L^{2d} <= (L V_d)^N in rationals. d <= 4.
bool hypercube_bound_holds(unsigned d, unsigned L, const ExactRational& leading);

}  // namespace lipvol::exact

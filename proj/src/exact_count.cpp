#include "lipvol/exact_count.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <span>
#include <unordered_map>

namespace lipvol::exact {

namespace {

using Value = std::int32_t;
using State = std::vector<Value>;

struct StateHash {
  std::size_t operator()(const State& s) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (Value v : s) {
      h ^= static_cast<std::uint32_t>(v);
      h *= 0x100000001b3ULL;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }
};

// Elimination plan for a fixed vertex order: which frontier slots are the
// already-assigned neighbours of each new vertex, and which slots of the
// extended frontier survive afterwards.
struct FrontierPlan {
  std::vector<Vertex> order;
  std::vector<std::vector<std::size_t>> back_slots;
  std::vector<std::vector<std::size_t>> keep;
};

FrontierPlan make_plan(const Graph& g, std::vector<Vertex> order) {
  FrontierPlan plan;
  const std::size_t n = g.num_vertices();
  std::vector<std::size_t> position(n, n);
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
  std::vector<Vertex> frontier;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Vertex v = order[i];
    std::vector<std::size_t> back;
    for (std::size_t j = 0; j < frontier.size(); ++j) {
      if (g.adjacent(frontier[j], v)) back.push_back(j);
    }
    frontier.push_back(v);
    std::vector<std::size_t> keep;
    std::vector<Vertex> next;
    for (std::size_t j = 0; j < frontier.size(); ++j) {
      const auto nb = g.neighbors(frontier[j]);
      const bool open = std::any_of(nb.begin(), nb.end(),
                                    [&](Vertex w) { return position[w] > i; });
      if (open) {
        keep.push_back(j);
        next.push_back(frontier[j]);
      }
    }
    frontier = std::move(next);
    plan.back_slots.push_back(std::move(back));
    plan.keep.push_back(std::move(keep));
  }
  plan.order = std::move(order);
  return plan;
}

// Candidate generator: (step, values of assigned neighbours, out).
using CandidateFn = std::function<void(std::size_t, std::span<const Value>, std::vector<Value>&)>;

BigInt run_frontier_dp(const FrontierPlan& plan, const CandidateFn& candidates,
                       std::uint64_t budget, const char* what) {
  std::unordered_map<State, BigInt, StateHash> current;
  current.emplace(State{}, BigInt(1));
  std::uint64_t work = 0;
  std::vector<Value> nb_values;
  std::vector<Value> cands;
  State extended;
  for (std::size_t step = 0; step < plan.order.size(); ++step) {
    std::unordered_map<State, BigInt, StateHash> next;
    const auto& back = plan.back_slots[step];
    const auto& keep = plan.keep[step];
    for (const auto& [state, count] : current) {
      nb_values.clear();
      for (std::size_t slot : back) nb_values.push_back(state[slot]);
      cands.clear();
      candidates(step, nb_values, cands);
      work += std::max<std::size_t>(cands.size(), 1);
      if (work > budget) {
        throw ResourceError(std::string(what) + ": exceeded the work budget of " +
                            std::to_string(budget) + " node expansions");
      }
      extended = state;
      extended.push_back(0);
      for (Value c : cands) {
        extended.back() = c;
        State projected;
        projected.reserve(keep.size());
        for (std::size_t slot : keep) projected.push_back(extended[slot]);
        next[std::move(projected)] += count;
      }
    }
    current = std::move(next);
    if (current.empty()) return BigInt(0);
  }
  BigInt total(0);
  for (const auto& [state, count] : current) total += count;
  return total;
}

void require_loop_free(const Graph& g, const char* what) {
  if (g.has_loops()) {
    throw std::invalid_argument(std::string(what) + ": graph must be loop-free");
  }
}

BigInt count_connected(const Graph& g, Vertex root, unsigned h, std::uint64_t budget) {
  const auto order = bfs_order(g, root);
  const auto dist = bfs_distances(g, root);
  const auto plan = make_plan(g, order);
  const auto hh = static_cast<Value>(h);
  auto cands = [&](std::size_t step, std::span<const Value> nb, std::vector<Value>& out) {
    if (step == 0) {
      out.push_back(0);
      return;
    }
    const auto reach = static_cast<Value>(dist[plan.order[step]]) * hh;
    Value lo = -reach;
    Value hi = reach;
    for (Value x : nb) {
      lo = std::max(lo, x - hh);
      hi = std::min(hi, x + hh);
    }
    for (Value x = lo; x <= hi; ++x) out.push_back(x);
  };
  return run_frontier_dp(plan, cands, budget, "count_lipschitz");
}

}  // namespace

BigInt count_lipschitz(const Graph& g, unsigned h, const CountOptions& opts) {
  require_loop_free(g, "count_lipschitz");
  const auto cd = components(g);
  if (opts.roots && opts.roots->size() != cd.k) {
    throw std::invalid_argument("count_lipschitz: expected one root per component");
  }
  BigInt total(1);
  for (std::uint32_t c = 0; c < cd.k; ++c) {
    const auto verts = component_vertices(cd, c);
    if (verts.size() == 1) continue;
    const Vertex root = opts.roots ? (*opts.roots)[c] : cd.roots[c];
    if (cd.component_id.at(root) != c) {
      throw std::invalid_argument("count_lipschitz: root " + std::to_string(root) +
                                  " is not in component " + std::to_string(c));
    }
    const Graph sub = induced_subgraph(g, verts);
    const auto local_root =
        static_cast<Vertex>(std::lower_bound(verts.begin(), verts.end(), root) - verts.begin());
    total *= count_connected(sub, local_root, h, opts.work_budget);
  }
  return total;
}

std::vector<BigInt> lipschitz_counts(const Graph& g, unsigned h_max, const CountOptions& opts) {
  std::vector<BigInt> out;
  out.reserve(h_max + 1);
  for (unsigned h = 0; h <= h_max; ++h) out.push_back(count_lipschitz(g, h, opts));
  return out;
}

std::vector<BigInt> forward_differences(const std::vector<BigInt>& values, unsigned order) {
  std::vector<BigInt> cur = values;
  for (unsigned k = 0; k < order && !cur.empty(); ++k) {
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) cur[i] = cur[i + 1] - cur[i];
    cur.pop_back();
  }
  return cur;
}

EhrhartResult ehrhart_c(const Graph& g, const CountOptions& opts) {
  EhrhartResult res;
  const auto cd = components(g);
  res.D = static_cast<unsigned>(g.num_vertices() - cd.k);
  res.counts = lipschitz_counts(g, res.D, opts);
  const auto diff = forward_differences(res.counts, res.D);
  res.leading = make_rational(diff.at(0), factorial(res.D));
  res.volume = to_double(res.leading);
  res.c = res.D == 0 ? 1.0 : std::exp(log_of(res.leading) / static_cast<double>(res.D));
  return res;
}

HomCount count_hom(const Graph& g, const Graph& target, const CountOptions& opts,
                   std::size_t vertex_limit) {
  require_loop_free(g, "count_hom");
  if (g.num_vertices() > vertex_limit) {
    throw ResourceError("count_hom: source graph has " + std::to_string(g.num_vertices()) +
                        " vertices, above the limit " + std::to_string(vertex_limit));
  }
  const std::size_t M = target.num_vertices();
  HomCount out;
  out.target_M = M;
  if (g.num_vertices() == 0) {
    out.count = 1;
    return out;
  }
  if (M == 0) {
    out.count = 0;
    return out;
  }
  const std::size_t words = (M + 63) / 64;
  std::vector<std::vector<std::uint64_t>> rows(M, std::vector<std::uint64_t>(words, 0));
  for (const auto& [u, v] : target.edges()) {
    rows[u][v / 64] |= std::uint64_t{1} << (v % 64);
    rows[v][u / 64] |= std::uint64_t{1} << (u % 64);
  }
  for (Vertex u : target.loops()) rows[u][u / 64] |= std::uint64_t{1} << (u % 64);

  std::vector<Vertex> order;
  const auto cd = components(g);
  for (Vertex r : cd.roots) {
    const auto part = bfs_order(g, r);
    order.insert(order.end(), part.begin(), part.end());
  }
  const auto plan = make_plan(g, order);
  std::vector<std::uint64_t> mask(words);
  auto cands = [&](std::size_t, std::span<const Value> nb, std::vector<Value>& out_vals) {
    if (nb.empty()) {
      for (std::size_t t = 0; t < M; ++t) out_vals.push_back(static_cast<Value>(t));
      return;
    }
    mask = rows[static_cast<std::size_t>(nb[0])];
    for (std::size_t k = 1; k < nb.size(); ++k) {
      const auto& row = rows[static_cast<std::size_t>(nb[k])];
      for (std::size_t w = 0; w < words; ++w) mask[w] &= row[w];
    }
    for (std::size_t w = 0; w < words; ++w) {
      for (std::uint64_t bits = mask[w]; bits != 0; bits &= bits - 1) {
        out_vals.push_back(static_cast<Value>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits))));
      }
    }
  };
  out.count = run_frontier_dp(plan, cands, opts.work_budget, "count_hom");
  return out;
}

bool cycle_space_generated_by_4_cycles(const Graph& g) {
  const std::size_t m = g.num_edges();
  const auto cd = components(g);
  const std::size_t dim = m + cd.k - g.num_vertices();
  if (dim == 0) return true;
  const auto& edges = g.edges();
  auto edge_index = [&](Vertex u, Vertex v) {
    const Edge e{std::min(u, v), std::max(u, v)};
    return static_cast<std::size_t>(std::lower_bound(edges.begin(), edges.end(), e) -
                                    edges.begin());
  };
  const std::size_t words = (m + 63) / 64;
  std::vector<std::vector<std::uint64_t>> basis;  // reduced rows, pivot = lowest set bit
  std::vector<std::size_t> pivots;
  auto insert = [&](std::vector<std::uint64_t> row) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (row[pivots[i] / 64] >> (pivots[i] % 64) & 1) {
        for (std::size_t w = 0; w < words; ++w) row[w] ^= basis[i][w];
      }
    }
    for (std::size_t w = 0; w < words; ++w) {
      if (row[w] != 0) {
        pivots.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(row[w])));
        basis.push_back(std::move(row));
        return;
      }
    }
  };
  const std::size_t n = g.num_vertices();
  for (Vertex a = 0; a < n && basis.size() < dim; ++a) {
    for (Vertex c = a + 1; c < n; ++c) {
      std::vector<Vertex> common;
      std::set_intersection(g.neighbors(a).begin(), g.neighbors(a).end(), g.neighbors(c).begin(),
                            g.neighbors(c).end(), std::back_inserter(common));
      for (std::size_t i = 0; i < common.size(); ++i) {
        for (std::size_t j = i + 1; j < common.size(); ++j) {
          std::vector<std::uint64_t> row(words, 0);
          for (auto idx : {edge_index(a, common[i]), edge_index(common[i], c),
                           edge_index(c, common[j]), edge_index(common[j], a)}) {
            row[idx / 64] ^= std::uint64_t{1} << (idx % 64);
          }
          insert(std::move(row));
        }
      }
    }
  }
  return basis.size() == dim;
}

LiftingReport lifting_check(const Graph& g, unsigned h, unsigned L, const CountOptions& opts) {
  if (h == 0) throw std::invalid_argument("lifting_check: h must be >= 1");
  if (L < 5) throw std::invalid_argument("lifting_check: L must be >= 5");
  if (components(g).k != 1) throw std::invalid_argument("lifting_check: graph must be connected");
  if (!cycle_space_generated_by_4_cycles(g)) {
    throw std::invalid_argument("lifting_check: cycle space is not generated by 4-cycles");
  }
  LiftingReport rep;
  rep.M = static_cast<std::size_t>(L) * h;
  const Graph target = make_circular_target(rep.M, h);
  rep.hom = count_hom(g, target, opts).count;
  rep.M_times_N = BigInt(static_cast<unsigned long>(rep.M)) * count_lipschitz(g, h, opts);
  rep.pass = rep.hom == rep.M_times_N;
  return rep;
}

ExactRational kdd_volume_exact(unsigned d) {
  if (d < 2) throw std::invalid_argument("kdd_volume_exact: d must be >= 2");
  const BigInt num = pow(BigInt(2), 2 * d - 1) * BigInt(d) * BigInt(d - 1) * factorial(d - 2) *
                     factorial(d);
  return make_rational(num, factorial(2 * d - 1));
}

double kdd_volume_log(unsigned d) {
  if (d < 2) throw std::invalid_argument("kdd_volume_log: d must be >= 2");
  const double x = d;
  return (2.0 * x - 1.0) * std::log(2.0) + std::log(x) + std::log(x - 1.0) +
         std::lgamma(x - 1.0) + std::lgamma(x + 1.0) - std::lgamma(2.0 * x);
}

GalvinTetaliReport galvin_tetali_check(unsigned d, unsigned h, unsigned L,
                                       const CountOptions& opts) {
  if (d < 2 || d > 3) throw std::invalid_argument("galvin_tetali_check: d must be 2 or 3");
  if (h == 0 || L < 5) throw std::invalid_argument("galvin_tetali_check: need h >= 1, L >= 5");
  const Graph target = make_circular_target(static_cast<std::size_t>(L) * h, h);
  GalvinTetaliReport rep;
  rep.hom_cube = count_hom(make_hypercube(d), target, opts).count;
  rep.hom_kdd = count_hom(make_complete_bipartite(d, d), target, opts).count;
  const unsigned long N = 1UL << d;
  rep.lhs_log = log_of(rep.hom_cube);
  rep.rhs_log = static_cast<double>(N) / (2.0 * d) * log_of(rep.hom_kdd);
  rep.pass = pow(rep.hom_cube, 2 * d) <= pow(rep.hom_kdd, N);
  return rep;
}

double hypercube_c_upper_log(unsigned d, unsigned L) {
  if (d < 2) throw std::invalid_argument("hypercube_c_upper: d must be >= 2");
  if (L < 1) throw std::invalid_argument("hypercube_c_upper: L must be >= 1");
  const double log_v = d <= 200 ? log_of(kdd_volume_exact(d)) : kdd_volume_log(d);
  const double N = std::ldexp(1.0, static_cast<int>(d));
  const double log_L = std::log(static_cast<double>(L));
  // ((N/(2d)) log(L V) - log L) / (N - 1), arranged to stay finite for huge N.
  return (N / (N - 1.0)) * (log_L + log_v) / (2.0 * d) - log_L / (N - 1.0);
}

double hypercube_c_upper(unsigned d, unsigned L) { return std::exp(hypercube_c_upper_log(d, L)); }

bool hypercube_bound_holds(unsigned d, unsigned L, const ExactRational& leading) {
  if (d < 2 || d > 4) throw std::invalid_argument("hypercube_bound_holds: d must be in [2, 4]");
  const unsigned long N = 1UL << d;
  const ExactRational lv = ExactRational(L) * kdd_volume_exact(d);
  return pow(leading, 2 * d) * pow(ExactRational(L), 2 * d) <= pow(lv, N);
}

}  // namespace lipvol::exact

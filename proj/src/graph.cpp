#include "lipvol/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "lipvol/rng.hpp"

namespace lipvol {

Graph::Graph(std::size_t n, std::vector<Edge> edges, std::vector<Vertex> loops)
    : n_(n), edges_(std::move(edges)), loops_(std::move(loops)) {
  for (auto& [u, v] : edges_) {
    if (u >= n_ || v >= n_) {
      throw std::invalid_argument("edge endpoint out of range: {" + std::to_string(u) + "," +
                                  std::to_string(v) + "} with n=" + std::to_string(n_));
    }
    if (u == v) {
      throw std::invalid_argument("self-loop " + std::to_string(u) +
                                  " given as an edge; pass it in loops");
    }
    if (u > v) std::swap(u, v);
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw std::invalid_argument("duplicate edge");
  }
  for (Vertex v : loops_) {
    if (v >= n_) throw std::invalid_argument("loop vertex out of range");
  }
  std::sort(loops_.begin(), loops_.end());
  if (std::adjacent_find(loops_.begin(), loops_.end()) != loops_.end()) {
    throw std::invalid_argument("duplicate loop");
  }

  offsets_.assign(n_ + 1, 0);
  for (const auto& [u, v] : edges_) {
    ++offsets_[u + 1];
    ++offsets_[v + 1];
  }
  for (std::size_t i = 0; i < n_; ++i) offsets_[i + 1] += offsets_[i];
  adj_.resize(offsets_[n_]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [u, v] : edges_) {
    adj_[fill[u]++] = v;
    adj_[fill[v]++] = u;
  }
  for (std::size_t i = 0; i < n_; ++i) {
    std::sort(adj_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
              adj_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]));
  }
}

bool Graph::has_loop(Vertex v) const {
  return std::binary_search(loops_.begin(), loops_.end(), v);
}

bool Graph::adjacent(Vertex u, Vertex v) const {
  if (u == v) return has_loop(u);
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

ComponentDecomposition components(const Graph& g) {
  const std::size_t n = g.num_vertices();
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  ComponentDecomposition cd;
  cd.component_id.assign(n, kUnset);
  std::vector<Vertex> queue;
  queue.reserve(n);
  for (Vertex s = 0; s < n; ++s) {
    if (cd.component_id[s] != kUnset) continue;
    const auto c = static_cast<std::uint32_t>(cd.k++);
    cd.roots.push_back(s);
    cd.component_id[s] = c;
    queue.clear();
    queue.push_back(s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (Vertex w : g.neighbors(queue[head])) {
        if (cd.component_id[w] == kUnset) {
          cd.component_id[w] = c;
          queue.push_back(w);
        }
      }
    }
  }
  return cd;
}

std::vector<Vertex> component_vertices(const ComponentDecomposition& cd, std::uint32_t c) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < cd.component_id.size(); ++v) {
    if (cd.component_id[v] == c) out.push_back(v);
  }
  return out;
}

Graph induced_subgraph(const Graph& g, std::span<const Vertex> vertices) {
  constexpr auto kAbsent = std::numeric_limits<Vertex>::max();
  std::vector<Vertex> local(g.num_vertices(), kAbsent);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (local[vertices[i]] != kAbsent) throw std::invalid_argument("repeated vertex");
    local[vertices[i]] = static_cast<Vertex>(i);
  }
  std::vector<Edge> edges;
  std::vector<Vertex> loops;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Vertex v = vertices[i];
    for (Vertex w : g.neighbors(v)) {
      if (local[w] != kAbsent && local[w] > i) edges.emplace_back(static_cast<Vertex>(i), local[w]);
    }
    if (g.has_loop(v)) loops.push_back(static_cast<Vertex>(i));
  }
  return Graph(vertices.size(), std::move(edges), std::move(loops));
}

std::vector<Vertex> largest_component(const Graph& g) {
  const auto cd = components(g);
  std::vector<std::size_t> sizes(cd.k, 0);
  for (auto c : cd.component_id) ++sizes[c];
  if (cd.k == 0) return {};
  const auto best =
      static_cast<std::uint32_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  return component_vertices(cd, best);
}

std::vector<std::uint32_t> bfs_distances(const Graph& g, Vertex source) {
  constexpr auto kInf = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> dist(g.num_vertices(), kInf);
  std::vector<Vertex> queue{source};
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex v = queue[head];
    for (Vertex w : g.neighbors(v)) {
      if (dist[w] == kInf) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

std::vector<Vertex> bfs_order(const Graph& g, Vertex source) {
  std::vector<std::uint8_t> seen(g.num_vertices(), 0);
  std::vector<Vertex> order{source};
  seen[source] = 1;
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (Vertex w : g.neighbors(order[head])) {
      if (!seen[w]) {
        seen[w] = 1;
        order.push_back(w);
      }
    }
  }
  return order;
}

bool is_bipartite(const Graph& g, std::vector<std::uint8_t>* side) {
  if (g.has_loops()) return false;
  constexpr std::uint8_t kUnset = 2;
  std::vector<std::uint8_t> color(g.num_vertices(), kUnset);
  for (Vertex s = 0; s < g.num_vertices(); ++s) {
    if (color[s] != kUnset) continue;
    color[s] = 0;
    std::vector<Vertex> queue{s};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Vertex v = queue[head];
      for (Vertex w : g.neighbors(v)) {
        if (color[w] == kUnset) {
          color[w] = static_cast<std::uint8_t>(1 - color[v]);
          queue.push_back(w);
        } else if (color[w] == color[v]) {
          return false;
        }
      }
    }
  }
  if (side) *side = std::move(color);
  return true;
}

namespace {

void require_positive(std::size_t n, const char* what) {
  if (n == 0) throw std::invalid_argument(std::string(what) + ": size must be >= 1");
}

}  // namespace

Graph make_path(std::size_t n) {
  require_positive(n, "make_path");
  std::vector<Edge> edges;
  for (Vertex i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph(n, std::move(edges));
}

Graph make_cycle(std::size_t n) {
  if (n < 3) throw std::invalid_argument("make_cycle: n must be >= 3");
  std::vector<Edge> edges;
  for (Vertex i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  edges.emplace_back(0, static_cast<Vertex>(n - 1));
  return Graph(n, std::move(edges));
}

Graph make_complete(std::size_t n) {
  require_positive(n, "make_complete");
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  }
  return Graph(n, std::move(edges));
}

Graph make_complete_bipartite(std::size_t a, std::size_t b) {
  require_positive(a, "make_complete_bipartite");
  require_positive(b, "make_complete_bipartite");
  std::vector<Edge> edges;
  for (Vertex u = 0; u < a; ++u) {
    for (Vertex v = 0; v < b; ++v) edges.emplace_back(u, static_cast<Vertex>(a + v));
  }
  return Graph(a + b, std::move(edges));
}

Graph make_hypercube(unsigned d) {
  if (d > kMaxHypercubeDim) {
    throw std::invalid_argument("make_hypercube: d=" + std::to_string(d) + " exceeds the limit " +
                                std::to_string(kMaxHypercubeDim));
  }
  const std::size_t n = std::size_t{1} << d;
  std::vector<Edge> edges;
  edges.reserve(n * d / 2);
  for (Vertex u = 0; u < n; ++u) {
    for (unsigned bit = 0; bit < d; ++bit) {
      const Vertex v = u ^ (Vertex{1} << bit);
      if (u < v) edges.emplace_back(u, v);
    }
  }
  return Graph(n, std::move(edges));
}

Graph make_circular_target(std::size_t M, std::size_t h) {
  if (h == 0) throw std::invalid_argument("make_circular_target: h must be >= 1");
  if (M <= 2 * h) {
    throw std::invalid_argument("make_circular_target: need M > 2h so that every edge has a unique "
                                "lift increment in [-h, h] (got M=" +
                                std::to_string(M) + ", h=" + std::to_string(h) + ")");
  }
  std::vector<Edge> edges;
  std::vector<Vertex> loops;
  for (Vertex u = 0; u < M; ++u) {
    loops.push_back(u);
    for (std::size_t step = 1; step <= h; ++step) {
      const auto v = static_cast<Vertex>((u + step) % M);
      edges.emplace_back(std::min(u, v), std::max(u, v));
    }
  }
  return Graph(M, std::move(edges), std::move(loops));
}

Graph gen_gnp(std::size_t n, double d, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("gen_gnp: n must be >= 1");
  if (!(d >= 0.0) || d >= static_cast<double>(n)) {
    throw std::invalid_argument("gen_gnp: need 0 <= d < n");
  }
  return gen_gnp_p(n, d / static_cast<double>(n), seed);
}

Graph gen_gnp_p(std::size_t n, double p, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("gen_gnp_p: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("gen_gnp_p: p outside [0,1]");
  std::vector<Edge> edges;
  if (p == 0.0) return Graph(n, {});
  if (p == 1.0) return make_complete(n);

  // Batagelj-Brandes skipping: pairs (v, w) with w < v enumerated row by row.
  Rng rng(seed);
  const double log_q = std::log1p(-p);
  std::int64_t v = 1;
  std::int64_t w = -1;
  const auto nn = static_cast<std::int64_t>(n);
  while (v < nn) {
    const double r = rng.uniform01();
    const double skip = std::floor(std::log1p(-r) / log_q);
    if (skip > static_cast<double>(nn) * static_cast<double>(nn)) break;
    w += 1 + static_cast<std::int64_t>(skip);
    while (w >= v && v < nn) {
      w -= v;
      ++v;
    }
    if (v < nn) edges.emplace_back(static_cast<Vertex>(w), static_cast<Vertex>(v));
  }
  return Graph(n, std::move(edges));
}

double giant_fraction_fixed_point(double d) {
  if (!(d > 0.0)) throw std::invalid_argument("giant_fraction_fixed_point: d must be > 0");
  if (d <= 1.0) return 1.0;
  // g(r) = r - exp(-d(1-r)) is concave with g(0) < 0, g(1) = 0 and its
  // maximum at r* = 1 - log(d)/d where g(r*) > 0; bisect on [0, r*].
  auto g = [d](double r) { return r - std::exp(-d * (1.0 - r)); };
  double lo = 0.0;
  double hi = 1.0 - std::log(d) / d;
  if (g(hi) <= 0.0) return hi;  // d within rounding of 1
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Graph read_edge_list(std::istream& in) {
  std::size_t n = 0, m = 0, l = 0;
  if (!(in >> n >> m >> l)) throw std::runtime_error("edge list: bad header, expected \"n m l\"");
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::uint64_t u = 0, v = 0;
    if (!(in >> u >> v)) throw std::runtime_error("edge list: truncated at edge " + std::to_string(i));
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  std::vector<Vertex> loops;
  for (std::size_t i = 0; i < l; ++i) {
    std::uint64_t u = 0;
    if (!(in >> u)) throw std::runtime_error("edge list: truncated at loop " + std::to_string(i));
    loops.push_back(static_cast<Vertex>(u));
  }
  return Graph(n, std::move(edges), std::move(loops));
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.num_vertices() << ' ' << g.num_edges() << ' ' << g.loops().size() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
  for (Vertex u : g.loops()) out << u << '\n';
}

Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  try {
    return read_edge_list(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

namespace {

std::vector<double> parse_numbers(std::string_view args, std::string_view spec) {
  std::vector<double> out;
  std::string buf(args);
  std::stringstream ss(buf);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad graph spec '" + std::string(spec) + "'");
    }
  }
  return out;
}

std::size_t as_size(double x, std::string_view spec) {
  if (x < 0 || x != std::floor(x)) {
    throw std::invalid_argument("bad graph spec '" + std::string(spec) + "': expected integer");
  }
  return static_cast<std::size_t>(x);
}

}  // namespace

Graph resolve_graph_spec(std::string_view spec) {
  std::string_view rest = spec;
  const bool builtin = rest.starts_with("builtin:");
  if (builtin) rest.remove_prefix(8);
  if (!builtin && !rest.starts_with("circ:")) return load_edge_list(std::string(spec));

  const auto colon = rest.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("bad graph spec '" + std::string(spec) + "'");
  }
  const std::string_view name = rest.substr(0, colon);
  const auto args = parse_numbers(rest.substr(colon + 1), spec);
  auto need = [&](std::size_t count) {
    if (args.size() != count) {
      throw std::invalid_argument("graph spec '" + std::string(spec) + "' expects " +
                                  std::to_string(count) + " argument(s)");
    }
  };
  if (name == "path") { need(1); return make_path(as_size(args[0], spec)); }
  if (name == "cycle") { need(1); return make_cycle(as_size(args[0], spec)); }
  if (name == "complete") { need(1); return make_complete(as_size(args[0], spec)); }
  if (name == "kab") {
    need(2);
    return make_complete_bipartite(as_size(args[0], spec), as_size(args[1], spec));
  }
  if (name == "hypercube") { need(1); return make_hypercube(static_cast<unsigned>(as_size(args[0], spec))); }
  if (name == "circ") {
    need(2);
    return make_circular_target(as_size(args[0], spec), as_size(args[1], spec));
  }
  if (name == "gnp") {
    need(3);
    return gen_gnp(as_size(args[0], spec), args[1], as_size(args[2], spec));
  }
  throw std::invalid_argument("unknown builtin graph '" + std::string(name) + "'");
}

}  // namespace lipvol

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lipvol {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Undirected simple graph with optional self-loops.
///
/// Immutable after construction. Edges are stored once as (u, v) with u < v
/// and kept sorted; loops are a sorted set of vertices. Loops are only
/// meaningful on homomorphism targets; the Lipschitz counters reject them.
class Graph {
 public:
  Graph() = default;

  /// Throws std::invalid_argument on out-of-range endpoints, u == v entries
  /// in `edges`, or duplicates (in either orientation).
  Graph(std::size_t n, std::vector<Edge> edges, std::vector<Vertex> loops = {});

  std::size_t num_vertices() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Vertex>& loops() const { return loops_; }
  bool has_loops() const { return !loops_.empty(); }
  bool has_loop(Vertex v) const;

  /// Sorted neighbor list, loops excluded.
  std::span<const Vertex> neighbors(Vertex v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  bool adjacent(Vertex u, Vertex v) const;

  bool operator==(const Graph& other) const {
    return n_ == other.n_ && edges_ == other.edges_ && loops_ == other.loops_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<Vertex> loops_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> adj_;
};

struct ComponentDecomposition {
  std::vector<std::uint32_t> component_id;  // vertex -> component index
  std::vector<Vertex> roots;                // minimum-index vertex per component
  std::size_t k = 0;
};

ComponentDecomposition components(const Graph& g);

/// Vertices of component `c`, ascending.
std::vector<Vertex> component_vertices(const ComponentDecomposition& cd, std::uint32_t c);

/// Subgraph induced on `vertices` (which need not be sorted); vertex i of the
/// result is vertices[i]. Loops are carried over.
Graph induced_subgraph(const Graph& g, std::span<const Vertex> vertices);

/// Largest component, ties broken by smaller component index (i.e. smaller
/// root). Returns the vertex list, ascending.
std::vector<Vertex> largest_component(const Graph& g);

/// BFS distances from `source`; unreachable vertices get UINT32_MAX.
std::vector<std::uint32_t> bfs_distances(const Graph& g, Vertex source);

/// BFS visiting order from `source`, neighbors in increasing index order.
std::vector<Vertex> bfs_order(const Graph& g, Vertex source);

/// 2-coloring if bipartite (loops make a graph non-bipartite).
bool is_bipartite(const Graph& g, std::vector<std::uint8_t>* side = nullptr);

// Deterministic constructors. Labelings:
//   path:      i ~ i+1
//   cycle:     i ~ i+1 mod n (n >= 3)
//   complete:  all pairs
//   K_{a,b}:   left part 0..a-1, right part a..a+b-1
//   hypercube: vertex = integer whose binary expansion is the coordinate
//              vector; u ~ v iff popcount(u ^ v) == 1
Graph make_path(std::size_t n);
Graph make_cycle(std::size_t n);
Graph make_complete(std::size_t n);
Graph make_complete_bipartite(std::size_t a, std::size_t b);
Graph make_hypercube(unsigned d);

inline constexpr unsigned kMaxHypercubeDim = 20;

/// Circular target T_{M,h}: vertex set Z/MZ, a loop at every vertex, and
/// u ~ v iff their cyclic distance lies in [1, h]. Requires M > 2h, the
/// precondition of the lifting argument from homomorphisms to integer
/// Lipschitz functions.
Graph make_circular_target(std::size_t M, std::size_t h);

/// G(n, p) with p = d/n. Requires n >= 1 and 0 <= d < n.
Graph gen_gnp(std::size_t n, double d, std::uint64_t seed);

/// G(n, p) with an explicit edge probability p in [0, 1]; p = 1 gives K_n.
/// Geometric skipping over the C(n,2) pair sequence, O(n + |E|).
Graph gen_gnp_p(std::size_t n, double p, std::uint64_t seed);

/// Smallest fixed point of rho = exp(-d (1 - rho)) on [0, 1], i.e. the
/// asymptotic fraction of vertices outside the giant component of
/// G(n, d/n). Returns 1 for d <= 1.
double giant_fraction_fixed_point(double d);

// Edge-list text format: "n m l", then m lines "u v", then l lines "u".
Graph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const Graph& g);
Graph load_edge_list(const std::string& path);

/// Resolves a graph spec as accepted by the CLI:
///   builtin:path:N | builtin:cycle:N | builtin:complete:N |
///   builtin:kab:A,B | builtin:hypercube:D | builtin:circ:M,H |
///   builtin:gnp:N,D,SEED | circ:M,H | <path to edge-list file>
Graph resolve_graph_spec(std::string_view spec);

}  // namespace lipvol

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace brdlab {

using Vertex = std::size_t;

struct Edge {
  Vertex u;
  Vertex v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Sorted, duplicate-free set of vertex indices.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::vector<Vertex> members);
  VertexSet(std::initializer_list<Vertex> members);

  /// {0, 1, ..., n-1}.
  static VertexSet all(std::size_t n);

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(Vertex v) const;
  Vertex operator[](std::size_t k) const { return members_[k]; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }
  const std::vector<Vertex>& members() const { return members_; }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;
  friend auto operator<=>(const VertexSet& a, const VertexSet& b) {
    return a.members_ <=> b.members_;
  }

 private:
  std::vector<Vertex> members_;
};

/// Undirected simple graph. Immutable after construction.
///
/// Edges are stored canonically (u < v, sorted, unique) together with sorted
/// adjacency lists. A dense adjacency matrix is produced on demand.
class Graph {
 public:
  /// Validates and canonicalizes. Throws InputError on n == 0, out-of-range
  /// endpoints or self-loops. Duplicate and reversed pairs collapse.
  Graph(std::size_t n, std::span<const Edge> edges);
  Graph(std::size_t n, std::initializer_list<Edge> edges)
      : Graph(n, std::span<const Edge>(edges.begin(), edges.size())) {}

  std::size_t size() const { return neighbors_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Vertex>& neighbors(Vertex v) const { return neighbors_[v]; }
  std::size_t degree(Vertex v) const { return neighbors_[v].size(); }
  bool adjacent(Vertex u, Vertex v) const;

  Eigen::MatrixXd adjacency_matrix() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.size() == b.size() && a.edges_ == b.edges_;
  }

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> neighbors_;
};

Graph build_graph(std::size_t n, std::span<const Edge> edges);

namespace generators {

Graph path(std::size_t n);
/// Requires n >= 3.
Graph cycle(std::size_t n);
Graph clique(std::size_t n);
/// The star with m leaves, identical to complete_bipartite(m, 1).
Graph star(std::size_t m);
/// Parts {0..m-1} and {m..m+l-1}.
Graph complete_bipartite(std::size_t m, std::size_t l);
/// Vertices of b are shifted by a.size().
Graph disjoint_union(const Graph& a, const Graph& b);

Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed);
/// Seed clique of size m, then each new vertex attaches to m distinct
/// existing vertices chosen with probability proportional to degree.
Graph barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed);
/// Pairing model: stubs are shuffled and paired, and pairs that would form a
/// loop or a repeated edge are re-paired; a pairing that gets stuck restarts,
/// up to max_attempts times. For d > (n - 1) / 2 the complement of an
/// (n - 1 - d)-regular graph is returned.
Graph random_regular(std::size_t n, std::size_t d, std::uint64_t seed,
                     int max_attempts = 1000);

}  // namespace generators

struct InducedSubgraph {
  Graph graph;
  /// original[k] is the vertex of the parent graph relabeled to k.
  std::vector<Vertex> original;
};

InducedSubgraph induced_subgraph(const Graph& g, const VertexSet& s);

/// Components of the subgraph induced by s, ordered by smallest member.
std::vector<VertexSet> connected_components(const Graph& g, const VertexSet& s);

struct CliqueUnionCheck {
  bool is_clique_union = false;
  /// Component sizes (ascending) when is_clique_union holds.
  std::vector<std::size_t> clique_sizes;
};

CliqueUnionCheck is_disjoint_clique_union(const Graph& g, const VertexSet& s);

struct ForbiddenSubgraphReport {
  using Witness = std::array<Vertex, 4>;
  /// Ordered along the path.
  std::optional<Witness> p4;
  /// Ordered around the cycle.
  std::optional<Witness> c4;
  /// Center first.
  std::optional<Witness> claw;

  bool any() const { return p4 || c4 || claw; }
};

/// Exhaustive search over 4-subsets for induced P4, C4 and K_{1,3}.
/// Throws InputError when the graph has more than max_vertices vertices.
ForbiddenSubgraphReport forbidden_subgraph_check(const Graph& g,
                                                 std::size_t max_vertices = 64);

}  // namespace brdlab

#include "brdlab/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "brdlab/errors.hpp"
#include "brdlab/rng.hpp"

namespace brdlab {

VertexSet::VertexSet(std::vector<Vertex> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

VertexSet::VertexSet(std::initializer_list<Vertex> members)
    : VertexSet(std::vector<Vertex>(members)) {}

VertexSet VertexSet::all(std::size_t n) {
  std::vector<Vertex> v(n);
  std::iota(v.begin(), v.end(), Vertex{0});
  return VertexSet(std::move(v));
}

bool VertexSet::contains(Vertex v) const {
  return std::binary_search(members_.begin(), members_.end(), v);
}

Graph::Graph(std::size_t n, std::span<const Edge> edges) {
  if (n == 0) throw InputError("graph must have at least one vertex");
  edges_.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw InputError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                       ") has a vertex outside [0," + std::to_string(n) + ")");
    }
    if (e.u == e.v) throw InputError("self-loop at vertex " + std::to_string(e.u));
    edges_.push_back(e.u < e.v ? e : Edge{e.v, e.u});
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  neighbors_.resize(n);
  for (const Edge& e : edges_) {
    neighbors_[e.u].push_back(e.v);
    neighbors_[e.v].push_back(e.u);
  }
  for (auto& adj : neighbors_) std::sort(adj.begin(), adj.end());
}

bool Graph::adjacent(Vertex u, Vertex v) const {
  const auto& adj = neighbors_[u];
  return std::binary_search(adj.begin(), adj.end(), v);
}

Eigen::MatrixXd Graph::adjacency_matrix() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : edges_) {
    a(static_cast<Eigen::Index>(e.u), static_cast<Eigen::Index>(e.v)) = 1.0;
    a(static_cast<Eigen::Index>(e.v), static_cast<Eigen::Index>(e.u)) = 1.0;
  }
  return a;
}

Graph build_graph(std::size_t n, std::span<const Edge> edges) { return Graph(n, edges); }

namespace generators {
namespace {

void require_positive(std::size_t n, const char* what) {
  if (n == 0) throw InputError(std::string(what) + " size must be at least 1");
}

}  // namespace

Graph path(std::size_t n) {
  require_positive(n, "path");
  std::vector<Edge> edges;
  for (Vertex i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return Graph(n, edges);
}

Graph cycle(std::size_t n) {
  if (n < 3) throw InputError("cycle needs at least 3 vertices");
  std::vector<Edge> edges;
  for (Vertex i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  return Graph(n, edges);
}

Graph clique(std::size_t n) {
  require_positive(n, "clique");
  std::vector<Edge> edges;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) edges.push_back({i, j});
  return Graph(n, edges);
}

Graph star(std::size_t m) { return complete_bipartite(m, 1); }

Graph complete_bipartite(std::size_t m, std::size_t l) {
  require_positive(m, "complete bipartite part");
  require_positive(l, "complete bipartite part");
  std::vector<Edge> edges;
  for (Vertex i = 0; i < m; ++i)
    for (Vertex j = 0; j < l; ++j) edges.push_back({i, m + j});
  return Graph(m + l, edges);
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  std::vector<Edge> edges = a.edges();
  for (const Edge& e : b.edges()) edges.push_back({e.u + a.size(), e.v + a.size()});
  return Graph(a.size() + b.size(), edges);
}

Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  require_positive(n, "Erdos-Renyi");
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("Erdos-Renyi p must lie in [0,1]");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) edges.push_back({i, j});
  return Graph(n, edges);
}

Graph barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1 || m >= n) throw InputError("Barabasi-Albert requires 1 <= m < n");
  Rng rng(seed);
  std::vector<Edge> edges;
  // Each edge contributes both endpoints, so a uniform pick from this list is
  // a degree-proportional pick of a vertex.
  std::vector<Vertex> endpoints;
  for (Vertex i = 0; i < m; ++i) {
    for (Vertex j = i + 1; j < m; ++j) {
      edges.push_back({i, j});
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  }
  std::vector<Vertex> targets;
  for (Vertex v = m; v < n; ++v) {
    targets.clear();
    while (targets.size() < m) {
      // Zero total degree only happens for the single-vertex seed (m == 1).
      const Vertex t = endpoints.empty() ? static_cast<Vertex>(rng.below(v))
                                         : endpoints[rng.below(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (Vertex t : targets) {
      edges.push_back({t, v});
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return Graph(n, edges);
}

Graph random_regular(std::size_t n, std::size_t d, std::uint64_t seed, int max_attempts) {
  require_positive(n, "random regular");
  if (d >= n) throw InputError("random regular degree must be below n");
  if ((n * d) % 2 != 0) throw InputError("random regular needs n*d even");
  // Dense requests are built as the complement of a sparse one.
  if (2 * d > n - 1) {
    const Graph sparse = random_regular(n, n - 1 - d, seed, max_attempts);
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v)
        if (!sparse.adjacent(u, v)) edges.push_back({u, v});
    return Graph(n, edges);
  }
  Rng rng(seed);
  std::vector<Vertex> stubs;
  std::vector<Vertex> left;
  std::set<std::pair<Vertex, Vertex>> edges;
  auto suitable = [&](Vertex a, Vertex b) {
    return a != b && !edges.contains(a < b ? std::pair{a, b} : std::pair{b, a});
  };
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    edges.clear();
    stubs.clear();
    for (Vertex v = 0; v < n; ++v)
      for (std::size_t k = 0; k < d; ++k) stubs.push_back(v);
    // Shuffle and pair the open stubs; pairs that would form a loop or a
    // repeated edge go back into the pool for the next pass.
    bool stuck = false;
    while (!stubs.empty() && !stuck) {
      for (std::size_t i = stubs.size(); i > 1; --i) std::swap(stubs[i - 1], stubs[rng.below(i)]);
      left.clear();
      for (std::size_t k = 0; k < stubs.size(); k += 2) {
        const Vertex a = stubs[k];
        const Vertex b = stubs[k + 1];
        if (suitable(a, b)) {
          edges.insert(a < b ? std::pair{a, b} : std::pair{b, a});
        } else {
          left.push_back(a);
          left.push_back(b);
        }
      }
      if (left.size() == stubs.size()) {
        stuck = true;
        for (std::size_t i = 0; i < left.size() && stuck; ++i)
          for (std::size_t j = i + 1; j < left.size() && stuck; ++j)
            if (suitable(left[i], left[j])) stuck = false;
      }
      stubs.swap(left);
    }
    if (stuck) continue;
    std::vector<Edge> out;
    out.reserve(edges.size());
    for (const auto& [a, b] : edges) out.push_back({a, b});
    return Graph(n, out);
  }
  throw GenerationError("random regular pairing failed after " +
                        std::to_string(max_attempts) + " attempts");
}

}  // namespace generators

InducedSubgraph induced_subgraph(const Graph& g, const VertexSet& s) {
  std::vector<Vertex> original = s.members();
  if (!original.empty() && original.back() >= g.size())
    throw InputError("vertex set is not contained in the graph");
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < original.size(); ++a) {
    for (Vertex w : g.neighbors(original[a])) {
      if (w <= original[a]) continue;
      auto it = std::lower_bound(original.begin(), original.end(), w);
      if (it != original.end() && *it == w)
        edges.push_back({a, static_cast<Vertex>(it - original.begin())});
    }
  }
  // Graph requires n >= 1; an empty selection yields no subgraph to build.
  if (original.empty()) throw InputError("induced subgraph of an empty vertex set");
  return {Graph(original.size(), edges), std::move(original)};
}

std::vector<VertexSet> connected_components(const Graph& g, const VertexSet& s) {
  std::vector<VertexSet> out;
  if (s.empty()) return out;
  if (s.members().back() >= g.size()) throw InputError("vertex set is not contained in the graph");
  std::vector<char> seen(g.size(), 0);
  std::vector<Vertex> stack;
  for (Vertex root : s) {
    if (seen[root]) continue;
    std::vector<Vertex> comp;
    seen[root] = 1;
    stack.push_back(root);
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (Vertex w : g.neighbors(v)) {
        if (!seen[w] && s.contains(w)) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    out.emplace_back(std::move(comp));
  }
  return out;
}

CliqueUnionCheck is_disjoint_clique_union(const Graph& g, const VertexSet& s) {
  CliqueUnionCheck result;
  for (const VertexSet& comp : connected_components(g, s)) {
    for (Vertex v : comp) {
      std::size_t inside = 0;
      for (Vertex w : g.neighbors(v)) inside += comp.contains(w) ? 1 : 0;
      if (inside + 1 != comp.size()) return {};
    }
    result.clique_sizes.push_back(comp.size());
  }
  std::sort(result.clique_sizes.begin(), result.clique_sizes.end());
  result.is_clique_union = true;
  return result;
}

ForbiddenSubgraphReport forbidden_subgraph_check(const Graph& g, std::size_t max_vertices) {
  const std::size_t n = g.size();
  if (n > max_vertices)
    throw InputError("forbidden subgraph search limited to " + std::to_string(max_vertices) +
                     " vertices");
  ForbiddenSubgraphReport report;
  std::array<Vertex, 4> q{};
  for (q[0] = 0; q[0] < n; ++q[0])
    for (q[1] = q[0] + 1; q[1] < n; ++q[1])
      for (q[2] = q[1] + 1; q[2] < n; ++q[2])
        for (q[3] = q[2] + 1; q[3] < n; ++q[3]) {
          std::array<int, 4> deg{};
          int edges = 0;
          for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b)
              if (g.adjacent(q[a], q[b])) {
                ++deg[a];
                ++deg[b];
                ++edges;
              }
          if (edges != 3 && edges != 4) continue;
          const int maxdeg = *std::max_element(deg.begin(), deg.end());
          const int mindeg = *std::min_element(deg.begin(), deg.end());
          if (edges == 3 && maxdeg == 3 && !report.claw) {
            ForbiddenSubgraphReport::Witness w{};
            int center = static_cast<int>(std::max_element(deg.begin(), deg.end()) - deg.begin());
            w[0] = q[center];
            int k = 1;
            for (int a = 0; a < 4; ++a)
              if (a != center) w[k++] = q[a];
            report.claw = w;
          } else if (edges == 3 && maxdeg == 2 && mindeg == 1 && !report.p4) {
            // Walk from an endpoint (degree 1 inside the quadruple).
            int cur = 0;
            while (deg[cur] != 1) ++cur;
            ForbiddenSubgraphReport::Witness w{};
            int prev = -1;
            for (int k = 0; k < 4; ++k) {
              w[k] = q[cur];
              for (int b = 0; b < 4; ++b) {
                if (b != cur && b != prev && g.adjacent(q[cur], q[b])) {
                  prev = cur;
                  cur = b;
                  break;
                }
              }
            }
            report.p4 = w;
          } else if (edges == 4 && maxdeg == 2 && !report.c4) {
            ForbiddenSubgraphReport::Witness w{};
            int cur = 0;
            int prev = -1;
            for (int k = 0; k < 4; ++k) {
              w[k] = q[cur];
              for (int b = 0; b < 4; ++b) {
                if (b != cur && b != prev && g.adjacent(q[cur], q[b])) {
                  prev = cur;
                  cur = b;
                  break;
                }
              }
            }
            report.c4 = w;
          }
          if (report.p4 && report.c4 && report.claw) return report;
        }
  return report;
}

}  // namespace brdlab

#include "brdlab/equilibria.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

#include "brdlab/errors.hpp"
#include "brdlab/spectral.hpp"

namespace brdlab {

const char* to_string(Stability s) {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    case Stability::boundary: return "boundary";
  }
  return "unstable";
}

const char* to_string(Uniqueness u) {
  return u == Uniqueness::unique ? "unique" : "possibly-multiple";
}

namespace {

void require_delta(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw InputError("delta must lie in [0,1]");
}

Eigen::MatrixXd system_matrix(const Graph& sub, double delta) {
  const auto k = static_cast<Eigen::Index>(sub.size());
  Eigen::MatrixXd b = Eigen::MatrixXd::Identity(k, k);
  for (const Edge& e : sub.edges()) {
    b(static_cast<Eigen::Index>(e.u), static_cast<Eigen::Index>(e.v)) = delta;
    b(static_cast<Eigen::Index>(e.v), static_cast<Eigen::Index>(e.u)) = delta;
  }
  return b;
}

double neighbor_level_sum(const Graph& g, const std::vector<double>& levels, Vertex i) {
  double s = 0.0;
  for (Vertex j : g.neighbors(i)) s += levels[j];
  return s;
}

// Three-way classification of the strict inequalities: any clear violation
// makes the set unstable; near-equalities with no violation give boundary.
Stability classify(double delta, double threshold, const ActiveSetReport& r) {
  bool hard = false;
  bool near = false;
  auto strict = [&](double slack) {
    if (slack > kStrictTolerance) return;
    if (slack < -kStrictTolerance) hard = true;
    else near = true;
  };
  if (std::isfinite(threshold)) strict(threshold - delta);
  for (Vertex v : r.set) strict(r.levels[v]);
  for (const auto& [v, m] : r.inactivity_margins) {
    if (std::isinf(m)) {
      if (m < 0) hard = true;
      continue;
    }
    strict(m);
  }
  if (!r.solve_ok) return hard ? Stability::unstable : Stability::boundary;
  if (hard) return Stability::unstable;
  return near ? Stability::boundary : Stability::stable;
}

void fill_margins(const Graph& g, double delta, ActiveSetReport& r) {
  for (Vertex i = 0; i < g.size(); ++i) {
    if (r.set.contains(i)) continue;
    r.inactivity_margins[i] = delta > 0.0 ? neighbor_level_sum(g, r.levels, i) - 1.0 / delta
                                          : -std::numeric_limits<double>::infinity();
  }
}

}  // namespace

ActiveSetReport solve_on_active_set(const Graph& g, double delta, const VertexSet& s) {
  if (s.empty()) throw InputError("active set must not be empty");
  require_delta(delta);
  ActiveSetReport r;
  r.set = s;
  r.levels.assign(g.size(), 0.0);
  const InducedSubgraph sub = induced_subgraph(g, s);
  double lmin = 0.0;
  if (sub.graph.edge_count() > 0) {
    lmin = symmetric_eigenvalues(sub.graph.adjacency_matrix()).front();
    r.threshold = 1.0 / std::abs(lmin);
  } else {
    r.threshold = kInfinity;
  }

  // Eigenvalues of I + delta G_S are 1 + delta * lambda; lambda_min decides.
  const bool singular = std::abs(1.0 + delta * lmin) <= kStrictTolerance;
  if (!singular) {
    const Eigen::MatrixXd b = system_matrix(sub.graph, delta);
    const Eigen::VectorXd x =
        b.partialPivLu().solve(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(s.size())));
    for (std::size_t k = 0; k < s.size(); ++k) r.levels[s[k]] = x(static_cast<Eigen::Index>(k));
    r.solve_ok = true;
    r.positivity_ok = std::all_of(s.begin(), s.end(),
                                  [&](Vertex v) { return r.levels[v] > kStrictTolerance; });
    fill_margins(g, delta, r);
  }
  r.stability = classify(delta, r.threshold, r);
  return r;
}

bool verify_equilibrium(const Graph& g, double delta, const StrategyProfile& x, double tol) {
  if (x.size() != g.size()) throw InputError("profile size does not match the graph");
  return residual_d(g, delta, x) <= tol;
}

double b_endpoint(double delta, std::size_t k) {
  require_delta(delta);
  if (k == 0) throw InputError("block length must be at least 1");
  const double lmin = path_lambda_min_closed_form(k);
  if (lmin < 0.0 && !(delta < 1.0 / std::abs(lmin)))
    throw DomainError("no stable all-active equilibrium on a path of length " +
                      std::to_string(k) + " at this delta");
  const ActiveSetReport r = solve_on_active_set(generators::path(k), delta, VertexSet::all(k));
  if (!r.solve_ok || !r.positivity_ok)
    throw DomainError("all-active solve on a path of length " + std::to_string(k) +
                      " is not positive at this delta");
  return r.levels.front();
}

std::size_t PathConfiguration::path_length() const {
  if (blocks.empty()) return 0;
  std::size_t total = blocks.size() - 1;
  for (std::size_t a : blocks) total += a;
  return total;
}

VertexSet PathConfiguration::active_set() const {
  std::vector<Vertex> s;
  Vertex pos = 0;
  for (std::size_t a : blocks) {
    for (std::size_t k = 0; k < a; ++k) s.push_back(pos++);
    ++pos;  // separator
  }
  return VertexSet(std::move(s));
}

PathEnumeration enumerate_path_configurations(std::size_t n, double delta) {
  if (n < 2 || n > 64) throw InputError("path length must lie in [2, 64]");
  require_delta(delta);
  PathEnumeration out;

  // Per block length: does the block pass the stability and positivity
  // conditions on its own, and if so its endpoint level.
  std::vector<std::optional<double>> endpoint(n + 1);
  for (std::size_t a = 1; a <= n; ++a) {
    const double lmin = path_lambda_min_closed_form(a);
    if (lmin < 0.0) {
      const double thr = 1.0 / std::abs(lmin);
      if (std::abs(delta - thr) <= kBoundaryWindow) out.boundary_warning = true;
      if (!(delta < thr)) continue;
    }
    const ActiveSetReport r = solve_on_active_set(generators::path(a), delta, VertexSet::all(a));
    if (!r.solve_ok) {
      out.boundary_warning = true;
      continue;
    }
    const double lowest = *std::min_element(r.levels.begin(), r.levels.end());
    if (std::abs(lowest) <= kBoundaryWindow) out.boundary_warning = true;
    if (lowest > 0.0) endpoint[a] = r.levels.front();
  }

  const double inv = delta > 0.0 ? 1.0 / delta : std::numeric_limits<double>::infinity();
  std::vector<std::size_t> blocks;
  // remaining = vertices still to cover, starting with a block.
  std::function<void(std::size_t)> extend = [&](std::size_t remaining) {
    for (std::size_t a = 1; a <= remaining; ++a) {
      if (!endpoint[a]) continue;
      if (!blocks.empty()) {
        const double pair = *endpoint[blocks.back()] + *endpoint[a];
        if (std::abs(pair - inv) <= kBoundaryWindow) out.boundary_warning = true;
        if (!(pair > inv)) continue;
      }
      blocks.push_back(a);
      if (a == remaining) {
        out.configurations.push_back({blocks});
      } else if (a + 1 < remaining) {
        extend(remaining - a - 1);
      }
      blocks.pop_back();
    }
  };
  extend(n);
  std::sort(out.configurations.begin(), out.configurations.end());
  return out;
}

BlockPairRule allowed_block_pairs(double delta, std::size_t m) {
  if (m < 1) throw InputError("m must be at least 1");
  BlockPairRule rule;
  rule.m = m;
  rule.lower = 1.0 / std::abs(path_lambda_min_closed_form(2 * m + 2));
  rule.upper = 1.0 / std::abs(path_lambda_min_closed_form(2 * m));
  if (!(delta > rule.lower && delta < rule.upper))
    throw DomainError("delta outside the block-pair interval for m = " + std::to_string(m));
  rule.pairs = {{1, 1}, {1, 2 * m}, {2 * m, 1}};
  return rule;
}

BlockPairRule allowed_block_pairs(double delta) {
  // Interval endpoints decrease towards 1/2 as m grows.
  for (std::size_t m = 1; m <= 4096; ++m) {
    const double lower = 1.0 / std::abs(path_lambda_min_closed_form(2 * m + 2));
    if (delta > lower) return allowed_block_pairs(delta, m);
  }
  throw DomainError("delta is not inside any block-pair interval");
}

std::uint64_t count_path_equilibria_golden(std::size_t n) {
  if (n == 0) throw InputError("path length must be at least 1");
  std::vector<std::uint64_t> e = {0, 1, 1, 1, 2, 1};
  for (std::size_t k = e.size(); k <= n; ++k) {
    const std::uint64_t a = e[k - 2];
    const std::uint64_t b = e[k - 5];
    if (a > std::numeric_limits<std::uint64_t>::max() - b)
      throw DomainError("equilibrium count overflows 64 bits at n = " + std::to_string(k));
    e.push_back(a + b);
  }
  return e[n];
}

namespace {

// Cheap exact-arithmetic screen plus Cholesky for the brute force. Returns
// the full report only for sets that can be stable.
std::optional<ActiveSetReport> screen_subset(const Graph& g, double delta,
                                             const std::vector<std::uint64_t>& adj,
                                             std::uint64_t mask) {
  const std::size_t n = g.size();
  const double inv = delta > 0.0 ? 1.0 / delta : std::numeric_limits<double>::infinity();
  // A stable equilibrium has all levels in (0,1], so an inactive vertex needs
  // more than 1/delta active neighbours.
  for (std::size_t i = 0; i < n; ++i) {
    if (mask >> i & 1U) continue;
    if (!(static_cast<double>(std::popcount(adj[i] & mask)) > inv)) return std::nullopt;
  }
  std::vector<Vertex> members;
  for (std::size_t i = 0; i < n; ++i)
    if (mask >> i & 1U) members.push_back(i);
  const auto k = static_cast<Eigen::Index>(members.size());
  Eigen::MatrixXd b = Eigen::MatrixXd::Identity(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index c = a + 1; c < k; ++c)
      if (adj[members[static_cast<std::size_t>(a)]] >> members[static_cast<std::size_t>(c)] & 1U) {
        b(a, c) = delta;
        b(c, a) = delta;
      }
  // Stability needs I + delta G_S positive definite.
  Eigen::LLT<Eigen::MatrixXd> llt(b);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const Eigen::VectorXd x = llt.solve(Eigen::VectorXd::Ones(k));
  if (!(x.minCoeff() > kStrictTolerance)) return std::nullopt;
  ActiveSetReport r = solve_on_active_set(g, delta, VertexSet(std::move(members)));
  if (!r.stable()) return std::nullopt;
  return r;
}

}  // namespace

std::vector<ActiveSetReport> enumerate_stable_active_sets(const Graph& g, double delta,
                                                          std::size_t max_n) {
  require_delta(delta);
  const std::size_t n = g.size();
  if (n > max_n || n > 62)
    throw GuardError("brute-force enumeration limited to " + std::to_string(std::min<std::size_t>(max_n, 62)) +
                     " vertices, graph has " + std::to_string(n));
  std::vector<std::uint64_t> adj(n, 0);
  for (const Edge& e : g.edges()) {
    adj[e.u] |= std::uint64_t{1} << e.v;
    adj[e.v] |= std::uint64_t{1} << e.u;
  }
  const std::uint64_t total = (std::uint64_t{1} << n) - 1;  // masks 1..total
  const std::size_t workers =
      total < 4096 ? 1 : std::max<std::size_t>(1, std::thread::hardware_concurrency());
  std::vector<std::vector<ActiveSetReport>> parts(workers);
  auto work = [&](std::size_t w) {
    const std::uint64_t lo = 1 + total * w / workers;
    const std::uint64_t hi = 1 + total * (w + 1) / workers;
    for (std::uint64_t mask = lo; mask < hi; ++mask)
      if (auto r = screen_subset(g, delta, adj, mask)) parts[w].push_back(std::move(*r));
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  std::vector<ActiveSetReport> out;
  for (auto& p : parts)
    for (auto& r : p) out.push_back(std::move(r));
  std::sort(out.begin(), out.end(),
            [](const ActiveSetReport& a, const ActiveSetReport& b) { return a.set < b.set; });
  return out;
}

LargeDeltaVerdict verify_large_delta_structure(const Graph& g, double delta, const VertexSet& s) {
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  if (!(delta > golden && delta < 1.0))
    throw DomainError("large-delta structure applies only for delta in (1/phi, 1)");
  LargeDeltaVerdict v;
  const CliqueUnionCheck cu = is_disjoint_clique_union(g, s);
  v.clique_union = cu.is_clique_union;
  v.clique_sizes = cu.clique_sizes;
  if (!cu.is_clique_union) return v;

  // Level of every member of an isolated active clique of size k.
  std::vector<double> level(g.size(), 0.0);
  for (const VertexSet& comp : connected_components(g, s)) {
    const double k = static_cast<double>(comp.size());
    for (Vertex u : comp) level[u] = delta / (1.0 + (k - 1.0) * delta);
  }
  for (Vertex i = 0; i < g.size(); ++i) {
    if (s.contains(i)) continue;
    double sum = 0.0;
    for (Vertex j : g.neighbors(i)) sum += level[j];
    if (sum < 1.0) {
      v.failing_vertex = i;
      v.failing_sum = sum;
      return v;
    }
  }
  v.passes = true;
  return v;
}

Uniqueness uniqueness_regime(const Graph& g, double delta) {
  require_delta(delta);
  if (g.edge_count() == 0) return Uniqueness::unique;
  return delta < 1.0 / std::abs(lambda_min(g)) ? Uniqueness::unique : Uniqueness::possibly_multiple;
}

}  // namespace brdlab

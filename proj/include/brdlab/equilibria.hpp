#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "brdlab/dynamics.hpp"
#include "brdlab/graph.hpp"

namespace brdlab {

/// Slack applied to every strict inequality of the stability criteria.
inline constexpr double kStrictTolerance = 1e-12;

enum class Stability { stable, unstable, boundary };

const char* to_string(Stability s);

/// Equilibrium candidate supported on a fixed active set.
struct ActiveSetReport {
  VertexSet set;
  /// Solution of (I + delta G_S) x = 1 on the set, zero elsewhere. Entries
  /// may fall outside [0,1] when the candidate is not an equilibrium.
  std::vector<double> levels;
  bool solve_ok = false;
  /// Every level on the set exceeds kStrictTolerance.
  bool positivity_ok = false;
  /// Neighbour activity minus 1/delta for each vertex outside the set.
  std::map<Vertex, double> inactivity_margins;
  Stability stability = Stability::unstable;
  /// 1 / |lambda_min(G_S)|, or kInfinity for an independent set.
  double threshold = 0.0;

  bool stable() const { return stability == Stability::stable; }
};

/// Throws InputError when s is empty or delta is outside [0,1].
ActiveSetReport solve_on_active_set(const Graph& g, double delta, const VertexSet& s);

/// True iff every agent is within tol of its best response.
bool verify_equilibrium(const Graph& g, double delta, const StrategyProfile& x, double tol);

/// Endpoint level of the all-active equilibrium on the k-vertex path.
/// Throws DomainError when delta is not below the block's stability threshold
/// or the block solve is not strictly positive.
double b_endpoint(double delta, std::size_t k);

/// Block lengths a_1..a_k of the active runs along a path; consecutive blocks
/// are separated by exactly one inactive vertex.
struct PathConfiguration {
  std::vector<std::size_t> blocks;

  /// Number of path vertices covered, sum a_i + (k - 1).
  std::size_t path_length() const;
  VertexSet active_set() const;

  friend bool operator==(const PathConfiguration&, const PathConfiguration&) = default;
  friend auto operator<=>(const PathConfiguration&, const PathConfiguration&) = default;
};

struct PathEnumeration {
  std::vector<PathConfiguration> configurations;
  /// Delta is within kBoundaryWindow of a threshold that one of the
  /// examined blocks or block pairs depends on.
  bool boundary_warning = false;
};

inline constexpr double kBoundaryWindow = 1e-12;

/// Every block configuration of path(n) that supports a stable equilibrium.
/// Requires 2 <= n <= 64 and delta in [0,1].
PathEnumeration enumerate_path_configurations(std::size_t n, double delta);

struct BlockPairRule {
  std::size_t m = 0;
  /// Open interval (1/|lambda_min(P_{2m+2})|, 1/|lambda_min(P_{2m})|).
  double lower = 0.0;
  double upper = 0.0;
  /// Admissible ordered pairs of adjacent block lengths.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

/// Throws DomainError when delta is not inside the interval for m.
BlockPairRule allowed_block_pairs(double delta, std::size_t m);

/// Finds the m whose interval contains delta; throws DomainError if none.
BlockPairRule allowed_block_pairs(double delta);

/// Number of stable path configurations for delta in the golden-ratio regime,
/// e_n = e_{n-2} + e_{n-5} seeded with 1, 1, 1, 2, 1. Throws DomainError if
/// the value overflows 64 bits.
std::uint64_t count_path_equilibria_golden(std::size_t n);

/// Brute force over all 2^n - 1 nonempty subsets, keeping stable ones,
/// sorted by set. Throws GuardError when n > max_n.
std::vector<ActiveSetReport> enumerate_stable_active_sets(const Graph& g, double delta,
                                                          std::size_t max_n = 20);

struct LargeDeltaVerdict {
  bool passes = false;
  bool clique_union = false;
  std::vector<std::size_t> clique_sizes;
  /// First inactive vertex whose weighted clique-neighbour sum is below 1.
  std::optional<Vertex> failing_vertex;
  double failing_sum = 0.0;
};

/// Structural test valid for delta in (1/phi, 1): s must be a disjoint union
/// of cliques and every i outside s needs
/// sum over active cliques C of delta * |N(i) & C| / (1 + (|C| - 1) delta) >= 1.
LargeDeltaVerdict verify_large_delta_structure(const Graph& g, double delta, const VertexSet& s);

enum class Uniqueness { unique, possibly_multiple };

const char* to_string(Uniqueness u);

/// unique when delta < 1/|lambda_min(g)|.
Uniqueness uniqueness_regime(const Graph& g, double delta);

}  // namespace brdlab

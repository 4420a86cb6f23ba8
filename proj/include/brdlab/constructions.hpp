#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "brdlab/dynamics.hpp"
#include "brdlab/graph.hpp"

namespace brdlab {

/// A named example: graph, starting profile, optional deterministic update
/// order and the delta it is meant for. Vertex labels are 0-based.
struct ScenarioBundle {
  Graph graph;
  StrategyProfile initial;
  std::optional<std::vector<Vertex>> schedule;
  double delta_hint = 0.5;
  std::string narrative;
  std::map<std::string, double> metadata;
  /// Stopping level that lets the scenario's events play out; callers use it
  /// when no epsilon is given.
  double epsilon_hint = 1e-4;
};

/// K_{1,4} and C4 plus an isolated vertex: same spectrum, different graphs.
std::pair<Graph, Graph> cospectral_pair();

struct SlowSchedule {
  StrategyProfile x0;
  std::vector<Vertex> schedule;
  /// Lower bound on the rounds until the middle agent re-activates,
  /// (ln(1 - delta) - ln 2) / (10 ln delta).
  double bound_rounds = 0.0;
  /// The same bound in steps on P5 (5 * bound_rounds).
  double bound_steps = 0.0;
  /// Number of side cycles after which the middle agent's best response
  /// first turns positive.
  std::size_t activation_cycle = 0;
};

/// Slowest path to re-activating the middle of P5 from all-zero: agents 1
/// and 3 first, then cycles 0,1,4,3,2 (the middle is probed once per cycle
/// and stays at 0 until the sides have converged far enough).
/// Throws DomainError unless delta lies in (1/2, 1).
SlowSchedule p5_slow_schedule(double delta, std::size_t tail_cycles = 200);

/// k copies of P5 where vertex 3 of copy j is joined to vertex 0 of copy
/// j+1 (vertices 5j..5j+4 form copy j). Copy 0 starts at (0,1,0,1,0), later
/// copies at (0,1,0,1/(1+delta),1/(1+delta)). The schedule drives the
/// copies one after another and produces one reshuffle per copy.
/// Throws DomainError unless delta lies in (1/phi, 1).
ScenarioBundle reshuffle_chain(std::size_t k, double delta);

/// P6 (vertices 0..5) plus hub 6 joined to 0, 2 and 4; those three start at
/// 1, everything else at 0. Meant for delta = 0.55.
ScenarioBundle single_component_reshuffle();

/// Disjoint union of `copies` reshuffle chains of length chain_length with an
/// all-zero start. metadata["p_lower_bound"] holds (5 n)^(-2 n) for
/// n = chain_length.
ScenarioBundle expected_slow_union(std::size_t copies, double delta, std::size_t chain_length = 3);

/// Builds the bundles named by a scenario spec: "cospectral" (two bundles),
/// "p5slow:<delta>", "chain:<k>:<delta>", "singlecomp",
/// "union:<k>:<delta>[:<chain length>]". Throws InputError otherwise.
std::vector<ScenarioBundle> make_scenario(std::string_view spec);

}  // namespace brdlab

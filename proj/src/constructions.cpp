#include "brdlab/constructions.hpp"

#include <cmath>
#include <string>

#include "brdlab/errors.hpp"
#include "brdlab/specs.hpp"

namespace brdlab {

namespace {

constexpr std::size_t kPhaseCap = 1'000'000;
// The slow phases reach d(x) < 1e-4 before their activations.
constexpr double kScenarioEpsilon = 1e-5;

double golden_threshold() { return (std::sqrt(5.0) - 1.0) / 2.0; }

void require_golden_regime(double delta) {
  if (!(delta > golden_threshold() && delta < 1.0))
    throw DomainError("construction requires delta in (1/phi, 1)");
}

Graph chain_graph(std::size_t k) {
  std::vector<Edge> edges;
  for (std::size_t j = 0; j < k; ++j) {
    const Vertex base = 5 * j;
    for (Vertex i = 0; i < 4; ++i) edges.push_back({base + i, base + i + 1});
    if (j + 1 < k) edges.push_back({base + 3, base + 5});
  }
  return Graph(5 * k, edges);
}

}  // namespace

std::pair<Graph, Graph> cospectral_pair() {
  return {generators::complete_bipartite(4, 1),
          generators::disjoint_union(generators::cycle(4), generators::path(1))};
}

SlowSchedule p5_slow_schedule(double delta, std::size_t tail_cycles) {
  if (!(delta > 0.5 && delta < 1.0)) throw DomainError("P5 slow schedule requires delta in (1/2, 1)");
  SlowSchedule out;
  out.x0 = StrategyProfile::zeros(5);
  out.bound_rounds = (std::log(1.0 - delta) - std::log(2.0)) / (10.0 * std::log(delta));
  out.bound_steps = 5.0 * out.bound_rounds;

  // After t cycles the side agent next to the middle sits at
  // (1 + delta^(2t+1)) / (1 + delta); the middle wakes once twice that,
  // scaled by delta, drops below 1.
  std::size_t t = 0;
  while (2.0 * delta * (1.0 + std::pow(delta, 2.0 * static_cast<double>(t) + 1.0)) / (1.0 + delta) >= 1.0)
    ++t;
  out.activation_cycle = t;

  out.schedule = {1, 3};
  for (std::size_t c = 0; c < t + tail_cycles; ++c)
    for (Vertex v : {0, 1, 4, 3, 2}) out.schedule.push_back(v);
  return out;
}

ScenarioBundle reshuffle_chain(std::size_t k, double delta) {
  if (k < 1) throw InputError("reshuffle chain needs at least one copy");
  require_golden_regime(delta);
  Graph g = chain_graph(k);
  const double pair_level = 1.0 / (1.0 + delta);
  std::vector<double> x0(5 * k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    const Vertex base = 5 * j;
    x0[base + 1] = 1.0;
    if (j == 0) {
      x0[base + 3] = 1.0;
    } else {
      x0[base + 3] = pair_level;
      x0[base + 4] = pair_level;
    }
  }
  StrategyProfile initial(x0);

  // Drive the copies in order: wake the first agent (copies after the
  // first), alternate the side pairs until the middle would re-activate,
  // activate it, then sweep the copy until it settles at (1,0,1,0,1).
  std::vector<Vertex> schedule;
  StrategyProfile x = initial;
  auto push = [&](Vertex v) {
    schedule.push_back(v);
    step(g, delta, x, v);
  };
  auto copy_settled = [&](Vertex base) {
    for (Vertex v = base; v < base + 5; ++v)
      if (x[v] != best_response(g, delta, x, v)) return false;
    return x[base + 1] == 0.0 && x[base + 3] == 0.0;
  };
  for (std::size_t j = 0; j < k; ++j) {
    const Vertex base = 5 * j;
    if (j > 0 && x[base] == 0.0) push(base);
    std::size_t guard = 0;
    while (best_response(g, delta, x, base + 2) <= 0.0) {
      for (Vertex v : {base, base + 1, base + 4, base + 3}) push(v);
      if (++guard > kPhaseCap) throw GenerationError("reshuffle chain schedule did not wake the middle");
    }
    push(base + 2);
    guard = 0;
    while (!copy_settled(base)) {
      for (Vertex v = base; v < base + 5; ++v) push(v);
      // Wake the next copy as soon as its first agent is released.
      if (j + 1 < k && x[base + 5] == 0.0 && best_response(g, delta, x, base + 5) > 0.0) push(base + 5);
      if (++guard > kPhaseCap) throw GenerationError("reshuffle chain copy did not settle");
    }
  }
  for (int sweep = 0; sweep < 4; ++sweep)
    for (Vertex v = 0; v < g.size(); ++v) push(v);

  ScenarioBundle b{std::move(g), std::move(initial), std::move(schedule), delta,
                   "chain of " + std::to_string(k) +
                       " P5 copies; copy j holds vertices 5j..5j+4; vertex 5j+3 is joined to 5(j+1)",
                   {}};
  b.metadata["copies"] = static_cast<double>(k);
  b.epsilon_hint = kScenarioEpsilon;
  return b;
}

ScenarioBundle single_component_reshuffle() {
  std::vector<Edge> edges;
  for (Vertex i = 0; i < 5; ++i) edges.push_back({i, i + 1});
  for (Vertex i : {0, 2, 4}) edges.push_back({i, 6});
  Graph g(7, edges);
  StrategyProfile initial(std::vector<double>{1, 0, 1, 0, 1, 0, 0});
  return {std::move(g), std::move(initial), std::nullopt, 0.55,
          "P6 on vertices 0..5 (labels 1..6 shifted by one) with hub 6 joined to the "
          "odd-labelled path vertices 0, 2, 4",
          {}, kScenarioEpsilon};
}

ScenarioBundle expected_slow_union(std::size_t copies, double delta, std::size_t chain_length) {
  if (copies < 1 || chain_length < 1) throw InputError("union needs at least one copy of a nonempty chain");
  require_golden_regime(delta);
  const Graph chain = reshuffle_chain(chain_length, delta).graph;
  Graph g = chain;
  for (std::size_t c = 1; c < copies; ++c) g = generators::disjoint_union(g, chain);
  const std::size_t n = g.size();
  ScenarioBundle b{std::move(g), StrategyProfile::zeros(n), std::nullopt, delta,
                   std::to_string(copies) + " disjoint copies of a " + std::to_string(chain_length) +
                       "-copy reshuffle chain, random-order start from zero",
                   {}};
  const double cn = 5.0 * static_cast<double>(chain_length);
  b.metadata["p_lower_bound"] = std::pow(cn, -2.0 * static_cast<double>(chain_length));
  b.metadata["copies"] = static_cast<double>(copies);
  b.metadata["chain_length"] = static_cast<double>(chain_length);
  b.epsilon_hint = kScenarioEpsilon;
  return b;
}

std::vector<ScenarioBundle> make_scenario(std::string_view spec) {
  const std::vector<std::string> f = detail::split(spec, ':');
  const std::string& kind = f.front();
  auto arity = [&](std::size_t lo, std::size_t hi) {
    if (f.size() < lo || f.size() > hi) throw InputError("bad scenario spec '" + std::string(spec) + "'");
  };
  try {
    if (kind == "cospectral") {
      arity(1, 1);
      auto [a, b] = cospectral_pair();
      const std::size_t na = a.size();
      const std::size_t nb = b.size();
      std::vector<ScenarioBundle> out;
      out.push_back({std::move(a), StrategyProfile::zeros(na), std::nullopt, 0.5,
                     "star K_{1,4}, center 4", {}});
      out.push_back({std::move(b), StrategyProfile::zeros(nb), std::nullopt, 0.5,
                     "cycle C4 on 0..3 plus isolated vertex 4", {}});
      return out;
    }
    if (kind == "p5slow") {
      arity(2, 2);
      const double delta = detail::parse_real(f[1]);
      SlowSchedule s = p5_slow_schedule(delta);
      ScenarioBundle b{generators::path(5), s.x0, std::move(s.schedule), delta,
                       "P5 from zero: agents 1 and 3 first, then alternating side pairs", {}};
      b.metadata["bound_rounds"] = s.bound_rounds;
      b.metadata["bound_steps"] = s.bound_steps;
      b.metadata["activation_cycle"] = static_cast<double>(s.activation_cycle);
      b.epsilon_hint = kScenarioEpsilon;
      return {std::move(b)};
    }
    if (kind == "chain") {
      arity(3, 3);
      return {reshuffle_chain(detail::parse_size(f[1]), detail::parse_real(f[2]))};
    }
    if (kind == "singlecomp") {
      arity(1, 1);
      return {single_component_reshuffle()};
    }
    if (kind == "union") {
      arity(3, 4);
      const std::size_t len = f.size() == 4 ? detail::parse_size(f[3]) : 3;
      return {expected_slow_union(detail::parse_size(f[1]), detail::parse_real(f[2]), len)};
    }
  } catch (const DomainError& e) {
    throw InputError(e.what());
  }
  throw InputError("unknown scenario '" + std::string(spec) + "'");
}

}  // namespace brdlab

#include "brdlab/json_io.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <type_traits>

#include "brdlab/errors.hpp"

namespace brdlab {

namespace {

Json real_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

const char* sign_of(StatusChange c) { return c == StatusChange::activated ? "+" : "-"; }

bool non_negative_integer(const Json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

template <class T>
T field(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
    if (!non_negative_integer(j[key])) throw InputError(std::string("field '") + key + "' must be a non-negative integer");
  }
  try {
    return j[key].get<T>();
  } catch (const Json::exception&) {
    throw InputError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

Json to_json(const Graph& g) {
  Json edges = Json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
  return {{"n", g.size()}, {"edges", std::move(edges)}};
}

Graph graph_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer())
    throw InputError("graph JSON needs an integer 'n'");
  const auto n = j["n"].get<long long>();
  if (n < 0) throw InputError("graph size must be non-negative");
  std::vector<Edge> edges;
  if (j.contains("edges")) {
    if (!j["edges"].is_array()) throw InputError("'edges' must be an array");
    for (const Json& e : j["edges"]) {
      if (!e.is_array() || e.size() != 2 || !non_negative_integer(e[0]) || !non_negative_integer(e[1]))
        throw InputError("each edge must be a pair of non-negative integers");
      edges.push_back({e[0].get<Vertex>(), e[1].get<Vertex>()});
    }
  }
  try {
    return Graph(static_cast<std::size_t>(n), edges);
  } catch (const InputError& e) {
    throw GenerationError(e.what());
  }
}

Json to_json(const TrajectoryRecord& rec, std::size_t trace_points) {
  Json reshuffles = Json::array();
  for (const auto& r : rec.reshuffles) reshuffles.push_back({r.t, r.agent});
  Json changes = Json::array();
  for (const auto& c : rec.active_changes) changes.push_back({c.t, c.agent, sign_of(c.direction)});
  Json residuals = Json::array();
  for (const auto& s : rec.residuals) residuals.push_back({s.t, s.d});
  Json out = {{"n", rec.n},
              {"converged", rec.converged},
              {"rounds", rec.rounds},
              {"steps", rec.step_count},
              {"final_residual", rec.final_residual},
              {"last_change_round", rec.last_change_round},
              {"reshuffles", std::move(reshuffles)},
              {"active_changes", std::move(changes)},
              {"initial", std::vector<double>(rec.initial.values().begin(), rec.initial.values().end())},
              {"terminal", std::vector<double>(rec.terminal.values().begin(), rec.terminal.values().end())},
              {"residuals", std::move(residuals)}};
  if (trace_points > 0 && !rec.steps.empty()) {
    Json traces = Json::array();
    for (const AgentTrace& tr : agent_traces(rec, trace_points)) {
      Json pts = Json::array();
      for (std::size_t k = 0; k < tr.t.size(); ++k) pts.push_back({tr.t[k], tr.value[k]});
      traces.push_back(std::move(pts));
    }
    out["traces"] = std::move(traces);
  }
  return out;
}

Json to_json(const ActiveSetReport& r) {
  Json margins = Json::object();
  for (const auto& [v, m] : r.inactivity_margins) margins[std::to_string(v)] = real_or_inf(m);
  return {{"set", r.set.members()},
          {"levels", r.levels},
          {"stable", to_string(r.stability)},
          {"threshold", real_or_inf(r.threshold)},
          {"margins", std::move(margins)}};
}

Json to_json(const ScenarioBundle& b) {
  Json out = {{"graph", to_json(b.graph)},
              {"initial", std::vector<double>(b.initial.values().begin(), b.initial.values().end())},
              {"delta_hint", b.delta_hint},
              {"epsilon_hint", b.epsilon_hint},
              {"narrative", b.narrative},
              {"metadata", b.metadata}};
  out["schedule"] = b.schedule ? Json(*b.schedule) : Json(nullptr);
  return out;
}

Json to_json(const SweepRow& r) {
  return {{"delta", r.delta},
          {"trial", r.trial},
          {"seed", r.seed},
          {"rounds", r.rounds},
          {"converged", r.converged},
          {"last_change_round", r.last_change_round},
          {"n_reshuffles", r.n_reshuffles},
          {"terminal_stable", r.terminal_stable ? Json(*r.terminal_stable) : Json(nullptr)},
          {"active_count", r.active_count},
          {"largest_component", r.largest_component},
          {"isolated_active", r.isolated_active},
          {"active_edges", r.active_edges}};
}

Json to_json(const SweepSpec& s) {
  Json out = {{"graph", s.graph_spec},
              {"deltas", s.deltas},
              {"trials", s.trials},
              {"seed", s.base_seed},
              {"epsilon", s.epsilon},
              {"max_rounds", s.max_rounds},
              {"record_level", to_string(s.record_level)}};
  out["epsilon_reshuffle"] = s.epsilon_reshuffle ? Json(*s.epsilon_reshuffle) : Json(nullptr);
  return out;
}

SweepSpec sweep_spec_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("sweep body must be a JSON object");
  SweepSpec s;
  if (j.contains("preset")) {
    const Preset p = preset(field<std::string>(j, "preset", ""));
    const auto k = field<std::size_t>(j, "sweep_index", 0);
    if (k >= p.sweeps.size()) throw InputError("sweep_index out of range for this preset");
    s = p.sweeps[k];
  }
  if (j.contains("graph")) {
    const Json& g = j["graph"];
    if (g.is_string()) s.graph_spec = g.get<std::string>();
    else if (g.is_object()) s.graph_spec = g.dump();
    else throw InputError("'graph' must be a spec string or a graph object");
  }
  if (j.contains("deltas")) {
    s.deltas = field<std::vector<double>>(j, "deltas", {});
  } else if (j.contains("delta_start") || j.contains("delta_end") || j.contains("delta_step")) {
    DeltaRange r;
    r.start = field(j, "delta_start", r.start);
    r.end = field(j, "delta_end", r.end);
    r.step = field(j, "delta_step", r.step);
    s.deltas = expand_grid(r);
  }
  if (j.contains("trials")) {
    const auto t = field<long long>(j, "trials", 0);
    if (t < 1) throw InputError("trials must be at least 1");
    s.trials = static_cast<std::size_t>(t);
  }
  s.base_seed = field(j, "seed", s.base_seed);
  s.epsilon = field(j, "epsilon", s.epsilon);
  if (j.contains("epsilon_reshuffle") && !j["epsilon_reshuffle"].is_null())
    s.epsilon_reshuffle = field(j, "epsilon_reshuffle", 0.0);
  s.max_rounds = field(j, "max_rounds", s.max_rounds);
  if (j.contains("record_level"))
    s.record_level = record_level_from_string(field<std::string>(j, "record_level", "summary"));
  if (j.contains("initial")) s.initial = dynamics_config_from_json({{"initial", j["initial"]}}).initial;
  return s;
}

const char* to_string(RecordLevel r) {
  switch (r) {
    case RecordLevel::summary: return "summary";
    case RecordLevel::events: return "events";
    case RecordLevel::full: return "full";
  }
  return "full";
}

RecordLevel record_level_from_string(std::string_view s) {
  if (s == "summary") return RecordLevel::summary;
  if (s == "events") return RecordLevel::events;
  if (s == "full") return RecordLevel::full;
  throw InputError("record level must be summary, events or full");
}

DynamicsConfig dynamics_config_from_json(const Json& j, DynamicsConfig base) {
  if (!j.is_object()) throw InputError("expected a JSON object");
  base.delta = field(j, "delta", base.delta);
  base.epsilon = field(j, "epsilon", base.epsilon);
  if (j.contains("epsilon_reshuffle") && !j["epsilon_reshuffle"].is_null())
    base.epsilon_reshuffle = field(j, "epsilon_reshuffle", 0.0);
  base.max_rounds = field(j, "max_rounds", base.max_rounds);
  base.seed = field(j, "seed", base.seed);
  base.residual_points = field(j, "residual_points", base.residual_points);
  if (j.contains("record")) base.record = record_level_from_string(field<std::string>(j, "record", "full"));
  if (j.contains("initial") && !j["initial"].is_null()) {
    const Json& init = j["initial"];
    if (init.is_array()) {
      base.initial = {InitialKind::explicit_profile, field<std::vector<double>>(j, "initial", {})};
    } else if (init.is_string()) {
      const auto s = init.get<std::string>();
      if (s == "random") base.initial = {InitialKind::uniform_random, {}};
      else if (s == "zeros") base.initial = {InitialKind::all_zero, {}};
      else if (s == "ones") base.initial = {InitialKind::all_one, {}};
      else throw InputError("initial must be random, zeros, ones or an array");
    } else {
      throw InputError("initial must be a string or an array");
    }
  }
  return base;
}

}  // namespace brdlab

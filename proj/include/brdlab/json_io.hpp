#pragma once

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "brdlab/constructions.hpp"
#include "brdlab/dynamics.hpp"
#include "brdlab/equilibria.hpp"
#include "brdlab/experiments.hpp"
#include "brdlab/graph.hpp"
#include "brdlab/spectral.hpp"

namespace brdlab {

using Json = nlohmann::json;

/// {"n": int, "edges": [[u, v], ...]}
Json to_json(const Graph& g);
/// Inverse of to_json(Graph). Throws InputError on malformed input.
Graph graph_from_json(const Json& j);

/// Trajectory payload. Per-agent traces are included only when the record
/// holds every step and trace_points > 0.
Json to_json(const TrajectoryRecord& rec, std::size_t trace_points = 2000);

/// Infinite thresholds and margins are written as "inf" / "-inf".
Json to_json(const ActiveSetReport& r);

Json to_json(const ScenarioBundle& b);

/// Reads DynamicsConfig fields (delta, epsilon, epsilon_reshuffle,
/// max_rounds, seed, record, initial) from a JSON object, keeping the
/// defaults of `base` for absent keys. Throws InputError on bad types.
DynamicsConfig dynamics_config_from_json(const Json& j, DynamicsConfig base = {});

/// Keys follow the CSV header; terminal_stable is null for unconverged rows.
Json to_json(const SweepRow& row);
Json to_json(const SweepSpec& spec);

/// Accepts either {"preset": name[, "sweep_index": k]} (further keys
/// override the preset) or explicit fields: graph, deltas or
/// delta_start/delta_end/delta_step, trials, seed, epsilon,
/// epsilon_reshuffle, max_rounds, record_level, initial.
/// Does not validate the resulting spec.
SweepSpec sweep_spec_from_json(const Json& j);

const char* to_string(RecordLevel r);
RecordLevel record_level_from_string(std::string_view s);

}  // namespace brdlab

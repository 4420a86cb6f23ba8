#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <stop_token>
#include <string>
#include <utility>
#include <vector>

#include "brdlab/dynamics.hpp"
#include "brdlab/graph.hpp"

namespace brdlab {

struct DeltaRange {
  double start = 0.0;
  double end = 1.0;
  double step = 0.005;
};

/// start, start + step, ... up to end (inclusive within 1e-9 of a step),
/// each value rounded to 12 decimals.
std::vector<double> expand_grid(const DeltaRange& r);

struct SweepSpec {
  std::string graph_spec;
  std::vector<double> deltas;
  std::size_t trials = 10;
  std::uint64_t base_seed = 0;
  double epsilon = 1e-4;
  std::optional<double> epsilon_reshuffle;
  std::uint64_t max_rounds = 100000;
  RecordLevel record_level = RecordLevel::summary;
  InitialCondition initial;

  std::size_t cell_count() const { return deltas.size() * trials; }
  /// Throws InputError on an empty grid, a delta outside [0,1], trials == 0
  /// or a non-positive epsilon.
  void validate() const;
};

struct SweepRow {
  double delta = 0.0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double rounds = 0.0;
  bool converged = false;
  double last_change_round = 0.0;
  std::size_t n_reshuffles = 0;
  /// Set only for converged rows.
  std::optional<bool> terminal_stable;
  std::size_t active_count = 0;
  std::size_t largest_component = 0;
  std::size_t isolated_active = 0;
  std::size_t active_edges = 0;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

/// Seed of cell (delta_index, trial).
std::uint64_t sweep_seed(const SweepSpec& spec, std::size_t delta_index, std::size_t trial);

/// Dynamics configuration of one cell.
DynamicsConfig cell_config(const SweepSpec& spec, std::size_t delta_index, std::size_t trial);

/// Summary row for a finished trajectory.
SweepRow summarize(const Graph& g, const DynamicsConfig& cfg, std::size_t trial,
                   const TrajectoryRecord& rec);

struct SweepOptions {
  /// 0 selects std::thread::hardware_concurrency().
  std::size_t workers = 0;
  std::stop_token stop;
  /// Called from worker threads with the row's index in the output table.
  std::function<void(std::size_t, const SweepRow&)> on_row;
};

/// Rows are ordered delta-major, then by trial, independent of scheduling.
/// Throws InputError on a bad spec and Cancelled when stopped.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const SweepOptions& options = {});

extern const char* const kCsvHeader;

std::string csv_row(const SweepRow& row);
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::string to_csv(const std::vector<SweepRow>& rows);

/// Shortest text that reads back to the same double.
std::string format_real(double v);

struct ThresholdLine {
  double value = 0.0;
  /// -1 for a negative eigenvalue, +1 for a positive one.
  int sign = 0;
  friend bool operator==(const ThresholdLine&, const ThresholdLine&) = default;
};

/// 1/|lambda| for every eigenvalue with |lambda| >= 1, deduplicated per sign
/// (within 1e-9), ascending by value.
std::vector<ThresholdLine> threshold_lines(const Graph& g);

struct Preset {
  std::string name;
  std::string description;
  std::vector<SweepSpec> sweeps;
};

/// Throws InputError for an unknown name.
Preset preset(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace brdlab

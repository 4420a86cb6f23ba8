#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stop_token>
#include <vector>

#include "brdlab/graph.hpp"

namespace brdlab {

class Rng;

/// Activity levels x in [0,1]^n.
class StrategyProfile {
 public:
  StrategyProfile() = default;
  /// Throws InputError if any entry lies outside [0,1] or is not finite.
  explicit StrategyProfile(std::vector<double> values);

  static StrategyProfile zeros(std::size_t n);
  static StrategyProfile ones(std::size_t n);
  static StrategyProfile uniform(std::size_t n, Rng& rng);

  std::size_t size() const { return x_.size(); }
  double operator[](std::size_t i) const { return x_[i]; }
  /// Precondition: value in [0,1].
  void set(std::size_t i, double value) { x_[i] = value; }
  std::span<const double> values() const { return x_; }

  bool active(std::size_t i) const { return x_[i] > 0.0; }
  VertexSet active_set() const;

  friend bool operator==(const StrategyProfile&, const StrategyProfile&) = default;

 private:
  std::vector<double> x_;
};

/// max(0, 1 - delta * sum_j g_ij x_j). Exactly 0.0 when the clamp binds.
double best_response(const Graph& g, double delta, const StrategyProfile& x, Vertex i);

/// x_i - x_i^2 / 2 - delta * sum_j g_ij x_i x_j.
double payoff(const Graph& g, double delta, const StrategyProfile& x, Vertex i);

/// Max-norm distance between x and its simultaneous best-response image.
double residual_d(const Graph& g, double delta, const StrategyProfile& x);

/// Potential x'1 - x'(I + delta G)x / 2; non-decreasing under best responses.
double potential(const Graph& g, double delta, const StrategyProfile& x);

/// f'(I + delta G_S) f over the coordinates in s; entries of f outside s are
/// ignored. f has one entry per vertex of g.
double weighted_error_norm_sq(const Graph& g, double delta, const VertexSet& s,
                              std::span<const double> f);

/// Neighbour activity minus 1/delta for every inactive agent of x.
std::map<Vertex, double> inactivity_margins(const Graph& g, double delta,
                                            const StrategyProfile& x);

enum class StatusChange { none, activated, deactivated };

struct StepReport {
  Vertex agent = 0;
  double old_value = 0.0;
  double new_value = 0.0;
  StatusChange change = StatusChange::none;
};

/// Replaces x_i by its best response.
StepReport step(const Graph& g, double delta, StrategyProfile& x, Vertex i);

enum class InitialKind { uniform_random, all_zero, all_one, explicit_profile };

struct InitialCondition {
  InitialKind kind = InitialKind::uniform_random;
  std::vector<double> values;  // explicit_profile only
};

enum class RecordLevel {
  summary,  // outcome, active-set changes and reshuffles
  events,   // + downsampled residual history
  full,     // + every step
};

/// Tolerance used for reshuffle detection unless set explicitly.
inline constexpr double kDefaultReshuffleTolerance = 1e-3;

struct DynamicsConfig {
  double delta = 0.5;
  double epsilon = 1e-4;
  /// Quasi-convergence level for reshuffle detection; resolved by
  /// reshuffle_tolerance().
  std::optional<double> epsilon_reshuffle;
  std::uint64_t max_rounds = 100000;
  std::uint64_t seed = 0;
  InitialCondition initial;
  RecordLevel record = RecordLevel::full;
  std::size_t residual_points = 5000;

  /// max(epsilon, epsilon_reshuffle or kDefaultReshuffleTolerance).
  double reshuffle_tolerance() const;
  /// Throws InputError when a field is out of range for an n-vertex graph.
  void validate(std::size_t n) const;
};

struct StepRecord {
  std::uint64_t t = 0;
  Vertex agent = 0;
  double value = 0.0;
  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct ActiveChange {
  std::uint64_t t = 0;
  Vertex agent = 0;
  StatusChange direction = StatusChange::none;
  friend bool operator==(const ActiveChange&, const ActiveChange&) = default;
};

struct ReshuffleEvent {
  std::uint64_t t = 0;
  Vertex agent = 0;
  friend bool operator==(const ReshuffleEvent&, const ReshuffleEvent&) = default;
};

struct ResidualSample {
  std::uint64_t t = 0;
  double d = 0.0;
  friend bool operator==(const ResidualSample&, const ResidualSample&) = default;
};

struct TrajectoryRecord {
  std::size_t n = 0;
  /// Every update, t = 1, 2, ... (RecordLevel::full only).
  std::vector<StepRecord> steps;
  std::uint64_t step_count = 0;
  /// step_count / n.
  double rounds = 0.0;
  bool converged = false;
  double final_residual = 0.0;
  StrategyProfile initial;
  StrategyProfile terminal;
  std::vector<ActiveChange> active_changes;
  /// Round of the last entry of active_changes, 0 if none.
  double last_change_round = 0.0;
  std::vector<ReshuffleEvent> reshuffles;
  /// Downsampled (t, d(x)) pairs including t = 0 and the final step.
  std::vector<ResidualSample> residuals;

  friend bool operator==(const TrajectoryRecord&, const TrajectoryRecord&) = default;
};

/// Random-order dynamics: agents drawn i.i.d. uniformly from the seeded
/// generator, stopping at the first d(x) < epsilon or after max_rounds * n
/// steps. Cancellation is checked once per round and raises Cancelled.
TrajectoryRecord run(const Graph& g, const DynamicsConfig& cfg, std::stop_token stop = {});

struct ReplayOptions {
  std::optional<double> epsilon_reshuffle;
  RecordLevel record = RecordLevel::full;
  std::size_t residual_points = 5000;
};

/// Updates agents in the given order, stopping at the end of the schedule or
/// at the first d(x) < epsilon.
TrajectoryRecord replay_schedule(const Graph& g, double delta, const StrategyProfile& x0,
                                 std::span<const Vertex> schedule, double epsilon,
                                 const ReplayOptions& options = {});

struct EventClassification {
  double last_change_round = 0.0;
  std::vector<ReshuffleEvent> reshuffles;
};

/// Recomputes the final active-set change and the reshuffles of a full
/// record by replaying its steps from the initial profile. An activation is
/// a reshuffle when d(x) < reshuffle tolerance held at some earlier time
/// with no activation in between; after an activation, d(x) must first
/// return to at least the tolerance before the next one can count.
EventClassification classify_events(const Graph& g, const TrajectoryRecord& rec,
                                    const DynamicsConfig& cfg);

struct AgentTrace {
  std::vector<std::uint64_t> t;
  std::vector<double> value;
};

/// Per-agent value histories from a full record, each reduced to at most
/// max_points samples. Samples where the agent's activity status flips are
/// always kept, as are the first and last sample.
std::vector<AgentTrace> agent_traces(const TrajectoryRecord& rec, std::size_t max_points);

}  // namespace brdlab

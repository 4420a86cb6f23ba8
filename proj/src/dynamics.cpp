#include "brdlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "brdlab/errors.hpp"
#include "brdlab/rng.hpp"

namespace brdlab {

StrategyProfile::StrategyProfile(std::vector<double> values) : x_(std::move(values)) {
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!(x_[i] >= 0.0 && x_[i] <= 1.0))
      throw InputError("activity level of agent " + std::to_string(i) + " outside [0,1]");
  }
}

StrategyProfile StrategyProfile::zeros(std::size_t n) {
  return StrategyProfile(std::vector<double>(n, 0.0));
}

StrategyProfile StrategyProfile::ones(std::size_t n) {
  return StrategyProfile(std::vector<double>(n, 1.0));
}

StrategyProfile StrategyProfile::uniform(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (double& xi : v) xi = rng.uniform();
  return StrategyProfile(std::move(v));
}

VertexSet StrategyProfile::active_set() const {
  std::vector<Vertex> s;
  for (std::size_t i = 0; i < x_.size(); ++i)
    if (x_[i] > 0.0) s.push_back(i);
  return VertexSet(std::move(s));
}

namespace {

double neighbor_sum(const Graph& g, const StrategyProfile& x, Vertex i) {
  double s = 0.0;
  for (Vertex j : g.neighbors(i)) s += x[j];
  return s;
}

double clamp_response(double delta, double neighbor_activity) {
  // Incrementally maintained sums can drift a few ulps below zero.
  const double r = std::min(1.0, 1.0 - delta * neighbor_activity);
  return r > 0.0 ? r : 0.0;
}

StatusChange transition(double before, double after) {
  if (before <= 0.0 && after > 0.0) return StatusChange::activated;
  if (before > 0.0 && after <= 0.0) return StatusChange::deactivated;
  return StatusChange::none;
}

// Tracks quasi-convergence for reshuffle detection. The detector arms when
// d drops below the tolerance and fires on the next activation; after any
// activation d has to climb back to the tolerance before it can arm again,
// so one reshuffle is not counted twice while its new agent is still tiny.
class ReshuffleDetector {
 public:
  ReshuffleDetector(double tolerance, double d0) : tol_(tolerance), armed_(d0 < tolerance) {}

  /// Returns true when the activation is a reshuffle.
  bool on_activation() {
    const bool fired = armed_;
    armed_ = false;
    can_arm_ = false;
    return fired;
  }

  void observe(double d) {
    if (d >= tol_) can_arm_ = true;
    else if (can_arm_) armed_ = true;
  }

 private:
  double tol_;
  bool armed_;
  bool can_arm_ = true;
};

}  // namespace

double best_response(const Graph& g, double delta, const StrategyProfile& x, Vertex i) {
  return clamp_response(delta, neighbor_sum(g, x, i));
}

double payoff(const Graph& g, double delta, const StrategyProfile& x, Vertex i) {
  const double xi = x[i];
  return xi - 0.5 * xi * xi - delta * xi * neighbor_sum(g, x, i);
}

double residual_d(const Graph& g, double delta, const StrategyProfile& x) {
  double d = 0.0;
  for (Vertex i = 0; i < g.size(); ++i) d = std::max(d, std::abs(x[i] - best_response(g, delta, x, i)));
  return d;
}

double potential(const Graph& g, double delta, const StrategyProfile& x) {
  double linear = 0.0;
  double square = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    linear += x[i];
    square += x[i] * x[i];
  }
  double cross = 0.0;
  for (const Edge& e : g.edges()) cross += x[e.u] * x[e.v];
  // x'Gx counts every edge twice; the factor 1/2 cancels one of them.
  return linear - 0.5 * square - delta * cross;
}

double weighted_error_norm_sq(const Graph& g, double delta, const VertexSet& s,
                              std::span<const double> f) {
  if (f.size() != g.size()) throw InputError("error vector must have one entry per vertex");
  double q = 0.0;
  for (Vertex i : s) {
    q += f[i] * f[i];
    for (Vertex j : g.neighbors(i))
      if (s.contains(j)) q += delta * f[i] * f[j];
  }
  return q;
}

std::map<Vertex, double> inactivity_margins(const Graph& g, double delta,
                                            const StrategyProfile& x) {
  std::map<Vertex, double> margins;
  for (Vertex i = 0; i < g.size(); ++i) {
    if (x.active(i)) continue;
    margins[i] = delta > 0.0 ? neighbor_sum(g, x, i) - 1.0 / delta
                             : -std::numeric_limits<double>::infinity();
  }
  return margins;
}

StepReport step(const Graph& g, double delta, StrategyProfile& x, Vertex i) {
  if (i >= g.size()) throw InputError("agent " + std::to_string(i) + " out of range");
  StepReport report;
  report.agent = i;
  report.old_value = x[i];
  report.new_value = best_response(g, delta, x, i);
  report.change = transition(report.old_value, report.new_value);
  x.set(i, report.new_value);
  return report;
}

double DynamicsConfig::reshuffle_tolerance() const {
  return std::max(epsilon, epsilon_reshuffle.value_or(kDefaultReshuffleTolerance));
}

void DynamicsConfig::validate(std::size_t n) const {
  if (!(delta >= 0.0 && delta <= 1.0)) throw InputError("delta must lie in [0,1]");
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  if (epsilon_reshuffle && !(*epsilon_reshuffle >= epsilon))
    throw InputError("epsilon_reshuffle must be at least epsilon");
  if (max_rounds < 1) throw InputError("max_rounds must be at least 1");
  if (initial.kind == InitialKind::explicit_profile && initial.values.size() != n)
    throw InputError("explicit initial profile has " + std::to_string(initial.values.size()) +
                     " entries, graph has " + std::to_string(n));
}

namespace {

// Max over per-agent gaps, updated in O(log n).
class MaxTree {
 public:
  explicit MaxTree(std::size_t n) {
    while (size_ < n) size_ *= 2;
    tree_.assign(2 * size_, 0.0);
  }
  void set(std::size_t i, double v) {
    std::size_t k = i + size_;
    tree_[k] = v;
    for (k /= 2; k >= 1; k /= 2) tree_[k] = std::max(tree_[2 * k], tree_[2 * k + 1]);
  }
  void rebuild(std::span<const double> values) {
    std::fill(tree_.begin(), tree_.end(), 0.0);
    std::copy(values.begin(), values.end(), tree_.begin() + static_cast<std::ptrdiff_t>(size_));
    for (std::size_t k = size_ - 1; k >= 1; --k) tree_[k] = std::max(tree_[2 * k], tree_[2 * k + 1]);
  }
  double max() const { return tree_[1]; }

 private:
  std::size_t size_ = 1;
  std::vector<double> tree_;
};

class ResidualDownsampler {
 public:
  explicit ResidualDownsampler(std::size_t cap) : cap_(std::max<std::size_t>(cap, 4)) {}

  void offer(std::uint64_t t, double d) {
    if (t % stride_ != 0) return;
    samples_.push_back({t, d});
    if (samples_.size() >= cap_) {
      std::size_t w = 0;
      for (std::size_t r = 0; r < samples_.size(); ++r)
        if (samples_[r].t % (2 * stride_) == 0) samples_[w++] = samples_[r];
      samples_.resize(w);
      stride_ *= 2;
    }
  }

  std::vector<ResidualSample> finish(std::uint64_t t, double d) {
    if (samples_.empty() || samples_.back().t != t) samples_.push_back({t, d});
    return std::move(samples_);
  }

 private:
  std::size_t cap_;
  std::uint64_t stride_ = 1;
  std::vector<ResidualSample> samples_;
};

// Shared stepping loop. Neighbour sums and per-agent gaps are maintained
// incrementally and resynchronised from scratch once per round.
class Engine {
 public:
  Engine(const Graph& g, double delta, StrategyProfile x0, double epsilon, double eps_reshuffle,
         RecordLevel record, std::size_t residual_points)
      : g_(g),
        delta_(delta),
        epsilon_(epsilon),
        eps_reshuffle_(eps_reshuffle),
        record_(record),
        x_(x0.values().begin(), x0.values().end()),
        sums_(g.size(), 0.0),
        gaps_(g.size(), 0.0),
        tree_(g.size()),
        sampler_(residual_points) {
    rec_.n = g.size();
    rec_.initial = std::move(x0);
    resync();
  }

  template <typename NextAgent>
  TrajectoryRecord drive(std::uint64_t max_steps, NextAgent&& next_agent, const std::stop_token& stop) {
    const std::size_t n = g_.size();
    double d = tree_.max();
    if (record_ != RecordLevel::summary) sampler_.offer(0, d);
    ReshuffleDetector detector(eps_reshuffle_, d);
    std::uint64_t t = 0;
    bool converged = d < epsilon_;
    std::uint64_t last_change = 0;
    while (!converged && t < max_steps) {
      if (t % n == 0 && t > 0) {
        if (stop.stop_requested()) throw Cancelled();
        resync();
      }
      const Vertex i = next_agent();
      ++t;
      const double before = x_[i];
      const double after = clamp_response(delta_, sums_[i]);
      x_[i] = after;
      if (after != before) {
        const double diff = after - before;
        for (Vertex j : g_.neighbors(i)) {
          sums_[j] += diff;
          refresh_gap(j);
        }
      }
      gaps_[i] = 0.0;
      tree_.set(i, 0.0);

      if (record_ == RecordLevel::full) rec_.steps.push_back({t, i, after});
      const StatusChange change = transition(before, after);
      if (change != StatusChange::none) {
        rec_.active_changes.push_back({t, i, change});
        last_change = t;
        if (change == StatusChange::activated) {
          if (detector.on_activation()) rec_.reshuffles.push_back({t, i});
        }
      }
      d = tree_.max();
      detector.observe(d);
      if (record_ != RecordLevel::summary) sampler_.offer(t, d);
      converged = d < epsilon_;
    }
    rec_.step_count = t;
    rec_.rounds = static_cast<double>(t) / static_cast<double>(n);
    rec_.converged = converged;
    rec_.final_residual = d;
    rec_.last_change_round = static_cast<double>(last_change) / static_cast<double>(n);
    rec_.terminal = StrategyProfile(std::move(x_));
    if (record_ != RecordLevel::summary) rec_.residuals = sampler_.finish(t, d);
    return std::move(rec_);
  }

 private:
  void refresh_gap(Vertex j) {
    gaps_[j] = std::abs(x_[j] - clamp_response(delta_, sums_[j]));
    tree_.set(j, gaps_[j]);
  }

  void resync() {
    for (Vertex i = 0; i < g_.size(); ++i) {
      double s = 0.0;
      for (Vertex j : g_.neighbors(i)) s += x_[j];
      sums_[i] = s;
    }
    for (Vertex i = 0; i < g_.size(); ++i)
      gaps_[i] = std::abs(x_[i] - clamp_response(delta_, sums_[i]));
    tree_.rebuild(gaps_);
  }

  const Graph& g_;
  double delta_;
  double epsilon_;
  double eps_reshuffle_;
  RecordLevel record_;
  std::vector<double> x_;
  std::vector<double> sums_;
  std::vector<double> gaps_;
  MaxTree tree_;
  ResidualDownsampler sampler_;
  TrajectoryRecord rec_;
};

}  // namespace

TrajectoryRecord run(const Graph& g, const DynamicsConfig& cfg, std::stop_token stop) {
  cfg.validate(g.size());
  const std::size_t n = g.size();
  Rng rng(cfg.seed);
  StrategyProfile x0;
  switch (cfg.initial.kind) {
    case InitialKind::uniform_random: x0 = StrategyProfile::uniform(n, rng); break;
    case InitialKind::all_zero: x0 = StrategyProfile::zeros(n); break;
    case InitialKind::all_one: x0 = StrategyProfile::ones(n); break;
    case InitialKind::explicit_profile: x0 = StrategyProfile(cfg.initial.values); break;
  }
  Engine engine(g, cfg.delta, std::move(x0), cfg.epsilon, cfg.reshuffle_tolerance(), cfg.record,
                cfg.residual_points);
  return engine.drive(cfg.max_rounds * n, [&] { return static_cast<Vertex>(rng.below(n)); }, stop);
}

TrajectoryRecord replay_schedule(const Graph& g, double delta, const StrategyProfile& x0,
                                 std::span<const Vertex> schedule, double epsilon,
                                 const ReplayOptions& options) {
  if (schedule.empty()) throw InputError("schedule must not be empty");
  if (x0.size() != g.size()) throw InputError("initial profile size does not match the graph");
  if (!(delta >= 0.0 && delta <= 1.0)) throw InputError("delta must lie in [0,1]");
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  for (Vertex v : schedule)
    if (v >= g.size()) throw InputError("schedule vertex " + std::to_string(v) + " out of range");
  const double eps_res = std::max(epsilon, options.epsilon_reshuffle.value_or(kDefaultReshuffleTolerance));
  Engine engine(g, delta, x0, epsilon, eps_res, options.record, options.residual_points);
  std::size_t k = 0;
  return engine.drive(schedule.size(), [&] { return schedule[k++]; }, std::stop_token{});
}

EventClassification classify_events(const Graph& g, const TrajectoryRecord& rec,
                                     const DynamicsConfig& cfg) {
  if (rec.steps.size() != rec.step_count)
    throw InputError("event classification needs a record with every step");
  EventClassification out;
  const double eps_res = cfg.reshuffle_tolerance();
  StrategyProfile x = rec.initial;
  ReshuffleDetector detector(eps_res, residual_d(g, cfg.delta, x));
  std::uint64_t last = 0;
  for (const StepRecord& s : rec.steps) {
    const double before = x[s.agent];
    x.set(s.agent, s.value);
    const StatusChange change = transition(before, s.value);
    if (change != StatusChange::none) last = s.t;
    if (change == StatusChange::activated) {
      if (detector.on_activation()) out.reshuffles.push_back({s.t, s.agent});
    }
    detector.observe(residual_d(g, cfg.delta, x));
  }
  out.last_change_round = static_cast<double>(last) / static_cast<double>(rec.n);
  return out;
}

std::vector<AgentTrace> agent_traces(const TrajectoryRecord& rec, std::size_t max_points) {
  if (rec.steps.size() != rec.step_count)
    throw InputError("agent traces need a record with every step");
  max_points = std::max<std::size_t>(max_points, 2);
  std::vector<AgentTrace> raw(rec.n);
  std::vector<std::vector<char>> keep(rec.n);
  for (std::size_t i = 0; i < rec.n; ++i) {
    raw[i].t.push_back(0);
    raw[i].value.push_back(rec.initial[i]);
    keep[i].push_back(1);
  }
  for (const StepRecord& s : rec.steps) {
    AgentTrace& tr = raw[s.agent];
    const bool flip = (tr.value.back() > 0.0) != (s.value > 0.0);
    tr.t.push_back(s.t);
    tr.value.push_back(s.value);
    keep[s.agent].push_back(flip ? 1 : 0);
  }
  std::vector<AgentTrace> out(rec.n);
  for (std::size_t i = 0; i < rec.n; ++i) {
    const std::size_t m = raw[i].t.size();
    keep[i].back() = 1;
    std::size_t forced = 0;
    for (char k : keep[i]) forced += static_cast<std::size_t>(k);
    const std::size_t budget = max_points > forced ? max_points - forced : 0;
    const std::size_t optional = m - forced;
    // Keep every stride-th optional sample so that the total stays in budget.
    const std::size_t stride = budget == 0 ? 0 : (optional + budget - 1) / budget;
    std::size_t seen = 0;
    for (std::size_t k = 0; k < m; ++k) {
      bool take = keep[i][k] != 0;
      if (!take && stride > 0) take = (seen++ % stride) == 0;
      if (take) {
        out[i].t.push_back(raw[i].t[k]);
        out[i].value.push_back(raw[i].value[k]);
      }
    }
  }
  return out;
}

}  // namespace brdlab

#include "brdlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "brdlab/equilibria.hpp"
#include "brdlab/errors.hpp"
#include "brdlab/rng.hpp"
#include "brdlab/specs.hpp"
#include "brdlab/spectral.hpp"

namespace brdlab {

std::vector<double> expand_grid(const DeltaRange& r) {
  if (!(r.step > 0.0)) throw InputError("delta step must be positive");
  if (!(r.start >= 0.0 && r.start <= r.end && r.end <= 1.0))
    throw InputError("delta range must satisfy 0 <= start <= end <= 1");
  const auto count = static_cast<std::size_t>(std::floor((r.end - r.start) / r.step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double v = r.start + static_cast<double>(i) * r.step;
    out.push_back(std::min(1.0, std::round(v * 1e12) / 1e12));
  }
  return out;
}

void SweepSpec::validate() const {
  if (graph_spec.empty()) throw InputError("sweep needs a graph spec");
  if (deltas.empty()) throw InputError("sweep needs at least one delta");
  for (double d : deltas)
    if (!(d >= 0.0 && d <= 1.0)) throw InputError("every delta must lie in [0,1]");
  if (trials < 1) throw InputError("trials must be at least 1");
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  if (epsilon_reshuffle && !(*epsilon_reshuffle > 0.0)) throw InputError("epsilon_reshuffle must be positive");
  if (max_rounds < 1) throw InputError("max_rounds must be at least 1");
}

std::uint64_t sweep_seed(const SweepSpec& spec, std::size_t delta_index, std::size_t trial) {
  return derive_seed(spec.base_seed, delta_index, trial);
}

DynamicsConfig cell_config(const SweepSpec& spec, std::size_t delta_index, std::size_t trial) {
  DynamicsConfig cfg;
  cfg.delta = spec.deltas.at(delta_index);
  cfg.epsilon = spec.epsilon;
  cfg.epsilon_reshuffle = spec.epsilon_reshuffle;
  cfg.max_rounds = spec.max_rounds;
  cfg.seed = sweep_seed(spec, delta_index, trial);
  cfg.initial = spec.initial;
  cfg.record = spec.record_level;
  return cfg;
}

SweepRow summarize(const Graph& g, const DynamicsConfig& cfg, std::size_t trial,
                   const TrajectoryRecord& rec) {
  SweepRow row;
  row.delta = cfg.delta;
  row.trial = trial;
  row.seed = cfg.seed;
  row.rounds = rec.rounds;
  row.converged = rec.converged;
  row.last_change_round = rec.last_change_round;
  row.n_reshuffles = rec.reshuffles.size();
  const VertexSet s = rec.terminal.active_set();
  row.active_count = s.size();
  if (rec.converged)
    row.terminal_stable = !s.empty() && solve_on_active_set(g, cfg.delta, s).stable();
  for (const VertexSet& c : connected_components(g, s)) {
    row.largest_component = std::max(row.largest_component, c.size());
    if (c.size() == 1) ++row.isolated_active;
  }
  for (const Edge& e : g.edges())
    if (s.contains(e.u) && s.contains(e.v)) ++row.active_edges;
  return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const SweepOptions& options) {
  spec.validate();
  const Graph g = parse_graph_spec(spec.graph_spec);
  const std::size_t cells = spec.cell_count();
  std::vector<SweepRow> rows(cells);

  std::size_t workers = options.workers ? options.workers : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, cells);

  std::atomic<std::size_t> next{0};
  std::stop_source abort;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      while (true) {
        if (abort.stop_requested() || options.stop.stop_requested()) return;
        const std::size_t k = next.fetch_add(1);
        if (k >= cells) return;
        const std::size_t di = k / spec.trials;
        const std::size_t trial = k % spec.trials;
        const DynamicsConfig cfg = cell_config(spec, di, trial);
        const TrajectoryRecord rec = run(g, cfg, options.stop);
        rows[k] = summarize(g, cfg, trial, rec);
        if (options.on_row) options.on_row(k, rows[k]);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      abort.request_stop();
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  if (options.stop.stop_requested()) throw Cancelled();
  return rows;
}

const char* const kCsvHeader =
    "delta,trial,seed,rounds,converged,last_change_round,n_reshuffles,terminal_stable,"
    "active_count,largest_component,isolated_active,active_edges";

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string csv_row(const SweepRow& r) {
  std::string out;
  auto add = [&](const std::string& field) {
    if (!out.empty()) out += ',';
    out += field;
  };
  add(format_real(r.delta));
  add(std::to_string(r.trial));
  add(std::to_string(r.seed));
  add(format_real(r.rounds));
  add(r.converged ? "true" : "false");
  add(format_real(r.last_change_round));
  add(std::to_string(r.n_reshuffles));
  add(r.terminal_stable ? (*r.terminal_stable ? "true" : "false") : "");
  add(std::to_string(r.active_count));
  add(std::to_string(r.largest_component));
  add(std::to_string(r.isolated_active));
  add(std::to_string(r.active_edges));
  return out;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kCsvHeader << '\n';
  for (const SweepRow& r : rows) out << csv_row(r) << '\n';
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream s;
  write_csv(s, rows);
  return s.str();
}

std::vector<ThresholdLine> threshold_lines(const Graph& g) {
  std::vector<ThresholdLine> out;
  for (double lambda : eigenvalues_sym(g).eigenvalues) {
    if (std::abs(lambda) < 1.0 - 1e-12) continue;
    const ThresholdLine line{std::min(1.0, 1.0 / std::abs(lambda)), lambda < 0 ? -1 : 1};
    const bool seen = std::any_of(out.begin(), out.end(), [&](const ThresholdLine& l) {
      return l.sign == line.sign && std::abs(l.value - line.value) < 1e-9;
    });
    if (!seen) out.push_back(line);
  }
  std::sort(out.begin(), out.end(), [](const ThresholdLine& a, const ThresholdLine& b) {
    return a.value != b.value ? a.value < b.value : a.sign < b.sign;
  });
  return out;
}

namespace {

const DeltaRange kFullRange{0.005, 0.995, 0.005};

SweepSpec basic(std::string graph, std::vector<double> deltas, std::size_t trials = 10) {
  SweepSpec s;
  s.graph_spec = std::move(graph);
  s.deltas = std::move(deltas);
  s.trials = trials;
  return s;
}

Preset family(std::string name, std::string description, std::vector<std::string> graphs) {
  Preset p{std::move(name), std::move(description), {}};
  for (auto& g : graphs) p.sweeps.push_back(basic(std::move(g), expand_grid(kFullRange)));
  return p;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig-cospectral", "fig-p2", "fig-p3", "fig-p4", "fig-p5", "fig-p6", "fig-p7", "fig-p8",
          "fig-p100", "fig-p100zoom", "fig-rr", "fig-er", "fig-ba", "fig-bipartite",
          "appendix-lastchange", "appendix-parity"};
}

Preset preset(std::string_view name) {
  const std::string n(name);
  if (n == "fig-cospectral")
    return family(n, "star K_{1,4} and C4 plus an isolated vertex", {"cospectral:1", "cospectral:2"});
  if (n.size() == 6 && n.rfind("fig-p", 0) == 0 && n[5] >= '2' && n[5] <= '8')
    return family(n, std::string("path on ") + n[5] + " vertices", {std::string("path:") + n[5]});
  if (n == "fig-p100") return family(n, "paths on 100 and 101 vertices", {"path:100", "path:101"});
  if (n == "fig-p100zoom") {
    Preset p{n, "path on 100 vertices near the block thresholds", {}};
    p.sweeps.push_back(basic("path:100", expand_grid({0.45, 0.62, 0.002}), 20));
    return p;
  }
  if (n == "fig-rr")
    return family(n, "random 100-vertex regular graphs of degree 5, 20, 40, 80",
                  {"rr:100:5", "rr:100:20", "rr:100:40", "rr:100:80"});
  if (n == "fig-er")
    return family(n, "Erdos-Renyi graphs on 100 vertices, p = 0.05, 0.2, 0.5, 0.8",
                  {"er:100:0.05", "er:100:0.2", "er:100:0.5", "er:100:0.8"});
  if (n == "fig-ba")
    return family(n, "Barabasi-Albert graphs on 100 vertices, m = 1, 2, 5, 10",
                  {"ba:100:1", "ba:100:2", "ba:100:5", "ba:100:10"});
  if (n == "fig-bipartite")
    return family(n, "complete bipartite graphs K_{4,1}, K_{60,5}, K_{20,20}",
                  {"kml:4:1", "kml:60:5", "kml:20:20"});
  if (n == "appendix-lastchange") {
    Preset p{n, "one trajectory per delta on a 100-vertex BA tree; last active-set change vs T", {}};
    SweepSpec s = basic("ba:100:1", expand_grid(kFullRange), 1);
    s.epsilon = 1e-4;
    p.sweeps.push_back(std::move(s));
    return p;
  }
  if (n == "appendix-parity") {
    Preset p{n, "paths of both parities around delta = 1/2", {}};
    for (const char* g : {"path:100", "path:101", "path:300", "path:301"}) {
      SweepSpec s = basic(g, {0.499, 0.4999, 0.5, 0.502, 0.51, 0.52}, 1);
      s.epsilon = 1e-5;
      s.record_level = RecordLevel::full;
      p.sweeps.push_back(std::move(s));
    }
    return p;
  }
  throw InputError("unknown preset '" + n + "'");
}

}  // namespace brdlab

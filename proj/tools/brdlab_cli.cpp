// Command-line front end: simulate, sweep, spectrum, equilibria, scenario,
// presets and serve.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "brdlab/constructions.hpp"
#include "brdlab/equilibria.hpp"
#include "brdlab/errors.hpp"
#include "brdlab/experiments.hpp"
#include "brdlab/json_io.hpp"
#include "brdlab/service.hpp"
#include "brdlab/specs.hpp"
#include "brdlab/spectral.hpp"

#include <httplib.h>

namespace {

using namespace brdlab;

constexpr int kExitInput = 2;
constexpr int kExitGuard = 3;

InitialCondition initial_from_name(const std::string& name) {
  if (name == "random") return {InitialKind::uniform_random, {}};
  if (name == "zeros") return {InitialKind::all_zero, {}};
  if (name == "ones") return {InitialKind::all_one, {}};
  throw InputError("initial must be random, zeros or ones");
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

// table.csv -> table-2.csv
std::string numbered(const std::string& path, std::size_t k) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  const std::string suffix = "-" + std::to_string(k);
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + suffix;
  return path.substr(0, dot) + suffix + path.substr(dot);
}

Json spectrum_json(const Graph& g) {
  const Spectrum sp = eigenvalues_sym(g);
  Json lines = Json::array();
  for (const ThresholdLine& l : threshold_lines(g)) lines.push_back({{"value", l.value}, {"sign", l.sign}});
  return {{"n", g.size()}, {"spectrum", sp.eigenvalues}, {"lambda_min", sp.min()}, {"threshold_lines", lines}};
}

struct SimulateArgs {
  std::string graph;
  std::string scenario;
  std::size_t index = 0;
  double delta = 0.5;
  std::uint64_t seed = 0;
  double epsilon = 1e-4;
  std::optional<double> epsilon_reshuffle;
  std::uint64_t max_rounds = 100000;
  std::string record = "full";
  std::string initial = "random";
  std::string traj;
  bool random_order = false;
};

int simulate(const SimulateArgs& a, const CLI::App& cmd) {
  DynamicsConfig cfg;
  cfg.delta = a.delta;
  cfg.seed = a.seed;
  cfg.epsilon = a.epsilon;
  cfg.epsilon_reshuffle = a.epsilon_reshuffle;
  cfg.max_rounds = a.max_rounds;
  cfg.record = record_level_from_string(a.record);
  cfg.initial = initial_from_name(a.initial);

  TrajectoryRecord rec;
  if (!a.scenario.empty()) {
    auto bundles = make_scenario(a.scenario);
    if (a.index >= bundles.size()) throw InputError("scenario index out of range");
    const ScenarioBundle& b = bundles[a.index];
    if (cmd.count("--delta") == 0) cfg.delta = b.delta_hint;
    if (cmd.count("--epsilon") == 0) cfg.epsilon = b.epsilon_hint;
    if (cmd.count("--initial") == 0) {
      const auto v = b.initial.values();
      cfg.initial = {InitialKind::explicit_profile, std::vector<double>(v.begin(), v.end())};
    }
    cfg.validate(b.graph.size());
    if (b.schedule && !a.random_order) {
      const StrategyProfile x0(cfg.initial.kind == InitialKind::explicit_profile ? cfg.initial.values
                                                                                 : std::vector<double>(b.initial.values().begin(), b.initial.values().end()));
      rec = replay_schedule(b.graph, cfg.delta, x0, *b.schedule, cfg.epsilon,
                            {cfg.epsilon_reshuffle, cfg.record, cfg.residual_points});
    } else {
      rec = run(b.graph, cfg);
    }
  } else {
    if (a.graph.empty()) throw InputError("simulate needs --graph or --scenario");
    const Graph g = parse_graph_spec(a.graph);
    rec = run(g, cfg);
  }

  Json payload = to_json(rec);
  payload["delta"] = cfg.delta;
  payload["seed"] = cfg.seed;
  if (!a.traj.empty()) write_file(a.traj, payload.dump() + "\n");
  std::cout << Json{{"converged", rec.converged},
                    {"rounds", rec.rounds},
                    {"last_change_round", rec.last_change_round},
                    {"reshuffles", payload["reshuffles"]},
                    {"final_residual", rec.final_residual},
                    {"active_set", rec.terminal.active_set().members()}}
                   .dump()
            << "\n";
  return 0;
}

struct SweepArgs {
  std::string graph;
  std::string preset;
  std::optional<std::size_t> sweep_index;
  double delta_start = 0.005;
  double delta_end = 0.995;
  double delta_step = 0.005;
  std::vector<double> deltas;
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  double epsilon = 1e-4;
  std::optional<double> epsilon_reshuffle;
  std::uint64_t max_rounds = 100000;
  std::string record = "summary";
  std::string initial = "random";
  std::string out;
  std::string jsonl;
  std::size_t workers = 0;
};

int sweep(const SweepArgs& a, const CLI::App& cmd) {
  std::vector<SweepSpec> specs;
  if (!a.preset.empty()) {
    specs = preset(a.preset).sweeps;
    if (a.sweep_index) {
      if (*a.sweep_index >= specs.size()) throw InputError("--sweep-index out of range for this preset");
      specs = {specs[*a.sweep_index]};
    }
  } else {
    if (a.graph.empty()) throw InputError("sweep needs --graph or --preset");
    specs.emplace_back();
  }
  const bool explicit_grid = cmd.count("--delta-start") || cmd.count("--delta-end") || cmd.count("--delta-step");
  for (SweepSpec& s : specs) {
    const bool fresh = a.preset.empty();
    auto given = [&](const char* flag) { return fresh || cmd.count(flag) > 0; };
    if (given("--graph") && !a.graph.empty()) s.graph_spec = a.graph;
    if (!a.deltas.empty()) s.deltas = a.deltas;
    else if (fresh || explicit_grid) s.deltas = expand_grid({a.delta_start, a.delta_end, a.delta_step});
    if (given("--trials")) s.trials = a.trials;
    if (given("--seed")) s.base_seed = a.seed;
    if (given("--epsilon")) s.epsilon = a.epsilon;
    if (given("--epsilon-reshuffle")) s.epsilon_reshuffle = a.epsilon_reshuffle;
    if (given("--max-rounds")) s.max_rounds = a.max_rounds;
    if (given("--record")) s.record_level = record_level_from_string(a.record);
    if (given("--initial")) s.initial = initial_from_name(a.initial);
  }

  for (std::size_t k = 0; k < specs.size(); ++k) {
    const SweepSpec& s = specs[k];
    SweepOptions opt;
    opt.workers = a.workers;
    const std::vector<SweepRow> rows = run_sweep(s, opt);
    const std::string csv = to_csv(rows);
    if (a.out.empty()) {
      std::cout << csv;
    } else {
      const std::string path = specs.size() > 1 ? numbered(a.out, k + 1) : a.out;
      write_file(path, csv);
      std::cerr << "wrote " << rows.size() << " rows for " << s.graph_spec << " to " << path << "\n";
    }
    if (!a.jsonl.empty()) {
      const std::string path = specs.size() > 1 ? numbered(a.jsonl, k + 1) : a.jsonl;
      std::ofstream out(path, std::ios::binary);
      if (!out) throw InputError("cannot write '" + path + "'");
      const Graph g = parse_graph_spec(s.graph_spec);
      for (std::size_t di = 0; di < s.deltas.size(); ++di) {
        for (std::size_t t = 0; t < s.trials; ++t) {
          const DynamicsConfig cfg = cell_config(s, di, t);
          const TrajectoryRecord rec = run(g, cfg);
          out << Json{{"row", to_json(summarize(g, cfg, t, rec))}, {"trajectory", to_json(rec)}}.dump() << "\n";
        }
      }
    }
  }
  return 0;
}

int equilibria(const std::string& spec, double delta, bool brute, std::size_t max_n) {
  const Graph g = parse_graph_spec(spec);
  if (!(delta >= 0.0 && delta <= 1.0)) throw InputError("delta must lie in [0,1]");
  Json out = {{"delta", delta}, {"uniqueness", to_string(uniqueness_regime(g, delta))}};
  Json reports = Json::array();
  if (brute) {
    out["method"] = "brute_force";
    for (const ActiveSetReport& r : enumerate_stable_active_sets(g, delta, max_n)) reports.push_back(to_json(r));
  } else if (g.size() >= 2 && g.size() <= 64 && g == generators::path(g.size())) {
    const PathEnumeration e = enumerate_path_configurations(g.size(), delta);
    out["method"] = "path_blocks";
    out["boundary_warning"] = e.boundary_warning;
    Json blocks = Json::array();
    for (const PathConfiguration& c : e.configurations) {
      blocks.push_back(c.blocks);
      reports.push_back(to_json(solve_on_active_set(g, delta, c.active_set())));
    }
    out["configurations"] = std::move(blocks);
  } else {
    out["method"] = "full_set_only";
    reports.push_back(to_json(solve_on_active_set(g, delta, VertexSet::all(g.size()))));
  }
  out["reports"] = std::move(reports);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int serve(ServiceConfig cfg) {
  ApiService service(cfg);
  httplib::Server server;
  service.mount(server);
  std::cerr << "listening on " << cfg.host << ":" << cfg.port << "\n";
  if (!server.listen(cfg.host, cfg.port)) throw InputError("cannot listen on " + cfg.host + ":" + std::to_string(cfg.port));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Best-response dynamics laboratory"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run one random-order trajectory");
  sim_cmd->add_option("--graph", sim.graph, "Graph spec or inline JSON");
  sim_cmd->add_option("--scenario", sim.scenario, "Scenario spec (uses its graph, start and schedule)");
  sim_cmd->add_option("--index", sim.index, "Bundle index for multi-graph scenarios");
  sim_cmd->add_option("--delta", sim.delta);
  sim_cmd->add_option("--seed", sim.seed);
  sim_cmd->add_option("--epsilon", sim.epsilon);
  sim_cmd->add_option("--epsilon-reshuffle", sim.epsilon_reshuffle);
  sim_cmd->add_option("--max-rounds", sim.max_rounds);
  sim_cmd->add_option("--record", sim.record, "summary, events or full");
  sim_cmd->add_option("--initial", sim.initial, "random, zeros or ones");
  sim_cmd->add_option("--traj", sim.traj, "Write the trajectory JSON here");
  sim_cmd->add_flag("--random-order", sim.random_order, "Ignore a scenario's fixed schedule");

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Delta sweep to CSV");
  sweep_cmd->add_option("--graph", sw.graph);
  sweep_cmd->add_option("--preset", sw.preset);
  sweep_cmd->add_option("--sweep-index", sw.sweep_index, "Run only one sweep of a multi-sweep preset");
  sweep_cmd->add_option("--delta-start", sw.delta_start);
  sweep_cmd->add_option("--delta-end", sw.delta_end);
  sweep_cmd->add_option("--delta-step", sw.delta_step);
  sweep_cmd->add_option("--deltas", sw.deltas, "Explicit delta list")->delimiter(',');
  sweep_cmd->add_option("--trials", sw.trials);
  sweep_cmd->add_option("--seed", sw.seed);
  sweep_cmd->add_option("--epsilon", sw.epsilon);
  sweep_cmd->add_option("--epsilon-reshuffle", sw.epsilon_reshuffle);
  sweep_cmd->add_option("--max-rounds", sw.max_rounds);
  sweep_cmd->add_option("--record", sw.record);
  sweep_cmd->add_option("--initial", sw.initial);
  sweep_cmd->add_option("--out", sw.out, "CSV path (stdout if omitted)");
  sweep_cmd->add_option("--jsonl", sw.jsonl, "Also write rows with trajectories as JSON lines");
  sweep_cmd->add_option("--workers", sw.workers);

  std::string spec_graph;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Adjacency spectrum and threshold lines");
  spectrum_cmd->add_option("--graph", spec_graph)->required();

  std::string eq_graph;
  double eq_delta = 0.5;
  bool eq_brute = false;
  std::size_t eq_max_n = 20;
  auto* eq_cmd = app.add_subcommand("equilibria", "Stable equilibria of a graph");
  eq_cmd->add_option("--graph", eq_graph)->required();
  eq_cmd->add_option("--delta", eq_delta)->required();
  eq_cmd->add_flag("--brute-force", eq_brute);
  eq_cmd->add_option("--max-n", eq_max_n, "Largest graph for --brute-force");

  std::string scenario_name;
  auto* scenario_cmd = app.add_subcommand("scenario", "Print a constructed scenario");
  scenario_cmd->add_option("--name", scenario_name)->required();

  auto* presets_cmd = app.add_subcommand("presets", "List sweep presets");

  ServiceConfig svc;
  svc.apply_environment();
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP/JSON service");
  serve_cmd->add_option("--host", svc.host);
  serve_cmd->add_option("--port", svc.port);
  serve_cmd->add_option("--workers", svc.workers);
  serve_cmd->add_option("--n-cap", svc.n_cap);
  serve_cmd->add_option("--sweep-budget", svc.sweep_budget);
  serve_cmd->add_option("--sync-n-limit", svc.sync_n_limit);
  serve_cmd->add_option("--max-jobs", svc.max_active_jobs);
  serve_cmd->add_option("--cors-origin", svc.cors_origin);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*sim_cmd) return simulate(sim, *sim_cmd);
    if (*sweep_cmd) return sweep(sw, *sweep_cmd);
    if (*spectrum_cmd) {
      std::cout << spectrum_json(parse_graph_spec(spec_graph)).dump(2) << "\n";
      return 0;
    }
    if (*eq_cmd) return equilibria(eq_graph, eq_delta, eq_brute, eq_max_n);
    if (*scenario_cmd) {
      Json bundles = Json::array();
      for (const ScenarioBundle& b : make_scenario(scenario_name)) bundles.push_back(to_json(b));
      std::cout << bundles.dump(2) << "\n";
      return 0;
    }
    if (*presets_cmd) {
      for (const std::string& name : preset_names()) {
        const Preset p = preset(name);
        std::cout << name << "\t" << p.sweeps.size() << " sweep(s)\t" << p.description << "\n";
      }
      return 0;
    }
    if (*serve_cmd) return serve(svc);
  } catch (const GuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGuard;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const GenerationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

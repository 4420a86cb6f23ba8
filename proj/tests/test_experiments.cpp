#include <doctest.h>

#include <cmath>
#include <sstream>

#include "brdlab/equilibria.hpp"
#include "brdlab/errors.hpp"
#include "brdlab/experiments.hpp"
#include "brdlab/json_io.hpp"
#include "brdlab/specs.hpp"

using namespace brdlab;

TEST_CASE("grid expansion") {
  CHECK(expand_grid({0.1, 0.9, 0.4}) == std::vector<double>{0.1, 0.5, 0.9});
  const auto zoom = expand_grid({0.45, 0.62, 0.002});
  CHECK(zoom.size() == 86);
  CHECK(zoom.front() == 0.45);
  CHECK(zoom.back() == 0.62);
  CHECK(zoom[3] == 0.456);
  CHECK_THROWS_AS(expand_grid({0.5, 0.4, 0.1}), InputError);
  CHECK_THROWS_AS(expand_grid({0.1, 0.4, 0.0}), InputError);
  CHECK_THROWS_AS(expand_grid({0.1, 1.4, 0.1}), InputError);
}

TEST_CASE("graph specs") {
  CHECK(parse_graph_spec("path:4") == generators::path(4));
  CHECK(parse_graph_spec("kml:3:2") == generators::complete_bipartite(3, 2));
  CHECK(parse_graph_spec("er:20:0.3") == generators::erdos_renyi(20, 0.3, kDefaultGraphSeed));
  CHECK(parse_graph_spec("er:20:0.3:9") == generators::erdos_renyi(20, 0.3, 9));
  CHECK(parse_graph_spec("ba:30:2:4") == generators::barabasi_albert(30, 2, 4));
  CHECK(parse_graph_spec("rr:20:4") == generators::random_regular(20, 4, kDefaultGraphSeed));
  CHECK(parse_graph_spec("star:4") == generators::star(4));
  CHECK(parse_graph_spec("cycle:5") == generators::cycle(5));
  CHECK(parse_graph_spec("clique:4") == generators::clique(4));
  CHECK(parse_graph_spec("cospectral:2").edge_count() == 4);
  CHECK(parse_graph_spec("chain:2:0.99").size() == 10);
  CHECK(parse_graph_spec(R"({"n": 3, "edges": [[0, 1], [1, 2]]})") == generators::path(3));
  CHECK_THROWS_AS(parse_graph_spec("path:x"), InputError);
  CHECK_THROWS_AS(parse_graph_spec("path"), InputError);
  CHECK_THROWS_AS(parse_graph_spec("path:3:4"), InputError);
  CHECK_THROWS_AS(parse_graph_spec("hypercube:3"), InputError);
  CHECK_THROWS_AS(parse_graph_spec(""), InputError);
  CHECK_THROWS_AS(parse_graph_spec(R"({"n": 3, "edges": [[0, 1)"), InputError);
  CHECK_THROWS_AS(parse_graph_spec(R"({"edges": []})"), InputError);
  CHECK_THROWS_AS(parse_graph_spec("path:0"), GenerationError);
  CHECK_THROWS_AS(parse_graph_spec("rr:5:3"), GenerationError);
  CHECK_THROWS_AS(parse_graph_spec(R"({"n": 2, "edges": [[0, 5]]})"), GenerationError);
}

TEST_CASE("small sweep on the pair") {
  SweepSpec s;
  s.graph_spec = "path:2";
  s.deltas = expand_grid({0.1, 0.9, 0.4});
  s.trials = 2;
  s.base_seed = 5;
  const auto rows = run_sweep(s);
  REQUIRE(rows.size() == 6);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].converged);
    CHECK(rows[k].terminal_stable == std::optional<bool>(true));
    CHECK(rows[k].delta == s.deltas[k / 2]);
    CHECK(rows[k].trial == k % 2);
    CHECK(rows[k].seed == sweep_seed(s, k / 2, k % 2));
    CHECK(rows[k].active_count == 2);
    CHECK(rows[k].largest_component == 2);
    CHECK(rows[k].active_edges == 1);
    CHECK(rows[k].isolated_active == 0);
  }
}

TEST_CASE("sweeps are reproducible and independent of worker count") {
  SweepSpec s;
  s.graph_spec = "er:12:0.3:2";
  s.deltas = {0.2, 0.5, 0.8};
  s.trials = 4;
  SweepOptions one;
  one.workers = 1;
  SweepOptions three;
  three.workers = 3;
  const auto a = run_sweep(s, one);
  CHECK(a == run_sweep(s, three));
  CHECK(to_csv(a) == to_csv(run_sweep(s, one)));
}

TEST_CASE("sweep rows are consistent with the equilibrium tools") {
  SweepSpec s;
  s.graph_spec = "er:10:0.35:3";
  s.deltas = {0.3, 0.6, 0.9};
  s.trials = 5;
  const Graph g = parse_graph_spec(s.graph_spec);
  const auto rows = run_sweep(s);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::size_t di = k / s.trials;
    const DynamicsConfig cfg = cell_config(s, di, k % s.trials);
    const TrajectoryRecord rec = run(g, cfg);
    CHECK(summarize(g, cfg, k % s.trials, rec) == rows[k]);
    if (!rows[k].converged) {
      CHECK_FALSE(rows[k].terminal_stable.has_value());
      continue;
    }
    CHECK(verify_equilibrium(g, cfg.delta, rec.terminal, s.epsilon));
    if (*rows[k].terminal_stable) {
      const auto stable = enumerate_stable_active_sets(g, cfg.delta);
      const VertexSet active = rec.terminal.active_set();
      CHECK(std::any_of(stable.begin(), stable.end(), [&](const ActiveSetReport& r) { return r.set == active; }));
    }
  }
}

TEST_CASE("sweep validation") {
  SweepSpec s;
  s.graph_spec = "path:3";
  s.deltas = {0.5};
  s.trials = 0;
  CHECK_THROWS_AS(run_sweep(s), InputError);
  s.trials = 1;
  s.deltas = {1.5};
  CHECK_THROWS_AS(run_sweep(s), InputError);
  s.deltas = {};
  CHECK_THROWS_AS(run_sweep(s), InputError);
  s.deltas = {0.5};
  s.graph_spec = "bogus:1";
  CHECK_THROWS_AS(run_sweep(s), InputError);
}

TEST_CASE("csv layout") {
  SweepRow r;
  r.delta = 0.555;
  r.trial = 3;
  r.seed = 42;
  r.rounds = 12.4;
  r.converged = false;
  r.last_change_round = 7.2;
  r.n_reshuffles = 1;
  r.active_count = 4;
  r.largest_component = 2;
  r.isolated_active = 1;
  r.active_edges = 2;
  CHECK(csv_row(r) == "0.555,3,42,12.4,false,7.2,1,,4,2,1,2");
  r.converged = true;
  r.terminal_stable = true;
  CHECK(csv_row(r) == "0.555,3,42,12.4,true,7.2,1,true,4,2,1,2");
  CHECK(std::string(kCsvHeader) ==
        "delta,trial,seed,rounds,converged,last_change_round,n_reshuffles,terminal_stable,active_count,"
        "largest_component,isolated_active,active_edges");
  CHECK(to_csv({r}) == std::string(kCsvHeader) + "\n" + csv_row(r) + "\n");
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(3.0) == "3");
}

TEST_CASE("threshold lines") {
  const auto p2 = threshold_lines(generators::path(2));
  REQUIRE(p2.size() == 2);
  CHECK(p2[0].value == doctest::Approx(1.0));
  CHECK(p2[0].sign == -1);
  CHECK(p2[1].sign == 1);
  const auto star = threshold_lines(generators::star(4));
  CHECK(star.front().value == doctest::Approx(0.5));
  CHECK(star.front().sign == -1);
  const auto p8 = threshold_lines(generators::path(8));
  CHECK(std::any_of(p8.begin(), p8.end(), [](const ThresholdLine& l) { return std::abs(l.value - 0.532) < 5e-4; }));
  for (const auto& l : p8) CHECK((l.value > 0.0 && l.value <= 1.0));
  CHECK(threshold_lines(Graph(3, {})).empty());
}

TEST_CASE("presets") {
  for (const std::string& name : preset_names()) {
    const Preset p = preset(name);
    CHECK(p.name == name);
    REQUIRE_FALSE(p.sweeps.empty());
    for (const SweepSpec& s : p.sweeps) {
      CHECK_NOTHROW(s.validate());
      CHECK_NOTHROW(parse_graph_spec(s.graph_spec));
    }
  }
  CHECK(preset("fig-p2").sweeps.at(0).graph_spec == "path:2");
  CHECK(preset("fig-p2").sweeps.at(0).trials == 10);
  const SweepSpec zoom = preset("fig-p100zoom").sweeps.at(0);
  CHECK(zoom.deltas == expand_grid({0.45, 0.62, 0.002}));
  CHECK(zoom.trials == 20);
  const Preset cos = preset("fig-cospectral");
  REQUIRE(cos.sweeps.size() == 2);
  CHECK(cos.sweeps[0].graph_spec == "cospectral:1");
  CHECK(cos.sweeps[1].graph_spec == "cospectral:2");
  const SweepSpec p4 = preset("fig-p4").sweeps.at(0);
  CHECK(p4.deltas[1] - p4.deltas[0] == doctest::Approx(0.005));
  CHECK_THROWS_AS(preset("fig-p9"), InputError);
}

TEST_CASE("sweep spec JSON") {
  const SweepSpec a = sweep_spec_from_json(Json{{"preset", "fig-p2"}});
  CHECK(a.graph_spec == "path:2");
  const SweepSpec b = sweep_spec_from_json(
      Json{{"graph", "path:3"}, {"delta_start", 0.1}, {"delta_end", 0.3}, {"delta_step", 0.1}, {"trials", 3}, {"seed", 9}});
  CHECK(b.deltas == std::vector<double>{0.1, 0.2, 0.3});
  CHECK(b.trials == 3);
  CHECK(b.base_seed == 9);
  CHECK_THROWS_AS(sweep_spec_from_json(Json{{"graph", "path:3"}, {"trials", 0}}), InputError);
  CHECK_THROWS_AS(sweep_spec_from_json(Json{{"graph", "path:3"}, {"trials", "x"}}), InputError);
  CHECK_THROWS_AS(sweep_spec_from_json(Json{{"graph", "path:3"}, {"max_rounds", -4}}), InputError);
  CHECK_THROWS_AS(sweep_spec_from_json(Json{{"preset", "nope"}}), InputError);
}

TEST_CASE("just above the P6 threshold some rows end unstable") {
  SweepSpec s;
  s.graph_spec = "path:6";
  s.deltas = {0.555};
  const auto rows = run_sweep(s);
  CHECK(rows.size() == 10);
  CHECK(std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) {
    return !r.converged || (r.terminal_stable && !*r.terminal_stable);
  }));
}

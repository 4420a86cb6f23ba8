#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "brdlab/errors.hpp"
#include "brdlab/graph.hpp"
#include "brdlab/rng.hpp"

using namespace brdlab;

namespace {

std::vector<Graph> sample_graphs() {
  return {generators::path(7),
          generators::cycle(6),
          generators::clique(5),
          generators::star(4),
          generators::complete_bipartite(3, 4),
          generators::erdos_renyi(30, 0.2, 7),
          generators::barabasi_albert(40, 3, 11),
          generators::random_regular(20, 4, 5),
          generators::disjoint_union(generators::cycle(4), generators::path(1))};
}

bool induces(const Graph& g, std::initializer_list<Vertex> vs, const std::vector<std::pair<int, int>>& edges) {
  std::vector<Vertex> v(vs);
  std::set<std::pair<int, int>> want(edges.begin(), edges.end());
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      if (g.adjacent(v[a], v[b]) != (want.count({a, b}) > 0)) return false;
  return true;
}

}  // namespace

TEST_CASE("graph construction canonicalizes edges") {
  const Graph g(4, {{2, 1}, {1, 2}, {0, 3}, {3, 0}, {1, 3}});
  CHECK(g.edge_count() == 3);
  CHECK(g.edges() == std::vector<Edge>{{0, 3}, {1, 2}, {1, 3}});
  CHECK(g.neighbors(3) == std::vector<Vertex>{0, 1});
  CHECK(g.adjacent(2, 1));
  CHECK_FALSE(g.adjacent(0, 1));
}

TEST_CASE("graph construction rejects bad input") {
  CHECK_THROWS_AS(Graph(0, {}), InputError);
  CHECK_THROWS_AS(Graph(3, {{0, 3}}), InputError);
  CHECK_THROWS_AS(Graph(3, {{1, 1}}), InputError);
  CHECK_THROWS_AS(generators::path(0), InputError);
  CHECK_THROWS_AS(generators::cycle(2), InputError);
  CHECK_THROWS_AS(generators::random_regular(5, 3, 1), InputError);
  CHECK_THROWS_AS(generators::random_regular(4, 4, 1), InputError);
  CHECK_THROWS_AS(generators::barabasi_albert(5, 5, 1), InputError);
  CHECK_THROWS_AS(generators::erdos_renyi(5, 1.5, 1), InputError);
}

TEST_CASE("generator shapes") {
  CHECK(generators::path(5).edge_count() == 4);
  CHECK(generators::cycle(5).edge_count() == 5);
  CHECK(generators::clique(6).edge_count() == 15);
  CHECK(generators::star(4) == generators::complete_bipartite(4, 1));
  const Graph k = generators::complete_bipartite(3, 2);
  CHECK(k.edge_count() == 6);
  CHECK(k.adjacent(0, 3));
  CHECK_FALSE(k.adjacent(0, 1));
  CHECK_FALSE(k.adjacent(3, 4));
  const Graph u = generators::disjoint_union(generators::path(2), generators::path(3));
  CHECK(u.size() == 5);
  CHECK(u.edges() == std::vector<Edge>{{0, 1}, {2, 3}, {3, 4}});
  const Graph rr = generators::random_regular(30, 5, 3);
  for (Vertex v = 0; v < rr.size(); ++v) CHECK(rr.degree(v) == 5);
  const Graph ba = generators::barabasi_albert(50, 2, 9);
  CHECK(ba.edge_count() == 1 + 2 * 48);
  CHECK(generators::barabasi_albert(20, 1, 4).edge_count() == 19);
}

TEST_CASE("seeded generators are reproducible") {
  CHECK(generators::erdos_renyi(40, 0.3, 5) == generators::erdos_renyi(40, 0.3, 5));
  CHECK_FALSE(generators::erdos_renyi(40, 0.3, 5) == generators::erdos_renyi(40, 0.3, 6));
  CHECK(generators::barabasi_albert(40, 3, 5) == generators::barabasi_albert(40, 3, 5));
  CHECK(generators::random_regular(40, 6, 5) == generators::random_regular(40, 6, 5));
}

TEST_CASE("adjacency matrices are symmetric with zero diagonal") {
  for (const Graph& g : sample_graphs()) {
    const Eigen::MatrixXd a = g.adjacency_matrix();
    CHECK(a == a.transpose());
    CHECK(a.diagonal().isZero());
    CHECK(a.sum() == doctest::Approx(2.0 * static_cast<double>(g.edge_count())));
  }
}

TEST_CASE("induced subgraph on all vertices is the graph itself") {
  for (const Graph& g : sample_graphs()) {
    const InducedSubgraph sub = induced_subgraph(g, VertexSet::all(g.size()));
    CHECK(sub.graph == g);
    for (Vertex v = 0; v < g.size(); ++v) CHECK(sub.original[v] == v);
  }
  CHECK_THROWS_AS(induced_subgraph(generators::path(3), VertexSet{}), InputError);
}

TEST_CASE("induced subgraph relabels in order") {
  const InducedSubgraph sub = induced_subgraph(generators::path(6), VertexSet{1, 2, 4, 5});
  CHECK(sub.original == std::vector<Vertex>{1, 2, 4, 5});
  CHECK(sub.graph.edges() == std::vector<Edge>{{0, 1}, {2, 3}});
}

TEST_CASE("connected components partition the set") {
  Rng rng(17);
  for (const Graph& g : sample_graphs()) {
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<Vertex> members;
      for (Vertex v = 0; v < g.size(); ++v)
        if (rng.bernoulli(0.6)) members.push_back(v);
      const VertexSet s(members);
      const auto comps = connected_components(g, s);
      std::vector<Vertex> all;
      for (const VertexSet& c : comps) all.insert(all.end(), c.begin(), c.end());
      std::sort(all.begin(), all.end());
      CHECK(all == s.members());
      for (std::size_t k = 1; k < comps.size(); ++k) CHECK(comps[k - 1][0] < comps[k][0]);
      // No edge joins two different components.
      for (std::size_t a = 0; a < comps.size(); ++a)
        for (std::size_t b = a + 1; b < comps.size(); ++b)
          for (Vertex u : comps[a])
            for (Vertex v : comps[b]) CHECK_FALSE(g.adjacent(u, v));
    }
  }
}

TEST_CASE("clique unions") {
  const Graph g = generators::disjoint_union(generators::clique(3), generators::clique(2));
  const CliqueUnionCheck c = is_disjoint_clique_union(g, VertexSet::all(5));
  CHECK(c.is_clique_union);
  CHECK(c.clique_sizes == std::vector<std::size_t>{2, 3});
  CHECK_FALSE(is_disjoint_clique_union(generators::path(3), VertexSet::all(3)).is_clique_union);
  CHECK(is_disjoint_clique_union(generators::path(5), VertexSet{0, 2, 4}).clique_sizes ==
        std::vector<std::size_t>{1, 1, 1});
}

TEST_CASE("forbidden subgraph witnesses") {
  const auto p = forbidden_subgraph_check(generators::path(4));
  REQUIRE(p.p4);
  CHECK(induces(generators::path(4), {(*p.p4)[0], (*p.p4)[1], (*p.p4)[2], (*p.p4)[3]}, {{0, 1}, {1, 2}, {2, 3}}));
  CHECK_FALSE(p.c4);
  CHECK_FALSE(p.claw);
  const Graph c4 = generators::cycle(4);
  const auto c = forbidden_subgraph_check(c4);
  REQUIRE(c.c4);
  CHECK(induces(c4, {(*c.c4)[0], (*c.c4)[1], (*c.c4)[2], (*c.c4)[3]}, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}));
  const auto s = forbidden_subgraph_check(generators::star(3));
  REQUIRE(s.claw);
  CHECK((*s.claw)[0] == 3);
  CHECK_FALSE(forbidden_subgraph_check(generators::clique(6)).any());
  CHECK_THROWS_AS(forbidden_subgraph_check(generators::path(70)), InputError);
}

TEST_CASE("clique unions contain no forbidden induced subgraph") {
  Rng rng(3);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Graph g = generators::erdos_renyi(9, 0.5, seed);
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<Vertex> m;
      for (Vertex v = 0; v < g.size(); ++v)
        if (rng.bernoulli(0.5)) m.push_back(v);
      if (m.empty()) continue;
      const VertexSet s(m);
      if (!is_disjoint_clique_union(g, s).is_clique_union) continue;
      CHECK_FALSE(forbidden_subgraph_check(induced_subgraph(g, s).graph).any());
    }
  }
}

TEST_CASE("Erdos-Renyi edge count concentrates") {
  const std::size_t n = 30;
  const double p = 0.3;
  const double pairs = static_cast<double>(n * (n - 1) / 2);
  const int samples = 200;
  double mean = 0.0;
  for (int s = 0; s < samples; ++s) mean += static_cast<double>(generators::erdos_renyi(n, p, s).edge_count());
  mean /= samples;
  const double sd_of_mean = std::sqrt(pairs * p * (1 - p) / samples);
  CHECK(std::abs(mean - p * pairs) < 5.0 * sd_of_mean);
}

TEST_CASE("rng helpers") {
  Rng a(5), b(5);
  for (int k = 0; k < 100; ++k) CHECK(a.next() == b.next());
  Rng r(1);
  std::vector<int> counts(6, 0);
  for (int k = 0; k < 60000; ++k) ++counts[r.below(6)];
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
  for (int k = 0; k < 1000; ++k) {
    const double u = r.uniform();
    CHECK((u >= 0.0 && u < 1.0));
  }
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
}

TEST_CASE("random regular graphs at every density") {
  for (std::size_t d : {0u, 1u, 5u, 20u, 40u, 49u, 50u, 80u, 99u}) {
    const Graph g = generators::random_regular(100, d, 7);
    CHECK(g.edge_count() == 50 * d);
    for (Vertex v = 0; v < 100; ++v) CHECK(g.degree(v) == d);
  }
  CHECK(generators::random_regular(100, 40, 3) == generators::random_regular(100, 40, 3));
  CHECK_FALSE(generators::random_regular(100, 40, 3) == generators::random_regular(100, 40, 4));
}

TEST_CASE("a triangle with an isolated vertex is not an induced P4") {
  const Graph g(4, {{0, 1}, {1, 2}, {0, 2}});
  CHECK_FALSE(forbidden_subgraph_check(g).any());
}

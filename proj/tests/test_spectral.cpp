#include <doctest.h>

#include <cmath>

#include "brdlab/constructions.hpp"
#include "brdlab/errors.hpp"
#include "brdlab/rng.hpp"
#include "brdlab/spectral.hpp"
#include "oracles.hpp"

using namespace brdlab;

namespace {

oracle::Matrix dense(const Graph& g) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (const Edge& x : g.edges()) e.emplace_back(x.u, x.v);
  return oracle::adjacency(g.size(), e);
}

}  // namespace

TEST_CASE("path spectra match the cosine closed form") {
  for (std::size_t k = 1; k <= 50; ++k) {
    const auto got = eigenvalues_sym(generators::path(k)).eigenvalues;
    const auto want = oracle::path_eigenvalues_closed_form(k);
    REQUIRE(got.size() == k);
    for (std::size_t j = 0; j < k; ++j) CHECK(std::abs(got[j] - want[j]) < 1e-9);
    CHECK(std::abs(path_lambda_min_closed_form(k) - want.front()) < 1e-12);
  }
  CHECK(path_lambda_min_closed_form(1) == 0.0);
  CHECK_THROWS_AS(path_lambda_min_closed_form(0), InputError);
}

TEST_CASE("spectra agree with an independent Jacobi solver") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = generators::erdos_renyi(25, 0.3, seed);
    const auto got = eigenvalues_sym(g).eigenvalues;
    const auto want = oracle::jacobi_eigenvalues(dense(g));
    for (std::size_t j = 0; j < got.size(); ++j) CHECK(std::abs(got[j] - want[j]) < 1e-9);
  }
}

TEST_CASE("complete bipartite smallest eigenvalue is -sqrt(ml)") {
  for (std::size_t m = 1; m <= 20; ++m)
    for (std::size_t l = 1; l <= 20; ++l)
      CHECK(std::abs(lambda_min(generators::complete_bipartite(m, l)) + std::sqrt(double(m * l))) < 1e-9);
}

TEST_CASE("cospectral pair") {
  const auto [a, b] = cospectral_pair();
  CHECK_FALSE(a == b);
  CHECK(is_cospectral(a, b, 1e-9));
  CHECK(std::abs(lambda_min(a) + 2.0) < 1e-9);
  CHECK(std::abs(lambda_min(b) + 2.0) < 1e-9);
  CHECK_FALSE(is_cospectral(generators::path(5), a, 1e-9));
}

TEST_CASE("trace identities") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = generators::barabasi_albert(30, 2, seed);
    const auto ev = eigenvalues_sym(g).eigenvalues;
    double sum = 0.0, sq = 0.0;
    for (double v : ev) {
      sum += v;
      sq += v * v;
    }
    CHECK(std::abs(sum) < 1e-8 * 30);
    CHECK(std::abs(sq - 2.0 * static_cast<double>(g.edge_count())) < 1e-8 * 30);
  }
}

TEST_CASE("interlacing for induced subgraphs") {
  Rng rng(8);
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const Graph g = generators::erdos_renyi(16, 0.4, seed);
    const double lg = lambda_min(g);
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<Vertex> m;
      for (Vertex v = 0; v < g.size(); ++v)
        if (rng.bernoulli(0.5)) m.push_back(v);
      if (m.empty()) continue;
      CHECK(lg <= lambda_min(induced_subgraph(g, VertexSet(m)).graph) + 1e-9);
    }
  }
}

TEST_CASE("stability thresholds") {
  CHECK(stability_threshold(generators::path(5), VertexSet{0, 2, 4}) == kInfinity);
  CHECK(std::abs(stability_threshold(generators::path(2), VertexSet{0, 1}) - 1.0) < 1e-12);
  CHECK(std::abs(stability_threshold(generators::star(4), VertexSet::all(5)) - 0.5) < 1e-12);
  CHECK_THROWS_AS(stability_threshold(generators::path(3), VertexSet{}), InputError);
  const Spectrum empty = eigenvalues_sym(Graph(3, {}));
  CHECK(empty.min() == 0.0);
  CHECK(empty.max() == 0.0);
}

#include "brdlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "brdlab/errors.hpp"

namespace brdlab {

std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end());
  return out;
}

Spectrum eigenvalues_sym(const Graph& g) {
  Spectrum s;
  s.source_n = g.size();
  if (g.edge_count() == 0) {
    s.eigenvalues.assign(g.size(), 0.0);
  } else {
    s.eigenvalues = symmetric_eigenvalues(g.adjacency_matrix());
  }
  return s;
}

double lambda_min(const Graph& g) { return eigenvalues_sym(g).min(); }

double path_lambda_min_closed_form(std::size_t k) {
  if (k == 0) throw InputError("block length must be at least 1");
  if (k == 1) return 0.0;
  const double kd = static_cast<double>(k);
  return 2.0 * std::cos(kd * std::numbers::pi / (kd + 1.0));
}

double stability_threshold(const Graph& g, const VertexSet& s) {
  if (s.empty()) throw InputError("stability threshold of an empty set");
  const InducedSubgraph sub = induced_subgraph(g, s);
  if (sub.graph.edge_count() == 0) return kInfinity;
  return 1.0 / std::abs(lambda_min(sub.graph));
}

bool is_cospectral(const Graph& g, const Graph& h, double tol) {
  if (g.size() != h.size()) return false;
  const Spectrum a = eigenvalues_sym(g);
  const Spectrum b = eigenvalues_sym(h);
  for (std::size_t i = 0; i < a.eigenvalues.size(); ++i)
    if (std::abs(a.eigenvalues[i] - b.eigenvalues[i]) > tol) return false;
  return true;
}

}  // namespace brdlab

#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "brdlab/graph.hpp"

namespace brdlab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Adjacency spectrum, ascending.
struct Spectrum {
  std::vector<double> eigenvalues;
  std::size_t source_n = 0;

  double min() const { return eigenvalues.front(); }
  double max() const { return eigenvalues.back(); }
};

/// Eigenvalues of a dense symmetric matrix, ascending.
std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& m);

Spectrum eigenvalues_sym(const Graph& g);
double lambda_min(const Graph& g);

/// Smallest eigenvalue of the k-vertex path, 2 cos(k pi / (k + 1)).
/// Returns exactly 0 for k = 1.
double path_lambda_min_closed_form(std::size_t k);

/// 1 / |lambda_min| of the subgraph induced by s, or kInfinity when that
/// subgraph has no edges. Throws InputError for empty s.
double stability_threshold(const Graph& g, const VertexSet& s);

bool is_cospectral(const Graph& g, const Graph& h, double tol);

}  // namespace brdlab

#pragma once

// Reference implementations written directly from the definitions, sharing
// no code with the library: dense matrices, cyclic Jacobi for spectra and
// Gaussian elimination for linear solves.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline Matrix adjacency(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  Matrix a(n, std::vector<double>(n, 0.0));
  for (auto [u, v] : edges) a[u][v] = a[v][u] = 1.0;
  return a;
}

inline Matrix path_adjacency(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return adjacency(n, e);
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
inline std::vector<double> jacobi_eigenvalues(Matrix a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

inline std::vector<double> path_eigenvalues_closed_form(std::size_t k) {
  std::vector<double> ev;
  for (std::size_t j = 1; j <= k; ++j)
    ev.push_back(2.0 * std::cos(static_cast<double>(j) * std::numbers::pi / static_cast<double>(k + 1)));
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Solves m x = b by Gaussian elimination with partial pivoting. Returns an
/// empty vector when a pivot is (numerically) zero.
inline std::vector<double> solve(Matrix m, std::vector<double> b) {
  const std::size_t n = m.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) < 1e-13) return {};
    std::swap(m[piv], m[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= m[i][c] * x[c];
    x[i] = s / m[i][i];
  }
  return x;
}

/// Stable-equilibrium test from the definitions for the active set given by
/// the bit mask: interior solve positive, every outside agent strictly
/// inactive, and delta below 1/|lambda_min| of the induced block.
inline bool is_stable_set(const Matrix& g, double delta, std::uint64_t mask) {
  const std::size_t n = g.size();
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < n; ++i)
    if (mask >> i & 1U) s.push_back(i);
  if (s.empty()) return false;
  Matrix gs(s.size(), std::vector<double>(s.size()));
  Matrix b(s.size(), std::vector<double>(s.size()));
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t c = 0; c < s.size(); ++c) {
      gs[a][c] = g[s[a]][s[c]];
      b[a][c] = (a == c ? 1.0 : 0.0) + delta * gs[a][c];
    }
  const double lmin = jacobi_eigenvalues(gs).front();
  if (lmin < 0 && !(delta * std::abs(lmin) < 1.0 - 1e-9)) return false;
  const std::vector<double> xs = solve(b, std::vector<double>(s.size(), 1.0));
  if (xs.empty()) return false;
  for (double v : xs)
    if (!(v > 1e-9)) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask >> i & 1U) continue;
    double sum = 0.0;
    for (std::size_t a = 0; a < s.size(); ++a) sum += g[i][s[a]] * xs[a];
    if (!(delta * sum > 1.0 + 1e-9)) return false;
  }
  return true;
}

/// Every stable active set of g as a sorted list of bit masks.
inline std::vector<std::uint64_t> stable_sets(const Matrix& g, double delta) {
  std::vector<std::uint64_t> out;
  const std::uint64_t limit = std::uint64_t{1} << g.size();
  for (std::uint64_t mask = 1; mask < limit; ++mask)
    if (is_stable_set(g, delta, mask)) out.push_back(mask);
  return out;
}

inline double best_response(const Matrix& g, double delta, const std::vector<double>& x, std::size_t i) {
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) s += g[i][j] * x[j];
  return std::max(0.0, 1.0 - delta * s);
}

inline double potential(const Matrix& g, double delta, const std::vector<double>& x) {
  double v = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    v += x[i] - 0.5 * x[i] * x[i];
    for (std::size_t j = 0; j < x.size(); ++j) v -= 0.5 * delta * g[i][j] * x[i] * x[j];
  }
  return v;
}

/// Agent-0 value after its (tau+1)-th update on the two-vertex path under
/// strict alternation 0, 1, 0, 1, ... starting from (x0, y0).
inline double pair_closed_form(double delta, double y0, std::size_t tau) {
  const double x1 = 1.0 - delta * y0;
  const double d2t = std::pow(delta, 2.0 * static_cast<double>(tau));
  return (1.0 - d2t) / (1.0 + delta) + d2t * x1;
}

}  // namespace oracle

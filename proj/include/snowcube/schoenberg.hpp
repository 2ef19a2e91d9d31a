#pragma once

// Negative-type test and the square-root embedding into Euclidean space.
// With base point x_0, the Gram-style matrix
//   Q[i][j] = (d(x_0,x_i) + d(x_0,x_j) - d(x_i,x_j)) / 2       (i,j >= 1)
// is positive semidefinite exactly when the metric is of negative type,
// and a factorization of Q gives points whose squared Euclidean distances
// reproduce d.

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "snowcube/metric.hpp"

namespace snowcube {

struct NegativeTypeResult {
  bool is_negative_type = false;
  double min_eigenvalue = 0.0;
};

namespace detail {
inline Eigen::MatrixXd schoenberg_matrix(const FiniteMetric& m) {
  const int n = m.n();
  Eigen::MatrixXd q(n - 1, n - 1);
  for (int i = 1; i < n; ++i)
    for (int j = 1; j < n; ++j)
      q(i - 1, j - 1) = 0.5 * (m(0, i) + m(0, j) - m(i, j));
  return q;
}
}  // namespace detail

inline NegativeTypeResult negative_type_test(const FiniteMetric& m, double tol = 1e-9) {
  NegativeTypeResult r;
  if (m.n() < 2) {
    r.is_negative_type = true;
    return r;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(detail::schoenberg_matrix(m),
                                                    Eigen::EigenvaluesOnly);
  r.min_eigenvalue = es.eigenvalues().minCoeff();
  r.is_negative_type = r.min_eigenvalue >= -tol;
  return r;
}

// Points v_0..v_{n-1} in R^{n-1} with |v_i - v_j|_2^2 = d(i,j); requires the
// metric to be of negative type. Eigenvalues in [-tol, 0] are clamped to 0.
inline std::vector<std::vector<double>> hilbert_sqrt_embed(const FiniteMetric& m,
                                                           double tol = 1e-9) {
  const int n = m.n();
  if (n == 1) return {std::vector<double>{}};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(detail::schoenberg_matrix(m));
  const auto& vals = es.eigenvalues();
  if (vals.minCoeff() < -tol)
    throw std::invalid_argument("hilbert_sqrt_embed: metric is not of negative type");
  Eigen::VectorXd roots = vals.cwiseMax(0.0).cwiseSqrt();
  // rows of V * sqrt(D); the base point sits at the origin
  Eigen::MatrixXd pts = es.eigenvectors() * roots.asDiagonal();
  std::vector<std::vector<double>> out(n, std::vector<double>(n - 1, 0.0));
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < n - 1; ++j) out[i][j] = pts(i - 1, j);
  return out;
}

inline double euclidean_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("euclidean_distance: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace snowcube

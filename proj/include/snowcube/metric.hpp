#pragma once

// Finite metric spaces as validated symmetric matrices, snowflaking,
// the concave-power quasi-distance, and the text matrix format.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "snowcube/quotient.hpp"

namespace snowcube {

inline constexpr double kDefaultMetricTol = 1e-9;

class FiniteMetric {
 public:
  FiniteMetric() = default;

  FiniteMetric(int n, std::vector<double> flat, std::vector<std::string> labels = {},
               double tol = kDefaultMetricTol)
      : n_(n), d_(std::move(flat)), labels_(std::move(labels)) {
    if (n_ < 1) throw std::invalid_argument("FiniteMetric: need at least one point");
    if (d_.size() != static_cast<std::size_t>(n_) * n_)
      throw std::invalid_argument("FiniteMetric: matrix size mismatch");
    if (!labels_.empty() && labels_.size() != static_cast<std::size_t>(n_))
      throw std::invalid_argument("FiniteMetric: label count mismatch");
    validate(tol);
  }

  static FiniteMetric from_rows(const std::vector<std::vector<double>>& rows,
                                std::vector<std::string> labels = {},
                                double tol = kDefaultMetricTol) {
    const int n = static_cast<int>(rows.size());
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != n)
        throw std::invalid_argument("FiniteMetric: ragged matrix");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return FiniteMetric(n, std::move(flat), std::move(labels), tol);
  }

  int n() const { return n_; }
  double operator()(int i, int j) const { return d_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::vector<std::string>& labels() const { return labels_; }

  double max_distance() const {
    double m = 0.0;
    for (double v : d_) m = std::max(m, v);
    return m;
  }

  std::vector<double> distinct_distances() const {
    std::vector<double> vals;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) vals.push_back((*this)(i, j));
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    return vals;
  }

 private:
  void validate(double tol) const {
    for (int i = 0; i < n_; ++i) {
      if ((*this)(i, i) != 0.0)
        throw std::invalid_argument("FiniteMetric: nonzero diagonal");
      for (int j = 0; j < n_; ++j) {
        const double v = (*this)(i, j);
        if (!std::isfinite(v) || v < 0.0)
          throw std::invalid_argument("FiniteMetric: entries must be finite and nonnegative");
        if (v != (*this)(j, i))
          throw std::invalid_argument("FiniteMetric: matrix not symmetric");
        if (i != j && v <= 0.0)
          throw std::invalid_argument("FiniteMetric: distinct points at distance zero");
      }
    }
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int l = 0; l < n_; ++l)
          if ((*this)(i, j) > (*this)(i, l) + (*this)(l, j) + tol)
            throw std::invalid_argument("FiniteMetric: triangle inequality violated");
  }

  int n_ = 0;
  std::vector<double> d_;
  std::vector<std::string> labels_;
};

// Entrywise power with exponent in (0,1]; the result is revalidated rather
// than trusted to the concavity argument.
inline FiniteMetric snowflake(const FiniteMetric& m, double exponent,
                              double tol = kDefaultMetricTol) {
  if (exponent <= 0.0 || exponent > 1.0)
    throw std::invalid_argument("snowflake: exponent outside (0,1]");
  const int n = m.n();
  std::vector<double> flat(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      flat[static_cast<std::size_t>(i) * n + j] =
          (i == j) ? 0.0 : std::pow(m(i, j), exponent);
  return FiniteMetric(n, std::move(flat), m.labels(), tol);
}

struct QuasiDistance {
  double d_value = 0.0;     // sum_i |u_i - v_i|^{1-eps}; a metric
  double quasi_norm = 0.0;  // d_value^{1/(1-eps)}; the (1-eps) quasi-norm
};

inline QuasiDistance quasi_distance(std::span<const double> u, std::span<const double> v,
                                    double one_minus_eps) {
  if (u.size() != v.size()) throw std::invalid_argument("quasi_distance: length mismatch");
  if (one_minus_eps <= 0.0 || one_minus_eps > 1.0)
    throw std::invalid_argument("quasi_distance: exponent outside (0,1]");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    s += std::pow(std::abs(u[i] - v[i]), one_minus_eps);
  return {s, std::pow(s, 1.0 / one_minus_eps)};
}

// --- builders --------------------------------------------------------------

inline FiniteMetric hamming_cube_metric(int k, double tol = kDefaultMetricTol) {
  if (k < 1 || k > 12) throw std::invalid_argument("hamming_cube_metric: k outside 1..12");
  const int n = 1 << k;
  std::vector<double> flat(static_cast<std::size_t>(n) * n);
  std::vector<std::string> labels(n);
  for (int i = 0; i < n; ++i) {
    std::string lab(k, '0');
    for (int j = 0; j < k; ++j)
      if ((i >> j) & 1) lab[k - 1 - j] = '1';
    labels[i] = lab;
    for (int j = 0; j < n; ++j)
      flat[static_cast<std::size_t>(i) * n + j] =
          static_cast<double>(std::popcount(static_cast<std::uint32_t>(i ^ j)));
  }
  return FiniteMetric(n, std::move(flat), std::move(labels), tol);
}

inline FiniteMetric metric_from_quotient(const QuotientSpace& q,
                                         double tol = kDefaultMetricTol) {
  const auto& d = q.distances();
  const int n = q.orbit_count();
  std::vector<double> flat(static_cast<std::size_t>(n) * n);
  std::vector<std::string> labels(n);
  for (int a = 0; a < n; ++a) {
    std::string lab(q.k(), '0');
    for (int j = 0; j < q.k(); ++j)
      if ((q.reps[a] >> j) & 1) lab[q.k() - 1 - j] = '1';
    labels[a] = lab;
    for (int b = 0; b < n; ++b)
      flat[static_cast<std::size_t>(a) * n + b] = static_cast<double>(d[a][b]);
  }
  return FiniteMetric(n, std::move(flat), std::move(labels), tol);
}

// --- text matrix format ------------------------------------------------------
// first token: n; then n*n entries row by row. Writing uses %.17g, which
// round-trips doubles.

inline void write_metric(std::ostream& out, const FiniteMetric& m) {
  out << m.n() << "\n";
  char buf[40];
  for (int i = 0; i < m.n(); ++i) {
    for (int j = 0; j < m.n(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out << buf << (j + 1 == m.n() ? "" : " ");
    }
    out << "\n";
  }
}

inline FiniteMetric read_metric(std::istream& in, double tol = kDefaultMetricTol) {
  int n = 0;
  if (!(in >> n) || n < 1) throw std::runtime_error("read_metric: bad point count");
  std::vector<double> flat(static_cast<std::size_t>(n) * n);
  for (auto& v : flat)
    if (!(in >> v)) throw std::runtime_error("read_metric: truncated matrix");
  return FiniteMetric(n, std::move(flat), {}, tol);
}

inline FiniteMetric load_metric(const std::string& path, double tol = kDefaultMetricTol) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_metric: cannot open " + path);
  return read_metric(in, tol);
}

inline void save_metric(const std::string& path, const FiniteMetric& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_metric: cannot open " + path);
  write_metric(out, m);
}

}  // namespace snowcube

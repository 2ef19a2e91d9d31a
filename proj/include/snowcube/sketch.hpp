#pragma once

// Monte-Carlo harness for (s,D)-sketchability at a scale r: randomized
// s-bit labels from offset grid quantization of Gaussian projections, a
// calibrated Hamming-distance reconstruction rule, and empirical success
// probabilities taken as the minimum over scored pairs (the two infima of
// the definition). Pairs in the gap (r, Dr] are excluded from scoring.
//
// All randomness is counter-based, keyed by (seed, purpose, trial, bit):
// trials are independent, order-free, and reproducible bit-for-bit.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "snowcube/metric.hpp"
#include "snowcube/rng.hpp"
#include "snowcube/schoenberg.hpp"

namespace snowcube {

inline constexpr double kSketchSuccessThreshold = 3.0 / 5.0;

struct SketchScheme {
  int s = 0;          // label bits
  double r = 0.0;     // scale
  double D = 1.0;     // gap factor
  double w = 0.0;     // quantization window, 4r
  double tau = 0.0;   // decision threshold on the differing-bit fraction
  int dim = 0;        // ambient dimension of the hashed points
  std::uint64_t seed = 0;
  double rho_near = 0.0;  // calibrated per-bit differ rate at distance r
  double rho_far = 0.0;   // calibrated per-bit differ rate at distance D*r
  int calibration_trials = 0;
};

namespace detail {

inline constexpr std::uint64_t kSaltProjection = 0x50524f4a;  // streams for g vectors
inline constexpr std::uint64_t kSaltOffset = 0x4f464653;
inline constexpr std::uint64_t kSaltCalibration = 0x43414c42;

inline int grid_parity(double coordinate, double offset, double window) {
  return static_cast<int>(std::llround(std::floor((coordinate + offset) / window))) & 1;
}

// per-bit differ rate for a 1-d pair at distance t, using dedicated streams
inline double calibrate_differ_rate(std::uint64_t seed, double t, double w, int s,
                                    int trials) {
  std::int64_t differ = 0;
  for (int ct = 0; ct < trials; ++ct)
    for (int i = 0; i < s; ++i) {
      CounterRng g(stream_key(seed, kSaltCalibration, static_cast<std::uint64_t>(ct),
                              static_cast<std::uint64_t>(i)));
      const double proj = g.next_gaussian();
      const double off = g.next_double() * w;
      if (grid_parity(0.0, off, w) != grid_parity(t * proj, off, w)) ++differ;
    }
  return static_cast<double>(differ) / (static_cast<double>(trials) * s);
}

}  // namespace detail

inline SketchScheme build_euclidean_sketch(const std::vector<std::vector<double>>& points,
                                           double r, double D, int s, std::uint64_t seed,
                                           int calibration_trials = 256) {
  if (points.empty()) throw std::invalid_argument("build_euclidean_sketch: no points");
  if (r <= 0.0) throw std::invalid_argument("build_euclidean_sketch: scale must be positive");
  if (D < 1.0) throw std::invalid_argument("build_euclidean_sketch: gap factor must be >= 1");
  if (s < 1) throw std::invalid_argument("build_euclidean_sketch: need at least one bit");
  if (calibration_trials < 1)
    throw std::invalid_argument("build_euclidean_sketch: need calibration trials");
  const std::size_t dim = points.front().size();
  for (const auto& p : points)
    if (p.size() != dim)
      throw std::invalid_argument("build_euclidean_sketch: inconsistent dimensions");

  SketchScheme sc;
  sc.s = s;
  sc.r = r;
  sc.D = D;
  sc.w = 4.0 * r;
  sc.dim = static_cast<int>(dim);
  sc.seed = seed;
  sc.calibration_trials = calibration_trials;
  sc.rho_near = detail::calibrate_differ_rate(seed, r, sc.w, s, calibration_trials);
  sc.rho_far = detail::calibrate_differ_rate(seed, D * r, sc.w, s, calibration_trials);
  sc.tau = 0.5 * (sc.rho_near + sc.rho_far);
  return sc;
}

using SketchLabel = std::vector<std::uint64_t>;

// label of one point under the trial's fresh randomness
inline SketchLabel sketch_point(const SketchScheme& sc, std::uint64_t trial,
                                const std::vector<double>& point) {
  if (static_cast<int>(point.size()) != sc.dim)
    throw std::invalid_argument("sketch_point: dimension mismatch");
  SketchLabel label((sc.s + 63) / 64, 0);
  for (int i = 0; i < sc.s; ++i) {
    CounterRng g(stream_key(sc.seed, detail::kSaltProjection, trial,
                            static_cast<std::uint64_t>(i)));
    double dot = 0.0;
    for (int d = 0; d < sc.dim; ++d) dot += g.next_gaussian() * point[d];
    CounterRng o(stream_key(sc.seed, detail::kSaltOffset, trial,
                            static_cast<std::uint64_t>(i)));
    const double off = o.next_double() * sc.w;
    if (detail::grid_parity(dot, off, sc.w))
      label[i >> 6] |= std::uint64_t(1) << (i & 63);
  }
  return label;
}

namespace detail {

// one trial's labels for every point; the projection vector is drawn once
// per bit, so this matches sketch_point exactly while doing 1/n of the RNG work
inline void sketch_all_points(const SketchScheme& sc, std::uint64_t trial,
                              const std::vector<std::vector<double>>& points,
                              std::vector<SketchLabel>& out) {
  const int n = static_cast<int>(points.size());
  const std::size_t words = (sc.s + 63) / 64;
  out.resize(n);
  for (int p = 0; p < n; ++p) {
    out[p].assign(words, 0);
    if (static_cast<int>(points[p].size()) != sc.dim)
      throw std::invalid_argument("sketch: dimension mismatch");
  }
  std::vector<double> g(sc.dim);
  for (int i = 0; i < sc.s; ++i) {
    CounterRng grng(stream_key(sc.seed, kSaltProjection, trial,
                               static_cast<std::uint64_t>(i)));
    for (int d = 0; d < sc.dim; ++d) g[d] = grng.next_gaussian();
    CounterRng orng(stream_key(sc.seed, kSaltOffset, trial,
                               static_cast<std::uint64_t>(i)));
    const double off = orng.next_double() * sc.w;
    for (int p = 0; p < n; ++p) {
      double dot = 0.0;
      const auto& pt = points[p];
      for (int d = 0; d < sc.dim; ++d) dot += g[d] * pt[d];
      if (grid_parity(dot, off, sc.w))
        out[p][i >> 6] |= std::uint64_t(1) << (i & 63);
    }
  }
}

}  // namespace detail

inline int label_hamming(const SketchLabel& a, const SketchLabel& b) {
  int h = 0;
  for (std::size_t i = 0; i < a.size(); ++i) h += std::popcount(a[i] ^ b[i]);
  return h;
}

// reconstruction rule: 0 = "small" iff differing fraction is below tau
inline int reconstruct(const SketchScheme& sc, const SketchLabel& a, const SketchLabel& b) {
  return label_hamming(a, b) <= sc.tau * sc.s ? 0 : 1;
}

struct SketchReport {
  double near_success = 1.0;  // min over near pairs of empirical P[R = 0]
  double far_success = 1.0;   // min over far pairs of empirical P[R = 1]
  double near_std_error = 0.0;
  double far_std_error = 0.0;
  long trials = 0;
  long near_pairs = 0;
  long far_pairs = 0;
  long gap_pairs = 0;
  bool near_vacuous = false;  // no pair fell in the class; success is 1 by convention
  bool far_vacuous = false;
  SketchScheme scheme;
};

// Kernel classification against (near_thresh, far_thresh); points are what
// gets hashed. Scored pairs are unordered pairs of distinct points.
inline SketchReport simulate(const SketchScheme& sc,
                             const std::vector<std::vector<double>>& points,
                             const std::vector<std::vector<double>>& kernel,
                             double near_thresh, double far_thresh, long trials) {
  const int n = static_cast<int>(points.size());
  if (static_cast<int>(kernel.size()) != n)
    throw std::invalid_argument("simulate: kernel size mismatch");
  if (trials < 100) throw std::invalid_argument("simulate: need at least 100 trials");

  struct ScoredPair {
    int i, j;
    bool near;
    long success = 0;
  };
  std::vector<ScoredPair> pairs;
  long gap = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double kv = kernel[i][j];
      if (kv <= near_thresh) pairs.push_back({i, j, true, 0});
      else if (kv > far_thresh) pairs.push_back({i, j, false, 0});
      else ++gap;
    }

  std::vector<SketchLabel> labels(n);
  for (long t = 0; t < trials; ++t) {
    detail::sketch_all_points(sc, static_cast<std::uint64_t>(t), points, labels);
    for (auto& pr : pairs) {
      const int out = reconstruct(sc, labels[pr.i], labels[pr.j]);
      if (out == (pr.near ? 0 : 1)) ++pr.success;
    }
  }

  SketchReport rep;
  rep.scheme = sc;
  rep.trials = trials;
  rep.gap_pairs = gap;
  double near_min = 2.0, far_min = 2.0;
  for (const auto& pr : pairs) {
    const double rate = static_cast<double>(pr.success) / static_cast<double>(trials);
    if (pr.near) {
      ++rep.near_pairs;
      near_min = std::min(near_min, rate);
    } else {
      ++rep.far_pairs;
      far_min = std::min(far_min, rate);
    }
  }
  if (rep.near_pairs == 0) {
    rep.near_vacuous = true;
  } else {
    rep.near_success = near_min;
    rep.near_std_error =
        std::sqrt(near_min * (1.0 - near_min) / static_cast<double>(trials));
  }
  if (rep.far_pairs == 0) {
    rep.far_vacuous = true;
  } else {
    rep.far_success = far_min;
    rep.far_std_error = std::sqrt(far_min * (1.0 - far_min) / static_cast<double>(trials));
  }
  return rep;
}

// Euclidean point set at the scheme's own scale and gap.
inline SketchReport simulate_points(const SketchScheme& sc,
                                    const std::vector<std::vector<double>>& points,
                                    long trials) {
  const int n = static_cast<int>(points.size());
  std::vector<std::vector<double>> kernel(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      kernel[i][j] = euclidean_distance(points[i], points[j]);
      kernel[j][i] = kernel[i][j];
    }
  return simulate(sc, points, kernel, sc.r, sc.D * sc.r, trials);
}

// Negative type -> sqrt embedding -> Euclidean sketch at scale sqrt(r) with
// gap sqrt(D); scored against the ORIGINAL metric's thresholds r and D*r.
inline SketchReport sketch_negative_type(const FiniteMetric& m, double r, double D, int s,
                                         std::uint64_t seed, long trials,
                                         double neg_type_tol = 1e-9) {
  if (r <= 0.0) throw std::invalid_argument("sketch_negative_type: scale must be positive");
  if (D < 1.0) throw std::invalid_argument("sketch_negative_type: gap must be >= 1");
  const auto nt = negative_type_test(m, neg_type_tol);
  if (!nt.is_negative_type)
    throw std::invalid_argument("sketch_negative_type: metric is not of negative type");
  const auto points = hilbert_sqrt_embed(m, neg_type_tol);
  SketchScheme sc = build_euclidean_sketch(points, std::sqrt(r), std::sqrt(D), s, seed);
  const int n = m.n();
  std::vector<std::vector<double>> kernel(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) kernel[i][j] = m(i, j);
  return simulate(sc, points, kernel, r, D * r, trials);
}

// empirical per-bit differ rate at Euclidean distance t (diagnostics/tests)
inline double estimate_bit_differ_rate(const SketchScheme& sc, double t, int trials) {
  return detail::calibrate_differ_rate(sc.seed ^ 0x445246ull, t, sc.w, sc.s, trials);
}

}  // namespace snowcube

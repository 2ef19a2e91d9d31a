#pragma once

// Exact L1 distortion through the cut cone, optimal L1-valued Poincare
// constants by cut enumeration, and the certified distortion lower bound
// obtained by combining the two with a snowflaked metric.
//
// Everything here reduces to finite problems: an L1 embedding of n points
// is a nonnegative combination of the 2^{n-1}-1 canonical cuts, so both the
// distortion LP and the Poincare maximization are solved exactly.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "snowcube/cuts.hpp"
#include "snowcube/metric.hpp"
#include "snowcube/quotient.hpp"
#include "snowcube/simplex.hpp"

namespace snowcube {

struct PoincareForm {
  int n = 0;
  std::vector<std::vector<double>> w1, w2;  // symmetric pair weights
  double c_opt = 0.0;
  CutMask witness_cut = 0;
  bool unbounded = false;  // some cut has zero w2-mass but positive w1-mass
};

enum class BoundKind { exact, lower };

struct DistortionBound {
  double value = 1.0;
  BoundKind kind = BoundKind::exact;
  double epsilon = 0.0;  // snowflake parameter the bound refers to
  std::optional<CutCombination> cut_witness;    // kind == exact
  std::optional<PoincareForm> poincare_witness; // kind == lower
  double raw_ratio = 0.0;       // lower bound before clamping at 1
  bool rational_verified = false;
  std::string exact_value;      // rational string when verified, e.g. "4/3"
};

// --- exact c1 via the cut-cone LP -------------------------------------------

enum class RationalVerify { automatic, on, off };

struct ExactC1Options {
  int max_points = 16;
  RationalVerify rational = RationalVerify::automatic;
  int rational_auto_max_points = 10;
  double tol = 1e-9;
};

// min alpha s.t. exists lambda >= 0 with d <= sum lambda_S delta_S <= alpha d
inline DistortionBound exact_c1(const FiniteMetric& m, const ExactC1Options& opt = {}) {
  const int n = m.n();
  if (n > opt.max_points)
    throw std::invalid_argument("exact_c1: point count exceeds cap (" +
                                std::to_string(opt.max_points) + ")");
  if (n == 1) {
    DistortionBound b;
    b.cut_witness = CutCombination{1, {}};
    return b;
  }

  std::vector<CutMask> cuts;
  cuts.reserve(canonical_cut_count(n));
  for_each_canonical_cut(n, [&](CutMask s) { cuts.push_back(s); });
  const int ncuts = static_cast<int>(cuts.size());
  const int alpha_var = ncuts;

  lp::Problem p;
  p.nvars = ncuts + 1;
  p.c.assign(p.nvars, 0.0);
  p.c[alpha_var] = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      std::vector<double> lower(p.nvars, 0.0), upper(p.nvars, 0.0);
      for (int s = 0; s < ncuts; ++s)
        if (cut_separates(cuts[s], i, j)) {
          lower[s] = 1.0;
          upper[s] = 1.0;
        }
      upper[alpha_var] = -m(i, j);
      p.rows.push_back({std::move(lower), lp::Rel::ge, m(i, j)});
      p.rows.push_back({std::move(upper), lp::Rel::le, 0.0});
    }

  lp::Solution sol = lp::solve(p);
  if (sol.status != lp::Status::optimal)
    throw std::runtime_error("exact_c1: LP did not reach an optimum (solver bug?)");

  DistortionBound b;
  b.kind = BoundKind::exact;
  b.value = sol.value;

  const bool do_rational =
      opt.rational == RationalVerify::on ||
      (opt.rational == RationalVerify::automatic && n <= opt.rational_auto_max_points);
  std::vector<double> lam(sol.x.begin(), sol.x.begin() + ncuts);
  if (do_rational) {
    lp::RationalResult rr = lp::rational_verify(p, sol);
    if (!rr.ok)
      throw std::runtime_error("exact_c1: exact rational verification failed");
    b.rational_verified = true;
    b.exact_value = rr.value.str();
    b.value = lp::to_double(rr.value);
    for (int s = 0; s < ncuts; ++s) lam[s] = lp::to_double(rr.x[s]);
  }

  CutCombination cc;
  cc.n = n;
  for (int s = 0; s < ncuts; ++s)
    if (lam[s] > 0.0) cc.weights.emplace_back(cuts[s], lam[s]);
  b.cut_witness = std::move(cc);
  return b;
}

// max entrywise violation of d <= induced <= value*d; for testing certificates
struct WitnessCheck {
  double max_lower_violation = 0.0;  // d - induced
  double max_upper_violation = 0.0;  // induced - value*d
};

inline WitnessCheck check_exact_witness(const FiniteMetric& m, const DistortionBound& b) {
  if (!b.cut_witness) throw std::invalid_argument("check_exact_witness: no cut witness");
  WitnessCheck w;
  for (int i = 0; i < m.n(); ++i)
    for (int j = i + 1; j < m.n(); ++j) {
      const double ind = b.cut_witness->induced(i, j);
      w.max_lower_violation = std::max(w.max_lower_violation, m(i, j) - ind);
      w.max_upper_violation = std::max(w.max_upper_violation, ind - b.value * m(i, j));
    }
  return w;
}

// Best achievable embedding quality into the (1-eps) quasi-normed sequence
// space, given the L1 distortion of the (1-eps)-snowflake.
inline double alpha_from_c1(double c1, double eps) {
  if (c1 < 1.0) throw std::invalid_argument("alpha_from_c1: c1 must be >= 1");
  if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("alpha_from_c1: eps outside (0,1)");
  return std::pow(c1, 1.0 / (1.0 - eps));
}

// --- optimal Poincare constants ---------------------------------------------

namespace detail {

inline void check_pair_weights(const std::vector<std::vector<double>>& w, int n,
                               const char* who) {
  if (static_cast<int>(w.size()) != n)
    throw std::invalid_argument(std::string(who) + ": weight matrix size mismatch");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(w[i].size()) != n)
      throw std::invalid_argument(std::string(who) + ": ragged weight matrix");
    for (int j = 0; j < n; ++j) {
      if (!(w[i][j] >= 0.0))
        throw std::invalid_argument(std::string(who) + ": weights must be nonnegative");
      if (w[i][j] != w[j][i])
        throw std::invalid_argument(std::string(who) + ": weights must be symmetric");
    }
  }
}

// sum over pairs i<j separated by the cut
inline double cut_mass(const std::vector<std::vector<double>>& w, CutMask s, int n) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (cut_separates(s, i, j)) acc += w[i][j];
  return acc;
}

}  // namespace detail

struct PoincareOptions {
  int max_points = 20;
  double zero_mass_tol = 0.0;  // w2 cut mass of exactly zero counts as degenerate
};

// C_opt = max over canonical cuts of (w1 across) / (w2 across). Every map
// into L1 then satisfies sum w1 |f_i-f_j| <= C_opt sum w2 |f_i-f_j| because
// L1 metrics decompose into cuts and the ratio holds on each cut.
inline PoincareForm poincare_optimal_constant(const std::vector<std::vector<double>>& w1,
                                              const std::vector<std::vector<double>>& w2,
                                              const PoincareOptions& opt = {}) {
  const int n = static_cast<int>(w1.size());
  if (n > opt.max_points)
    throw std::invalid_argument("poincare_optimal_constant: point count exceeds cap (" +
                                std::to_string(opt.max_points) + ")");
  if (n < 2) throw std::invalid_argument("poincare_optimal_constant: need >= 2 points");
  detail::check_pair_weights(w1, n, "poincare_optimal_constant(w1)");
  detail::check_pair_weights(w2, n, "poincare_optimal_constant(w2)");

  PoincareForm form;
  form.n = n;
  form.w1 = w1;
  form.w2 = w2;
  form.c_opt = 0.0;
  form.witness_cut = 0;

  for_each_canonical_cut(n, [&](CutMask s) {
    const double den = detail::cut_mass(w2, s, n);
    const double num = detail::cut_mass(w1, s, n);
    if (den <= opt.zero_mass_tol) {
      if (num > 0.0 && !form.unbounded) {
        form.unbounded = true;
        form.c_opt = std::numeric_limits<double>::infinity();
        form.witness_cut = s;
      }
      return;
    }
    if (form.unbounded) return;
    const double ratio = num / den;
    if (ratio > form.c_opt) {
      form.c_opt = ratio;
      form.witness_cut = s;
    }
  });
  return form;
}

struct LowerBoundOptions {
  PoincareOptions poincare;
};

// Certified lower bound on c1 of the (1-eps)-snowflake of m:
//   raw = (sum w1 d^{1-eps}) / (C_opt * sum w2 d^{1-eps}).
// Any embedding with d^{1-eps} <= |f-f| <= alpha d^{1-eps} forces
// alpha >= raw, and c1 >= 1 always, so the certified value is max(raw, 1).
inline DistortionBound distortion_lower_bound(const FiniteMetric& m,
                                              const std::vector<std::vector<double>>& w1,
                                              const std::vector<std::vector<double>>& w2,
                                              double eps,
                                              const LowerBoundOptions& opt = {}) {
  if (eps < 0.0 || eps >= 1.0)
    throw std::invalid_argument("distortion_lower_bound: eps outside [0,1)");
  const int n = m.n();
  PoincareForm form = poincare_optimal_constant(w1, w2, opt.poincare);
  if (form.unbounded)
    throw std::runtime_error(
        "distortion_lower_bound: degenerate pair weights (unbounded Poincare constant)");
  const double pw = 1.0 - eps;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double dp = (i == j) ? 0.0 : std::pow(m(i, j), pw);
      num += w1[i][j] * dp;
      den += w2[i][j] * dp;
    }
  if (den <= 0.0)
    throw std::runtime_error("distortion_lower_bound: w2 puts no mass on distinct pairs");

  DistortionBound b;
  b.kind = BoundKind::lower;
  b.epsilon = eps;
  b.raw_ratio = num / (form.c_opt * den);
  b.value = std::max(1.0, b.raw_ratio);
  b.poincare_witness = std::move(form);
  return b;
}

// --- quotient pair weights ---------------------------------------------------

// w1: product of orbit measures (uniform pairs pushed to the quotient)
inline std::vector<std::vector<double>> uniform_pair_weights(const QuotientSpace& q) {
  const int nq = q.orbit_count();
  std::vector<std::vector<double>> w(nq, std::vector<double>(nq, 0.0));
  for (int a = 0; a < nq; ++a)
    for (int b = 0; b < nq; ++b) w[a][b] = q.orbit_measure(a) * q.orbit_measure(b);
  return w;
}

// w2: hypercube edges pushed to orbit pairs, normalized over (x, j); entry
// (a,b) is the fraction of directed edges running between the two orbits.
inline std::vector<std::vector<double>> edge_pair_weights(const QuotientSpace& q) {
  const int nq = q.orbit_count();
  const int k = q.k();
  std::vector<std::vector<double>> w(nq, std::vector<double>(nq, 0.0));
  const double inc = 1.0 / (std::ldexp(1.0, k) * k);
  for (std::uint32_t x = 0; x < (std::uint32_t(1) << k); ++x) {
    const int a = q.orbit_of[x];
    for (int j = 0; j < k; ++j)
      w[a][q.orbit_of[x ^ (std::uint32_t(1) << j)]] += inc;
  }
  // exact symmetry by construction up to fp ordering; enforce it
  for (int a = 0; a < nq; ++a)
    for (int b = a + 1; b < nq; ++b) {
      const double v = 0.5 * (w[a][b] + w[b][a]);
      w[a][b] = v;
      w[b][a] = v;
    }
  return w;
}

// --- subset search and expansion ratios --------------------------------------

struct BestSubsetResult {
  std::uint32_t orbit_mask = 0;
  std::vector<int> orbits;
  double c_opt = std::numeric_limits<double>::infinity();
  double measure = 0.0;
};

struct BestSubsetOptions {
  int max_orbits = 14;
  PushforwardOptions pushforward;
};

namespace detail {

// Poincare constant on the sub-quotient selected by `mask`, with uniform
// pair weights against theta-pushforward weights; infinity when degenerate.
inline double subset_poincare_constant(const QuotientSpace& q,
                                       const OrbitPairMeasure& theta,
                                       std::uint32_t mask) {
  std::vector<int> pts;
  for (int a = 0; a < q.orbit_count(); ++a)
    if ((mask >> a) & 1u) pts.push_back(a);
  const int ny = static_cast<int>(pts.size());
  if (ny < 2) return std::numeric_limits<double>::infinity();

  double best = 0.0;
  bool unbounded = false;
  const CutMask full = (CutMask(1) << ny) - 1;
  for (CutMask s = 1; s < full && !unbounded; s += 2) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < ny; ++i)
      for (int j = i + 1; j < ny; ++j)
        if (cut_separates(s, i, j)) {
          num += q.orbit_measure(pts[i]) * q.orbit_measure(pts[j]);
          den += theta.weights[pts[i]][pts[j]];
        }
    if (den <= 0.0) {
      if (num > 0.0) unbounded = true;
      continue;
    }
    best = std::max(best, num / den);
  }
  return unbounded ? std::numeric_limits<double>::infinity() : best;
}

}  // namespace detail

// Exhaustive search over orbit subsets Y with measure in [lo, hi]; returns
// the subset minimizing the optimal Poincare constant for uniform pairs on
// Y against theta^p pairs on Y. Ties go to the smaller subset mask.
inline BestSubsetResult best_subset_poincare(const QuotientSpace& q, double p,
                                             double measure_lo, double measure_hi,
                                             const BestSubsetOptions& opt = {}) {
  const int nq = q.orbit_count();
  if (nq > opt.max_orbits)
    throw std::invalid_argument("best_subset_poincare: orbit count exceeds cap (" +
                                std::to_string(opt.max_orbits) + ")");
  if (!(measure_lo <= measure_hi))
    throw std::invalid_argument("best_subset_poincare: empty measure window");

  OrbitPairMeasure theta = pushforward_theta(q, p, opt.pushforward);
  if (!theta.exact)
    throw std::runtime_error("best_subset_poincare: exact pushforward unavailable at this size");

  BestSubsetResult best;
  for (std::uint32_t mask = 1; mask < (std::uint32_t(1) << nq); ++mask) {
    double mu = 0.0;
    for (int a = 0; a < nq; ++a)
      if ((mask >> a) & 1u) mu += q.orbit_measure(a);
    if (mu < measure_lo - 1e-12 || mu > measure_hi + 1e-12) continue;
    const double c = detail::subset_poincare_constant(q, theta, mask);
    if (c < best.c_opt) {
      best.c_opt = c;
      best.orbit_mask = mask;
      best.measure = mu;
    }
  }
  if (best.orbit_mask == 0)
    throw std::runtime_error("best_subset_poincare: no subset meets the measure window");
  for (int a = 0; a < nq; ++a)
    if ((best.orbit_mask >> a) & 1u) best.orbits.push_back(a);
  return best;
}

struct ExpansionRatio {
  double value = 0.0;       // 2 theta(Z x (X\Z)) / theta(X x X)
  double z_fraction = 0.0;  // mu(Z)/mu(X)
  bool ratio_condition_ok = false;  // z_fraction in [1/4, 2/3]
};

// Z and X are unions of orbits given as boolean masks over orbit indices.
inline ExpansionRatio expansion_ratio(const QuotientSpace& q, const OrbitPairMeasure& theta,
                                      const std::vector<char>& in_z,
                                      const std::vector<char>& in_x) {
  const int nq = q.orbit_count();
  if (static_cast<int>(in_z.size()) != nq || static_cast<int>(in_x.size()) != nq)
    throw std::invalid_argument("expansion_ratio: mask size != orbit count");
  for (int a = 0; a < nq; ++a)
    if (in_z[a] && !in_x[a])
      throw std::invalid_argument("expansion_ratio: Z must be a subset of X");
  double num = 0.0, den = 0.0, mu_z = 0.0, mu_x = 0.0;
  double num_c = 0.0, den_c = 0.0;
  for (int a = 0; a < nq; ++a) {
    if (in_x[a]) mu_x += q.orbit_measure(a);
    if (in_z[a]) mu_z += q.orbit_measure(a);
    if (!in_x[a]) continue;
    for (int b = 0; b < nq; ++b) {
      if (!in_x[b]) continue;
      detail::kahan_add(den, den_c, theta.weights[a][b]);
      if (in_z[a] && !in_z[b]) detail::kahan_add(num, num_c, theta.weights[a][b]);
    }
  }
  if (den <= 0.0) throw std::runtime_error("expansion_ratio: theta(X x X) is zero");
  ExpansionRatio r;
  r.value = 2.0 * num / den;
  r.z_fraction = mu_x > 0.0 ? mu_z / mu_x : 0.0;
  r.ratio_condition_ok = r.z_fraction >= 0.25 && r.z_fraction <= 2.0 / 3.0;
  return r;
}

inline ExpansionRatio expansion_ratio(const QuotientSpace& q, double p,
                                      const std::vector<char>& in_z,
                                      const std::vector<char>& in_x,
                                      const PushforwardOptions& opt = {}) {
  return expansion_ratio(q, pushforward_theta(q, p, opt), in_z, in_x);
}

}  // namespace snowcube

#pragma once

// Noise/influence analysis on the cube: the boundary measure of a set under
// the p-noise pair distribution, level-m influences and their variance
// bound, the transitive-invariance influence bound, Fourier tail masses,
// and the snowflaked pair/edge averages of a quotient.
//
// Identities with two independent evaluation routes (boundary measure,
// level influence) compute both and refuse to return on disagreement,
// since that can only mean an implementation bug.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "snowcube/cube.hpp"
#include "snowcube/group.hpp"
#include "snowcube/quotient.hpp"

namespace snowcube {

struct NoiseParam {
  double p = 0.0;
  bool derived = false;      // p = 1 / (beta * log2 k), clamped into [0,1]
  double beta = 0.0;
  int k = 0;
  bool hypothesis_ok = true;  // beta * log2 k > 2, the regime the bound needs

  static NoiseParam fixed(double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("NoiseParam: p outside [0,1]");
    NoiseParam n;
    n.p = p;
    return n;
  }

  static NoiseParam from_beta(double beta, int k) {
    if (beta <= 0.0 || beta >= 1.0)
      throw std::invalid_argument("NoiseParam: beta outside (0,1)");
    if (k < 2) throw std::invalid_argument("NoiseParam: k must be >= 2");
    NoiseParam n;
    n.derived = true;
    n.beta = beta;
    n.k = k;
    const double blk = beta * std::log2(static_cast<double>(k));
    n.hypothesis_ok = blk > 2.0;
    n.p = std::min(1.0, 1.0 / blk);
    return n;
  }
};

inline int default_level_cutoff(double beta, int k) {
  return static_cast<int>(std::ceil(beta * std::log2(static_cast<double>(k))));
}

namespace detail {

inline void check_indicator(const CubeFunction& f) {
  for (double v : f.values())
    if (v != 0.0 && v != 1.0)
      throw std::invalid_argument("expected a 0/1 indicator function");
}

}  // namespace detail

struct BoundaryMeasure {
  double fourier = 0.0;          // the returned value
  double direct = 0.0;           // double sum over pairs, when evaluated
  bool direct_evaluated = false;
  double route_gap = 0.0;        // |fourier - direct|
};

// theta^p(Omega x complement), evaluated through the Walsh spectrum of the
// +-1 indicator; for small k a direct double sum over pairs is run as well
// and the two values must agree.
inline BoundaryMeasure boundary_measure_detailed(const CubeFunction& indicator, double p,
                                                 double tol = 1e-9,
                                                 int direct_check_max_k = 14) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("boundary_measure: p outside [0,1]");
  detail::check_indicator(indicator);
  const int k = indicator.k();

  std::vector<double> sign(indicator.size());
  for (std::uint32_t x = 0; x < indicator.size(); ++x)
    sign[x] = 1.0 - 2.0 * indicator[x];
  Spectrum sp = wht_analysis(CubeFunction(k, std::move(sign)));

  const double rho = 1.0 - 2.0 * p;
  std::vector<double> rho_pow(k + 1);
  rho_pow[0] = 1.0;
  for (int l = 1; l <= k; ++l) rho_pow[l] = rho_pow[l - 1] * rho;

  BoundaryMeasure out;
  double comp = 0.0;
  for (std::uint32_t a = 0; a < sp.coeffs.size(); ++a) {
    const double c = sp.coeffs[a];
    detail::kahan_add(out.fourier, comp, (1.0 - rho_pow[std::popcount(a)]) * c * c);
  }
  out.fourier *= 0.25;

  if (k <= direct_check_max_k) {
    std::vector<std::uint32_t> inside, outside;
    for (std::uint32_t x = 0; x < indicator.size(); ++x)
      (indicator[x] == 1.0 ? inside : outside).push_back(x);
    const auto wtab = detail::flip_weight_table(k, p);
    double direct = 0.0, dcomp = 0.0;
    for (std::uint32_t x : inside)
      for (std::uint32_t y : outside)
        detail::kahan_add(direct, dcomp, wtab[std::popcount(x ^ y)]);
    out.direct = std::ldexp(direct, -k);
    out.direct_evaluated = true;
    out.route_gap = std::abs(out.direct - out.fourier);
    if (out.route_gap > tol)
      throw std::runtime_error("boundary_measure: spectral and direct evaluations disagree");
  }
  return out;
}

inline double boundary_measure(const CubeFunction& indicator, double p,
                               double tol = 1e-9, int direct_check_max_k = 14) {
  return boundary_measure_detailed(indicator, p, tol, direct_check_max_k).fourier;
}

// Per-level spectral masses and per-coordinate influence contributions,
// computed once from a single transform. Sums are compensated so that the
// coordinate symmetry of invariant functions survives at ~1e-15.
struct LevelTables {
  int k = 0;
  std::vector<double> level_mass;                    // [l] = sum_{|A|=l} f^2
  std::vector<std::vector<double>> coord_level;      // [l][j] = sum_{|A|=l, A∋j} f^2
  double coeff0 = 0.0;

  double variance() const {
    double s = 0.0, c = 0.0;
    for (int l = 1; l <= k; ++l) detail::kahan_add(s, c, level_mass[l]);
    return s;
  }

  double tail_mass(int m) const {
    double s = 0.0, c = 0.0;
    for (int l = m + 1; l <= k; ++l) detail::kahan_add(s, c, level_mass[l]);
    return s;
  }

  double influence(int j, int m) const {
    double s = 0.0, c = 0.0;
    for (int l = 1; l <= std::min(m, k); ++l) detail::kahan_add(s, c, coord_level[l][j]);
    return s;
  }

  double influence_total(int m) const {
    double s = 0.0, c = 0.0;
    for (int l = 1; l <= std::min(m, k); ++l)
      detail::kahan_add(s, c, static_cast<double>(l) * level_mass[l]);
    return s;
  }
};

inline LevelTables level_tables(const CubeFunction& f) {
  const int k = f.k();
  Spectrum sp = wht_analysis(f);
  LevelTables t;
  t.k = k;
  t.coeff0 = sp.coeffs[0];
  t.level_mass.assign(k + 1, 0.0);
  t.coord_level.assign(k + 1, std::vector<double>(k, 0.0));
  std::vector<double> mass_comp(k + 1, 0.0);
  std::vector<std::vector<double>> coord_comp(k + 1, std::vector<double>(k, 0.0));
  for (std::uint32_t a = 0; a < sp.coeffs.size(); ++a) {
    const double v = sp.coeffs[a] * sp.coeffs[a];
    const int l = std::popcount(a);
    detail::kahan_add(t.level_mass[l], mass_comp[l], v);
    std::uint32_t rest = a;
    while (rest) {
      const int j = std::countr_zero(rest);
      rest &= rest - 1;
      detail::kahan_add(t.coord_level[l][j], coord_comp[l][j], v);
    }
  }
  return t;
}

// Level-m influence of coordinate j (0-based). Evaluated from the spectrum
// and, independently, as the squared L2(mu) norm of f convolved with the
// level filter; the two must agree.
inline double level_influence(const CubeFunction& f, int j, int m, double tol = 1e-9) {
  const int k = f.k();
  if (j < 0 || j >= k) throw std::invalid_argument("level_influence: coordinate out of range");
  if (m < 1 || m > k) throw std::invalid_argument("level_influence: level out of range");

  Spectrum sp = wht_analysis(f);
  double spectral = 0.0, comp = 0.0;
  for (std::uint32_t a = 0; a < sp.coeffs.size(); ++a)
    if (((a >> j) & 1u) && std::popcount(a) <= m)
      detail::kahan_add(spectral, comp, sp.coeffs[a] * sp.coeffs[a]);

  // filter with unit coefficients on {A : j in A, |A| <= m}
  Spectrum filt;
  filt.k = k;
  filt.coeffs.assign(std::size_t(1) << k, 0.0);
  for (std::uint32_t a = 0; a < filt.coeffs.size(); ++a)
    if (((a >> j) & 1u) && std::popcount(a) <= m) filt.coeffs[a] = 1.0;
  CubeFunction conv = convolve(f, wht_synthesis(filt));
  const double routed = l2_norm_sq_mu(conv);

  if (std::abs(spectral - routed) > tol)
    throw std::runtime_error("level_influence: spectral and convolution routes disagree");
  return spectral;
}

struct InfluenceProfile {
  int k = 0;
  int m = 0;
  std::vector<double> per_coordinate;
  double total = 0.0;
};

inline InfluenceProfile influence_profile(const CubeFunction& f, int m) {
  const LevelTables t = level_tables(f);
  InfluenceProfile pr;
  pr.k = f.k();
  pr.m = m;
  pr.per_coordinate.resize(pr.k);
  double s = 0.0, c = 0.0;
  for (int j = 0; j < pr.k; ++j) {
    pr.per_coordinate[j] = t.influence(j, m);
    detail::kahan_add(s, c, pr.per_coordinate[j]);
  }
  pr.total = s;
  return pr;
}

struct InfluenceSumCheck {
  double total = 0.0;   // sum_j Inf_j^{<=m} = sum_{0<|B|<=m} |B| f(B)^2
  double bound = 0.0;   // m * Var(f)
  bool pass = false;
};

inline InfluenceSumCheck influence_sum_check(const CubeFunction& f, int m,
                                             double tol = 1e-9) {
  if (m < 1 || m > f.k()) throw std::invalid_argument("influence_sum_check: bad level");
  const LevelTables t = level_tables(f);
  InfluenceSumCheck r;
  r.total = t.influence_total(m);
  r.bound = static_cast<double>(m) * t.variance();
  r.pass = r.total <= r.bound + tol;
  return r;
}

struct TransitiveInfluenceBound {
  double max_influence = 0.0;
  double bound = 0.0;   // (m/k) * Var(f)
  bool pass = false;
  double max_coord_spread = 0.0;  // max_j |Inf_j - Inf_0|, zero for invariant f
};

// For a G-invariant f with G transitive: max_j Inf_j^{<=m} <= (m/k) Var(f).
// Also verifies the generator symmetry Inf_j = Inf_{g^{-1} j}.
inline TransitiveInfluenceBound transitive_influence_bound(const CubeFunction& f,
                                                           const PermGroup& g, int m,
                                                           double tol = 1e-9,
                                                           double sym_tol = 1e-12) {
  if (!g.transitive)
    throw std::invalid_argument("transitive_influence_bound: group is not transitive");
  for (const auto& gen : g.generators)
    if (!check_invariance(f, gen))
      throw std::invalid_argument("transitive_influence_bound: f is not G-invariant");
  if (m < 1 || m > f.k()) throw std::invalid_argument("transitive_influence_bound: bad level");

  const LevelTables t = level_tables(f);
  const int k = f.k();
  std::vector<double> inf(k);
  for (int j = 0; j < k; ++j) inf[j] = t.influence(j, m);

  for (const auto& gen : g.generators) {
    const Permutation ginv = gen.inverse();
    for (int j = 0; j < k; ++j)
      if (std::abs(inf[j] - inf[ginv(j)]) > sym_tol)
        throw std::runtime_error("transitive_influence_bound: generator symmetry violated");
  }

  TransitiveInfluenceBound r;
  r.max_influence = *std::max_element(inf.begin(), inf.end());
  r.bound = static_cast<double>(m) / static_cast<double>(k) * t.variance();
  r.pass = r.max_influence <= r.bound + tol;
  for (int j = 1; j < k; ++j)
    r.max_coord_spread = std::max(r.max_coord_spread, std::abs(inf[j] - inf[0]));
  return r;
}

struct TransitiveInfluenceSweep {
  double worst_slack = -1e300;   // max over m of (max_j Inf_j - (m/k) Var)
  double worst_spread = 0.0;     // max over m of coordinate spread
};

// Same checks as transitive_influence_bound, for every m at the cost of a
// single transform.
inline TransitiveInfluenceSweep transitive_influence_sweep(const CubeFunction& f,
                                                           const PermGroup& g) {
  if (!g.transitive)
    throw std::invalid_argument("transitive_influence_sweep: group is not transitive");
  for (const auto& gen : g.generators)
    if (!check_invariance(f, gen))
      throw std::invalid_argument("transitive_influence_sweep: f is not G-invariant");
  const LevelTables t = level_tables(f);
  const int k = f.k();
  const double var = t.variance();
  TransitiveInfluenceSweep sweep;
  std::vector<double> inf(k, 0.0), comp(k, 0.0);
  for (int m = 1; m <= k; ++m) {
    for (int j = 0; j < k; ++j) detail::kahan_add(inf[j], comp[j], t.coord_level[m][j]);
    double mx = inf[0], spread = 0.0;
    for (int j = 1; j < k; ++j) {
      mx = std::max(mx, inf[j]);
      spread = std::max(spread, std::abs(inf[j] - inf[0]));
    }
    sweep.worst_slack = std::max(
        sweep.worst_slack, mx - static_cast<double>(m) / static_cast<double>(k) * var);
    sweep.worst_spread = std::max(sweep.worst_spread, spread);
  }
  return sweep;
}

// Spectral mass strictly above level m; tail_mass(f, 0) = Var(f).
inline double tail_mass(const CubeFunction& f, int m) {
  if (m < 0 || m > f.k()) throw std::invalid_argument("tail_mass: bad level");
  return level_tables(f).tail_mass(m);
}

// Diagnostic for the junta-vs-tail regime: max_j Inf_j^{<=m} <= Var^4 / C^m.
inline bool kko_condition(const CubeFunction& f, int m, double C) {
  if (C <= 1.0) throw std::invalid_argument("kko_condition: C must exceed 1");
  const LevelTables t = level_tables(f);
  double maxinf = 0.0;
  for (int j = 0; j < f.k(); ++j) maxinf = std::max(maxinf, t.influence(j, m));
  const double var = t.variance();
  return maxinf <= var * var * var * var / std::pow(C, m);
}

struct SnowflakedAverages {
  double mean_pair = 0.0;  // E over (x,y) of d_quot(Gx,Gy)^{1-eps}
  double mean_edge = 0.0;  // (1/k) sum_j E over x of d_quot(G(x+e_j),Gx)^{1-eps}
};

inline SnowflakedAverages snowflaked_averages(const QuotientSpace& q, double eps) {
  if (eps < 0.0 || eps >= 1.0)
    throw std::invalid_argument("snowflaked_averages: eps outside [0,1)");
  const auto& d = q.distances();
  const int nq = q.orbit_count();
  const int k = q.k();
  const double pw = 1.0 - eps;

  SnowflakedAverages r;
  double s = 0.0, c = 0.0;
  for (int a = 0; a < nq; ++a)
    for (int b = 0; b < nq; ++b)
      if (d[a][b] > 0)
        detail::kahan_add(s, c,
                          q.orbit_measure(a) * q.orbit_measure(b) *
                              std::pow(static_cast<double>(d[a][b]), pw));
  r.mean_pair = s;

  // an edge crosses orbits iff orbit(rep + e_j) != orbit(rep); the count is
  // constant on each orbit, so representatives suffice
  double es = 0.0, ec = 0.0;
  for (int a = 0; a < nq; ++a) {
    int crossing = 0;
    for (int j = 0; j < k; ++j)
      if (q.orbit_of[q.reps[a] ^ (std::uint32_t(1) << j)] != a) ++crossing;
    detail::kahan_add(es, ec, q.orbit_measure(a) * crossing);
  }
  r.mean_edge = es / static_cast<double>(k);
  return r;
}

}  // namespace snowcube

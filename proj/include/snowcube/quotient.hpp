#pragma once

// Orbits of F_2^k under a coordinate-permutation group, the quotient metric
// d(Gx, Gy) = min_g d_H(gx, y), an independent BFS oracle for it on the
// quotient graph, the pushforward of the noise measure theta^p to orbit
// pairs, and the near-pair counting fraction.

#include <bit>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "snowcube/cube.hpp"
#include "snowcube/group.hpp"

namespace snowcube {

// cost caps: orbit scan is O(2^k * |G|), distance matrix O(q^2 * |G|)
inline constexpr std::uint64_t kDefaultQuotientBudget = std::uint64_t(1) << 33;

struct QuotientSpace {
  PermGroup group;
  std::vector<std::uint32_t> reps;       // canonical = numerically minimal
  std::vector<std::int32_t> orbit_of;    // size 2^k
  std::vector<std::int64_t> orbit_sizes;
  std::optional<std::vector<std::vector<int>>> dist;  // min-over-group matrix

  int k() const { return group.k; }
  int orbit_count() const { return static_cast<int>(reps.size()); }
  double orbit_measure(int a) const {
    return std::ldexp(static_cast<double>(orbit_sizes[a]), -k());
  }
  const std::vector<std::vector<int>>& distances() const {
    if (!dist) throw std::logic_error("QuotientSpace: distance matrix not built");
    return *dist;
  }
};

inline int quotient_distance(const PermGroup& g, CubePoint x, CubePoint y) {
  if (x.k != g.k || y.k != g.k)
    throw std::invalid_argument("quotient_distance: dimension mismatch");
  int best = g.k + 1;
  for (const auto& e : g.elements) {
    int d = std::popcount(e.apply_bits(x.bits) ^ y.bits);
    if (d < best) best = d;
  }
  return best;
}

// Fills the min-over-group distance matrix between orbit representatives.
// Group images of every representative are precomputed once, so the cost is
// q^2 |G| popcounts plus q |G| permutation applications.
inline void attach_distances(QuotientSpace& q, std::uint64_t budget = kDefaultQuotientBudget);

inline QuotientSpace build_quotient(const PermGroup& g, bool with_distances,
                                    std::uint64_t budget = kDefaultQuotientBudget) {
  const int k = g.k;
  if (k > 31) throw std::invalid_argument("build_quotient: dimension too large");
  const std::uint64_t npoints = std::uint64_t(1) << k;
  if (npoints * g.order() > budget)
    throw std::runtime_error("build_quotient: 2^k * |G| exceeds compute budget");

  QuotientSpace q;
  q.group = g;
  q.orbit_of.assign(npoints, -1);
  for (std::uint32_t x = 0; x < npoints; ++x) {
    if (q.orbit_of[x] >= 0) continue;
    // x is minimal in its orbit because we scan in increasing order
    const std::int32_t idx = static_cast<std::int32_t>(q.reps.size());
    q.reps.push_back(x);
    std::int64_t size = 0;
    for (const auto& e : g.elements) {
      std::uint32_t y = e.apply_bits(x);
      if (q.orbit_of[y] < 0) {
        q.orbit_of[y] = idx;
        ++size;
      }
    }
    q.orbit_sizes.push_back(size);
  }

  if (with_distances) attach_distances(q, budget);
  return q;
}

inline void attach_distances(QuotientSpace& q, std::uint64_t budget) {
  const std::size_t nq = q.reps.size();
  const std::size_t ng = q.group.order();
  if (static_cast<std::uint64_t>(nq) * nq * ng > budget)
    throw std::runtime_error("attach_distances: q^2 * |G| exceeds compute budget");
  std::vector<std::uint32_t> images(nq * ng);
  for (std::size_t a = 0; a < nq; ++a)
    for (std::size_t e = 0; e < ng; ++e)
      images[a * ng + e] = q.group.elements[e].apply_bits(q.reps[a]);
  std::vector<std::vector<int>> d(nq, std::vector<int>(nq, 0));
  for (std::size_t a = 0; a < nq; ++a) {
    const std::uint32_t* row = images.data() + a * ng;
    for (std::size_t b = a + 1; b < nq; ++b) {
      const std::uint32_t rep_b = q.reps[b];
      int best = q.group.k + 1;
      for (std::size_t e = 0; e < ng; ++e) {
        const int v = std::popcount(row[e] ^ rep_b);
        if (v < best) best = v;
      }
      d[a][b] = best;
      d[b][a] = best;
    }
  }
  q.dist = std::move(d);
}

// Independent oracle for the quotient metric: shortest paths on the graph
// whose edges join orbit(x) and orbit(x + e_j). Because the group acts by
// graph automorphisms of the hypercube, the neighbor set of an orbit can be
// read off from any one representative.
inline std::vector<std::vector<int>> quotient_distance_bfs(const QuotientSpace& q) {
  const int k = q.k();
  const int nq = q.orbit_count();
  std::vector<std::vector<std::int32_t>> nbrs(nq);
  for (int a = 0; a < nq; ++a) {
    std::vector<char> seen(nq, 0);
    for (int j = 0; j < k; ++j) {
      std::int32_t b = q.orbit_of[q.reps[a] ^ (std::uint32_t(1) << j)];
      if (!seen[b]) {
        seen[b] = 1;
        nbrs[a].push_back(b);
      }
    }
  }
  std::vector<std::vector<int>> dist(nq, std::vector<int>(nq, -1));
  for (int src = 0; src < nq; ++src) {
    auto& row = dist[src];
    row[src] = 0;
    std::deque<std::int32_t> queue{src};
    while (!queue.empty()) {
      std::int32_t a = queue.front();
      queue.pop_front();
      for (std::int32_t b : nbrs[a])
        if (row[b] < 0) {
          row[b] = row[a] + 1;
          queue.push_back(b);
        }
    }
  }
  return dist;
}

// --- noise measure pushforward -------------------------------------------

struct OrbitPairMeasure {
  int q = 0;
  double p = 0.0;
  std::vector<std::vector<double>> weights;  // symmetric, sums to 1
  bool exact = true;
  std::uint64_t samples = 0;     // sampling mode only
  double max_std_error = 0.0;    // sampling mode only
};

struct PushforwardOptions {
  // exact path costs q * 2^k table lookups; beyond this, seeded sampling
  std::uint64_t exact_op_budget = std::uint64_t(1) << 29;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
};

namespace detail {
inline std::vector<double> flip_weight_table(int k, double p) {
  std::vector<double> w(k + 1);
  for (int d = 0; d <= k; ++d)
    w[d] = std::pow(p, d) * std::pow(1.0 - p, k - d);
  return w;
}
}  // namespace detail

inline OrbitPairMeasure pushforward_theta(const QuotientSpace& q, double p,
                                          const PushforwardOptions& opt = {}) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("pushforward_theta: p outside [0,1]");
  if (opt.samples < 1) throw std::invalid_argument("pushforward_theta: invalid sampling budget");
  const int k = q.k();
  const int nq = q.orbit_count();
  if (nq > 5000)
    throw std::runtime_error("pushforward_theta: orbit count too large for a dense pair measure");
  const std::uint64_t npoints = std::uint64_t(1) << k;

  OrbitPairMeasure m;
  m.q = nq;
  m.p = p;
  m.weights.assign(nq, std::vector<double>(nq, 0.0));

  if (static_cast<std::uint64_t>(nq) * npoints <= opt.exact_op_budget) {
    // theta(a x b) = |a| / 2^k * sum_{y in b} p^d(rep_a,y) (1-p)^{k-d}
    const auto wtab = detail::flip_weight_table(k, p);
    for (int a = 0; a < nq; ++a) {
      std::vector<double> row(nq, 0.0);
      const std::uint32_t rep = q.reps[a];
      for (std::uint32_t y = 0; y < npoints; ++y)
        row[q.orbit_of[y]] += wtab[std::popcount(rep ^ y)];
      const double scale = q.orbit_measure(a);
      for (int b = 0; b < nq; ++b) m.weights[a][b] = scale * row[b];
    }
    // theta is symmetric; remove the row-order floating-point asymmetry
    for (int a = 0; a < nq; ++a)
      for (int b = a + 1; b < nq; ++b) {
        double v = 0.5 * (m.weights[a][b] + m.weights[b][a]);
        m.weights[a][b] = v;
        m.weights[b][a] = v;
      }
    return m;
  }

  m.exact = false;
  m.samples = opt.samples;
  std::mt19937_64 rng(opt.seed);
  const std::uint32_t mask = static_cast<std::uint32_t>(npoints - 1);
  const std::uint64_t thresh =
      (p >= 1.0) ? ~std::uint64_t(0)
                 : static_cast<std::uint64_t>(p * 18446744073709551616.0);
  const double inc = 1.0 / static_cast<double>(opt.samples);
  for (std::uint64_t t = 0; t < opt.samples; ++t) {
    std::uint32_t x = static_cast<std::uint32_t>(rng()) & mask;
    std::uint32_t flips = 0;
    for (int j = 0; j < k; ++j)
      if (p >= 1.0 || rng() < thresh) flips |= std::uint32_t(1) << j;
    std::uint32_t y = x ^ flips;
    m.weights[q.orbit_of[x]][q.orbit_of[y]] += inc;
  }
  double maxse = 0.0;
  for (int a = 0; a < nq; ++a)
    for (int b = 0; b < nq; ++b) {
      double w = m.weights[a][b];
      maxse = std::max(maxse, std::sqrt(w * (1.0 - w) / static_cast<double>(opt.samples)));
    }
  m.max_std_error = maxse;
  return m;
}

// --- near-pair counting ----------------------------------------------------

struct PairFraction {
  double fraction = 0.0;
  bool exact = true;
  std::uint64_t samples = 0;
  double std_error = 0.0;
};

struct FarPairOptions {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
};

// Fraction of pairs (x,y) in F_2^k x F_2^k with quotient distance <= eta*k.
// Exact (weighted over orbit pairs) when the distance matrix is present,
// otherwise seeded Monte Carlo over uniform pairs.
inline PairFraction far_pair_fraction(const QuotientSpace& q, double eta,
                                      const FarPairOptions& opt = {}) {
  if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("far_pair_fraction: eta outside [0,1]");
  const int k = q.k();
  const double cutoff = eta * k + 1e-12;
  PairFraction out;
  if (q.dist) {
    const auto& d = *q.dist;
    const int nq = q.orbit_count();
    double acc = 0.0;
    for (int a = 0; a < nq; ++a)
      for (int b = 0; b < nq; ++b)
        if (d[a][b] <= cutoff) acc += q.orbit_measure(a) * q.orbit_measure(b);
    out.fraction = acc;
    return out;
  }
  if (opt.samples < 1) throw std::invalid_argument("far_pair_fraction: invalid sampling budget");
  if (opt.samples * q.group.order() > (std::uint64_t(1) << 33))
    throw std::runtime_error("far_pair_fraction: sampling budget too large for this group order");
  out.exact = false;
  out.samples = opt.samples;
  std::mt19937_64 rng(opt.seed);
  const std::uint32_t mask = static_cast<std::uint32_t>((std::uint64_t(1) << k) - 1);
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < opt.samples; ++t) {
    std::uint32_t x = static_cast<std::uint32_t>(rng()) & mask;
    std::uint32_t y = static_cast<std::uint32_t>(rng()) & mask;
    if (quotient_distance(q.group, CubePoint(x, k), CubePoint(y, k)) <= cutoff) ++hits;
  }
  out.fraction = static_cast<double>(hits) / static_cast<double>(opt.samples);
  out.std_error = std::sqrt(out.fraction * (1.0 - out.fraction) /
                            static_cast<double>(opt.samples));
  return out;
}

// Indicator of a union of orbits as a +-1 valued cube function; exactly
// group-invariant by construction.
inline CubeFunction orbit_union_sign(const QuotientSpace& q, const std::vector<char>& in_set) {
  if (in_set.size() != static_cast<std::size_t>(q.orbit_count()))
    throw std::invalid_argument("orbit_union_sign: mask size != orbit count");
  std::vector<double> v(std::size_t(1) << q.k());
  for (std::uint32_t x = 0; x < v.size(); ++x)
    v[x] = in_set[q.orbit_of[x]] ? -1.0 : 1.0;
  return CubeFunction(q.k(), std::move(v));
}

inline CubeFunction orbit_union_indicator(const QuotientSpace& q,
                                          const std::vector<char>& in_set) {
  if (in_set.size() != static_cast<std::size_t>(q.orbit_count()))
    throw std::invalid_argument("orbit_union_indicator: mask size != orbit count");
  std::vector<double> v(std::size_t(1) << q.k());
  for (std::uint32_t x = 0; x < v.size(); ++x)
    v[x] = in_set[q.orbit_of[x]] ? 1.0 : 0.0;
  return CubeFunction(q.k(), std::move(v));
}

}  // namespace snowcube

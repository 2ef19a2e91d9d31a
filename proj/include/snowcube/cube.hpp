#pragma once

// Dense real-valued functions on the hypercube F_2^k and their Walsh
// spectra. Integration is always against the normalized counting measure,
// so the analysis transform divides by 2^k and synthesis is an unweighted
// sum; with that convention the coefficient at the empty set is the mean.
//
// Points are bitmasks. The Walsh function indexed by a set A (a bitmask)
// is W_A(x) = (-1)^popcount(A & x).

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "snowcube/perm.hpp"

namespace snowcube {

inline constexpr int kDefaultDimensionCap = 24;

struct CubePoint {
  std::uint32_t bits = 0;
  int k = 0;

  CubePoint() = default;
  CubePoint(std::uint32_t bits_, int k_) : bits(bits_), k(k_) {
    if (k_ < 1 || k_ > 31) throw std::invalid_argument("CubePoint: bad dimension");
    if (k_ < 31 && bits_ >= (std::uint32_t(1) << k_))
      throw std::invalid_argument("CubePoint: bits out of range for dimension");
  }

  friend bool operator==(CubePoint a, CubePoint b) = default;
};

inline CubePoint basis_point(int k, int j) {  // e_{j+1} in 1-based speak
  return CubePoint(std::uint32_t(1) << j, k);
}

inline int hamming_distance(CubePoint x, CubePoint y) {
  if (x.k != y.k) throw std::invalid_argument("hamming_distance: dimension mismatch");
  return std::popcount(x.bits ^ y.bits);
}

inline int walsh_eval(std::uint32_t a, CubePoint x) {
  if (x.k < 31 && a >= (std::uint32_t(1) << x.k))
    throw std::invalid_argument("walsh_eval: set index out of range");
  return (std::popcount(a & x.bits) & 1) ? -1 : 1;
}

namespace detail {
inline void check_dim(int k, int cap) {
  if (k < 1) throw std::invalid_argument("dimension must be >= 1");
  if (k > cap) throw std::invalid_argument("dimension exceeds configured cap (" +
                                           std::to_string(cap) + ")");
}

inline void kahan_add(double& sum, double& comp, double v) {
  double y = v - comp;
  double t = sum + y;
  comp = (t - sum) - y;
  sum = t;
}
}  // namespace detail

class CubeFunction {
 public:
  CubeFunction() = default;

  CubeFunction(int k, std::vector<double> values, int cap = kDefaultDimensionCap)
      : k_(k), values_(std::move(values)) {
    detail::check_dim(k, cap);
    if (values_.size() != (std::size_t(1) << k_))
      throw std::invalid_argument("CubeFunction: need exactly 2^k values");
    for (double v : values_)
      if (!std::isfinite(v)) throw std::invalid_argument("CubeFunction: non-finite entry");
  }

  static CubeFunction constant(int k, double c, int cap = kDefaultDimensionCap) {
    detail::check_dim(k, cap);
    return CubeFunction(k, std::vector<double>(std::size_t(1) << k, c), cap);
  }

  static CubeFunction walsh(int k, std::uint32_t a, int cap = kDefaultDimensionCap) {
    detail::check_dim(k, cap);
    std::vector<double> v(std::size_t(1) << k);
    for (std::uint32_t x = 0; x < v.size(); ++x)
      v[x] = (std::popcount(a & x) & 1) ? -1.0 : 1.0;
    return CubeFunction(k, std::move(v), cap);
  }

  // point mass scaled so that it is the unit of convolution under mu
  static CubeFunction convolution_unit(int k, int cap = kDefaultDimensionCap) {
    detail::check_dim(k, cap);
    std::vector<double> v(std::size_t(1) << k, 0.0);
    v[0] = std::ldexp(1.0, k);
    return CubeFunction(k, std::move(v), cap);
  }

  int k() const { return k_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::uint32_t x) const { return values_[x]; }
  double& operator[](std::uint32_t x) { return values_[x]; }
  const std::vector<double>& values() const { return values_; }

 private:
  int k_ = 0;
  std::vector<double> values_;
};

struct Spectrum {
  int k = 0;
  std::vector<double> coeffs;  // entry at bitmask A is the coefficient of W_A
};

// In-place unnormalized Walsh-Hadamard butterfly: v'[A] = sum_x v[x] W_A(x).
// Self-inverse up to a factor of 2^k.
inline void wht_inplace(std::vector<double>& v) {
  const std::size_t n = v.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("wht_inplace: size must be a power of two");
  for (std::size_t len = 1; len < n; len <<= 1) {
    for (std::size_t i = 0; i < n; i += len << 1) {
      for (std::size_t j = i; j < i + len; ++j) {
        double a = v[j], b = v[j + len];
        v[j] = a + b;
        v[j + len] = a - b;
      }
    }
  }
}

inline Spectrum wht_analysis(const CubeFunction& f) {
  Spectrum s;
  s.k = f.k();
  s.coeffs = f.values();
  wht_inplace(s.coeffs);
  const double scale = std::ldexp(1.0, -f.k());
  for (double& c : s.coeffs) c *= scale;
  return s;
}

inline CubeFunction wht_synthesis(const Spectrum& s) {
  std::vector<double> v = s.coeffs;
  wht_inplace(v);
  return CubeFunction(s.k, std::move(v));
}

inline CubeFunction convolve(const CubeFunction& f, const CubeFunction& g) {
  if (f.k() != g.k()) throw std::invalid_argument("convolve: dimension mismatch");
  Spectrum a = wht_analysis(f);
  Spectrum b = wht_analysis(g);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) a.coeffs[i] *= b.coeffs[i];
  return wht_synthesis(a);
}

inline double mean(const CubeFunction& f) {
  double s = 0.0, comp = 0.0;  // Kahan
  for (double v : f.values()) {
    double y = v - comp;
    double t = s + y;
    comp = (t - s) - y;
    s = t;
  }
  return std::ldexp(s, -f.k());
}

inline double variance(const CubeFunction& f) {
  double m = mean(f);
  double s = 0.0, comp = 0.0;
  for (double v : f.values()) {
    double y = (v - m) * (v - m) - comp;
    double t = s + y;
    comp = (t - s) - y;
    s = t;
  }
  return std::ldexp(s, -f.k());
}

inline double l2_norm_sq_mu(const CubeFunction& f) {
  double s = 0.0, comp = 0.0;
  for (double v : f.values()) {
    double y = v * v - comp;
    double t = s + y;
    comp = (t - s) - y;
    s = t;
  }
  return std::ldexp(s, -f.k());
}

// h(x) = f(g x); precomposition with the coordinate action of g
inline CubeFunction precompose(const CubeFunction& f, const Permutation& g) {
  if (g.size() != f.k()) throw std::invalid_argument("precompose: dimension mismatch");
  std::vector<double> v(f.size());
  for (std::uint32_t x = 0; x < f.size(); ++x) v[x] = f[g.apply_bits(x)];
  return CubeFunction(f.k(), std::move(v));
}

// Exact equality f(g y) == f(y) for every y.
inline bool check_invariance(const CubeFunction& f, const Permutation& g) {
  if (g.size() != f.k()) throw std::invalid_argument("check_invariance: dimension mismatch");
  for (std::uint32_t y = 0; y < f.size(); ++y)
    if (f[g.apply_bits(y)] != f[y]) return false;
  return true;
}

inline CubePoint act(const Permutation& g, CubePoint x) {
  if (g.size() != x.k) throw std::invalid_argument("act: dimension mismatch");
  return CubePoint(g.apply_bits(x.bits), x.k);
}

// --- serialization -------------------------------------------------------
// Text format, lossless for doubles:
//   line 1:      "cubefn 1 <k>"
//   next 2^k:    one hex float (printf %a) per line, value at bitmask x

inline void write_cube_function(std::ostream& out, const CubeFunction& f) {
  out << "cubefn 1 " << f.k() << "\n";
  char buf[64];
  for (double v : f.values()) {
    std::snprintf(buf, sizeof buf, "%a\n", v);
    out << buf;
  }
}

inline CubeFunction read_cube_function(std::istream& in, int cap = kDefaultDimensionCap) {
  std::string magic;
  int version = 0, k = 0;
  if (!(in >> magic >> version >> k) || magic != "cubefn")
    throw std::runtime_error("read_cube_function: bad header");
  if (version != 1) throw std::runtime_error("read_cube_function: unsupported version");
  detail::check_dim(k, cap);
  std::vector<double> v;
  v.reserve(std::size_t(1) << k);
  std::string tok;
  for (std::size_t i = 0; i < (std::size_t(1) << k); ++i) {
    if (!(in >> tok)) throw std::runtime_error("read_cube_function: truncated value table");
    char* end = nullptr;
    double d = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
      throw std::runtime_error("read_cube_function: unparsable value '" + tok + "'");
    v.push_back(d);
  }
  return CubeFunction(k, std::move(v), cap);
}

inline void save_cube_function(const std::string& path, const CubeFunction& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_cube_function: cannot open " + path);
  write_cube_function(out, f);
}

inline CubeFunction load_cube_function(const std::string& path, int cap = kDefaultDimensionCap) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_cube_function: cannot open " + path);
  return read_cube_function(in, cap);
}

}  // namespace snowcube

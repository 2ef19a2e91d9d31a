#pragma once

// Cut semimetrics on n points. A cut is a proper nonempty subset, stored as
// a bitmask and canonicalized to contain point 0 (cut/complement give the
// same semimetric). Nonnegative combinations of cuts are exactly the
// L1-embeddable semimetrics, which makes embeddings finite objects here.

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace snowcube {

using CutMask = std::uint32_t;

inline bool cut_separates(CutMask s, int i, int j) {
  return (((s >> i) ^ (s >> j)) & 1u) != 0;
}

// visits all 2^{n-1} - 1 canonical cuts in increasing mask order
template <class Fn>
inline void for_each_canonical_cut(int n, Fn&& fn) {
  if (n < 2 || n > 31) throw std::invalid_argument("for_each_canonical_cut: n outside 2..31");
  const CutMask full = (CutMask(1) << n) - 1;
  for (CutMask s = 1; s < full; s += 2) fn(s);
}

inline std::size_t canonical_cut_count(int n) {
  return (std::size_t(1) << (n - 1)) - 1;
}

struct CutCombination {
  int n = 0;
  std::vector<std::pair<CutMask, double>> weights;  // canonical masks, weights >= 0

  double induced(int i, int j) const {
    double s = 0.0;
    for (const auto& [mask, w] : weights)
      if (cut_separates(mask, i, j)) s += w;
    return s;
  }

  std::vector<std::vector<double>> induced_matrix() const {
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        d[i][j] = induced(i, j);
        d[j][i] = d[i][j];
      }
    return d;
  }
};

}  // namespace snowcube

#pragma once

// Permutation groups on k coordinates, fully enumerated by breadth-first
// closure of the generators. Enumeration order is deterministic (discovery
// order), elements[0] is the identity. The closure errors out, never
// truncates, when the order cap is exceeded.

#include <cstdint>
#include <deque>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "snowcube/perm.hpp"

namespace snowcube {

inline constexpr std::size_t kDefaultGroupOrderCap = std::size_t(1) << 20;

struct PermGroup {
  int k = 0;
  std::vector<Permutation> generators;
  std::vector<Permutation> elements;
  bool transitive = false;

  std::size_t order() const { return elements.size(); }
};

namespace detail {
inline bool orbit_of_coordinate_is_full(int k, const std::vector<Permutation>& gens) {
  std::vector<char> seen(k, 0);
  std::deque<int> queue{0};
  seen[0] = 1;
  int count = 1;
  while (!queue.empty()) {
    int j = queue.front();
    queue.pop_front();
    for (const auto& g : gens) {
      int img = g(j);
      if (!seen[img]) {
        seen[img] = 1;
        ++count;
        queue.push_back(img);
      }
    }
  }
  return count == k;
}
}  // namespace detail

inline PermGroup group_from_generators(int k, std::vector<Permutation> gens,
                                       std::size_t order_cap = kDefaultGroupOrderCap) {
  if (k < 1) throw std::invalid_argument("group_from_generators: k must be >= 1");
  if (order_cap < 1) throw std::invalid_argument("group_from_generators: cap must be >= 1");
  for (const auto& g : gens)
    if (g.size() != k)
      throw std::invalid_argument("group_from_generators: generator degree != k");

  PermGroup grp;
  grp.k = k;
  grp.generators = gens;

  std::set<std::vector<int>> seen;
  std::deque<Permutation> queue;
  Permutation id = Permutation::identity(k);
  seen.insert(id.images());
  grp.elements.push_back(id);
  queue.push_back(id);
  while (!queue.empty()) {
    Permutation e = queue.front();
    queue.pop_front();
    for (const auto& g : gens) {
      Permutation prod = g * e;
      if (seen.insert(prod.images()).second) {
        if (grp.elements.size() + 1 > order_cap)
          throw std::runtime_error("group_from_generators: order cap " +
                                   std::to_string(order_cap) + " exceeded");
        grp.elements.push_back(prod);
        queue.push_back(prod);
      }
    }
  }
  grp.transitive = detail::orbit_of_coordinate_is_full(k, gens);
  return grp;
}

inline PermGroup trivial_group(int k) {
  return group_from_generators(k, {});
}

inline PermGroup cyclic_group(int k, std::size_t cap = kDefaultGroupOrderCap) {
  return group_from_generators(k, {cyclic_shift(k)}, cap);
}

inline PermGroup dihedral_group(int k, std::size_t cap = kDefaultGroupOrderCap) {
  return group_from_generators(k, {cyclic_shift(k), coordinate_reversal(k)}, cap);
}

inline PermGroup symmetric_group(int k, std::size_t cap = kDefaultGroupOrderCap) {
  if (k == 1) return trivial_group(1);
  return group_from_generators(k, {transposition(k, 0, 1), cyclic_shift(k)}, cap);
}

// Named group spec used by the CLI: cyclic | dihedral | symmetric | trivial.
inline PermGroup named_group(const std::string& name, int k,
                             std::size_t cap = kDefaultGroupOrderCap) {
  if (name == "cyclic") return cyclic_group(k, cap);
  if (name == "dihedral") return dihedral_group(k, cap);
  if (name == "symmetric") return symmetric_group(k, cap);
  if (name == "trivial") return trivial_group(k);
  throw std::invalid_argument("named_group: unknown group '" + name + "'");
}

}  // namespace snowcube

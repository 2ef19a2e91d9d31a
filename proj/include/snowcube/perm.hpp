#pragma once

// Permutations of coordinates {0,...,k-1}. Text formats (generator files)
// are 1-based; everything in memory is 0-based.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace snowcube {

class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<int> images) : img_(std::move(images)) {
    std::vector<char> seen(img_.size(), 0);
    for (int v : img_) {
      if (v < 0 || v >= static_cast<int>(img_.size()) || seen[v])
        throw std::invalid_argument("Permutation: image list is not a bijection");
      seen[v] = 1;
    }
  }

  static Permutation identity(int k) {
    std::vector<int> img(k);
    std::iota(img.begin(), img.end(), 0);
    return Permutation(std::move(img));
  }

  int size() const { return static_cast<int>(img_.size()); }
  int operator()(int j) const { return img_[j]; }
  const std::vector<int>& images() const { return img_; }

  bool is_identity() const {
    for (int j = 0; j < size(); ++j)
      if (img_[j] != j) return false;
    return true;
  }

  Permutation inverse() const {
    std::vector<int> inv(img_.size());
    for (int j = 0; j < size(); ++j) inv[img_[j]] = j;
    return Permutation(std::move(inv));
  }

  // (a*b)(j) = a(b(j))
  friend Permutation operator*(const Permutation& a, const Permutation& b) {
    if (a.size() != b.size())
      throw std::invalid_argument("Permutation: size mismatch in composition");
    std::vector<int> img(a.size());
    for (int j = 0; j < a.size(); ++j) img[j] = a.img_[b.img_[j]];
    return Permutation(std::move(img));
  }

  friend bool operator==(const Permutation& a, const Permutation& b) = default;
  friend auto operator<=>(const Permutation& a, const Permutation& b) {
    return a.img_ <=> b.img_;
  }

  // Coordinate action on a bitmask: bit j of x moves to bit (*this)(j).
  // The resulting point y satisfies y_{g(j)} = x_j, i.e. y_i = x_{g^{-1}(i)}.
  std::uint32_t apply_bits(std::uint32_t x) const {
    std::uint32_t y = 0;
    for (int j = 0; j < size(); ++j)
      if ((x >> j) & 1u) y |= std::uint32_t(1) << img_[j];
    return y;
  }

 private:
  std::vector<int> img_;
};

inline Permutation cyclic_shift(int k) {
  std::vector<int> img(k);
  for (int j = 0; j < k; ++j) img[j] = (j + 1) % k;
  return Permutation(std::move(img));
}

inline Permutation coordinate_reversal(int k) {
  std::vector<int> img(k);
  for (int j = 0; j < k; ++j) img[j] = k - 1 - j;
  return Permutation(std::move(img));
}

// 0-based coordinates a, b
inline Permutation transposition(int k, int a, int b) {
  if (a < 0 || b < 0 || a >= k || b >= k)
    throw std::invalid_argument("transposition: coordinate out of range");
  std::vector<int> img(k);
  std::iota(img.begin(), img.end(), 0);
  std::swap(img[a], img[b]);
  return Permutation(std::move(img));
}

// Parses one permutation of {1..k}. Two accepted forms:
//   cycle notation:  (1 2 3)(4 5)    -- fixed points may be omitted
//   image list:      2 3 1 5 4       -- exactly k integers, j -> list[j]
// Commas are treated as whitespace.
inline Permutation parse_permutation(const std::string& line, int k) {
  std::string s = line;
  std::replace(s.begin(), s.end(), ',', ' ');
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos)
    throw std::invalid_argument("parse_permutation: empty input");

  if (s[first] == '(') {
    std::vector<int> img(k);
    std::iota(img.begin(), img.end(), 0);
    size_t pos = first;
    while (pos < s.size()) {
      if (std::isspace(static_cast<unsigned char>(s[pos]))) { ++pos; continue; }
      if (s[pos] != '(')
        throw std::invalid_argument("parse_permutation: expected '(' in cycle notation");
      size_t close = s.find(')', pos);
      if (close == std::string::npos)
        throw std::invalid_argument("parse_permutation: unbalanced parenthesis");
      std::istringstream cyc(s.substr(pos + 1, close - pos - 1));
      std::vector<int> elems;
      int v;
      while (cyc >> v) {
        if (v < 1 || v > k)
          throw std::invalid_argument("parse_permutation: coordinate out of range 1..k");
        elems.push_back(v - 1);
      }
      std::vector<char> dup(k, 0);
      for (int e : elems) {
        if (dup[e]) throw std::invalid_argument("parse_permutation: repeated coordinate in cycle");
        dup[e] = 1;
      }
      for (size_t i = 0; i < elems.size(); ++i)
        img[elems[i]] = elems[(i + 1) % elems.size()];
      pos = close + 1;
    }
    return Permutation(std::move(img));
  }

  std::istringstream in(s);
  std::vector<int> img;
  int v;
  while (in >> v) {
    if (v < 1 || v > k)
      throw std::invalid_argument("parse_permutation: image out of range 1..k");
    img.push_back(v - 1);
  }
  if (static_cast<int>(img.size()) != k)
    throw std::invalid_argument("parse_permutation: image list must have exactly k entries");
  return Permutation(std::move(img));
}

// Generator file: one permutation per line, '#' starts a comment.
inline std::vector<Permutation> parse_generator_lines(std::istream& in, int k) {
  std::vector<Permutation> gens;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    gens.push_back(parse_permutation(line, k));
  }
  return gens;
}

}  // namespace snowcube

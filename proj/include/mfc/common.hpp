#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mfc {

using PointId = std::size_t;

// Error categories. Everything derives from std::runtime_error so callers
// that only care about "it failed" can catch one type.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Inconsistent inputs detected while building an object (metric/point mismatch, bad format).
struct ConfigError : Error {
  using Error::Error;
};
// A precondition on an argument was violated.
struct ArgumentError : Error {
  using Error::Error;
};
// Input file could not be parsed; message carries the line number.
struct ParseError : Error {
  using Error::Error;
};
// An O(n^2) oracle or builder refused an instance above its size guard.
struct SizeError : Error {
  using Error::Error;
};
// An internal invariant failed (e.g. a completed tree is not spanning).
struct ConsistencyError : Error {
  using Error::Error;
};

struct WeightedEdge {
  PointId u = 0;
  PointId v = 0;
  double weight = 0.0;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

inline WeightedEdge make_edge(PointId a, PointId b, double w) {
  return a < b ? WeightedEdge{a, b, w} : WeightedEdge{b, a, w};
}

/// Correctly rounded floating-point sum (Shewchuk's partials, as in Python's
/// math.fsum). The result does not depend on the order of the inputs, so two
/// edge sets with the same weight multiset always report the same total.
template <typename Range, typename Proj>
double exact_sum(const Range& values, Proj proj) {
  std::vector<double> partials;
  for (const auto& item : values) {
    double x = proj(item);
    std::size_t used = 0;
    for (double y : partials) {
      if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials[used++] = lo;
      x = hi;
    }
    partials.resize(used);
    partials.push_back(x);
  }
  if (partials.empty()) return 0.0;

  std::size_t n = partials.size() - 1;
  double hi = partials[n];
  double lo = 0.0;
  while (n > 0) {
    const double x = hi;
    const double y = partials[--n];
    hi = x + y;
    const double yr = hi - x;
    lo = y - yr;
    if (lo != 0.0) break;
  }
  // Round-half-even correction when the remaining partials push past a tie.
  if (n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0))) {
    const double y = lo * 2.0;
    const double x = hi + y;
    if (y == x - hi) hi = x;
  }
  return hi;
}

inline double exact_sum(const std::vector<double>& values) {
  return exact_sum(values, [](double v) { return v; });
}

inline double edge_weight_sum(const std::vector<WeightedEdge>& edges) {
  return exact_sum(edges, [](const WeightedEdge& e) { return e.weight; });
}

// Union-find with path halving and union by size.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1), sets_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Returns false when a and b were already connected.
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --sets_;
    return true;
  }

  std::size_t set_count() const { return sets_; }
  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::size_t sets_;
};

}  // namespace mfc

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

#include "mfc/common.hpp"

namespace mfc {

struct DenseVector {
  std::vector<double> coords;

  bool operator==(const DenseVector&) const = default;
};

// Token ids, strictly increasing.
struct TokenSet {
  std::vector<std::uint32_t> ids;

  bool operator==(const TokenSet&) const = default;
};

// Compared byte by byte.
struct Text {
  std::string bytes;

  bool operator==(const Text&) const = default;
};

// Fixed-length symbol string; every Sequence in a space has the same length.
struct Sequence {
  std::string symbols;

  bool operator==(const Sequence&) const = default;
};

using Point = std::variant<DenseVector, TokenSet, Text, Sequence>;

enum class MetricKind { Euclidean, Hamming, Jaccard, Levenshtein, ChebyshevLinf };

inline std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::Euclidean: return "euclidean";
    case MetricKind::Hamming: return "hamming";
    case MetricKind::Jaccard: return "jaccard";
    case MetricKind::Levenshtein: return "levenshtein";
    case MetricKind::ChebyshevLinf: return "linf";
  }
  return "?";
}

inline std::optional<MetricKind> parse_metric(std::string_view name) {
  for (auto kind : {MetricKind::Euclidean, MetricKind::Hamming, MetricKind::Jaccard,
                    MetricKind::Levenshtein, MetricKind::ChebyshevLinf}) {
    if (name == to_string(kind)) return kind;
  }
  if (name == "chebyshev") return MetricKind::ChebyshevLinf;
  return std::nullopt;
}

namespace metrics {

inline double euclidean(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

inline double chebyshev(std::span<const double> a, std::span<const double> b) {
  double best = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) best = std::max(best, std::fabs(a[k] - b[k]));
  return best;
}

inline double hamming(std::string_view a, std::string_view b) {
  std::size_t mismatches = 0;
  for (std::size_t k = 0; k < a.size(); ++k) mismatches += a[k] != b[k];
  return static_cast<double>(mismatches);
}

// 1 - |A n B| / |A u B|, and 0 for two empty sets.
inline double jaccard(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  std::size_t common = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  const std::size_t unite = a.size() + b.size() - common;
  if (unite == 0) return 0.0;
  return 1.0 - static_cast<double>(common) / static_cast<double>(unite);
}

// Unit-cost edit distance, two-row DP over the shorter string.
inline double levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t subst = diag + (a[i - 1] != b[j - 1] ? 1 : 0);
      row[j] = std::min({up + 1, row[j - 1] + 1, subst});
      diag = up;
    }
  }
  return static_cast<double>(row[b.size()]);
}

}  // namespace metrics

inline bool compatible(MetricKind kind, const Point& p) {
  switch (kind) {
    case MetricKind::Euclidean:
    case MetricKind::ChebyshevLinf: return std::holds_alternative<DenseVector>(p);
    case MetricKind::Hamming: return std::holds_alternative<Sequence>(p);
    case MetricKind::Jaccard: return std::holds_alternative<TokenSet>(p);
    case MetricKind::Levenshtein: return std::holds_alternative<Text>(p);
  }
  return false;
}

/// A point collection, a metric, and a counter of distance evaluations.
///
/// Points are validated once at construction; distance() never throws for
/// valid indices. The point storage is shared and immutable, so
/// with_fresh_counter() gives an independent view for a separate run whose
/// query count starts at zero. The counter is atomic, so distance() may be
/// called from several threads at once.
class MetricSpace {
 public:
  MetricSpace(std::vector<Point> points, MetricKind metric)
      : points_(std::make_shared<const std::vector<Point>>(std::move(points))), metric_(metric) {
    validate();
  }

  MetricSpace(const MetricSpace& other)
      : points_(other.points_), metric_(other.metric_), queries_(other.query_count()) {}
  MetricSpace& operator=(const MetricSpace& other) {
    points_ = other.points_;
    metric_ = other.metric_;
    queries_.store(other.query_count());
    return *this;
  }

  MetricSpace with_fresh_counter() const {
    MetricSpace copy(*this);
    copy.queries_.store(0);
    return copy;
  }

  std::size_t size() const { return points_->size(); }
  MetricKind metric() const { return metric_; }
  const Point& point(PointId i) const { return (*points_)[i]; }
  const std::vector<Point>& points() const { return *points_; }

  std::uint64_t query_count() const { return queries_.load(std::memory_order_relaxed); }

  /// d(x_i, x_j). Arguments are ordered internally so d(i,j) and d(j,i) are
  /// bitwise identical.
  double distance(PointId i, PointId j) const {
    queries_.fetch_add(1, std::memory_order_relaxed);
    if (i > j) std::swap(i, j);
    return raw_distance(point(i), point(j));
  }

  /// Distance between two points of this space's kind, without counting.
  /// Used by oracles that must not disturb the counter.
  double raw_distance(const Point& a, const Point& b) const {
    switch (metric_) {
      case MetricKind::Euclidean:
        return metrics::euclidean(std::get<DenseVector>(a).coords, std::get<DenseVector>(b).coords);
      case MetricKind::ChebyshevLinf:
        return metrics::chebyshev(std::get<DenseVector>(a).coords, std::get<DenseVector>(b).coords);
      case MetricKind::Hamming:
        return metrics::hamming(std::get<Sequence>(a).symbols, std::get<Sequence>(b).symbols);
      case MetricKind::Jaccard:
        return metrics::jaccard(std::get<TokenSet>(a).ids, std::get<TokenSet>(b).ids);
      case MetricKind::Levenshtein:
        return metrics::levenshtein(std::get<Text>(a).bytes, std::get<Text>(b).bytes);
    }
    return 0.0;
  }

 private:
  void validate() const {
    std::optional<std::size_t> width;
    for (std::size_t i = 0; i < points_->size(); ++i) {
      const Point& p = (*points_)[i];
      if (!compatible(metric_, p)) {
        throw ConfigError("point " + std::to_string(i) + " is incompatible with metric " +
                          std::string(to_string(metric_)));
      }
      std::size_t w = 0;
      if (const auto* v = std::get_if<DenseVector>(&p)) {
        w = v->coords.size();
      } else if (const auto* s = std::get_if<Sequence>(&p)) {
        w = s->symbols.size();
      } else if (const auto* t = std::get_if<TokenSet>(&p)) {
        for (std::size_t k = 1; k < t->ids.size(); ++k) {
          if (t->ids[k - 1] >= t->ids[k]) {
            throw ConfigError("token set " + std::to_string(i) + " is not strictly increasing");
          }
        }
        continue;
      } else {
        continue;
      }
      if (width && *width != w) {
        throw ConfigError("point " + std::to_string(i) + " has length " + std::to_string(w) +
                          ", expected " + std::to_string(*width));
      }
      width = w;
    }
  }

  std::shared_ptr<const std::vector<Point>> points_;
  MetricKind metric_;
  mutable std::atomic<std::uint64_t> queries_{0};
};

struct ClosestPair {
  double weight = 0.0;
  PointId a = 0;  // from the first set
  PointId b = 0;  // from the second set
};

namespace detail {

// Closest pair without the disjointness check; callers guarantee it.
inline ClosestPair closest_pair(const MetricSpace& space, std::span<const PointId> first,
                                std::span<const PointId> second) {
  ClosestPair best{std::numeric_limits<double>::infinity(), first[0], second[0]};
  bool found = false;
  for (PointId a : first) {
    for (PointId b : second) {
      const double d = space.distance(a, b);
      if (!found || std::tie(d, a, b) < std::tie(best.weight, best.a, best.b)) {
        best = {d, a, b};
        found = true;
      }
    }
  }
  return best;
}

}  // namespace detail

/// Bichromatic closest pair d(A, B) by exhaustive double loop: exactly
/// |A|*|B| distance queries. Ties go to the lexicographically smallest (a, b).
inline ClosestPair set_distance(const MetricSpace& space, std::span<const PointId> first,
                                std::span<const PointId> second) {
  if (first.empty() || second.empty()) throw ArgumentError("set_distance: empty point set");
  std::vector<PointId> a(first.begin(), first.end());
  std::vector<PointId> b(second.begin(), second.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<PointId> shared;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(shared));
  if (!shared.empty()) {
    throw ArgumentError("set_distance: sets overlap at point " + std::to_string(shared.front()));
  }
  if (a.back() >= space.size() || b.back() >= space.size()) {
    throw ArgumentError("set_distance: point index out of range");
  }
  return detail::closest_pair(space, first, second);
}

}  // namespace mfc

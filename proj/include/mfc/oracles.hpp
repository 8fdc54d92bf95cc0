#pragma once

// Brute-force reference implementations. They share no code paths with the
// algorithms they check: distances come from raw_distance over explicit
// matrices, MSTs from a relabelling Kruskal, and every optimum from plain
// enumeration.

#include <algorithm>
#include <functional>
#include <limits>
#include <span>
#include <string_view>
#include <tuple>
#include <vector>

#include "mfc/common.hpp"
#include "mfc/metric.hpp"

namespace mfc::oracle {

using Matrix = std::vector<std::vector<double>>;

/// Full distance matrix over the whole space; leaves the query counter alone.
inline Matrix distance_matrix(const MetricSpace& space) {
  const std::size_t n = space.size();
  Matrix d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = space.raw_distance(space.point(i), space.point(j));
  }
  return d;
}

/// Edit distance from the full (|a|+1) x (|b|+1) table.
inline double levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::vector<std::size_t>> table(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
  for (std::size_t i = 0; i <= a.size(); ++i) table[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) table[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t del = table[i - 1][j] + 1;
      const std::size_t ins = table[i][j - 1] + 1;
      const std::size_t sub = table[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      table[i][j] = std::min(del, std::min(ins, sub));
    }
  }
  return static_cast<double>(table[a.size()][b.size()]);
}

/// MST weights over the nodes listed in `nodes`, by Kruskal with component
/// relabelling (no union-find). Returns the accepted weights.
inline std::vector<double> kruskal_weights(const Matrix& d, std::span<const std::size_t> nodes) {
  std::vector<std::tuple<double, std::size_t, std::size_t>> edges;
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) edges.emplace_back(d[nodes[a]][nodes[b]], a, b);
  }
  std::sort(edges.begin(), edges.end());
  std::vector<std::size_t> label(nodes.size());
  for (std::size_t a = 0; a < nodes.size(); ++a) label[a] = a;
  std::vector<double> accepted;
  for (const auto& [w, a, b] : edges) {
    const std::size_t la = label[a];
    const std::size_t lb = label[b];
    if (la == lb) continue;
    for (auto& l : label) {
      if (l == lb) l = la;
    }
    accepted.push_back(w);
  }
  return accepted;
}

inline std::vector<double> kruskal_weights(const Matrix& d) {
  std::vector<std::size_t> all(d.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return kruskal_weights(d, all);
}

/// O(t^2) Prim on a dense symmetric matrix; returns the tree weight.
inline double prim_weight(const Matrix& w) {
  const std::size_t t = w.size();
  if (t <= 1) return 0.0;
  std::vector<double> key(t, std::numeric_limits<double>::infinity());
  std::vector<bool> in(t, false);
  key[0] = 0.0;
  std::vector<double> taken;
  for (std::size_t step = 0; step < t; ++step) {
    std::size_t u = t;
    for (std::size_t v = 0; v < t; ++v) {
      if (!in[v] && (u == t || key[v] < key[u])) u = v;
    }
    in[u] = true;
    if (step > 0) taken.push_back(key[u]);
    for (std::size_t v = 0; v < t; ++v) {
      if (!in[v] && w[u][v] < key[v]) key[v] = w[u][v];
    }
  }
  return exact_sum(taken);
}

/// min over A x B of d.
inline double double_loop_min(const Matrix& d, std::span<const PointId> a, std::span<const PointId> b) {
  double best = std::numeric_limits<double>::infinity();
  for (auto x : a) {
    for (auto y : b) best = std::min(best, d[x][y]);
  }
  return best;
}

/// max over members of min over reps of d.
inline double max_min(const Matrix& d, std::span<const PointId> members, std::span<const PointId> reps) {
  double worst = 0.0;
  for (auto x : members) {
    double near = std::numeric_limits<double>::infinity();
    for (auto r : reps) near = std::min(near, d[x][r]);
    worst = std::max(worst, near);
  }
  return worst;
}

/// Calls visit(subset) for every k-subset of `items`.
inline void for_each_subset(std::span<const PointId> items, std::size_t k,
                            const std::function<void(const std::vector<PointId>&)>& visit) {
  std::vector<PointId> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (chosen.size() == k) {
      visit(chosen);
      return;
    }
    for (std::size_t q = from; q + (k - chosen.size()) <= items.size(); ++q) {
      chosen.push_back(items[q]);
      rec(q + 1);
      chosen.pop_back();
    }
  };
  rec(0);
}

/// Optimal k-center radius over all k-subsets of `members`.
inline double optimal_kcenter_radius(const Matrix& d, std::span<const PointId> members, std::size_t k) {
  double best = std::numeric_limits<double>::infinity();
  for_each_subset(members, k, [&](const std::vector<PointId>& centers) {
    best = std::min(best, max_min(d, members, centers));
  });
  return best;
}

struct Composition {
  std::vector<std::size_t> counts;
  double objective = std::numeric_limits<double>::infinity();
};

/// Enumerates every composition b_1 + ... + b_t = b (b_i >= 0) and returns a
/// minimiser of the left-to-right sum of curve[i][b_i]. Among minimisers the
/// one that is lexicographically largest when read from the last component
/// backwards is returned. curves[i] must have at least b + 1 entries, where
/// curves[i][j] is the cost with j extra representatives.
inline Composition best_composition(const std::vector<std::vector<double>>& curves, std::size_t b) {
  const std::size_t t = curves.size();
  Composition best;
  std::vector<std::size_t> counts(t, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
    if (i + 1 == t) {
      counts[i] = left;
      double total = 0.0;
      for (std::size_t c = 0; c < t; ++c) total += curves[c][counts[c]];
      bool better = total < best.objective;
      if (!better && total == best.objective) {
        better = std::lexicographical_compare(best.counts.rbegin(), best.counts.rend(), counts.rbegin(), counts.rend());
      }
      if (better) best = {counts, total};
      return;
    }
    for (std::size_t e = 0; e <= left; ++e) {
      counts[i] = e;
      rec(i + 1, left - e);
    }
  };
  if (t > 0) rec(0, b);
  return best;
}

}  // namespace mfc::oracle

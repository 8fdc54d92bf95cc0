#pragma once

#include <algorithm>
#include <limits>
#include <span>
#include <tuple>
#include <vector>

#include "mfc/common.hpp"
#include "mfc/metric.hpp"

namespace mfc {

/// Kruskal over an explicit edge list on nodes [0, n). Edges are taken in
/// (weight, u, v) order; the result lists the accepted edges in that order.
/// Stops early once `target_components` components remain.
inline std::vector<WeightedEdge> kruskal(std::size_t n, std::vector<WeightedEdge> edges,
                                         std::size_t target_components = 1) {
  std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return std::tie(a.weight, a.u, a.v) < std::tie(b.weight, b.u, b.v);
  });
  DisjointSets sets(n);
  std::vector<WeightedEdge> tree;
  for (const auto& e : edges) {
    if (sets.set_count() <= target_components) break;
    if (sets.unite(e.u, e.v)) tree.push_back(e);
  }
  return tree;
}

/// All n(n-1)/2 pairwise edges of the space, one distance query each.
inline std::vector<WeightedEdge> all_pairs(const MetricSpace& space) {
  const std::size_t n = space.size();
  std::vector<WeightedEdge> edges;
  edges.reserve(n * (n - (n > 0)) / 2);
  for (PointId u = 0; u < n; ++u) {
    for (PointId v = u + 1; v < n; ++v) edges.push_back({u, v, space.distance(u, v)});
  }
  return edges;
}

/// Dense Prim on the complete graph over `members`, rooted at members[0].
/// Uses |m|(|m|-1)/2 distance queries. Among equal keys the vertex that
/// appears first in `members` is taken, and a key only improves on a strictly
/// smaller distance, so the result is deterministic.
inline std::vector<WeightedEdge> dense_prim(const MetricSpace& space, std::span<const PointId> members) {
  const std::size_t m = members.size();
  std::vector<WeightedEdge> tree;
  if (m <= 1) return tree;
  tree.reserve(m - 1);

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> key(m, inf);
  std::vector<std::size_t> parent(m, 0);
  std::vector<bool> done(m, false);

  std::size_t current = 0;
  done[0] = true;
  for (std::size_t step = 1; step < m; ++step) {
    std::size_t next = m;
    for (std::size_t k = 0; k < m; ++k) {
      if (done[k]) continue;
      const double d = space.distance(members[current], members[k]);
      if (d < key[k]) {
        key[k] = d;
        parent[k] = current;
      }
      if (next == m || key[k] < key[next]) next = k;
    }
    done[next] = true;
    tree.push_back(make_edge(members[parent[next]], members[next], key[next]));
    current = next;
  }
  return tree;
}

/// True when `edges` form a spanning tree of nodes [0, n).
inline bool is_spanning_tree(std::size_t n, std::span<const WeightedEdge> edges) {
  if (n == 0) return edges.empty();
  if (edges.size() != n - 1) return false;
  DisjointSets sets(n);
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n || !sets.unite(e.u, e.v)) return false;
  }
  return sets.set_count() == 1;
}

}  // namespace mfc

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <thread>
#include <tuple>
#include <vector>

#include "mfc/common.hpp"
#include "mfc/forest.hpp"
#include "mfc/metric.hpp"
#include "mfc/representatives.hpp"

namespace mfc {

/// Complete graph on the t components. Entry (i, j) stores the weight and the
/// point pair realising it, with witness.a in P_i and witness.b in P_j.
class CoarsenedGraph {
 public:
  explicit CoarsenedGraph(std::size_t t) : t_(t), cells_(t * t) {}

  std::size_t components() const { return t_; }
  double weight(std::size_t i, std::size_t j) const { return cells_[i * t_ + j].weight; }
  const ClosestPair& witness(std::size_t i, std::size_t j) const { return cells_[i * t_ + j]; }

  void set(std::size_t i, std::size_t j, const ClosestPair& pair) {
    cells_[i * t_ + j] = pair;
    cells_[j * t_ + i] = {pair.weight, pair.b, pair.a};
  }

  std::uint64_t distance_calls = 0;
  double elapsed_ms = 0.0;

 private:
  std::size_t t_;
  std::vector<ClosestPair> cells_;
};

struct CompletionResult {
  std::vector<WeightedEdge> added_edges;
  std::vector<WeightedEdge> forest_edges;
  double tree_weight = 0.0;
  double forest_weight = 0.0;
  double added_weight = 0.0;
  std::uint64_t distance_calls = 0;
  double elapsed_ms = 0.0;

  std::size_t points() const { return forest_edges.size() + added_edges.size() + 1; }
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline void check_space(const MetricSpace& space, const InitialForest& forest) {
  if (forest.points() != space.size()) {
    throw ArgumentError("forest has " + std::to_string(forest.points()) + " points, space has " +
                        std::to_string(space.size()));
  }
}

inline double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Runs body(i, j) for every pair i < j of [0, t) on `workers` threads. Each
// pair writes only its own cell, so the outcome does not depend on the schedule.
template <typename Body>
void for_each_pair(std::size_t t, std::size_t workers, Body body) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(t * (t - (t > 0)) / 2);
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = i + 1; j < t; ++j) pairs.emplace_back(i, j);
  }
  workers = std::max<std::size_t>(1, std::min(workers, pairs.size()));
  if (workers == 1) {
    for (auto [i, j] : pairs) body(i, j);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < pairs.size(); k = next++) body(pairs[k].first, pairs[k].second);
    });
  }
}

}  // namespace detail

/// w*(i, j) = d(P_i, P_j) by full bichromatic closest pair for every pair:
/// sum_{i<j} |P_i||P_j| distance queries.
inline CoarsenedGraph exact_coarsened(const MetricSpace& space, const InitialForest& forest, std::size_t workers = 1) {
  const std::size_t t = forest.components();
  if (t < 2) throw ArgumentError("exact_coarsened needs at least two components");
  detail::check_space(space, forest);
  const auto start = detail::Clock::now();
  const auto before = space.query_count();
  CoarsenedGraph graph(t);
  detail::for_each_pair(t, workers, [&](std::size_t i, std::size_t j) {
    graph.set(i, j, detail::closest_pair(space, forest.members(i), forest.members(j)));
  });
  graph.distance_calls = space.query_count() - before;
  graph.elapsed_ms = detail::ms_since(start);
  return graph;
}

/// w^(i, j) = min(d(P_i, R_j), d(P_j, R_i)); on equal values the P_i-to-R_j
/// pair is kept. sum_{i<j} (|P_i||R_j| + |P_j||R_i|) distance queries.
inline CoarsenedGraph multirep_coarsened(const MetricSpace& space, const InitialForest& forest,
                                         const RepAssignment& reps, std::size_t workers = 1) {
  detail::check_space(space, forest);
  validate(reps, forest);
  const std::size_t t = forest.components();
  const auto start = detail::Clock::now();
  const auto before = space.query_count();
  CoarsenedGraph graph(t);
  detail::for_each_pair(t, workers, [&](std::size_t i, std::size_t j) {
    const auto into_j = detail::closest_pair(space, forest.members(i), reps.reps[j]);
    auto into_i = detail::closest_pair(space, forest.members(j), reps.reps[i]);
    if (into_i.weight < into_j.weight) {
      graph.set(i, j, {into_i.weight, into_i.b, into_i.a});
    } else {
      graph.set(i, j, into_j);
    }
  });
  graph.distance_calls = space.query_count() - before;
  graph.elapsed_ms = detail::ms_since(start);
  return graph;
}

/// Kruskal on the coarsened graph with (weight, i, j) order; t - 1 pairs, i < j.
inline std::vector<std::pair<std::size_t, std::size_t>> coarsened_mst(const CoarsenedGraph& graph) {
  const std::size_t t = graph.components();
  std::vector<std::tuple<double, std::size_t, std::size_t>> edges;
  edges.reserve(t * (t - (t > 0)) / 2);
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = i + 1; j < t; ++j) edges.emplace_back(graph.weight(i, j), i, j);
  }
  std::sort(edges.begin(), edges.end());
  DisjointSets sets(t);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& [w, i, j] : edges) {
    if (sets.set_count() == 1) break;
    if (sets.unite(i, j)) out.emplace_back(i, j);
  }
  return out;
}

/// Combines the forest with the witness edges of the coarsened MST and checks
/// that the result spans all points.
///
/// tree_weight is the correctly rounded sum of all n - 1 tree edge weights,
/// so it equals any other tree's total whenever the weight multisets agree.
/// forest_weight and added_weight are the correctly rounded sums of their
/// parts.
inline CompletionResult complete(const InitialForest& forest, const CoarsenedGraph& graph) {
  if (graph.components() != forest.components()) throw ArgumentError("coarsened graph does not match the forest");
  const auto start = detail::Clock::now();
  CompletionResult out;
  out.forest_edges = forest.edges();
  for (auto [i, j] : coarsened_mst(graph)) {
    const auto& pair = graph.witness(i, j);
    out.added_edges.push_back(make_edge(pair.a, pair.b, pair.weight));
  }
  std::vector<WeightedEdge> tree = out.forest_edges;
  tree.insert(tree.end(), out.added_edges.begin(), out.added_edges.end());
  if (!is_spanning_tree(forest.points(), tree)) {
    throw ConsistencyError("completion is not a spanning tree; coarsened witnesses are corrupt");
  }
  out.forest_weight = forest.forest_weight;
  out.added_weight = edge_weight_sum(out.added_edges);
  out.tree_weight = edge_weight_sum(tree);
  out.distance_calls = graph.distance_calls;
  out.elapsed_ms = graph.elapsed_ms + detail::ms_since(start);
  return out;
}

namespace detail {

inline CompletionResult single_component(const InitialForest& forest) {
  CompletionResult out;
  out.forest_edges = forest.edges();
  out.forest_weight = forest.forest_weight;
  out.tree_weight = forest.forest_weight;
  return out;
}

}  // namespace detail

/// Optimal forest completion: MST of the exact coarsened graph.
inline CompletionResult mfc_opt(const MetricSpace& space, const InitialForest& forest, std::size_t workers = 1) {
  detail::check_space(space, forest);
  if (forest.components() == 1) return detail::single_component(forest);
  return complete(forest, exact_coarsened(space, forest, workers));
}

/// Multi-representative completion: only edges touching a representative.
inline CompletionResult multirep_mfc(const MetricSpace& space, const InitialForest& forest,
                                     const RepAssignment& reps, std::size_t workers = 1) {
  detail::check_space(space, forest);
  if (forest.components() == 1) {
    validate(reps, forest);
    return detail::single_component(forest);
  }
  return complete(forest, multirep_coarsened(space, forest, reps, workers));
}

// Text format: a '#' stats line, then "u v w" for every tree edge
// (forest edges first, then added edges).
inline void write_tree(std::ostream& out, const CompletionResult& result) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "# n=%zu added=%zu tree_weight=%.17g forest_weight=%.17g added_weight=%.17g distance_calls=%llu\n",
                result.points(), result.added_edges.size(), result.tree_weight, result.forest_weight,
                result.added_weight, static_cast<unsigned long long>(result.distance_calls));
  out << buf;
  for (const auto* part : {&result.forest_edges, &result.added_edges}) {
    for (const auto& e : *part) {
      std::snprintf(buf, sizeof buf, "%zu %zu %.17g\n", e.u, e.v, e.weight);
      out << buf;
    }
  }
}

}  // namespace mfc

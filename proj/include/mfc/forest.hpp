#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "mfc/common.hpp"
#include "mfc/metric.hpp"
#include "mfc/mst.hpp"

namespace mfc {

// Builders that materialise every pairwise distance refuse larger inputs.
inline constexpr std::size_t kMaxDensePoints = 5000;

/// Partition of point ids [0, n) into t nonempty components. members[i] is
/// sorted ascending and agrees with assignment.
struct Partition {
  std::vector<std::size_t> assignment;
  std::vector<std::vector<PointId>> members;

  std::size_t points() const { return assignment.size(); }
  std::size_t components() const { return members.size(); }

  static Partition from_assignment(std::vector<std::size_t> assignment, std::size_t t) {
    Partition p;
    p.members.resize(t);
    for (PointId x = 0; x < assignment.size(); ++x) {
      if (assignment[x] >= t) {
        throw ArgumentError("point " + std::to_string(x) + " assigned to component " +
                            std::to_string(assignment[x]) + " of " + std::to_string(t));
      }
      p.members[assignment[x]].push_back(x);
    }
    for (std::size_t c = 0; c < t; ++c) {
      if (p.members[c].empty()) throw ArgumentError("component " + std::to_string(c) + " is empty");
    }
    p.assignment = std::move(assignment);
    return p;
  }
};

/// A partition plus one spanning tree per component.
struct InitialForest {
  Partition partition;
  std::vector<std::vector<WeightedEdge>> trees;
  double forest_weight = 0.0;

  std::size_t points() const { return partition.points(); }
  std::size_t components() const { return partition.components(); }
  const std::vector<PointId>& members(std::size_t c) const { return partition.members[c]; }

  std::vector<WeightedEdge> edges() const {
    std::vector<WeightedEdge> all;
    for (const auto& tree : trees) all.insert(all.end(), tree.begin(), tree.end());
    return all;
  }
};

/// Checks every structural invariant of a forest; throws ConsistencyError.
inline void validate(const InitialForest& forest) {
  const auto& part = forest.partition;
  if (forest.trees.size() != part.components()) {
    throw ConsistencyError("forest has " + std::to_string(forest.trees.size()) + " trees for " +
                           std::to_string(part.components()) + " components");
  }
  DisjointSets sets(part.points());
  std::size_t edge_count = 0;
  for (std::size_t c = 0; c < part.components(); ++c) {
    const auto& tree = forest.trees[c];
    if (tree.size() + 1 != part.members[c].size()) {
      throw ConsistencyError("component " + std::to_string(c) + " tree has " + std::to_string(tree.size()) +
                             " edges for " + std::to_string(part.members[c].size()) + " points");
    }
    for (const auto& e : tree) {
      if (e.u >= part.points() || e.v >= part.points() || part.assignment[e.u] != c ||
          part.assignment[e.v] != c) {
        throw ConsistencyError("edge leaves component " + std::to_string(c));
      }
      if (!sets.unite(e.u, e.v)) throw ConsistencyError("cycle in component " + std::to_string(c));
    }
    edge_count += tree.size();
  }
  if (edge_count + part.components() != part.points()) throw ConsistencyError("forest edge count mismatch");
}

inline InitialForest make_forest(Partition partition, std::vector<std::vector<WeightedEdge>> trees) {
  InitialForest forest{std::move(partition), std::move(trees), 0.0};
  for (auto& tree : forest.trees) {
    for (auto& e : tree) e = make_edge(e.u, e.v, e.weight);
  }
  validate(forest);
  forest.forest_weight = edge_weight_sum(forest.edges());
  return forest;
}

struct KCenterResult {
  std::vector<PointId> centers;     // in selection order
  std::vector<double> radii;        // radii[j]: covering radius of the first j+1 centers
  std::vector<std::size_t> nearest; // per member position: selection order of its center
};

/// Farthest-first traversal (Gonzalez) over `members`, starting from point
/// `first`. Exactly k * |members| distance queries.
///
/// The next center is the non-center member with the largest distance to the
/// current centers; ties go to the smallest point id. A member's nearest
/// center only changes on a strictly smaller distance, so ties keep the
/// earlier center. Each center is always assigned to itself, which keeps
/// every cluster nonempty even with duplicate points.
inline KCenterResult gonzalez_kcenter(const MetricSpace& space, std::span<const PointId> members, std::size_t k,
                                      PointId first) {
  const std::size_t m = members.size();
  if (k < 1 || k > m) {
    throw ArgumentError("k-center: k=" + std::to_string(k) + " outside [1, " + std::to_string(m) + "]");
  }
  const auto first_it = std::find(members.begin(), members.end(), first);
  if (first_it == members.end()) throw ArgumentError("k-center: first center is not a member");

  KCenterResult out;
  out.centers.reserve(k);
  out.radii.reserve(k);
  out.nearest.assign(m, 0);
  std::vector<double> gap(m, std::numeric_limits<double>::infinity());
  std::vector<bool> is_center(m, false);

  std::size_t pick = static_cast<std::size_t>(first_it - members.begin());
  for (std::size_t j = 0; j < k; ++j) {
    if (j > 0) {
      pick = m;
      for (std::size_t q = 0; q < m; ++q) {
        if (is_center[q]) continue;
        if (pick == m || gap[q] > gap[pick] || (gap[q] == gap[pick] && members[q] < members[pick])) pick = q;
      }
    }
    is_center[pick] = true;
    out.centers.push_back(members[pick]);
    double radius = 0.0;
    for (std::size_t q = 0; q < m; ++q) {
      const double d = space.distance(members[pick], members[q]);
      if (d < gap[q]) {
        gap[q] = d;
        out.nearest[q] = j;
      }
      radius = std::max(radius, gap[q]);
    }
    out.nearest[pick] = j;
    out.radii.push_back(radius);
  }
  return out;
}

/// Exact MST of the complete graph on `members` (dense Prim).
inline std::vector<WeightedEdge> exact_component_mst(const MetricSpace& space, std::span<const PointId> members) {
  if (members.empty()) throw ArgumentError("exact_component_mst: no members");
  return dense_prim(space, members);
}

/// k-center partition with k = t (component id = center selection order),
/// then an exact MST inside every component.
inline InitialForest build_initial_forest(const MetricSpace& space, std::size_t t, PointId first = 0) {
  const std::size_t n = space.size();
  if (t < 1 || t > n) throw ArgumentError("t=" + std::to_string(t) + " outside [1, " + std::to_string(n) + "]");
  if (first >= n) throw ArgumentError("first center out of range");
  std::vector<PointId> all(n);
  std::iota(all.begin(), all.end(), PointId{0});
  auto kc = gonzalez_kcenter(space, all, t, first);
  auto partition = Partition::from_assignment(std::move(kc.nearest), t);

  std::vector<std::vector<WeightedEdge>> trees(t);
  for (std::size_t c = 0; c < t; ++c) trees[c] = exact_component_mst(space, partition.members[c]);
  return make_forest(std::move(partition), std::move(trees));
}

/// Kruskal on the full distance matrix, stopped when t components remain.
/// Components are numbered by their smallest point id.
inline InitialForest truncated_kruskal_forest(const MetricSpace& space, std::size_t t) {
  const std::size_t n = space.size();
  if (t < 1 || t > n) throw ArgumentError("t=" + std::to_string(t) + " outside [1, " + std::to_string(n) + "]");
  if (n > kMaxDensePoints) throw SizeError("truncated Kruskal refuses n=" + std::to_string(n));
  const auto accepted = kruskal(n, all_pairs(space), t);

  DisjointSets sets(n);
  for (const auto& e : accepted) sets.unite(e.u, e.v);
  std::vector<std::size_t> label(n, n);
  std::vector<std::size_t> assignment(n);
  std::size_t next = 0;
  for (PointId x = 0; x < n; ++x) {
    const auto root = sets.find(x);
    if (label[root] == n) label[root] = next++;
    assignment[x] = label[root];
  }
  std::vector<std::vector<WeightedEdge>> trees(next);
  for (const auto& e : accepted) trees[assignment[e.u]].push_back(e);
  auto partition = Partition::from_assignment(std::move(assignment), next);
  return make_forest(std::move(partition), std::move(trees));
}

struct GammaResult {
  double gamma = 1.0;
  bool weight_ties = false;   // some pairwise distances coincided
  bool undefined = false;     // no MST edge inside a component but the forest has weight
};

/// gamma = w(E_t) / max over MSTs T of w(T(P)).
///
/// One Kruskal run over all pairs computes the maximum exactly: equal-weight
/// edges are ordered with internal (same-component) edges first, which is
/// Kruskal on an infinitesimal perturbation that favours internal edges. Its
/// result is an MST for the original weights and, among those, one with the
/// largest internal weight.
inline GammaResult gamma_overlap(const MetricSpace& space, const InitialForest& forest) {
  const std::size_t n = space.size();
  if (forest.points() != n) throw ArgumentError("forest does not match the space");
  if (n > kMaxDensePoints) throw SizeError("gamma_overlap refuses n=" + std::to_string(n));
  const auto& comp = forest.partition.assignment;

  auto edges = all_pairs(space);
  auto external = [&](const WeightedEdge& e) { return comp[e.u] != comp[e.v]; };
  std::sort(edges.begin(), edges.end(), [&](const WeightedEdge& a, const WeightedEdge& b) {
    return std::make_tuple(a.weight, external(a), a.u, a.v) < std::make_tuple(b.weight, external(b), b.u, b.v);
  });

  GammaResult out;
  for (std::size_t k = 1; k < edges.size(); ++k) {
    if (edges[k].weight == edges[k - 1].weight) {
      out.weight_ties = true;
      break;
    }
  }

  DisjointSets sets(n);
  std::vector<WeightedEdge> inside;
  for (const auto& e : edges) {
    if (sets.set_count() == 1) break;
    if (sets.unite(e.u, e.v) && !external(e)) inside.push_back(e);
  }
  const double denominator = edge_weight_sum(inside);
  const double numerator = forest.forest_weight;
  if (denominator == 0.0) {
    if (numerator == 0.0) return out;
    out.gamma = std::numeric_limits<double>::infinity();
    out.undefined = true;
    return out;
  }
  out.gamma = numerator / denominator;
  return out;
}

// Text format:
//   n t
//   c_0 c_1 ... c_{n-1}        component of every point
//   u v w c                    one line per forest edge
inline void write_forest(std::ostream& out, const InitialForest& forest) {
  out << forest.points() << ' ' << forest.components() << '\n';
  for (PointId x = 0; x < forest.points(); ++x) {
    if (x) out << ' ';
    out << forest.partition.assignment[x];
  }
  out << '\n';
  char buf[64];
  for (std::size_t c = 0; c < forest.components(); ++c) {
    for (const auto& e : forest.trees[c]) {
      std::snprintf(buf, sizeof buf, "%.17g", e.weight);
      out << e.u << ' ' << e.v << ' ' << buf << ' ' << c << '\n';
    }
  }
}

inline InitialForest read_forest(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> std::istringstream {
    if (!std::getline(in, line)) throw ParseError("forest: unexpected end of input after line " + std::to_string(line_no));
    ++line_no;
    return std::istringstream(line);
  };
  std::size_t n = 0;
  std::size_t t = 0;
  if (auto header = next_line(); !(header >> n >> t)) throw ParseError("forest: line 1: expected 'n t'");
  std::vector<std::size_t> assignment(n);
  if (n > 0) {
    auto row = next_line();
    for (auto& c : assignment) {
      if (!(row >> c)) throw ParseError("forest: line 2: expected " + std::to_string(n) + " component ids");
    }
  }
  std::vector<std::vector<WeightedEdge>> trees(t);
  for (std::size_t k = 0; k + t < n; ++k) {
    auto row = next_line();
    WeightedEdge e;
    std::size_t c = 0;
    if (!(row >> e.u >> e.v >> e.weight >> c) || c >= t) {
      throw ParseError("forest: line " + std::to_string(line_no) + ": expected 'u v w c'");
    }
    trees[c].push_back(e);
  }
  try {
    return make_forest(Partition::from_assignment(std::move(assignment), t), std::move(trees));
  } catch (const Error& e) {
    throw ParseError(std::string("forest: ") + e.what());
  }
}

}  // namespace mfc

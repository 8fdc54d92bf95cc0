#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <vector>

#include "mfc/common.hpp"
#include "mfc/completion.hpp"
#include "mfc/forest.hpp"
#include "mfc/metric.hpp"
#include "mfc/mst.hpp"
#include "mfc/representatives.hpp"

namespace mfc {

struct BoundReport {
  double cost = 0.0;           // sum_i max_{x in P_i} min_{r in R_i} d(x, r)
  double forest_weight = 0.0;
  double alpha = 1.0;
  double epsilon_alpha = 0.0;  // alpha - 1
  std::optional<double> cost_ratio;
  std::optional<double> completion_ratio;
  std::optional<double> epsilon;  // cost_ratio - 1
};

/// alpha = 1 + cost / forest_weight. A weightless forest gives 1 when the cost
/// is also zero and +infinity otherwise.
inline BoundReport alpha_from_cost(double cost, double forest_weight) {
  BoundReport out;
  out.cost = cost;
  out.forest_weight = forest_weight;
  if (forest_weight > 0.0) {
    out.alpha = 1.0 + cost / forest_weight;
  } else {
    out.alpha = cost > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  out.epsilon_alpha = out.alpha - 1.0;
  return out;
}

/// Evaluates cost(P, R) directly (|P_i||R_i| queries per component) and the
/// resulting bound.
inline BoundReport alpha_bound(const MetricSpace& space, const InitialForest& forest, const RepAssignment& reps) {
  validate(reps, forest);
  std::vector<double> costs;
  for (std::size_t i = 0; i < forest.components(); ++i) costs.push_back(cost_of(space, forest.members(i), reps.reps[i]));
  return alpha_from_cost(exact_sum(costs), forest.forest_weight);
}

struct Ratios {
  double cost_ratio = 1.0;
  std::optional<double> completion_ratio;  // absent when the optimum adds nothing
};

inline Ratios ratios(const CompletionResult& approx, const CompletionResult& opt) {
  if (approx.forest_weight != opt.forest_weight || approx.added_edges.size() != opt.added_edges.size() ||
      approx.forest_edges.size() != opt.forest_edges.size()) {
    throw ArgumentError("ratios: results come from different forests");
  }
  Ratios out;
  if (opt.tree_weight > 0.0) {
    out.cost_ratio = approx.tree_weight / opt.tree_weight;
  } else {
    out.cost_ratio = approx.tree_weight > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  if (opt.added_weight > 0.0) out.completion_ratio = approx.added_weight / opt.added_weight;
  return out;
}

inline void attach_ratios(BoundReport& report, const Ratios& r) {
  report.cost_ratio = r.cost_ratio;
  report.completion_ratio = r.completion_ratio;
  report.epsilon = r.cost_ratio - 1.0;
}

struct TightInstance {
  MetricSpace space;
  InitialForest forest;
  RepAssignment reps;
  double predicted_ratio = 1.0;
  double predicted_opt_weight = 0.0;
  double predicted_approx_weight = 0.0;
};

/// Closed-form ratio ((2 + ell*eps - eps) p - 1) / ((1 + eps*ell) p - eps).
inline double tight_ratio(std::size_t p, std::size_t ell, double eps) {
  const double pp = static_cast<double>(p);
  const double ll = static_cast<double>(ell);
  return ((2.0 + ll * eps - eps) * pp - 1.0) / ((1.0 + eps * ll) * pp - eps);
}

/// Worst-case instance for multi-representative completion under the l_inf
/// metric.
///
/// p components of ell + 1 points each in dimension p + max(ell, p). Point
/// j = 0 of component i is eps * e_{p+i} ("small"); points j = 1..ell are
/// e_i + eps * e_{p+j} and are the representatives. Representatives of one
/// component are eps apart, small points are eps apart, every other pair is
/// at distance 1. Each component's tree is the path x^(0) - x^(1) - ... -
/// x^(ell). Point (i, j) has id i * (ell + 1) + j.
inline TightInstance tight_instance(std::size_t p, std::size_t ell, double eps) {
  if (p < 1 || ell < 1) throw ArgumentError("tight_instance needs p >= 1 and ell >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw ArgumentError("tight_instance needs eps in (0, 1)");
  const std::size_t dim = p + std::max(ell, p);
  const std::size_t per = ell + 1;

  std::vector<Point> points;
  points.reserve(p * per);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j <= ell; ++j) {
      std::vector<double> v(dim, 0.0);
      if (j == 0) {
        v[p + i] = eps;
      } else {
        v[i] = 1.0;
        v[p + j - 1] = eps;
      }
      points.push_back(DenseVector{std::move(v)});
    }
  }
  MetricSpace space(std::move(points), MetricKind::ChebyshevLinf);

  std::vector<std::size_t> assignment(p * per);
  std::vector<std::vector<WeightedEdge>> trees(p);
  RepAssignment reps;
  for (std::size_t i = 0; i < p; ++i) {
    std::vector<PointId> comp_reps;
    for (std::size_t j = 0; j <= ell; ++j) {
      const PointId id = i * per + j;
      assignment[id] = i;
      if (j > 0) {
        comp_reps.push_back(id);
        trees[i].push_back({id - 1, id, j == 1 ? 1.0 : eps});
      }
    }
    reps.reps.push_back(std::move(comp_reps));
  }
  reps.budget = reps.extra();
  auto forest = make_forest(Partition::from_assignment(std::move(assignment), p), std::move(trees));

  const double pp = static_cast<double>(p);
  const double ll = static_cast<double>(ell);
  return TightInstance{std::move(space),
                       std::move(forest),
                       std::move(reps),
                       tight_ratio(p, ell, eps),
                       (1.0 + eps * ll) * pp - eps,
                       (2.0 + eps * ll - eps) * pp - 1.0};
}

inline constexpr std::size_t kBruteForceMstPoints = 2000;

struct FullMst {
  double weight = 0.0;
  std::vector<WeightedEdge> edges;
};

/// Kruskal over all n(n-1)/2 distances, (weight, u, v) order.
inline FullMst brute_force_full_mst(const MetricSpace& space) {
  if (space.size() > kBruteForceMstPoints) {
    throw SizeError("brute_force_full_mst is limited to " + std::to_string(kBruteForceMstPoints) + " points");
  }
  FullMst out;
  out.edges = kruskal(space.size(), all_pairs(space));
  out.weight = edge_weight_sum(out.edges);
  return out;
}

}  // namespace mfc

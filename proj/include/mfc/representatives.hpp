#pragma once

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "mfc/common.hpp"
#include "mfc/forest.hpp"
#include "mfc/metric.hpp"

namespace mfc {

/// Per-component k-center cost curves.
///
/// values[i][j-1] is the covering radius of the first j greedy centers of
/// component i, for j = 1..budget+1, padded with zeros once every point of
/// the component is a center. centers[i] holds min(budget+1, |P_i|) centers
/// in selection order.
struct CostCurves {
  std::vector<std::vector<double>> values;
  std::vector<std::vector<PointId>> centers;
  std::vector<std::size_t> sizes;
  std::size_t budget = 0;

  std::size_t components() const { return values.size(); }
  // Cost with j representatives, j >= 1.
  double at(std::size_t component, std::size_t j) const { return values[component][j - 1]; }
  // Largest useful number of extra representatives for a component.
  std::size_t capacity(std::size_t component) const { return sizes[component] - 1; }
};

struct Allocation {
  std::vector<std::size_t> counts;  // extra representatives per component
  double objective = 0.0;           // sum_i c_i(counts_i + 1)
};

struct RepAssignment {
  std::vector<std::vector<PointId>> reps;
  std::size_t budget = 0;

  std::size_t components() const { return reps.size(); }
  std::size_t extra() const {
    std::size_t total = 0;
    for (const auto& r : reps) total += r.size() - 1;
    return total;
  }
};

/// max over members of the distance to the nearest rep; |members|*|reps| queries.
inline double cost_of(const MetricSpace& space, std::span<const PointId> members, std::span<const PointId> reps) {
  if (reps.empty()) throw ArgumentError("cost_of: no representatives");
  double worst = 0.0;
  for (PointId x : members) {
    double nearest = std::numeric_limits<double>::infinity();
    for (PointId r : reps) nearest = std::min(nearest, space.distance(x, r));
    worst = std::max(worst, nearest);
  }
  return worst;
}

/// One Gonzalez run per component with k = min(b+1, |P_i|), started from the
/// component's smallest point id. The radii sequence is the cost curve, so no
/// further distance queries are needed.
inline CostCurves build_cost_curves(const MetricSpace& space, const InitialForest& forest, std::size_t budget) {
  CostCurves curves;
  curves.budget = budget;
  const std::size_t t = forest.components();
  curves.values.resize(t);
  curves.centers.resize(t);
  curves.sizes.resize(t);
  for (std::size_t i = 0; i < t; ++i) {
    const auto& members = forest.members(i);
    const std::size_t k = std::min(budget + 1, members.size());
    auto kc = gonzalez_kcenter(space, members, k, members.front());
    curves.values[i] = std::move(kc.radii);
    curves.values[i].resize(budget + 1, 0.0);
    curves.centers[i] = std::move(kc.centers);
    curves.sizes[i] = members.size();
  }
  return curves;
}

namespace detail {

inline void check_covers(const CostCurves& curves, std::size_t budget) {
  for (const auto& v : curves.values) {
    if (v.size() < budget + 1) throw ArgumentError("cost curves do not cover budget " + std::to_string(budget));
  }
}

inline double objective_of(const CostCurves& curves, std::span<const std::size_t> counts) {
  double total = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) total += curves.at(i, counts[i] + 1);
  return total;
}

}  // namespace detail

/// Exact minimiser of sum_i c_i(b_i + 1) subject to sum_i b_i = b, b_i >= 0.
///
/// F(T, B) = min_{0 <= k <= B} F(T-1, k) + f_T(B - k), evaluated bottom-up in
/// O(t b^2) time with one rolling value layer and a t x (b+1) table of
/// argmins for reconstruction. Among equal values the smaller k wins.
///
/// Component i never receives more than |P_i| - 1 extras. Its curve is zero
/// from there on, so the cap cannot raise the optimum; when the total
/// capacity is below b, all capacity is used.
inline Allocation dp_allocate(const CostCurves& curves, std::size_t budget) {
  detail::check_covers(curves, budget);
  const std::size_t t = curves.components();
  Allocation out;
  out.counts.assign(t, 0);
  if (t == 0) return out;

  std::size_t total_capacity = 0;
  for (std::size_t i = 0; i < t; ++i) total_capacity += curves.capacity(i);
  const std::size_t b = std::min(budget, total_capacity);

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> layer(b + 1, inf);
  std::vector<double> next(b + 1, inf);
  // choice[T][B]: extras given to the first T components when F(T+1, B) is optimal.
  std::vector<std::vector<std::size_t>> choice(t, std::vector<std::size_t>(b + 1, 0));

  for (std::size_t B = 0; B <= std::min(b, curves.capacity(0)); ++B) layer[B] = curves.at(0, B + 1);
  for (std::size_t T = 1; T < t; ++T) {
    std::fill(next.begin(), next.end(), inf);
    const std::size_t cap = curves.capacity(T);
    for (std::size_t B = 0; B <= b; ++B) {
      const std::size_t k_lo = B > cap ? B - cap : 0;
      for (std::size_t k = k_lo; k <= B; ++k) {
        if (layer[k] == inf) continue;
        const double value = layer[k] + curves.at(T, B - k + 1);
        if (value < next[B]) {
          next[B] = value;
          choice[T][B] = k;
        }
      }
    }
    std::swap(layer, next);
  }

  std::size_t remaining = b;
  for (std::size_t T = t; T-- > 1;) {
    const std::size_t k = choice[T][remaining];
    out.counts[T] = remaining - k;
    remaining = k;
  }
  out.counts[0] = remaining;
  out.objective = detail::objective_of(curves, out.counts);
  return out;
}

/// Repeatedly gives one extra representative to the component with the
/// largest drop c_i(b_i+1) - c_i(b_i+2), ties to the smallest i. Saturated
/// components are skipped. Heap-based: O(t + b log t).
inline Allocation greedy_allocate(const CostCurves& curves, std::size_t budget) {
  detail::check_covers(curves, budget);
  const std::size_t t = curves.components();
  Allocation out;
  out.counts.assign(t, 0);

  using Entry = std::pair<double, std::size_t>;
  // Max-heap on the drop; for equal drops the smaller index is on top.
  auto lower = [](const Entry& a, const Entry& b) {
    return a.first < b.first || (a.first == b.first && a.second > b.second);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(lower)> heap(lower);
  auto drop = [&](std::size_t i) { return curves.at(i, out.counts[i] + 1) - curves.at(i, out.counts[i] + 2); };
  for (std::size_t i = 0; i < t; ++i) {
    if (budget > 0 && curves.capacity(i) > 0) heap.emplace(drop(i), i);
  }
  for (std::size_t step = 0; step < budget && !heap.empty(); ++step) {
    const auto i = heap.top().second;
    heap.pop();
    ++out.counts[i];
    if (out.counts[i] < curves.capacity(i) && step + 1 < budget) heap.emplace(drop(i), i);
  }
  out.objective = detail::objective_of(curves, out.counts);
  return out;
}

/// ell representatives per component, saturating at |P_i|.
inline Allocation fixed_allocate(const CostCurves& curves, std::size_t ell) {
  if (ell < 1) throw ArgumentError("fixed allocation needs ell >= 1");
  const std::size_t t = curves.components();
  Allocation out;
  out.counts.resize(t);
  for (std::size_t i = 0; i < t; ++i) {
    out.counts[i] = std::min(ell, curves.sizes[i]) - 1;
    if (curves.values[i].size() < out.counts[i] + 1) {
      throw ArgumentError("cost curves do not cover ell=" + std::to_string(ell));
    }
  }
  out.objective = detail::objective_of(curves, out.counts);
  return out;
}

/// R_i = first counts_i + 1 greedy centers of component i.
inline RepAssignment materialize(const CostCurves& curves, std::span<const std::size_t> counts) {
  if (counts.size() != curves.components()) throw ArgumentError("materialize: wrong number of counts");
  RepAssignment out;
  out.reps.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] + 1 > curves.centers[i].size()) {
      throw ArgumentError("materialize: component " + std::to_string(i) + " has only " +
                          std::to_string(curves.centers[i].size()) + " centers");
    }
    out.reps[i].assign(curves.centers[i].begin(), curves.centers[i].begin() + counts[i] + 1);
    out.budget += counts[i];
  }
  return out;
}

/// One representative per component: the smallest point id. This is the
/// single-representative (b = 0) choice.
inline RepAssignment single_reps(const InitialForest& forest) {
  RepAssignment out;
  for (std::size_t i = 0; i < forest.components(); ++i) out.reps.push_back({forest.members(i).front()});
  return out;
}

/// R = X.
inline RepAssignment all_points_as_reps(const InitialForest& forest) {
  RepAssignment out;
  out.reps = forest.partition.members;
  out.budget = out.extra();
  return out;
}

/// Throws unless every R_i is a nonempty subset of P_i.
inline void validate(const RepAssignment& reps, const InitialForest& forest) {
  if (reps.components() != forest.components()) throw ArgumentError("representatives: wrong number of components");
  for (std::size_t i = 0; i < reps.components(); ++i) {
    if (reps.reps[i].empty()) throw ArgumentError("representatives: component " + std::to_string(i) + " has none");
    for (PointId r : reps.reps[i]) {
      if (r >= forest.points() || forest.partition.assignment[r] != i) {
        throw ArgumentError("representative " + std::to_string(r) + " is outside component " + std::to_string(i));
      }
    }
  }
}

struct BestReps {
  RepAssignment reps;
  double cost = 0.0;
};

inline constexpr std::size_t kBruteForceRepPoints = 14;
inline constexpr std::size_t kBruteForceRepBudget = 4;

/// Exact BestReps by enumeration: for every component and every j the best
/// j-subset, then the best split of the budget. Guarded to tiny inputs.
inline BestReps brute_force_bestreps(const MetricSpace& space, const InitialForest& forest, std::size_t budget) {
  if (forest.points() > kBruteForceRepPoints || budget > kBruteForceRepBudget) {
    throw SizeError("brute_force_bestreps is limited to 14 points and budget 4");
  }
  const std::size_t t = forest.components();
  // best[i][j-1]: optimal cost and subset with j representatives.
  std::vector<std::vector<std::pair<double, std::vector<PointId>>>> best(t);
  for (std::size_t i = 0; i < t; ++i) {
    const auto& members = forest.members(i);
    const std::size_t m = members.size();
    const std::size_t jmax = std::min(budget + 1, m);
    best[i].assign(jmax, {std::numeric_limits<double>::infinity(), {}});
    for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
      const auto j = static_cast<std::size_t>(__builtin_popcountll(mask));
      if (j > jmax) continue;
      std::vector<PointId> subset;
      for (std::size_t q = 0; q < m; ++q) {
        if (mask >> q & 1U) subset.push_back(members[q]);
      }
      const double c = cost_of(space, members, subset);
      if (c < best[i][j - 1].first) best[i][j - 1] = {c, std::move(subset)};
    }
  }

  BestReps out;
  out.cost = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> extra(t, 0);
  // Enumerate all extra-count vectors with sum <= budget.
  auto recurse = [&](auto&& self, std::size_t i, std::size_t left) -> void {
    if (i == t) {
      double total = 0.0;
      for (std::size_t c = 0; c < t; ++c) total += best[c][extra[c]].first;
      if (total < out.cost) {
        out.cost = total;
        out.reps.reps.clear();
        for (std::size_t c = 0; c < t; ++c) out.reps.reps.push_back(best[c][extra[c]].second);
        out.reps.budget = budget;
      }
      return;
    }
    for (std::size_t e = 0; e <= left && e < best[i].size(); ++e) {
      extra[i] = e;
      self(self, i + 1, left - e);
    }
  };
  recurse(recurse, 0, budget);
  return out;
}

// One line per component: its representative ids.
inline void write_reps(std::ostream& out, const RepAssignment& reps) {
  for (const auto& r : reps.reps) {
    for (std::size_t k = 0; k < r.size(); ++k) out << (k ? " " : "") << r[k];
    out << '\n';
  }
}

inline RepAssignment read_reps(std::istream& in) {
  RepAssignment out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream row(line);
    std::vector<PointId> reps;
    PointId r;
    while (row >> r) reps.push_back(r);
    if (!row.eof()) throw ParseError("representatives: line " + std::to_string(line_no) + ": bad index");
    if (reps.empty()) throw ParseError("representatives: line " + std::to_string(line_no) + ": empty component");
    out.reps.push_back(std::move(reps));
  }
  out.budget = out.extra();
  return out;
}

}  // namespace mfc

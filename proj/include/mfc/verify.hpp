#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "mfc/analysis.hpp"
#include "mfc/completion.hpp"
#include "mfc/dataset.hpp"
#include "mfc/forest.hpp"
#include "mfc/oracles.hpp"
#include "mfc/representatives.hpp"
#include "mfc/rng.hpp"

namespace mfc::verify {

struct SuiteReport {
  explicit SuiteReport(std::string suite) : name(std::move(suite)) {}

  std::string name;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::string first_failure;

  bool ok() const { return failed == 0 && passed > 0; }
  void check(bool condition, const std::string& what) {
    if (condition) {
      ++passed;
    } else {
      if (failed++ == 0) first_failure = what;
    }
  }
};

using Allocator = std::function<Allocation(const CostCurves&, std::size_t)>;

/// Random non-increasing cost curves. Integer-valued curves make many exact
/// ties, which exercises tie-breaking.
inline CostCurves random_curves(Rng& rng, std::size_t t, std::size_t b, bool integral) {
  CostCurves curves;
  curves.budget = b;
  for (std::size_t i = 0; i < t; ++i) {
    std::vector<double> v(b + 1);
    double level = integral ? static_cast<double>(rng.between(3, 12)) : rng.uniform(1.0, 10.0);
    for (auto& x : v) {
      x = level;
      const double step = integral ? static_cast<double>(rng.between(0, 3)) : rng.uniform(0.0, 3.0);
      level = std::max(0.0, level - step);
    }
    // Real-valued curves sometimes come from components small enough that the
    // curve reaches zero early; the extras cap then applies.
    std::size_t size = b + 2;
    if (!integral && rng.below(4) == 0) {
      size = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(b) + 1));
      for (std::size_t j = size - 1; j <= b; ++j) v[j] = 0.0;
    }
    curves.values.push_back(std::move(v));
    curves.sizes.push_back(size);
    curves.centers.emplace_back();
  }
  return curves;
}

inline std::vector<std::vector<double>> extras_view(const CostCurves& curves) { return curves.values; }

/// DP against composition enumeration: exact objective on real-valued
/// curves, exact counts (including the documented tie-break) on integer ones.
inline SuiteReport dp_composition_suite(const Allocator& allocate, std::size_t trials = 100) {
  SuiteReport report{"dp-composition"};
  Rng rng(0xD1A7);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    for (bool integral : {false, true}) {
      const auto t = static_cast<std::size_t>(rng.between(1, 4));
      const auto b = static_cast<std::size_t>(rng.between(0, 6));
      const auto curves = random_curves(rng, t, b, integral);
      const auto got = allocate(curves, b);
      const auto want = oracle::best_composition(extras_view(curves), b);
      const std::string tag = "trial " + std::to_string(trial) + " t=" + std::to_string(t) + " b=" + std::to_string(b);
      report.check(got.objective == want.objective, tag + ": objective differs from enumeration");
      if (integral) report.check(got.counts == want.counts, tag + ": tie-break differs from enumeration");
    }
  }
  return report;
}

inline SuiteReport kcenter_suite(std::size_t trials = 100) {
  SuiteReport report{"kcenter-exhaustive"};
  Rng rng(0xC3);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const auto metric = static_cast<MetricKind>(trial % 5);
    const auto m = static_cast<std::size_t>(rng.between(1, 10));
    const auto k = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(std::min<std::size_t>(4, m))));
    const auto space = synthetic::random_space(metric, m, rng.next(), 3);
    const auto d = oracle::distance_matrix(space);
    std::vector<PointId> members(m);
    for (std::size_t q = 0; q < m; ++q) members[q] = q;
    const auto kc = gonzalez_kcenter(space, members, k, 0);
    const double opt = oracle::optimal_kcenter_radius(d, members, k);
    report.check(kc.radii.back() <= 2.0 * opt, "trial " + std::to_string(trial) + ": greedy radius above 2x optimum");
  }
  return report;
}

inline SuiteReport full_mst_suite(std::size_t trials = 30) {
  SuiteReport report{"full-matrix-mst"};
  Rng rng(0x357);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const auto metric = static_cast<MetricKind>(trial % 5);
    const auto n = static_cast<std::size_t>(rng.between(2, 40));
    const auto space = synthetic::random_space(metric, n, rng.next());
    const double want = exact_sum(oracle::kruskal_weights(oracle::distance_matrix(space)));
    const std::string tag = "trial " + std::to_string(trial);

    std::vector<PointId> all(n);
    for (std::size_t q = 0; q < n; ++q) all[q] = q;
    report.check(edge_weight_sum(exact_component_mst(space, all)) == want, tag + ": Prim disagrees");
    report.check(brute_force_full_mst(space).weight == want, tag + ": Kruskal disagrees");

    const auto t = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(n)));
    const auto forest = truncated_kruskal_forest(space, t);
    report.check(mfc_opt(space, forest).tree_weight == want, tag + ": completing a truncated Kruskal forest");
  }
  return report;
}

inline SuiteReport tight_grid_suite() {
  SuiteReport report{"tight-grid"};
  for (std::size_t p : {2, 5, 10, 50}) {
    for (std::size_t ell : {1, 3, 8}) {
      for (double eps : {0.5, 0.125, 1.0 / 64.0}) {
        const auto inst = tight_instance(p, ell, eps);
        const auto approx = multirep_mfc(inst.space, inst.forest, inst.reps);
        const auto opt = mfc_opt(inst.space, inst.forest);
        const double ratio = ratios(approx, opt).cost_ratio;
        report.check(std::fabs(ratio - inst.predicted_ratio) <= 1e-9,
                     "p=" + std::to_string(p) + " ell=" + std::to_string(ell) + " eps=" + std::to_string(eps));
      }
    }
  }
  return report;
}

/// Random forest over a random space: k-center partition with random t.
inline InitialForest random_forest(const MetricSpace& space, Rng& rng, std::size_t max_t) {
  const auto t = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(std::min(max_t, space.size()))));
  return build_initial_forest(space, t, static_cast<PointId>(rng.below(space.size())));
}

inline SuiteReport bestreps_suite(std::size_t trials = 50) {
  SuiteReport report{"bestreps"};
  Rng rng(0xBE57);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const auto metric = static_cast<MetricKind>(trial % 5);
    const auto n = static_cast<std::size_t>(rng.between(2, 14));
    const auto space = synthetic::random_space(metric, n, rng.next(), 3);
    const auto forest = random_forest(space, rng, 4);
    const auto b = static_cast<std::size_t>(rng.between(0, 4));
    const auto curves = build_cost_curves(space, forest, b);
    const auto reps = materialize(curves, dp_allocate(curves, b).counts);
    const auto d = oracle::distance_matrix(space);
    double cost = 0.0;
    for (std::size_t i = 0; i < forest.components(); ++i) cost += oracle::max_min(d, forest.members(i), reps.reps[i]);
    const auto best = brute_force_bestreps(space, forest, b);
    report.check(cost <= 2.0 * best.cost, "trial " + std::to_string(trial) + ": DP representatives above 2x optimum");
  }
  return report;
}

inline SuiteReport accounting_suite(std::size_t trials = 20) {
  SuiteReport report{"distance-accounting"};
  Rng rng(0xACC7);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const auto n = static_cast<std::size_t>(rng.between(4, 60));
    const auto space = synthetic::random_space(MetricKind::Euclidean, n, rng.next());
    auto forest = random_forest(space, rng, 8);
    if (forest.components() < 2) forest = build_initial_forest(space, 2, 0);
    const auto b = static_cast<std::size_t>(rng.between(0, 10));
    const auto curves = build_cost_curves(space, forest, b);
    const auto reps = materialize(curves, dp_allocate(curves, b).counts);

    std::uint64_t exact_expected = 0;
    std::uint64_t rep_expected = 0;
    const std::size_t t = forest.components();
    for (std::size_t i = 0; i < t; ++i) {
      for (std::size_t j = i + 1; j < t; ++j) {
        exact_expected += forest.members(i).size() * forest.members(j).size();
        rep_expected += forest.members(i).size() * reps.reps[j].size() + forest.members(j).size() * reps.reps[i].size();
      }
    }
    auto before = space.query_count();
    exact_coarsened(space, forest);
    report.check(space.query_count() - before == exact_expected, "trial " + std::to_string(trial) + ": exact count");
    before = space.query_count();
    multirep_coarsened(space, forest, reps);
    report.check(space.query_count() - before == rep_expected, "trial " + std::to_string(trial) + ": multirep count");
  }
  return report;
}

struct Options {
  bool mutate_dp = false;  // negative control: DP with the tie-break reversed
};

/// dp_allocate with the argmin tie-break flipped to the largest k. Its
/// objective is still optimal, but its counts break the documented rule.
inline Allocation mutated_dp_allocate(const CostCurves& curves, std::size_t budget) {
  const std::size_t t = curves.components();
  Allocation out;
  out.counts.assign(t, 0);
  if (t == 0) return out;
  std::size_t cap_total = 0;
  for (std::size_t i = 0; i < t; ++i) cap_total += curves.capacity(i);
  const std::size_t b = std::min(budget, cap_total);
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> layer(b + 1, inf), next(b + 1, inf);
  std::vector<std::vector<std::size_t>> choice(t, std::vector<std::size_t>(b + 1, 0));
  for (std::size_t B = 0; B <= std::min(b, curves.capacity(0)); ++B) layer[B] = curves.at(0, B + 1);
  for (std::size_t T = 1; T < t; ++T) {
    std::fill(next.begin(), next.end(), inf);
    const std::size_t cap = curves.capacity(T);
    for (std::size_t B = 0; B <= b; ++B) {
      for (std::size_t k = B > cap ? B - cap : 0; k <= B; ++k) {
        if (layer[k] == inf) continue;
        const double value = layer[k] + curves.at(T, B - k + 1);
        if (value <= next[B]) {
          next[B] = value;
          choice[T][B] = k;
        }
      }
    }
    std::swap(layer, next);
  }
  std::size_t remaining = b;
  for (std::size_t T = t; T-- > 1;) {
    out.counts[T] = remaining - choice[T][remaining];
    remaining = choice[T][remaining];
  }
  out.counts[0] = remaining;
  for (std::size_t i = 0; i < t; ++i) out.objective += curves.at(i, out.counts[i] + 1);
  return out;
}

inline std::vector<SuiteReport> run_all(const Options& options = {}) {
  Allocator dp = options.mutate_dp ? Allocator(mutated_dp_allocate) : Allocator(dp_allocate);
  return {dp_composition_suite(dp), kcenter_suite(), full_mst_suite(), bestreps_suite(), accounting_suite(),
          tight_grid_suite()};
}

inline bool print_reports(std::ostream& out, const std::vector<SuiteReport>& reports) {
  bool all = true;
  for (const auto& r : reports) {
    out << (r.ok() ? "PASS " : "FAIL ") << r.name << ": " << r.passed << " passed, " << r.failed << " failed";
    if (!r.first_failure.empty()) out << " (first: " << r.first_failure << ")";
    out << '\n';
    all = all && r.ok();
  }
  return all;
}

}  // namespace mfc::verify

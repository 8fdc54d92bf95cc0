#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "mfc/analysis.hpp"
#include "mfc/completion.hpp"
#include "mfc/dataset.hpp"
#include "mfc/forest.hpp"
#include "mfc/metric.hpp"
#include "mfc/representatives.hpp"

namespace mfc {

enum class Variant { Dp, Greedy, Fixed, Given };

inline std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Dp: return "dp";
    case Variant::Greedy: return "greedy";
    case Variant::Fixed: return "fixed";
    case Variant::Given: return "given";
  }
  return "?";
}

inline std::optional<Variant> parse_variant(std::string_view name) {
  for (auto v : {Variant::Dp, Variant::Greedy, Variant::Fixed, Variant::Given}) {
    if (name == to_string(v)) return v;
  }
  return std::nullopt;
}

inline constexpr std::string_view kOptAlgorithm = "mfc-opt";

/// floor(sqrt(n)), at least 1.
inline std::size_t default_components(std::size_t n) {
  auto t = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (t * t > n) --t;
  while ((t + 1) * (t + 1) <= n) ++t;
  return std::max<std::size_t>(t, 1);
}

/// Worker count from MFC_WORKERS, else the hardware concurrency.
inline std::size_t worker_count() {
  if (const char* env = std::getenv("MFC_WORKERS")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

struct RunOptions {
  bool record_timing = true;
  std::size_t workers = 1;
};

struct VariantRun {
  RepAssignment reps;
  CompletionResult result;
  BoundReport bound;
};

/// Chooses representatives for one variant and budget and completes the
/// forest. For Fixed, b must be a multiple of t and ell = b / t + 1; Given
/// uses `given` as-is. The space's counter is expected to start at zero, so
/// the reported distance_calls cover representative selection plus
/// completion.
inline VariantRun run_variant(const MetricSpace& space, const InitialForest& forest, Variant variant, std::size_t b,
                              const RepAssignment* given = nullptr, std::size_t workers = 1) {
  const auto start = detail::Clock::now();
  const auto before = space.query_count();
  const std::size_t t = forest.components();
  VariantRun run;
  std::optional<double> cost;
  if (variant == Variant::Given) {
    if (!given) throw ArgumentError("variant 'given' needs a representative assignment");
    run.reps = *given;
  } else {
    if (variant == Variant::Fixed && b % t != 0) {
      throw ArgumentError("fixed variant needs a budget divisible by t=" + std::to_string(t));
    }
    const auto curves = build_cost_curves(space, forest, b);
    Allocation alloc;
    switch (variant) {
      case Variant::Dp: alloc = dp_allocate(curves, b); break;
      case Variant::Greedy: alloc = greedy_allocate(curves, b); break;
      default: alloc = fixed_allocate(curves, b / t + 1); break;
    }
    run.reps = materialize(curves, alloc.counts);
    run.reps.budget = b;
    cost = alloc.objective;
  }
  run.result = multirep_mfc(space, forest, run.reps, workers);
  run.result.distance_calls = space.query_count() - before;
  run.result.elapsed_ms = detail::ms_since(start);
  run.bound = cost ? alpha_from_cost(*cost, forest.forest_weight)
                   : alpha_bound(space.with_fresh_counter(), forest, run.reps);
  return run;
}

inline ResultRow make_row(std::string algorithm, std::size_t b, const CompletionResult& result,
                          const BoundReport& bound, const CompletionResult* opt, std::uint64_t seed,
                          const RunOptions& options) {
  ResultRow row;
  row.algorithm = std::move(algorithm);
  row.b = b;
  row.tree_weight = result.tree_weight;
  row.forest_weight = result.forest_weight;
  row.alpha = bound.alpha;
  row.distance_calls = result.distance_calls;
  row.elapsed_ms = options.record_timing ? result.elapsed_ms : 0.0;
  row.seed = seed;
  if (opt) {
    const auto r = ratios(result, *opt);
    row.opt_weight = opt->tree_weight;
    row.cost_ratio = r.cost_ratio;
    row.completion_ratio = r.completion_ratio;
  }
  return row;
}

inline ResultRow opt_row(const CompletionResult& opt, const InitialForest& forest, std::uint64_t seed,
                         const RunOptions& options) {
  return make_row(std::string(kOptAlgorithm), forest.points() - forest.components(), opt,
                  alpha_from_cost(0.0, forest.forest_weight), &opt, seed, options);
}

// ---------------------------------------------------------------------------
// Sweeps

struct FileSource {
  DatasetSpec spec;  // spec.seed is replaced by each sweep seed
};
struct SyntheticSource {
  MetricKind metric = MetricKind::Euclidean;
  std::size_t n = 1000;
  std::size_t dim = 8;
};
struct TightSource {
  std::size_t p = 5;
  std::size_t ell = 3;
  double eps = 0.1;
};
using DataSource = std::variant<FileSource, SyntheticSource, TightSource>;

enum class ForestMethod { KCenter, Kruskal };

struct SweepConfig {
  DataSource source = SyntheticSource{};
  std::optional<std::size_t> t;
  ForestMethod method = ForestMethod::KCenter;
  std::optional<std::vector<std::size_t>> budgets;   // absolute budgets
  std::vector<std::size_t> budget_multiples = [] {   // budgets as multiples of t
    std::vector<std::size_t> m;
    for (std::size_t k = 0; k <= 38; k += 2) m.push_back(k);
    return m;
  }();
  std::vector<Variant> variants{Variant::Dp, Variant::Greedy, Variant::Fixed};
  std::vector<std::uint64_t> seeds = [] {
    std::vector<std::uint64_t> s;
    for (std::uint64_t k = 1; k <= 16; ++k) s.push_back(k);
    return s;
  }();
  bool run_opt = true;
  std::size_t workers = 1;
  bool record_timing = true;
  std::ostream* log = nullptr;  // notices (skipped cells)
};

struct SweepInstance {
  MetricSpace space;
  InitialForest forest;
  std::optional<RepAssignment> construction;  // tight instances only
};

inline InitialForest build_forest(const MetricSpace& space, std::size_t t, ForestMethod method) {
  return method == ForestMethod::Kruskal ? truncated_kruskal_forest(space, t) : build_initial_forest(space, t, 0);
}

inline SweepInstance prepare_instance(const SweepConfig& config, std::uint64_t seed) {
  if (const auto* tight = std::get_if<TightSource>(&config.source)) {
    auto inst = tight_instance(tight->p, tight->ell, tight->eps);
    return {std::move(inst.space), std::move(inst.forest), std::move(inst.reps)};
  }
  std::optional<MetricSpace> space;
  if (const auto* file = std::get_if<FileSource>(&config.source)) {
    auto spec = file->spec;
    spec.seed = seed;
    space.emplace(load_dataset(spec));
  } else {
    const auto& syn = std::get<SyntheticSource>(config.source);
    space.emplace(synthetic::random_space(syn.metric, syn.n, seed, syn.dim));
  }
  const std::size_t t = config.t.value_or(default_components(space->size()));
  auto forest = build_forest(*space, t, config.method);
  return {space->with_fresh_counter(), std::move(forest), std::nullopt};
}

struct SweepResult {
  std::vector<ResultRow> rows;
  std::vector<std::string> notices;
};

struct SweepError : Error {
  using Error::Error;
};

namespace detail {

// Runs task(k) for k in [0, count) on up to `workers` threads; rethrows the
// exception of the lowest failing index.
template <typename Task>
void run_pool(std::size_t count, std::size_t workers, Task task) {
  std::vector<std::exception_ptr> errors(count);
  auto guarded = [&](std::size_t k) {
    try {
      task(k);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t k = 0; k < count; ++k) guarded(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < count; k = next++) guarded(k);
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace detail

/// Every (seed, variant, budget) cell, plus one optimal row per seed when
/// run_opt is set. Rows come out in (seed, opt, variant, budget) order
/// whatever the thread schedule. Tight sources add a "construction" row that
/// uses the instance's own representatives.
inline SweepResult run_sweep(const SweepConfig& config) {
  const RunOptions options{config.record_timing, 1};
  const std::size_t seeds = config.seeds.size();

  std::vector<std::optional<SweepInstance>> instances(seeds);
  std::vector<std::optional<CompletionResult>> opts(seeds);
  detail::run_pool(seeds, config.workers, [&](std::size_t s) {
    try {
      instances[s].emplace(prepare_instance(config, config.seeds[s]));
      if (config.run_opt) {
        const auto& inst = *instances[s];
        auto start = detail::Clock::now();
        auto view = inst.space.with_fresh_counter();
        auto opt = mfc_opt(view, inst.forest);
        opt.distance_calls = view.query_count();
        opt.elapsed_ms = detail::ms_since(start);
        opts[s] = std::move(opt);
      }
    } catch (const std::exception& e) {
      throw SweepError("seed " + std::to_string(config.seeds[s]) + ": " + e.what());
    }
  });

  struct Cell {
    std::size_t seed_index;
    Variant variant;
    std::size_t b;
    std::string name;
  };
  std::vector<Cell> cells;
  SweepResult out;
  for (std::size_t s = 0; s < seeds; ++s) {
    const auto& inst = *instances[s];
    const std::size_t t = inst.forest.components();
    if (inst.construction) cells.push_back({s, Variant::Given, inst.construction->budget, "construction"});
    std::vector<std::size_t> budgets;
    if (config.budgets) {
      budgets = *config.budgets;
    } else {
      for (auto m : config.budget_multiples) budgets.push_back(m * t);
    }
    for (auto variant : config.variants) {
      if (variant == Variant::Given) continue;
      for (auto b : budgets) {
        if (variant == Variant::Fixed && b % t != 0) {
          out.notices.push_back("skipping fixed at b=" + std::to_string(b) + " (not a multiple of t=" +
                                std::to_string(t) + ")");
          if (config.log) *config.log << out.notices.back() << '\n';
          continue;
        }
        cells.push_back({s, variant, b, std::string(to_string(variant))});
      }
    }
  }

  std::vector<ResultRow> cell_rows(cells.size());
  detail::run_pool(cells.size(), config.workers, [&](std::size_t k) {
    const auto& cell = cells[k];
    const auto& inst = *instances[cell.seed_index];
    try {
      auto view = inst.space.with_fresh_counter();
      const RepAssignment* given = inst.construction ? &*inst.construction : nullptr;
      auto run = run_variant(view, inst.forest, cell.variant, cell.b, given);
      const auto* opt = opts[cell.seed_index] ? &*opts[cell.seed_index] : nullptr;
      cell_rows[k] = make_row(cell.name, cell.b, run.result, run.bound, opt, config.seeds[cell.seed_index], options);
    } catch (const std::exception& e) {
      throw SweepError("cell seed=" + std::to_string(config.seeds[cell.seed_index]) + " variant=" + cell.name +
                       " b=" + std::to_string(cell.b) + ": " + e.what());
    }
  });

  std::size_t k = 0;
  for (std::size_t s = 0; s < seeds; ++s) {
    if (opts[s]) out.rows.push_back(opt_row(*opts[s], instances[s]->forest, config.seeds[s], options));
    for (; k < cells.size() && cells[k].seed_index == s; ++k) out.rows.push_back(std::move(cell_rows[k]));
  }
  return out;
}

/// Per-(algorithm, b) means, in first-appearance order.
inline void write_summary(std::ostream& out, const std::vector<ResultRow>& rows) {
  struct Acc {
    std::size_t runs = 0;
    std::vector<double> tree, alpha, calls, elapsed, cost_ratio, completion;
    bool all_cost = true, all_completion = true;
  };
  std::vector<std::pair<std::string, std::size_t>> order;
  std::map<std::pair<std::string, std::size_t>, Acc> acc;
  for (const auto& r : rows) {
    const auto key = std::make_pair(r.algorithm, r.b);
    auto [it, fresh] = acc.try_emplace(key);
    if (fresh) order.push_back(key);
    auto& a = it->second;
    ++a.runs;
    a.tree.push_back(r.tree_weight);
    a.alpha.push_back(r.alpha);
    a.calls.push_back(static_cast<double>(r.distance_calls));
    a.elapsed.push_back(r.elapsed_ms);
    if (r.cost_ratio) a.cost_ratio.push_back(*r.cost_ratio); else a.all_cost = false;
    if (r.completion_ratio) a.completion.push_back(*r.completion_ratio); else a.all_completion = false;
  }
  auto mean = [](const std::vector<double>& v) { return exact_sum(v) / static_cast<double>(v.size()); };
  out << "algorithm,b,runs,tree_weight,alpha,epsilon_alpha,cost_ratio,epsilon,completion_ratio,distance_calls,elapsed_ms\n";
  for (const auto& key : order) {
    const auto& a = acc.at(key);
    const double alpha = mean(a.alpha);
    out << key.first << ',' << key.second << ',' << a.runs << ',' << format_real(mean(a.tree)) << ','
        << format_real(alpha) << ',' << format_real(alpha - 1.0) << ',';
    if (a.all_cost) {
      const double cr = mean(a.cost_ratio);
      out << format_real(cr) << ',' << format_real(cr - 1.0) << ',';
    } else {
      out << ",,";
    }
    out << (a.all_completion ? format_real(mean(a.completion)) : std::string()) << ','
        << format_real(mean(a.calls)) << ',' << format_real(mean(a.elapsed)) << '\n';
  }
}

}  // namespace mfc

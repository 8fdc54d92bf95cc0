#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "mfc/harness.hpp"
#include "mfc/verify.hpp"

using namespace mfc;

TEST(Harness, DefaultComponents) {
  EXPECT_EQ(default_components(1), 1u);
  EXPECT_EQ(default_components(3), 1u);
  EXPECT_EQ(default_components(4), 2u);
  EXPECT_EQ(default_components(1000), 31u);
  EXPECT_EQ(default_components(1024), 32u);
}

TEST(Harness, WorkerCountFromEnvironment) {
  ::setenv("MFC_WORKERS", "3", 1);
  EXPECT_EQ(worker_count(), 3u);
  ::setenv("MFC_WORKERS", "zero", 1);
  EXPECT_GE(worker_count(), 1u);
  ::unsetenv("MFC_WORKERS");
}

TEST(Harness, VariantNames) {
  for (auto v : {Variant::Dp, Variant::Greedy, Variant::Fixed, Variant::Given}) {
    EXPECT_EQ(parse_variant(to_string(v)), v);
  }
  EXPECT_FALSE(parse_variant("random").has_value());
}

TEST(Harness, DpAtZeroBudgetIsTheSingleRepBaseline) {
  const auto s = synthetic::random_space(MetricKind::Euclidean, 40, 5);
  const auto f = build_initial_forest(s, 6);
  const auto run = run_variant(s.with_fresh_counter(), f, Variant::Dp, 0);
  const auto baseline = multirep_mfc(s, f, single_reps(f));
  EXPECT_EQ(run.result.tree_weight, baseline.tree_weight);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(run.reps.reps[i], single_reps(f).reps[i]);
}

TEST(Harness, FullBudgetIsOptimal) {
  const auto s = synthetic::random_space(MetricKind::Euclidean, 16, 5);
  const auto f = build_initial_forest(s, 4);
  const auto run = run_variant(s.with_fresh_counter(), f, Variant::Dp, 12);
  EXPECT_EQ(run.result.tree_weight, mfc_opt(s, f).tree_weight);
  EXPECT_EQ(run.bound.alpha, 1.0);
}

TEST(Harness, DpBoundIsTightestAtEqualBudget) {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = synthetic::random_space(static_cast<MetricKind>(trial % 5), 30, rng.next());
    const auto f = build_initial_forest(s, 5);
    const std::size_t b = 5;
    const double dp = run_variant(s.with_fresh_counter(), f, Variant::Dp, b).bound.alpha;
    EXPECT_LE(dp, run_variant(s.with_fresh_counter(), f, Variant::Greedy, b).bound.alpha);
    EXPECT_LE(dp, run_variant(s.with_fresh_counter(), f, Variant::Fixed, b).bound.alpha);
  }
}

TEST(Harness, DistanceCallsCoverSelectionAndCompletion) {
  const auto s = synthetic::random_space(MetricKind::Euclidean, 30, 5);
  const auto f = build_initial_forest(s, 5);
  const std::size_t b = 5;
  const auto view = s.with_fresh_counter();
  const auto run = run_variant(view, f, Variant::Greedy, b);
  std::uint64_t expected = 0;
  for (std::size_t i = 0; i < 5; ++i) expected += std::min(b + 1, f.members(i).size()) * f.members(i).size();
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = i + 1; j < 5; ++j) {
      expected += f.members(i).size() * run.reps.reps[j].size() + f.members(j).size() * run.reps.reps[i].size();
    }
  }
  EXPECT_EQ(run.result.distance_calls, expected);
  EXPECT_EQ(view.query_count(), expected);
}

TEST(Harness, GivenVariantAndFixedDivisibility) {
  const auto inst = tight_instance(5, 3, 0.1);
  const auto run = run_variant(inst.space, inst.forest, Variant::Given, 0, &inst.reps);
  EXPECT_NEAR(run.result.tree_weight, 10.0, 1e-12);
  EXPECT_NEAR(run.bound.alpha, 11.0 / 6.0, 1e-12);
  EXPECT_THROW(run_variant(inst.space, inst.forest, Variant::Given, 0), ArgumentError);
  EXPECT_THROW(run_variant(inst.space, inst.forest, Variant::Fixed, 3), ArgumentError);
}

TEST(Sweep, OneCellPlusOptRow) {
  SweepConfig config;
  config.source = SyntheticSource{MetricKind::Euclidean, 100, 4};
  config.budgets = std::vector<std::size_t>{0};
  config.variants = {Variant::Dp};
  config.seeds = {1};
  const auto result = run_sweep(config);
  ASSERT_EQ(result.rows.size(), 2u);
  EXPECT_EQ(result.rows[0].algorithm, kOptAlgorithm);
  EXPECT_EQ(result.rows[1].algorithm, "dp");
  EXPECT_EQ(result.rows[1].b, 0u);
  EXPECT_TRUE(result.rows[1].cost_ratio.has_value());
  EXPECT_GT(result.rows[1].distance_calls, 0u);
}

TEST(Sweep, TightInstanceConstructionRow) {
  SweepConfig config;
  config.source = TightSource{5, 3, 0.1};
  config.budgets = std::vector<std::size_t>{10};
  config.variants = {Variant::Dp};
  config.seeds = {0};
  const auto result = run_sweep(config);
  ASSERT_EQ(result.rows.size(), 3u);
  EXPECT_EQ(result.rows[1].algorithm, "construction");
  EXPECT_NEAR(*result.rows[1].cost_ratio, 1.5625, 1e-9);
  EXPECT_NEAR(*result.rows[1].completion_ratio, 10.0, 1e-9);
}

TEST(Sweep, AlphaNonIncreasingInBudget) {
  SweepConfig config;
  config.source = SyntheticSource{MetricKind::Euclidean, 300, 8};
  config.budget_multiples = {0, 1, 2, 3, 4, 5, 6};
  config.variants = {Variant::Dp};
  config.seeds = {1, 2};
  config.run_opt = false;
  const auto result = run_sweep(config);
  ASSERT_EQ(result.rows.size(), 14u);
  for (std::size_t k = 1; k < result.rows.size(); ++k) {
    if (result.rows[k].seed == result.rows[k - 1].seed) {
      EXPECT_LE(result.rows[k].alpha, result.rows[k - 1].alpha);
    }
    EXPECT_FALSE(result.rows[k].cost_ratio.has_value());
  }
}

TEST(Sweep, SkipsFixedCellsWithANotice) {
  SweepConfig config;
  config.source = SyntheticSource{MetricKind::Hamming, 50, 4};
  config.t = 7;
  config.budgets = std::vector<std::size_t>{3, 7};
  config.variants = {Variant::Fixed};
  config.seeds = {1};
  const auto result = run_sweep(config);
  EXPECT_EQ(result.rows.size(), 2u);
  EXPECT_EQ(result.notices.size(), 1u);
}

TEST(Sweep, ByteIdenticalWithoutTimingAndAcrossWorkers) {
  SweepConfig config;
  config.source = SyntheticSource{MetricKind::Levenshtein, 64, 4};
  config.budget_multiples = {0, 2};
  config.seeds = {1, 2, 3};
  config.record_timing = false;
  std::ostringstream a, b;
  write_results(a, run_sweep(config).rows);
  config.workers = 4;
  write_results(b, run_sweep(config).rows);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Sweep, ErrorsNameTheCell) {
  SweepConfig config;
  config.source = SyntheticSource{MetricKind::Euclidean, 10, 2};
  config.t = 20;
  config.seeds = {4};
  try {
    run_sweep(config);
    FAIL() << "expected SweepError";
  } catch (const SweepError& e) {
    EXPECT_NE(std::string(e.what()).find("seed 4"), std::string::npos);
  }
}

TEST(Summary, MeansPerAlgorithmAndBudget) {
  ResultRow a;
  a.algorithm = "dp";
  a.b = 2;
  a.tree_weight = 1.0;
  a.alpha = 1.5;
  a.cost_ratio = 1.25;
  ResultRow b = a;
  b.tree_weight = 3.0;
  b.alpha = 1.0;
  b.cost_ratio = 1.0;
  std::ostringstream out;
  write_summary(out, {a, b});
  std::istringstream in(out.str());
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  EXPECT_EQ(line, "dp,2,2,2,1.25,0.25,1.125,0.125,,0,0");
}

TEST(Verify, FreshSuitesPassAndMutationFails) {
  const auto good = verify::run_all();
  std::ostringstream out;
  EXPECT_TRUE(verify::print_reports(out, good)) << out.str();
  const auto bad = verify::run_all({true});
  std::ostringstream out2;
  EXPECT_FALSE(verify::print_reports(out2, bad));
  EXPECT_NE(out2.str().find("FAIL dp-composition"), std::string::npos);
}

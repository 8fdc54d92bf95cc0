#include <gtest/gtest.h>

#include <sstream>

#include "mfc/analysis.hpp"
#include "mfc/completion.hpp"
#include "mfc/dataset.hpp"
#include "mfc/forest.hpp"
#include "mfc/oracles.hpp"
#include "mfc/representatives.hpp"
#include "mfc/rng.hpp"

using namespace mfc;

namespace {

MetricSpace line_points(std::vector<double> xs) {
  std::vector<Point> pts;
  for (double x : xs) pts.emplace_back(DenseVector{{x}});
  return MetricSpace(std::move(pts), MetricKind::Euclidean);
}

// Random reps: every component gets a random nonempty subset.
RepAssignment random_reps(const InitialForest& f, Rng& rng) {
  RepAssignment reps;
  for (std::size_t i = 0; i < f.components(); ++i) {
    std::vector<PointId> r;
    for (auto x : f.members(i)) {
      if (rng.below(3) == 0) r.push_back(x);
    }
    if (r.empty()) r.push_back(f.members(i)[rng.below(f.members(i).size())]);
    reps.reps.push_back(std::move(r));
  }
  reps.budget = reps.extra();
  return reps;
}

void expect_valid(const InitialForest& f, const CompletionResult& r) {
  std::vector<WeightedEdge> all = r.forest_edges;
  all.insert(all.end(), r.added_edges.begin(), r.added_edges.end());
  EXPECT_TRUE(is_spanning_tree(f.points(), all));
  EXPECT_EQ(r.forest_edges.size(), f.edges().size());
  EXPECT_EQ(r.added_edges.size(), f.components() - 1);
  EXPECT_EQ(r.forest_weight, f.forest_weight);
  EXPECT_NEAR(r.tree_weight, r.forest_weight + r.added_weight, 1e-9 * (1.0 + r.tree_weight));
}

}  // namespace

TEST(Coarsened, TwoSingletons) {
  const auto s = line_points({0, 7});
  const auto f = build_initial_forest(s, 2);
  const auto g = exact_coarsened(s, f);
  EXPECT_EQ(g.weight(0, 1), 7.0);
  EXPECT_EQ(g.weight(1, 0), 7.0);
  EXPECT_EQ(g.distance_calls, 1u);
}

TEST(Coarsened, ThreePairsCostTwelveCalls) {
  const auto s = line_points({0, 1, 10, 11, 20, 21});
  const auto f = make_forest(Partition::from_assignment({0, 0, 1, 1, 2, 2}, 3),
                             {{make_edge(0, 1, 1)}, {make_edge(2, 3, 1)}, {make_edge(4, 5, 1)}});
  const auto g = exact_coarsened(s, f);
  EXPECT_EQ(s.query_count(), 12u);
  EXPECT_EQ(g.weight(0, 1), 9.0);
  EXPECT_EQ(g.weight(0, 2), 19.0);
  EXPECT_EQ(g.witness(0, 1).a, 1u);
  EXPECT_EQ(g.witness(0, 1).b, 2u);
  EXPECT_EQ(g.witness(1, 0).a, 2u);
}

TEST(Coarsened, ExactMatchesDoubleLoopOracle) {
  Rng rng(20);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = synthetic::random_space(static_cast<MetricKind>(trial % 5), 20, rng.next());
    const auto f = build_initial_forest(s, 4);
    const auto d = oracle::distance_matrix(s);
    const auto g = exact_coarsened(s, f, 1 + trial % 3);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i + 1; j < 4; ++j) {
        ASSERT_EQ(g.weight(i, j), oracle::double_loop_min(d, f.members(i), f.members(j)));
        ASSERT_EQ(d[g.witness(i, j).a][g.witness(i, j).b], g.weight(i, j));
      }
    }
  }
}

TEST(Coarsened, MultirepCollapsesToExactWhenEveryPointIsARep) {
  const auto s = synthetic::random_space(MetricKind::Jaccard, 25, 3);
  const auto f = build_initial_forest(s, 5);
  const auto exact = exact_coarsened(s, f);
  const auto all = multirep_coarsened(s, f, all_points_as_reps(f));
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      if (i != j) {
        EXPECT_EQ(all.weight(i, j), exact.weight(i, j));
      }
    }
  }
}

TEST(Coarsened, SingleRepWeights) {
  const auto s = line_points({0, 1, 10, 11});
  const auto f = make_forest(Partition::from_assignment({0, 0, 1, 1}, 2), {{make_edge(0, 1, 1)}, {make_edge(2, 3, 1)}});
  // Reps 0 and 3: min(d(P_0, 3), d(P_1, 0)) = min(10, 10).
  RepAssignment reps{{{0}, {3}}, 0};
  const auto g = multirep_coarsened(s, f, reps);
  EXPECT_EQ(g.weight(0, 1), 10.0);
  EXPECT_EQ(s.query_count(), 4u);
}

TEST(Coarsened, MultirepBracketedByExactAndCost) {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = synthetic::random_space(static_cast<MetricKind>(trial % 5), 20, rng.next());
    const auto f = build_initial_forest(s, 4);
    const auto reps = random_reps(f, rng);
    const auto exact = exact_coarsened(s, f);
    const auto approx = multirep_coarsened(s, f, reps);
    std::vector<double> cost;
    for (std::size_t i = 0; i < 4; ++i) cost.push_back(cost_of(s, f.members(i), reps.reps[i]));
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i + 1; j < 4; ++j) {
        ASSERT_GE(approx.weight(i, j), exact.weight(i, j));
        ASSERT_LE(approx.weight(i, j), exact.weight(i, j) + std::min(cost[i], cost[j]) + 1e-12);
      }
    }
  }
}

TEST(CoarsenedMst, SmallCases) {
  CoarsenedGraph one(1);
  EXPECT_TRUE(coarsened_mst(one).empty());
  CoarsenedGraph two(2);
  two.set(0, 1, {3.0, 0, 1});
  EXPECT_EQ(coarsened_mst(two), (std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}}));
}

TEST(CoarsenedMst, MatchesPrimOracle) {
  Rng rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t t = 6;
    CoarsenedGraph g(t);
    oracle::Matrix w(t, std::vector<double>(t, 0.0));
    for (std::size_t i = 0; i < t; ++i) {
      for (std::size_t j = i + 1; j < t; ++j) {
        const double x = trial % 2 ? static_cast<double>(rng.between(1, 4)) : rng.uniform(0, 1);
        g.set(i, j, {x, i, j});
        w[i][j] = w[j][i] = x;
      }
    }
    std::vector<double> taken;
    for (auto [i, j] : coarsened_mst(g)) taken.push_back(g.weight(i, j));
    ASSERT_EQ(taken.size(), t - 1);
    EXPECT_EQ(exact_sum(taken), oracle::prim_weight(w));
  }
}

TEST(Complete, SingleComponent) {
  const auto s = synthetic::random_space(MetricKind::Euclidean, 10, 1);
  const auto f = build_initial_forest(s, 1);
  for (const auto& r : {mfc_opt(s, f), multirep_mfc(s, f, single_reps(f))}) {
    EXPECT_TRUE(r.added_edges.empty());
    EXPECT_EQ(r.added_weight, 0.0);
    EXPECT_EQ(r.tree_weight, f.forest_weight);
  }
}

TEST(Complete, TwoSingletonsAtDistanceSeven) {
  const auto s = line_points({3, 10});
  const auto r = mfc_opt(s, build_initial_forest(s, 2));
  EXPECT_EQ(r.added_weight, 7.0);
  EXPECT_EQ(r.tree_weight, 7.0);
}

TEST(Complete, GammaOneForestGivesTheMst) {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = synthetic::random_space(static_cast<MetricKind>(trial % 5), 25, rng.next());
    const auto f = truncated_kruskal_forest(s, 5);
    const auto r = mfc_opt(s, f);
    EXPECT_EQ(r.tree_weight, brute_force_full_mst(s).weight);
    expect_valid(f, r);
  }
}

TEST(Complete, AllPointsAsRepsIsOptimal) {
  Rng rng(24);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = synthetic::random_space(static_cast<MetricKind>(trial % 5), 30, rng.next());
    const auto f = build_initial_forest(s, 5);
    EXPECT_EQ(multirep_mfc(s, f, all_points_as_reps(f)).tree_weight, mfc_opt(s, f).tree_weight);
  }
}

TEST(Complete, SingleRepIsWithinTwice) {
  Rng rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = synthetic::random_space(static_cast<MetricKind>(trial % 5), 40, rng.next());
    const auto f = build_initial_forest(s, 6, rng.below(40));
    const auto approx = multirep_mfc(s, f, single_reps(f));
    const auto opt = mfc_opt(s, f);
    EXPECT_LE(approx.tree_weight, 2.0 * opt.tree_weight);
    expect_valid(f, approx);
    expect_valid(f, opt);
  }
}

TEST(Complete, GrowingRepsNeverHurts) {
  Rng rng(26);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = synthetic::random_space(static_cast<MetricKind>(trial % 5), 30, rng.next());
    const auto f = build_initial_forest(s, 5);
    auto small = single_reps(f);
    auto large = random_reps(f, rng);
    for (std::size_t i = 0; i < 5; ++i) {
      if (std::find(large.reps[i].begin(), large.reps[i].end(), small.reps[i][0]) == large.reps[i].end()) {
        large.reps[i].push_back(small.reps[i][0]);
      }
    }
    EXPECT_LE(multirep_mfc(s, f, large).tree_weight, multirep_mfc(s, f, small).tree_weight);
  }
}

TEST(Complete, DistanceCallAccounting) {
  const auto s = synthetic::random_space(MetricKind::Euclidean, 30, 8);
  const auto f = build_initial_forest(s, 4);
  Rng rng(1);
  const auto reps = random_reps(f, rng);
  std::uint64_t exact = 0, approx = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      exact += f.members(i).size() * f.members(j).size();
      approx += f.members(i).size() * reps.reps[j].size() + f.members(j).size() * reps.reps[i].size();
    }
  }
  const auto a = s.with_fresh_counter();
  const auto opt = mfc_opt(a, f);
  EXPECT_EQ(a.query_count(), exact);
  EXPECT_EQ(opt.distance_calls, exact);
  const auto b = s.with_fresh_counter();
  const auto mr = multirep_mfc(b, f, reps, 3);
  EXPECT_EQ(b.query_count(), approx);
  EXPECT_EQ(mr.distance_calls, approx);
}

TEST(Complete, ResultsDoNotDependOnWorkerCount) {
  const auto s = synthetic::random_space(MetricKind::Hamming, 60, 8);
  const auto f = build_initial_forest(s, 7);
  const auto one = mfc_opt(s, f, 1);
  const auto four = mfc_opt(s, f, 4);
  ASSERT_EQ(one.added_edges.size(), four.added_edges.size());
  for (std::size_t k = 0; k < one.added_edges.size(); ++k) {
    EXPECT_EQ(one.added_edges[k].u, four.added_edges[k].u);
    EXPECT_EQ(one.added_edges[k].v, four.added_edges[k].v);
  }
}

TEST(Complete, RejectsMismatchedInputs) {
  const auto s = synthetic::random_space(MetricKind::Euclidean, 10, 8);
  const auto f = build_initial_forest(s, 3);
  const auto other = synthetic::random_space(MetricKind::Euclidean, 11, 8);
  EXPECT_THROW(mfc_opt(other, f), Error);
  RepAssignment short_reps{{{f.members(0)[0]}}, 0};
  EXPECT_THROW(multirep_mfc(s, f, short_reps), Error);
  CoarsenedGraph corrupt(3);
  corrupt.set(0, 1, {1.0, f.members(0)[0], f.members(0)[0]});
  corrupt.set(0, 2, {1.0, f.members(0)[0], f.members(2)[0]});
  corrupt.set(1, 2, {5.0, f.members(1)[0], f.members(2)[0]});
  EXPECT_THROW(complete(f, corrupt), ConsistencyError);
}

TEST(Complete, TreeFileHeaderAndEdges) {
  const auto s = line_points({0, 1, 5});
  const auto f = build_initial_forest(s, 2);
  const auto r = mfc_opt(s, f);
  std::ostringstream out;
  write_tree(out, r);
  const auto text = out.str();
  EXPECT_EQ(text.rfind("# n=3", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}

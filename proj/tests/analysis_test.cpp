#include <gtest/gtest.h>

#include <cmath>

#include "mfc/analysis.hpp"
#include "mfc/completion.hpp"
#include "mfc/dataset.hpp"
#include "mfc/forest.hpp"
#include "mfc/oracles.hpp"
#include "mfc/representatives.hpp"
#include "mfc/rng.hpp"

using namespace mfc;

TEST(Alpha, AllPointsAsRepsGiveOne) {
  const auto s = synthetic::random_space(MetricKind::Euclidean, 20, 3);
  const auto f = build_initial_forest(s, 4);
  const auto b = alpha_bound(s, f, all_points_as_reps(f));
  EXPECT_EQ(b.cost, 0.0);
  EXPECT_EQ(b.alpha, 1.0);
  EXPECT_EQ(b.epsilon_alpha, 0.0);
}

TEST(Alpha, SingleRepIsAtMostTwo) {
  Rng rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = synthetic::random_space(static_cast<MetricKind>(trial % 5), 30, rng.next());
    const auto f = build_initial_forest(s, 5, rng.below(30));
    const auto b = alpha_bound(s, f, single_reps(f));
    EXPECT_LE(b.cost, f.forest_weight);
    EXPECT_LE(b.alpha, 2.0);
  }
}

TEST(Alpha, Conventions) {
  EXPECT_EQ(alpha_from_cost(0.0, 0.0).alpha, 1.0);
  EXPECT_TRUE(std::isinf(alpha_from_cost(1.0, 0.0).alpha));
  EXPECT_EQ(alpha_from_cost(1.0, 4.0).alpha, 1.25);
  EXPECT_EQ(alpha_from_cost(1.0, 4.0).epsilon_alpha, 0.25);
}

TEST(Ratios, IdenticalResults) {
  const auto s = synthetic::random_space(MetricKind::Euclidean, 20, 3);
  const auto f = build_initial_forest(s, 4);
  const auto opt = mfc_opt(s, f);
  const auto r = ratios(opt, opt);
  EXPECT_EQ(r.cost_ratio, 1.0);
  EXPECT_EQ(r.completion_ratio, 1.0);
}

TEST(Ratios, CompletionAbsentForOneComponent) {
  const auto s = synthetic::random_space(MetricKind::Euclidean, 10, 3);
  const auto f = build_initial_forest(s, 1);
  const auto opt = mfc_opt(s, f);
  const auto r = ratios(opt, opt);
  EXPECT_EQ(r.cost_ratio, 1.0);
  EXPECT_FALSE(r.completion_ratio.has_value());
}

TEST(Ratios, RejectsResultsFromDifferentForests) {
  const auto s = synthetic::random_space(MetricKind::Euclidean, 20, 3);
  EXPECT_THROW(ratios(mfc_opt(s, build_initial_forest(s, 4)), mfc_opt(s, build_initial_forest(s, 5))), ArgumentError);
}

TEST(Ratios, CostRatioBoundedByAlpha) {
  Rng rng(6);
  for (int trial = 0; trial < 40; ++trial) {
    const auto s = synthetic::random_space(static_cast<MetricKind>(trial % 5), 40, rng.next());
    const auto f = build_initial_forest(s, 2 + rng.below(6));
    const std::size_t b = rng.below(3) * f.components();
    const auto c = build_cost_curves(s, f, b);
    const auto reps = materialize(c, dp_allocate(c, b).counts);
    const auto bound = alpha_bound(s, f, reps);
    const auto r = ratios(multirep_mfc(s, f, reps), mfc_opt(s, f));
    EXPECT_LE(r.cost_ratio, bound.alpha * (1.0 + 1e-12));
    EXPECT_LE(r.cost_ratio, 2.0);
  }
}

TEST(Tight, ReferenceInstance) {
  const auto inst = tight_instance(5, 3, 0.1);
  EXPECT_EQ(inst.space.size(), 20u);
  EXPECT_EQ(std::get<DenseVector>(inst.space.point(0)).coords.size(), 10u);
  EXPECT_EQ(inst.space.metric(), MetricKind::ChebyshevLinf);
  EXPECT_NEAR(inst.predicted_ratio, 1.5625, 1e-15);
  EXPECT_NEAR(inst.forest.forest_weight, 6.0, 1e-12);

  const auto approx = multirep_mfc(inst.space, inst.forest, inst.reps);
  const auto opt = mfc_opt(inst.space, inst.forest);
  EXPECT_NEAR(approx.tree_weight, 10.0, 1e-12);
  EXPECT_NEAR(opt.tree_weight, 6.4, 1e-12);
  const auto r = ratios(approx, opt);
  EXPECT_NEAR(r.cost_ratio, 1.5625, 1e-9);
  ASSERT_TRUE(r.completion_ratio.has_value());
  EXPECT_NEAR(*r.completion_ratio, 10.0, 1e-9);

  const auto bound = alpha_bound(inst.space, inst.forest, inst.reps);
  EXPECT_NEAR(bound.cost, 5.0, 1e-12);
  EXPECT_NEAR(bound.alpha, 11.0 / 6.0, 1e-12);
  EXPECT_LE(r.cost_ratio, bound.alpha);
}

TEST(Tight, DistanceStructure) {
  const std::size_t p = 4, ell = 3;
  const double eps = 0.125;
  const auto inst = tight_instance(p, ell, eps);
  const auto d = oracle::distance_matrix(inst.space);
  const auto id = [&](std::size_t i, std::size_t j) { return i * (ell + 1) + j; };
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 1; j <= ell; ++j) {
      EXPECT_EQ(d[id(i, 0)][id(i, j)], 1.0);
      for (std::size_t k = j + 1; k <= ell; ++k) EXPECT_EQ(d[id(i, j)][id(i, k)], eps);
    }
    for (std::size_t q = i + 1; q < p; ++q) {
      EXPECT_EQ(d[id(i, 0)][id(q, 0)], eps);
      EXPECT_EQ(d[id(i, 1)][id(q, 1)], 1.0);
    }
    EXPECT_EQ(inst.reps.reps[i].size(), ell);
  }
}

TEST(Tight, GridMatchesClosedForm) {
  for (std::size_t p : {2, 5, 10, 50}) {
    for (std::size_t ell : {1, 3, 8}) {
      for (double eps : {0.5, 0.125, 1.0 / 64.0}) {
        const auto inst = tight_instance(p, ell, eps);
        const auto r = ratios(multirep_mfc(inst.space, inst.forest, inst.reps), mfc_opt(inst.space, inst.forest));
        ASSERT_NEAR(r.cost_ratio, tight_ratio(p, ell, eps), 1e-9) << p << " " << ell << " " << eps;
      }
    }
  }
}

TEST(Tight, ForestHasGammaOne) {
  for (std::size_t p : {2, 5}) {
    for (std::size_t ell : {1, 3}) {
      const auto inst = tight_instance(p, ell, 0.125);
      const auto g = gamma_overlap(inst.space, inst.forest);
      EXPECT_EQ(g.gamma, 1.0);
      EXPECT_TRUE(g.weight_ties);
    }
  }
}

TEST(Tight, OneComponentRatioIsOne) {
  const auto inst = tight_instance(1, 3, 0.1);
  EXPECT_DOUBLE_EQ(inst.predicted_ratio, 1.0);
  EXPECT_EQ(multirep_mfc(inst.space, inst.forest, inst.reps).tree_weight, inst.forest.forest_weight);
}

TEST(Tight, RejectsBadParameters) {
  EXPECT_THROW(tight_instance(0, 3, 0.1), ArgumentError);
  EXPECT_THROW(tight_instance(3, 0, 0.1), ArgumentError);
  EXPECT_THROW(tight_instance(3, 3, 1.0), ArgumentError);
  EXPECT_THROW(tight_instance(3, 3, 0.0), ArgumentError);
}

TEST(FullMst, SmallCases) {
  std::vector<Point> two{DenseVector{{0.0}}, DenseVector{{2.5}}};
  const MetricSpace s2(std::move(two), MetricKind::Euclidean);
  const auto m2 = brute_force_full_mst(s2);
  ASSERT_EQ(m2.edges.size(), 1u);
  EXPECT_EQ(m2.weight, 2.5);
  std::vector<Point> three{DenseVector{{0.0}}, DenseVector{{4.0}}, DenseVector{{1.0}}};
  const MetricSpace s3(std::move(three), MetricKind::Euclidean);
  EXPECT_EQ(brute_force_full_mst(s3).weight, 4.0);
}

TEST(FullMst, AgreesWithComponentMst) {
  const auto s = synthetic::random_space(MetricKind::Levenshtein, 15, 4);
  std::vector<PointId> all(15);
  for (std::size_t i = 0; i < 15; ++i) all[i] = i;
  EXPECT_EQ(brute_force_full_mst(s).weight, edge_weight_sum(exact_component_mst(s, all)));
}

TEST(FullMst, SizeGuard) {
  const auto s = synthetic::random_space(MetricKind::Euclidean, kBruteForceMstPoints + 1, 1, 1);
  EXPECT_THROW(brute_force_full_mst(s), SizeError);
}

// Copyright 2026 The Certigame Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "certigame/solvers.h"

#include <gtest/gtest.h>

#include <cmath>

#include "certigame/blackbox.h"
#include "certigame/evaluation.h"
#include "certigame/games.h"
#include "certigame/pseudogame.h"
#include "test_util.h"

namespace certigame {
namespace {

Pseudogame SampledKuhn(int t, uint64_t seed) {
  auto game = MakeKuhn();
  Pseudogame pg(*game, ChanceMode::kSignature, ExpandMode::kPath);
  const BehaviorProfile empty;
  ProfilePolicy uniform(&empty);
  for (int i = 0; i < t; ++i)
    pg.Record(Play(*game, uniform, DeriveSeed(seed, i)));
  return pg;
}

TEST(CfrSolverTest, MatchingPenniesConverges) {
  auto tree = testing::MatrixGame({{1, -1}, {-1, 1}});
  CfrSolver solver(2, {RegretRule::kRegretMatchingPlus, true, true});
  const UtilityModel model = ExactModel(*tree);
  for (int i = 0; i < 10000; ++i) solver.Iterate(model);
  const BehaviorProfile avg = ToProfile(*tree, solver.AveragePolicy(*tree));
  EXPECT_LE(NashGap(*tree, avg), 1e-3);
}

TEST(CfrSolverTest, PlainCfrConvergesOnKuhn) {
  const GameTree kuhn = Oracle("kuhn");
  CfrSolver solver(2, {RegretRule::kRegretMatching, false, false});
  const UtilityModel model = ExactModel(kuhn);
  for (int i = 0; i < 2000; ++i) solver.Iterate(model);
  const BehaviorProfile avg = ToProfile(kuhn, solver.AveragePolicy(kuhn));
  EXPECT_LE(NashGap(kuhn, avg), 0.05);
}

TEST(CfrSolverTest, CfrPlusKuhnValue) {
  const GameTree kuhn = Oracle("kuhn");
  CfrSolver solver(2, {RegretRule::kRegretMatchingPlus, true, true});
  const UtilityModel model = ExactModel(kuhn);
  for (int i = 0; i < 5000; ++i) solver.Iterate(model);
  const BehaviorProfile avg = ToProfile(kuhn, solver.AveragePolicy(kuhn));
  EXPECT_LE(NashGap(kuhn, avg), 1e-3);
  EXPECT_NEAR(ExpectedValue(kuhn, avg)[0], -1.0 / 18, 1e-4);
}

TEST(CfrSolverTest, OneNodeGameHasNothingToPlay) {
  GameTree tree(2, true, {-1, -1}, {1, 1});
  NodeReport leaf;
  leaf.kind = NodeKind::kTerminal;
  leaf.reward = {0.5, -0.5};
  tree.Expand(0, leaf);
  CfrSolver solver(2, {});
  const UtilityModel model = ExactModel(tree);
  for (int i = 0; i < 3; ++i) EXPECT_TRUE(solver.Iterate(model).empty());
  EXPECT_EQ(ModelValues(model, Policy{}), (std::vector<double>{0.5, -0.5}));
}

TEST(CfrIterationTest, ReturnsValidProfilesOnPseudogame) {
  const Pseudogame pg = SampledKuhn(40, 2);
  std::vector<RegretState> states(2);
  for (int p = 1; p <= 2; ++p) states[p - 1].SyncWithTree(pg.tree(), p, 0);
  for (int i = 0; i < 50; ++i) {
    const BehaviorProfile profile =
        CfrIteration(pg, &states, AllSides(2, Side::kOptimistic), i % 2 == 0);
    ValidateProfile(profile);
    EXPECT_EQ(static_cast<int>(profile.dist.size()), pg.tree().num_infosets());
  }
}

TEST(LeafCountsTest, Kuhn) {
  const GameTree kuhn = Oracle("kuhn");
  const std::vector<double> leaves = LeafCounts(kuhn);
  EXPECT_EQ(leaves[0], 30);
  for (int h = 0; h < kuhn.num_nodes(); ++h) {
    if (kuhn.node(h).is_leaf()) {
      EXPECT_EQ(leaves[h], 1);
    }
  }
}

struct EstimateMoments {
  std::vector<double> mean, se;
  double alpha_mean = 0, alpha_se = 0;
  double max_norm = 0;
};

EstimateMoments Moments(const UtilityModel& model, const UtilityModel& alpha,
                        const Policy& policy, int player, double eps,
                        int samples) {
  const GameTree& tree = *model.tree;
  RegretState treeplex;
  treeplex.SyncWithTree(tree, player, 0);
  const std::vector<double> leaves = LeafCounts(tree);
  const int n = tree.num_sequences(player);
  std::vector<double> sum(n, 0.0), sq(n, 0.0);
  double a_sum = 0, a_sq = 0;
  EstimateMoments out;
  Rng rng(12345);
  for (int s = 0; s < samples; ++s) {
    const StochasticLossEstimate est = SampleLossEstimate(
        model, &alpha, player, policy, leaves, eps, treeplex, &rng);
    std::vector<double> dense(n, 0.0);
    for (const auto& [q, g] : est.gain) dense[q] += g;
    for (int q = 0; q < n; ++q) {
      sum[q] += dense[q];
      sq[q] += dense[q] * dense[q];
    }
    a_sum += est.alpha_estimate;
    a_sq += est.alpha_estimate * est.alpha_estimate;
    out.max_norm = std::max(out.max_norm, est.norm);
    EXPECT_GT(est.sample_prob, 0);
  }
  for (int q = 0; q < n; ++q) {
    const double m = sum[q] / samples;
    out.mean.push_back(m);
    out.se.push_back(
        std::sqrt(std::max(0.0, sq[q] / samples - m * m) / samples));
  }
  out.alpha_mean = a_sum / samples;
  out.alpha_se = std::sqrt(
      std::max(0.0, a_sq / samples - out.alpha_mean * out.alpha_mean) /
      samples);
  return out;
}

TEST(SampleLossEstimateTest, UnbiasedOnPartialKuhn) {
  const Pseudogame pg = SampledKuhn(25, 4);
  ASSERT_FALSE(pg.tree().fully_expanded());
  const UtilityModel beta = pg.BoundModel(AllSides(2, Side::kOptimistic));
  const UtilityModel alpha = pg.BoundModel(AllSides(2, Side::kPessimistic));
  const Policy policy =
      ToPolicy(pg.tree(), testing::RandomProfile(pg.tree(), 9));
  for (int player = 1; player <= 2; ++player) {
    const std::vector<double> exact = GainVector(beta, player, policy);
    const EstimateMoments m = Moments(beta, alpha, policy, player, 0.6, 20000);
    for (size_t q = 0; q < exact.size(); ++q) {
      EXPECT_LE(std::abs(m.mean[q] - exact[q]), 4 * m.se[q] + 1e-12)
          << "player " << player << " seq " << q;
    }
    const double alpha_value = ModelValues(alpha, policy)[player - 1];
    EXPECT_LE(std::abs(m.alpha_mean - alpha_value), 4 * m.alpha_se + 1e-12);
  }
}

TEST(SampleLossEstimateTest, UniformSamplingNormBoundedByTreeSize) {
  const Pseudogame pg = SampledKuhn(25, 4);
  const UtilityModel beta = pg.BoundModel(AllSides(2, Side::kOptimistic));
  const Policy policy =
      ToPolicy(pg.tree(), testing::RandomProfile(pg.tree(), 9));
  const auto [lb, ub] = pg.tree().RootRange(1);
  const EstimateMoments m = Moments(beta, beta, policy, 1, 1.0, 2000);
  EXPECT_LE(m.max_norm, pg.num_nodes() * (ub - lb));
}

TEST(MccfrTest, StepUpdatesStatesAndIsDeterministic) {
  const Pseudogame pg = SampledKuhn(40, 2);
  auto run = [&](uint64_t seed) {
    std::vector<RegretState> states(2);
    for (int p = 1; p <= 2; ++p) states[p - 1].SyncWithTree(pg.tree(), p, 0);
    std::vector<StochasticLossEstimate> estimates;
    for (int i = 0; i < 20; ++i) {
      MccfrOutcomeStep(pg, &states, AllSides(2, Side::kOptimistic), 0.6,
                       DeriveSeed(seed, i), &estimates);
      EXPECT_EQ(estimates.size(), 2u);
    }
    return states;
  };
  const auto a = run(1), b = run(1), c = run(2);
  EXPECT_TRUE(a[0] == b[0] && a[1] == b[1]);
  EXPECT_FALSE(a[0] == c[0] && a[1] == c[1]);
}

TEST(ExactSolverTest, RootFrontierGivesRootBounds) {
  const Pseudogame pg = SampledKuhn(0, 0);
  ExactSolver solver;
  const ExactSolveResult hi = solver.Solve(pg, Side::kOptimistic);
  const ExactSolveResult lo = solver.Solve(pg, Side::kPessimistic);
  EXPECT_EQ(hi.value, 2);
  EXPECT_EQ(lo.value, -2);
}

TEST(ExactSolverTest, OptimisticValueDominatesPessimistic) {
  for (int t : {5, 30, 200}) {
    const Pseudogame pg = SampledKuhn(t, 7);
    ExactSolver a, b;
    const ExactSolveResult hi = a.Solve(pg, Side::kOptimistic);
    const ExactSolveResult lo = b.Solve(pg, Side::kPessimistic);
    EXPECT_TRUE(hi.converged && lo.converged);
    EXPECT_GE(hi.upper, lo.lower);
    EXPECT_GE(hi.value + hi.achieved_gap, lo.value - lo.achieved_gap);
  }
}

TEST(ExactSolverTest, KuhnValueAndIndependentGap) {
  const GameTree kuhn = Oracle("kuhn");
  ExactSolver solver;
  const ExactSolveResult r = solver.Solve(ExactModel(kuhn));
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.value, -1.0 / 18, 1e-6);
  EXPECT_LE(NashGap(kuhn, r.profile), 1e-6 * 4 + 1e-12);
}

TEST(ExactSolverTest, IterationCapFlagged) {
  const GameTree kuhn = Oracle("kuhn");
  ExactSolveOptions options;
  options.tol_rel = 1e-12;
  options.max_iterations = 10;
  options.check_every = 5;
  ExactSolver solver(options);
  const ExactSolveResult r = solver.Solve(ExactModel(kuhn));
  EXPECT_FALSE(r.converged);
  EXPECT_GT(r.achieved_gap, 1e-12 * 4);
  EXPECT_NEAR(r.achieved_gap, NashGap(kuhn, r.profile), 1e-12);
}

TEST(ExactSolverTest, WarmStartOnGrowingTree) {
  auto game = MakeKuhn();
  Pseudogame pg(*game, ChanceMode::kKnown, ExpandMode::kPath);
  const BehaviorProfile empty;
  ProfilePolicy uniform(&empty);
  ExactSolver warm;
  for (int i = 0; i < 300; ++i) {
    pg.Record(Play(*game, uniform, DeriveSeed(3, i)));
    if (i % 50 == 0) {
      EXPECT_TRUE(warm.Solve(pg, Side::kOptimistic).converged);
    }
  }
}

TEST(ZeroSumGapTest, MatchingPennies) {
  auto tree = testing::MatrixGame({{1, -1}, {-1, 1}});
  const UtilityModel model = ExactModel(*tree);
  double upper = 0, lower = 0;
  EXPECT_NEAR(ZeroSumGap(model, UniformPolicy(*tree), &upper, &lower), 0,
              1e-15);
  Policy pure = UniformPolicy(*tree);
  for (auto& d : pure) d = {1, 0};
  EXPECT_NEAR(ZeroSumGap(model, pure, &upper, &lower), 2, 1e-15);
  EXPECT_EQ(upper, 1);
  EXPECT_EQ(lower, -1);
}

}  // namespace
}  // namespace certigame

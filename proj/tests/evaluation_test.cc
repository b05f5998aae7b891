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

#include "certigame/evaluation.h"

#include <gtest/gtest.h>

#include <cmath>

#include "certigame/blackbox.h"
#include "certigame/profile.h"
#include "certigame/solvers.h"
#include "test_util.h"

namespace certigame {
namespace {

// Profile with one player's part replaced by `plan`.
BehaviorProfile With(const BehaviorProfile& base, const BehaviorProfile& plan) {
  BehaviorProfile out = base;
  for (const auto& [key, probs] : plan.dist) out.Set(key, probs);
  return out;
}

double BruteForceBestResponse(const GameTree& tree, int player,
                              const BehaviorProfile& profile) {
  double best = -1e300;
  testing::ForEachPurePlan(tree, player, [&](const BehaviorProfile& plan) {
    best = std::max(best,
                    testing::NaiveValue(tree, With(profile, plan))[player - 1]);
    return true;
  });
  return best;
}

class RandomGames : public ::testing::TestWithParam<int> {};

TEST_P(RandomGames, ExpectedValueMatchesNaiveRecursion) {
  testing::RandomGameOptions options;
  options.depth = 2 + GetParam() % 3;
  options.num_players = GetParam() % 4 == 3 ? 3 : 2;
  options.zero_sum = options.num_players == 2;
  auto tree = testing::RandomGame(100 + GetParam(), options);
  for (uint64_t s = 0; s < 3; ++s) {
    const BehaviorProfile profile = testing::RandomProfile(*tree, s);
    const std::vector<double> fast = ExpectedValue(*tree, profile);
    const std::vector<double> slow = testing::NaiveValue(*tree, profile);
    for (int p = 0; p < options.num_players; ++p) {
      EXPECT_NEAR(fast[p], slow[p], 1e-12);
    }
  }
}

TEST_P(RandomGames, BestResponseMatchesPureEnumeration) {
  testing::RandomGameOptions options;
  options.depth = 2 + GetParam() % 3;
  options.max_actions = 2;
  auto tree = testing::RandomGame(200 + GetParam(), options);
  const BehaviorProfile profile = testing::RandomProfile(*tree, GetParam());
  for (int p = 1; p <= 2; ++p) {
    if (tree->player_infosets(p).size() > 12) continue;
    const auto [response, value] = BestResponse(*tree, p, profile);
    EXPECT_NEAR(value, BruteForceBestResponse(*tree, p, profile), 1e-12);
    // The returned response achieves the value it reports.
    EXPECT_NEAR(testing::NaiveValue(*tree, With(profile, response))[p - 1],
                value, 1e-12);
  }
}

TEST_P(RandomGames, GainVectorIsLinearValue) {
  auto tree = testing::RandomGame(300 + GetParam(), {});
  const UtilityModel model = ExactModel(*tree);
  const BehaviorProfile profile = testing::RandomProfile(*tree, 1);
  const Policy policy = ToPolicy(*tree, profile);
  const std::vector<double> values = ModelValues(model, policy);
  for (int p = 1; p <= 2; ++p) {
    const std::vector<double> gain = GainVector(model, p, policy);
    const SequenceStrategy x = ToSequenceForm(*tree, p, policy);
    EXPECT_NEAR(Dot(x.values, gain), values[p - 1], 1e-12);
    EXPECT_NEAR(values[p - 1], testing::NaiveValue(*tree, profile)[p - 1],
                1e-12);
  }
}

TEST_P(RandomGames, SequenceFormRoundTrip) {
  auto tree = testing::RandomGame(400 + GetParam(), {});
  const BehaviorProfile profile = testing::RandomProfile(*tree, 2);
  for (int p = 1; p <= 2; ++p) {
    const SequenceStrategy x = ToSequenceForm(profile, p, *tree);
    ValidateSequenceForm(*tree, x);
    EXPECT_EQ(x.values[0], 1.0);
    const BehaviorProfile back = FromSequenceForm(x, *tree);
    for (int j : tree->player_infosets(p)) {
      const std::string& key = tree->infoset(j).key;
      for (size_t a = 0; a < back.at(key).size(); ++a) {
        EXPECT_NEAR(back.at(key)[a], profile.at(key)[a], 1e-12);
      }
    }
  }
}

TEST_P(RandomGames, AverageProfileMatchesMixtureValue) {
  auto tree = testing::RandomGame(500 + GetParam(), {});
  const BehaviorProfile a = testing::RandomProfile(*tree, 10);
  const BehaviorProfile b = testing::RandomProfile(*tree, 11);
  const BehaviorProfile opp = testing::RandomProfile(*tree, 12);
  const BehaviorProfile avg = AverageProfile(
      *tree, {ToSequenceForm(a, 1, *tree), ToSequenceForm(b, 1, *tree)},
      {0.25, 0.75});
  auto value = [&](const BehaviorProfile& mine) {
    BehaviorProfile full = opp;
    for (int j : tree->player_infosets(1)) {
      const std::string& key = tree->infoset(j).key;
      full.Set(key, mine.at(key));
    }
    return testing::NaiveValue(*tree, full)[0];
  };
  EXPECT_NEAR(value(avg), 0.25 * value(a) + 0.75 * value(b), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomGames, ::testing::Range(0, 12));

TEST(EvaluationTest, InvalidSequenceFormRejected) {
  const GameTree tree = Oracle("kuhn");
  SequenceStrategy x = ToSequenceForm(tree, 1, UniformPolicy(tree));
  x.values[1] += 0.1;
  EXPECT_THROW(ValidateSequenceForm(tree, x), CertigameError);
  EXPECT_THROW(FromSequenceForm(x, tree), CertigameError);
}

TEST(EvaluationTest, ExactModelNeedsFullTree) {
  GameTree tree(2, false, {-1, -1}, {1, 1});
  EXPECT_THROW(ExactModel(tree), CertigameError);
}

TEST(EvaluationTest, IncompleteProfileRejected) {
  const GameTree tree = Oracle("kuhn");
  BehaviorProfile partial;
  partial.Set("P1|J|", {0.5, 0.5});
  const Policy policy = ToPolicy(tree, partial, false);
  EXPECT_THROW(ModelValues(ExactModel(tree), policy), CertigameError);
}

TEST(EvaluationTest, NashGapRequiresZeroSum) {
  auto toy = testing::ThreePlayerToy();
  EXPECT_THROW(NashGap(*toy, ToProfile(*toy, UniformPolicy(*toy))),
               CertigameError);
}

TEST(EvaluationTest, MatchingPenniesUniformIsEquilibrium) {
  auto tree = testing::MatrixGame({{1, -1}, {-1, 1}});
  const BehaviorProfile uniform = ToProfile(*tree, UniformPolicy(*tree));
  EXPECT_NEAR(NashGap(*tree, uniform), 0.0, 1e-15);
  BehaviorProfile skew = uniform;
  skew.Set("P1|", {0.7, 0.3});
  // Player 2 exploits the skew by 0.4; player 1 gains nothing against
  // a uniform opponent.
  EXPECT_NEAR(NashGap(*tree, skew), 0.4, 1e-12);
}

TEST(EvaluationTest, ExactSolverFindsRockPaperScissors) {
  auto tree = testing::MatrixGame({{0, -1, 1}, {1, 0, -1}, {-1, 1, 0}});
  ExactSolveOptions options;
  options.tol_rel = 1e-8;
  ExactSolver solver(options);
  const ExactSolveResult result = solver.Solve(ExactModel(*tree));
  EXPECT_TRUE(result.converged);
  EXPECT_NEAR(result.value, 0.0, 1e-7);
  EXPECT_LE(NashGap(*tree, result.profile), 2e-8 + 1e-12);
  for (double p : result.profile.at("P1|")) EXPECT_NEAR(p, 1.0 / 3, 1e-4);
}

TEST(EvaluationTest, ExactSolverKuhnValue) {
  const GameTree tree = Oracle("kuhn");
  ExactSolveOptions options;
  options.tol_rel = 1e-7;
  ExactSolver solver(options);
  const ExactSolveResult result = solver.Solve(ExactModel(tree));
  EXPECT_TRUE(result.converged);
  EXPECT_NEAR(result.value, -1.0 / 18, 1e-6);
  // The gap is rechecked with an independent brute-force evaluation.
  const double br1 = BruteForceBestResponse(tree, 1, result.profile);
  const double br2 = BruteForceBestResponse(tree, 2, result.profile);
  EXPECT_LE(br1 + br2, 1e-6);
  EXPECT_NEAR(br1 + br2, NashGap(tree, result.profile), 1e-12);
}

TEST(EvaluationTest, ExactSolverOnePlayerIsBestResponse) {
  const GameTree tree = Oracle("bandit:sec4:0.3:0.1");
  ExactSolver solver;
  const ExactSolveResult result = solver.Solve(ExactModel(tree));
  EXPECT_EQ(result.profile.at("P1|"), (std::vector<double>{0, 1}));
  EXPECT_NEAR(result.value, 0.5, 1e-15);
}

TEST(EvaluationTest, SequenceAveragerPadsNewInfosetsUniformly) {
  GameTree tree(2, false, {-1, -1}, {1, 1});
  NodeReport root;
  root.kind = NodeKind::kDecision;
  root.player = 1;
  root.infoset = "P1|";
  root.actions = {"l", "r"};
  root.reward = {0, 0};
  root.child_lb = {{-1, -1}, {-1, -1}};
  root.child_ub = {{1, 1}, {1, 1}};
  tree.Expand(0, root);
  SequenceAverager avg(1);
  avg.Add(tree, {1, 0.25, 0.75}, 1.0);
  NodeReport next = root;
  next.infoset = "P1|l";
  next.actions = {"a", "b", "c"};
  next.child_lb.push_back({-1, -1});
  next.child_ub.push_back({1, 1});
  tree.Expand(1, next);
  avg.Add(tree, {1, 1, 0, 1, 0, 0}, 1.0);
  const std::vector<double> x = avg.Average(tree);
  ASSERT_EQ(x.size(), 6u);
  EXPECT_NEAR(x[1], 0.625, 1e-15);
  // First iterate mass 0.25 on "l" spread uniformly, then all on "a".
  EXPECT_NEAR(x[3], (0.25 / 3 + 1) / 2, 1e-15);
  EXPECT_NEAR(x[4], (0.25 / 3) / 2, 1e-15);
  SequenceStrategy seq{1, x};
  ValidateSequenceForm(tree, seq);
}

}  // namespace
}  // namespace certigame

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

#include "certigame/regret.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "certigame/blackbox.h"
#include "certigame/evaluation.h"
#include "test_util.h"

namespace certigame {
namespace {

TEST(RmStepTest, ZeroRegretIsUniform) {
  EXPECT_EQ(RegretMatchingPolicy({0, 0, 0, 0}),
            (std::vector<double>{0.25, 0.25, 0.25, 0.25}));
  EXPECT_EQ(RegretMatchingPolicy({-1, -2}), (std::vector<double>{0.5, 0.5}));
}

TEST(RmStepTest, Proportional) {
  EXPECT_EQ(RegretMatchingPolicy({3, 1, 0}),
            (std::vector<double>{0.75, 0.25, 0}));
  EXPECT_EQ(RegretMatchingPolicy({3, 1, -5}),
            (std::vector<double>{0.75, 0.25, 0}));
}

TEST(RmStepTest, UpdateAndClip) {
  LocalRegret plain{{0, 0}};
  const std::vector<double> x =
      RmStep(&plain, {1, 0}, RegretRule::kRegretMatching);
  EXPECT_EQ(x, (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(plain.regret, (std::vector<double>{-0.5, 0.5}));
  LocalRegret plus{{0, 0}};
  RmStep(&plus, {1, 0}, RegretRule::kRegretMatchingPlus);
  EXPECT_EQ(plus.regret, (std::vector<double>{0, 0.5}));
  EXPECT_THROW(RmStep(&plus, {1, 0, 0}, RegretRule::kRegretMatching),
               CertigameError);
}

// Replays losses against the best fixed action.
double ExternalRegret(const std::vector<std::vector<double>>& losses,
                      const std::vector<std::vector<double>>& plays) {
  std::vector<double> cum(losses[0].size(), 0.0);
  double played = 0;
  for (size_t t = 0; t < losses.size(); ++t) {
    for (size_t a = 0; a < cum.size(); ++a) {
      cum[a] += losses[t][a];
      played += plays[t][a] * losses[t][a];
    }
  }
  return played - *std::min_element(cum.begin(), cum.end());
}

TEST(RmStepTest, AdversarialRegretBound) {
  for (RegretRule rule :
       {RegretRule::kRegretMatching, RegretRule::kRegretMatchingPlus}) {
    for (int T : {10, 100, 1000, 10000}) {
      LocalRegret state{{0, 0}};
      std::vector<std::vector<double>> losses, plays;
      for (int t = 0; t < T; ++t) {
        // Punish whichever action is currently favoured.
        const std::vector<double> x = RegretMatchingPolicy(state.regret);
        std::vector<double> loss = x[0] >= x[1] ? std::vector<double>{1, 0}
                                                : std::vector<double>{0, 1};
        plays.push_back(RmStep(&state, loss, rule));
        losses.push_back(loss);
      }
      EXPECT_LE(ExternalRegret(losses, plays), std::sqrt(T) * std::sqrt(2.0))
          << T;
    }
  }
}

TEST(RmStepTest, RandomLossRegretBound) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (RegretRule rule :
       {RegretRule::kRegretMatching, RegretRule::kRegretMatchingPlus}) {
    LocalRegret state{{0, 0, 0}};
    std::vector<std::vector<double>> losses, plays;
    const int T = 5000;
    for (int t = 0; t < T; ++t) {
      std::vector<double> loss = {u(gen), u(gen), u(gen)};
      plays.push_back(RmStep(&state, loss, rule));
      losses.push_back(loss);
    }
    EXPECT_LE(ExternalRegret(losses, plays), 2 * std::sqrt(3.0 * T));
  }
}

struct Treeplex {
  GameTree tree;
  int player;
};

Treeplex RandomTreeplex(uint64_t seed) {
  testing::RandomGameOptions opts;
  opts.depth = 4;
  return {*testing::RandomGame(seed, opts), 1 + static_cast<int>(seed % 2)};
}

RegretState StateWith(const GameTree& tree, int player, int count,
                      RegretRule rule) {
  RegretState state(rule);
  const std::vector<int>& infosets = tree.player_infosets(player);
  for (int k = 0; k < count; ++k) {
    const auto& info = tree.infoset(infosets[k]);
    state.Extend(info.key, info.parent_seq, info.num_actions(), 0);
  }
  return state;
}

void ExtendTo(const GameTree& tree, int player, int from, int to, int64_t t,
              RegretState* state) {
  const std::vector<int>& infosets = tree.player_infosets(player);
  for (int k = from; k < to; ++k) {
    const auto& info = tree.infoset(infosets[k]);
    state->Extend(info.key, info.parent_seq, info.num_actions(), t);
  }
}

// update-then-extend equals extend-then-update with zero-padded losses, for
// dense (full-walk) and sparse (sampled) updates under RM and RM+.
TEST(ExtendabilityTest, Commutation) {
  int trials = 0;
  for (uint64_t seed = 0; trials < 100; ++seed) {
    const Treeplex tp = RandomTreeplex(seed);
    const int total =
        static_cast<int>(tp.tree.player_infosets(tp.player).size());
    if (total < 2) continue;
    ++trials;
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-3, 3);
    const int small = 1 + static_cast<int>(gen() % (total - 1));
    for (RegretRule rule :
         {RegretRule::kRegretMatching, RegretRule::kRegretMatchingPlus}) {
      for (bool sparse : {false, true}) {
        RegretState a = StateWith(tp.tree, tp.player, small, rule);
        // A shared random history before the extension point.
        for (int s = 0; s < 5; ++s) {
          std::vector<double> loss(a.num_sequences());
          for (double& v : loss) v = u(gen);
          a.Observe(loss);
        }
        RegretState b = a;
        const int n_small = a.num_sequences();
        std::vector<double> dense(n_small);
        std::vector<std::pair<int, double>> entries;
        for (int q = 0; q < n_small; ++q) {
          dense[q] = u(gen);
          if (gen() % 3 == 0) entries.emplace_back(q, dense[q]);
        }
        // phi(u(s, l))
        if (sparse) {
          a.ObserveSparse(entries);
        } else {
          a.Observe(dense);
        }
        ExtendTo(tp.tree, tp.player, small, total, 3, &a);
        // u(phi(s), (l, 0))
        std::vector<std::vector<double>> old_behavior;
        for (int j = 0; j < small; ++j) old_behavior.push_back(b.Behavior(j));
        ExtendTo(tp.tree, tp.player, small, total, 3, &b);
        // Clause 1: old strategies unchanged by the extension.
        for (int j = 0; j < small; ++j) {
          EXPECT_EQ(b.Behavior(j), old_behavior[j]);
        }
        if (sparse) {
          b.ObserveSparse(entries);
        } else {
          std::vector<double> padded = dense;
          padded.resize(b.num_sequences(), 0.0);
          b.Observe(padded);
        }
        EXPECT_TRUE(a == b) << "seed " << seed << " sparse " << sparse;
        for (int j = small; j < total; ++j) {
          const std::vector<double> x = b.Behavior(j);
          for (double p : x) EXPECT_EQ(p, 1.0 / x.size());
        }
      }
    }
  }
}

TEST(ExtendabilityTest, ExtensionKeepsOldStrategies) {
  uint64_t seed = 0;
  while (RandomTreeplex(seed)
             .tree.player_infosets(RandomTreeplex(seed).player)
             .size() < 3) {
    ++seed;
  }
  const Treeplex tp = RandomTreeplex(seed);
  const int total = static_cast<int>(tp.tree.player_infosets(tp.player).size());
  RegretState state =
      StateWith(tp.tree, tp.player, 1, RegretRule::kRegretMatching);
  std::vector<double> loss(state.num_sequences());
  for (size_t q = 0; q < loss.size(); ++q) loss[q] = std::sin(q + 1.0);
  state.Observe(loss);
  const std::vector<double> before = state.Behavior(0);
  ExtendTo(tp.tree, tp.player, 1, total, 1, &state);
  EXPECT_EQ(state.Behavior(0), before);
  EXPECT_EQ(state.local(total - 1).created_at, 1);
}

TEST(ExtendabilityTest, EmptyStateExtendsToUniform) {
  const Treeplex tp = RandomTreeplex(5);
  RegretState state;
  state.SyncWithTree(tp.tree, tp.player, 0);
  Policy policy(tp.tree.num_infosets());
  state.WritePolicy(tp.tree, tp.player, &policy);
  const Policy uniform = UniformPolicy(tp.tree);
  for (int j : tp.tree.player_infosets(tp.player)) {
    EXPECT_EQ(policy[j], uniform[j]);
  }
}

TEST(ExtendabilityTest, DuplicateRejected) {
  RegretState state;
  state.Extend("I", 0, 2, 0);
  EXPECT_THROW(state.Extend("I", 0, 2, 0), CertigameError);
}

// Cumulative regret against the best fixed sequence-form strategy, via the
// accumulated loss, equals brute force over pure plans.
TEST(RegretSoundnessTest, AccumulatedLossBestResponseMatchesEnumeration) {
  std::vector<Treeplex> cases;
  for (uint64_t seed = 0; seed < 8; ++seed) {
    cases.push_back({*testing::RandomGame(seed, {}), 1 + int(seed % 2)});
  }
  cases.push_back({Oracle("kuhn"), 1});
  cases.push_back({Oracle("kuhn"), 2});
  for (size_t c = 0; c < cases.size(); ++c) {
    const uint64_t seed = c;
    const Treeplex& tp = cases[c];
    RegretState state;
    state.SyncWithTree(tp.tree, tp.player, 0);
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> cum(state.num_sequences(), 0.0);
    double played = 0;
    const int T = 200;
    for (int t = 0; t < T; ++t) {
      std::vector<double> loss(state.num_sequences());
      for (double& v : loss) v = u(gen);
      played += Dot(state.SequenceForm(), loss);
      state.Observe(loss);
      for (size_t q = 0; q < loss.size(); ++q) cum[q] += loss[q];
    }
    std::vector<double> neg(cum.size());
    for (size_t q = 0; q < cum.size(); ++q) neg[q] = -cum[q];
    const double via_br =
        played + TreeplexBestResponse(tp.tree, tp.player, neg, nullptr);
    double brute = -1e300;
    testing::ForEachPurePlan(
        tp.tree, tp.player, [&](const BehaviorProfile& plan) {
          const SequenceStrategy x = ToSequenceForm(plan, tp.player, tp.tree);
          brute = std::max(brute, played - Dot(x.values, cum));
          return true;
        });
    EXPECT_NEAR(via_br, brute, 1e-9);
    // CFR bound: counterfactual losses are bounded by the number of
    // sequences, so each infoset contributes at most 2 S sqrt(|A| T).
    double bound = 0;
    for (int j : tp.tree.player_infosets(tp.player)) {
      bound += 2.0 * state.num_sequences() *
               std::sqrt(tp.tree.infoset(j).num_actions() * 1.0 * T);
    }
    EXPECT_LE(via_br, bound);
  }
}

}  // namespace
}  // namespace certigame

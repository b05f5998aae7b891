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

#ifndef CERTIGAME_TESTS_TEST_UTIL_H_
#define CERTIGAME_TESTS_TEST_UTIL_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "certigame/game_tree.h"
#include "certigame/profile.h"

namespace certigame {
namespace testing {

struct RandomGameOptions {
  int num_players = 2;
  bool zero_sum = true;
  int depth = 3;
  int max_actions = 3;
  bool chance = true;
  // Chance nodes on one level share a distribution and a signature.
  bool signatures = false;
};

// Random perfect-recall game with imperfect information, fully expanded,
// with exact residual bounds and a chance policy.
std::shared_ptr<GameTree> RandomGame(uint64_t seed,
                                     const RandomGameOptions& options);

// Plain recursion over the tree with profile lookups by infoset key.
std::vector<double> NaiveValue(const GameTree& tree,
                               const BehaviorProfile& profile);

// Every pure strategy of a player (one action per infoset), as profiles.
// Calls `visit` for each; stops early if it returns false.
void ForEachPurePlan(const GameTree& tree, int player,
                     const std::function<bool(const BehaviorProfile&)>& visit);

// Uniformly random behavior profile over all infosets of the tree.
BehaviorProfile RandomProfile(const GameTree& tree, uint64_t seed);

// Two-player zero-sum matrix game as a tree: player 2 does not observe
// player 1's choice.
std::shared_ptr<GameTree> MatrixGame(
    const std::vector<std::vector<double>>& payoff);

// Three-player general-sum toy: each player picks a bit in turn without
// seeing the others; payoffs reward matching the next player.
std::shared_ptr<GameTree> ThreePlayerToy();

}  // namespace testing
}  // namespace certigame

#endif  // CERTIGAME_TESTS_TEST_UTIL_H_

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

#ifndef CERTIGAME_EVALUATION_H_
#define CERTIGAME_EVALUATION_H_

#include <utility>
#include <vector>

#include "certigame/game_tree.h"
#include "certigame/profile.h"

namespace certigame {

// The utility of every player as a multilinear function of the profile: a
// sum over active nodes of reach(h) * local_i(h). A node is active for
// player i if no strict ancestor is a leaf of i's utility. This covers both
// fully known games and the bound games of a pseudogame.
struct UtilityModel {
  const GameTree* tree = nullptr;
  // Distribution used at chance nodes (empty for other nodes).
  std::vector<std::vector<double>> chance;
  // local[i-1][h] and leaf[i-1][h] for player i.
  std::vector<std::vector<double>> local;
  std::vector<std::vector<char>> leaf;
  // Derived by FinalizeModel: active[i-1][h] is set when no strict ancestor
  // of h is a leaf for player i.
  std::vector<std::vector<char>> active;

  int num_players() const { return tree->num_players(); }
};

// Computes the active flags; called by every model constructor.
void FinalizeModel(UtilityModel* model);

// Exact utility model of a game; requires no frontier nodes and a chance
// policy wherever chance acts.
UtilityModel ExactModel(const GameTree& tree);

// Realization weight of every node under the profile, excluding `skip_player`
// (0 includes everyone, chance always included). Throws "incomplete profile"
// if a node with positive reach lacks a distribution.
std::vector<double> ReachWeights(const UtilityModel& model,
                                 const Policy& policy, int skip_player);

// Per-player values under the model.
std::vector<double> ModelValues(const UtilityModel& model,
                                const Policy& policy);

// Linear gain of `player` over their sequences given everybody else.
std::vector<double> GainVector(const UtilityModel& model, int player,
                               const Policy& policy);

// Best pure response to a gain vector on the player's treeplex. Writes the
// response into `response` (when non-null) and returns its value.
double TreeplexBestResponse(const GameTree& tree, int player,
                            const std::vector<double>& gain, Policy* response);
// Minimum of <x, gain> over the treeplex.
double TreeplexWorstResponse(const GameTree& tree, int player,
                             const std::vector<double>& gain);

double Dot(const std::vector<double>& a, const std::vector<double>& b);

// Public operations on fully known games.
std::vector<double> ExpectedValue(const GameTree& game,
                                  const BehaviorProfile& profile);
std::pair<BehaviorProfile, double> BestResponse(
    const GameTree& game, int player, const BehaviorProfile& opponents);
double NashGap(const GameTree& game, const BehaviorProfile& profile);

}  // namespace certigame

#endif  // CERTIGAME_EVALUATION_H_

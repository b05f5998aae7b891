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

#include <utility>
#include <vector>

namespace certigame {

void FinalizeModel(UtilityModel* model) {
  const GameTree& tree = *model->tree;
  const int n = tree.num_players();
  model->active.assign(n, std::vector<char>(tree.num_nodes(), 0));
  for (int p = 1; p <= n; ++p) {
    const std::vector<char>& leaf = model->leaf[p - 1];
    std::vector<char>& active = model->active[p - 1];
    active[0] = 1;
    for (int h = 0; h < tree.num_nodes(); ++h) {
      const Node& node = tree.node(h);
      if (node.is_leaf()) continue;
      const char flag = active[h] && !leaf[h];
      for (int a = 0; a < node.num_actions(); ++a) {
        active[node.child(a)] = flag;
      }
    }
  }
}

UtilityModel ExactModel(const GameTree& tree) {
  CERTIGAME_CHECK(tree.num_frontier() == 0,
                  "bounds required, use pseudogame evaluation");
  UtilityModel model;
  model.tree = &tree;
  const int n = tree.num_players();
  const int num_nodes = tree.num_nodes();
  model.chance.resize(num_nodes);
  model.local.assign(n, std::vector<double>(num_nodes, 0.0));
  model.leaf.assign(n, std::vector<char>(num_nodes, 0));
  for (int h = 0; h < num_nodes; ++h) {
    const Node& node = tree.node(h);
    if (node.kind == NodeKind::kChance) {
      CERTIGAME_CHECK(!node.chance_probs.empty(),
                      "chance policy required for exact evaluation");
      model.chance[h] = node.chance_probs;
    }
    for (int p = 1; p <= n; ++p) {
      model.local[p - 1][h] = tree.reward(h, p);
      model.leaf[p - 1][h] = node.kind == NodeKind::kTerminal;
    }
  }
  FinalizeModel(&model);
  return model;
}

std::vector<double> ReachWeights(const UtilityModel& model,
                                 const Policy& policy, int skip_player) {
  const GameTree& tree = *model.tree;
  std::vector<double> reach(tree.num_nodes(), 0.0);
  reach[0] = 1.0;
  for (int h = 0; h < tree.num_nodes(); ++h) {
    const Node& node = tree.node(h);
    if (node.is_leaf()) continue;
    const double r = reach[h];
    if (node.kind == NodeKind::kChance) {
      const std::vector<double>& probs = model.chance[h];
      for (int a = 0; a < node.num_actions(); ++a) {
        reach[node.child(a)] = r * probs[a];
      }
    } else if (node.player == skip_player) {
      for (int a = 0; a < node.num_actions(); ++a) reach[node.child(a)] = r;
    } else {
      const std::vector<double>& probs = policy[node.infoset];
      if (probs.empty()) {
        CERTIGAME_CHECK(r == 0, "incomplete profile");
        for (int a = 0; a < node.num_actions(); ++a) {
          reach[node.child(a)] = 0;
        }
        continue;
      }
      for (int a = 0; a < node.num_actions(); ++a) {
        reach[node.child(a)] = r * probs[a];
      }
    }
  }
  return reach;
}

std::vector<double> ModelValues(const UtilityModel& model,
                                const Policy& policy) {
  const GameTree& tree = *model.tree;
  const std::vector<double> reach = ReachWeights(model, policy, 0);
  std::vector<double> values(tree.num_players(), 0.0);
  for (int p = 1; p <= tree.num_players(); ++p) {
    const std::vector<char>& active = model.active[p - 1];
    const std::vector<double>& local = model.local[p - 1];
    double v = 0;
    for (int h = 0; h < tree.num_nodes(); ++h) {
      if (active[h] && reach[h] != 0) v += reach[h] * local[h];
    }
    values[p - 1] = v;
  }
  return values;
}

std::vector<double> GainVector(const UtilityModel& model, int player,
                               const Policy& policy) {
  const GameTree& tree = *model.tree;
  const std::vector<double> reach = ReachWeights(model, policy, player);
  const std::vector<char>& active = model.active[player - 1];
  const std::vector<double>& local = model.local[player - 1];
  std::vector<double> gain(tree.num_sequences(player), 0.0);
  for (int h = 0; h < tree.num_nodes(); ++h) {
    if (active[h] && reach[h] != 0) {
      gain[tree.seq(h, player)] += reach[h] * local[h];
    }
  }
  return gain;
}

double TreeplexBestResponse(const GameTree& tree, int player,
                            const std::vector<double>& gain, Policy* response) {
  std::vector<double> value(gain);
  value.resize(tree.num_sequences(player), 0.0);
  if (response != nullptr) response->resize(tree.num_infosets());
  const std::vector<int>& infosets = tree.player_infosets(player);
  for (auto it = infosets.rbegin(); it != infosets.rend(); ++it) {
    const Infoset& info = tree.infoset(*it);
    int best = 0;
    for (int a = 1; a < info.num_actions(); ++a) {
      if (value[info.first_seq + a] > value[info.first_seq + best]) best = a;
    }
    value[info.parent_seq] += value[info.first_seq + best];
    if (response != nullptr) {
      std::vector<double>& probs = (*response)[*it];
      probs.assign(info.num_actions(), 0.0);
      probs[best] = 1.0;
    }
  }
  return value[0];
}

double TreeplexWorstResponse(const GameTree& tree, int player,
                             const std::vector<double>& gain) {
  std::vector<double> negated(gain.size());
  for (size_t s = 0; s < gain.size(); ++s) negated[s] = -gain[s];
  return -TreeplexBestResponse(tree, player, negated, nullptr);
}

double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  const size_t n = std::min(a.size(), b.size());
  double total = 0;
  for (size_t k = 0; k < n; ++k) total += a[k] * b[k];
  return total;
}

std::vector<double> ExpectedValue(const GameTree& game,
                                  const BehaviorProfile& profile) {
  const int n = game.num_players();
  const Policy policy = ToPolicy(game, profile, /*fill_uniform=*/false);
  // Reachability first, so unreachable gaps in the profile are tolerated.
  std::vector<double> reach(game.num_nodes(), 0.0);
  reach[0] = 1.0;
  for (int h = 0; h < game.num_nodes(); ++h) {
    const Node& node = game.node(h);
    if (reach[h] == 0) continue;
    if (node.kind == NodeKind::kFrontier) {
      throw CertigameError("bounds required, use pseudogame evaluation");
    }
    if (node.kind == NodeKind::kTerminal) continue;
    const std::vector<double>* probs = &node.chance_probs;
    if (node.kind == NodeKind::kChance) {
      CERTIGAME_CHECK(!probs->empty(),
                      "chance policy required for exact evaluation");
    } else {
      probs = &policy[node.infoset];
      CERTIGAME_CHECK(!probs->empty(), "incomplete profile");
    }
    for (int a = 0; a < node.num_actions(); ++a) {
      reach[node.child(a)] = reach[h] * (*probs)[a];
    }
  }
  // Bottom-up pass over reachable nodes.
  std::vector<double> value(static_cast<size_t>(game.num_nodes()) * n, 0.0);
  for (int h = game.num_nodes() - 1; h >= 0; --h) {
    if (reach[h] == 0 && h != 0) continue;
    const Node& node = game.node(h);
    for (int p = 1; p <= n; ++p) {
      double v = game.reward(h, p);
      if (node.kind == NodeKind::kChance || node.kind == NodeKind::kDecision) {
        const std::vector<double>& probs = node.kind == NodeKind::kChance
                                               ? node.chance_probs
                                               : policy[node.infoset];
        for (int a = 0; a < node.num_actions(); ++a) {
          if (probs[a] != 0) {
            v += probs[a] *
                 value[static_cast<size_t>(node.child(a)) * n + (p - 1)];
          }
        }
      }
      value[static_cast<size_t>(h) * n + (p - 1)] = v;
    }
  }
  return {value.begin(), value.begin() + n};
}

std::pair<BehaviorProfile, double> BestResponse(
    const GameTree& game, int player, const BehaviorProfile& opponents) {
  CERTIGAME_CHECK(player >= 1 && player <= game.num_players(),
                  "invalid player");
  const UtilityModel model = ExactModel(game);
  const Policy policy = ToPolicy(game, opponents, /*fill_uniform=*/false);
  const std::vector<double> gain = GainVector(model, player, policy);
  Policy response;
  const double value = TreeplexBestResponse(game, player, gain, &response);
  return {PlayerProfile(game, response, player), value};
}

double NashGap(const GameTree& game, const BehaviorProfile& profile) {
  CERTIGAME_CHECK(game.num_players() == 2 && game.zero_sum(),
                  "zero-sum required");
  return BestResponse(game, 1, profile).second +
         BestResponse(game, 2, profile).second;
}

}  // namespace certigame

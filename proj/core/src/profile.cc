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

#include "certigame/profile.h"

#include <cmath>
#include <string>
#include <vector>

namespace certigame {

Policy UniformPolicy(const GameTree& tree) {
  Policy policy(tree.num_infosets());
  for (int j = 0; j < tree.num_infosets(); ++j) {
    const int k = tree.infoset(j).num_actions();
    policy[j].assign(k, 1.0 / k);
  }
  return policy;
}

Policy ToPolicy(const GameTree& tree, const BehaviorProfile& profile,
                bool fill_uniform) {
  Policy policy(tree.num_infosets());
  for (int j = 0; j < tree.num_infosets(); ++j) {
    const Infoset& info = tree.infoset(j);
    auto it = profile.dist.find(info.key);
    if (it != profile.dist.end()) {
      CERTIGAME_CHECK(static_cast<int>(it->second.size()) == info.num_actions(),
                      "profile action count mismatch at " + info.key);
      policy[j] = it->second;
    } else if (fill_uniform) {
      policy[j].assign(info.num_actions(), 1.0 / info.num_actions());
    }
  }
  return policy;
}

BehaviorProfile ToProfile(const GameTree& tree, const Policy& policy) {
  BehaviorProfile profile;
  for (int j = 0;
       j < tree.num_infosets() && j < static_cast<int>(policy.size()); ++j) {
    if (!policy[j].empty()) profile.dist[tree.infoset(j).key] = policy[j];
  }
  return profile;
}

BehaviorProfile PlayerProfile(const GameTree& tree, const Policy& policy,
                              int player) {
  BehaviorProfile profile;
  for (int j : tree.player_infosets(player)) {
    if (j < static_cast<int>(policy.size()) && !policy[j].empty()) {
      profile.dist[tree.infoset(j).key] = policy[j];
    }
  }
  return profile;
}

void MergePlayer(const GameTree& tree, int player, const Policy& from,
                 Policy* into) {
  into->resize(tree.num_infosets());
  for (int j : tree.player_infosets(player)) (*into)[j] = from[j];
}

void ValidateProfile(const BehaviorProfile& profile) {
  for (const auto& [key, probs] : profile.dist) {
    double total = 0;
    for (double p : probs) {
      CERTIGAME_CHECK(p >= -kTolerance, "negative probability at " + key);
      total += p;
    }
    CERTIGAME_CHECK(std::abs(total - 1.0) <= kTolerance,
                    "distribution does not sum to 1 at " + key);
  }
}

SequenceStrategy ToSequenceForm(const GameTree& tree, int player,
                                const Policy& policy) {
  SequenceStrategy seq;
  seq.player = player;
  seq.values.assign(tree.num_sequences(player), 0.0);
  seq.values[0] = 1.0;
  // Infosets are in creation order, so parent sequences are filled first.
  for (int j : tree.player_infosets(player)) {
    const Infoset& info = tree.infoset(j);
    const double parent = seq.values[info.parent_seq];
    const int k = info.num_actions();
    for (int a = 0; a < k; ++a) {
      const double p = policy[j].empty() ? 1.0 / k : policy[j][a];
      seq.values[info.first_seq + a] = parent * p;
    }
  }
  return seq;
}

SequenceStrategy ToSequenceForm(const BehaviorProfile& profile, int player,
                                const GameTree& tree) {
  return ToSequenceForm(tree, player, ToPolicy(tree, profile));
}

void ValidateSequenceForm(const GameTree& tree, const SequenceStrategy& seq) {
  const auto& x = seq.values;
  CERTIGAME_CHECK(static_cast<int>(x.size()) == tree.num_sequences(seq.player),
                  "invalid sequence-form vector");
  CERTIGAME_CHECK(std::abs(x[0] - 1.0) <= kPolytopeTolerance,
                  "invalid sequence-form vector");
  for (int j : tree.player_infosets(seq.player)) {
    const Infoset& info = tree.infoset(j);
    double total = 0;
    for (int a = 0; a < info.num_actions(); ++a) {
      const double v = x[info.first_seq + a];
      CERTIGAME_CHECK(v >= -kPolytopeTolerance && v <= 1 + kPolytopeTolerance,
                      "invalid sequence-form vector");
      total += v;
    }
    CERTIGAME_CHECK(std::abs(total - x[info.parent_seq]) <= kPolytopeTolerance,
                    "invalid sequence-form vector");
  }
}

void FromSequenceForm(const GameTree& tree, const SequenceStrategy& seq,
                      Policy* policy) {
  ValidateSequenceForm(tree, seq);
  policy->resize(tree.num_infosets());
  for (int j : tree.player_infosets(seq.player)) {
    const Infoset& info = tree.infoset(j);
    const int k = info.num_actions();
    double total = 0;
    for (int a = 0; a < k; ++a) {
      total += std::max(0.0, seq.values[info.first_seq + a]);
    }
    std::vector<double>& probs = (*policy)[j];
    probs.assign(k, 1.0 / k);
    if (total > 0) {
      for (int a = 0; a < k; ++a) {
        probs[a] = std::max(0.0, seq.values[info.first_seq + a]) / total;
      }
    }
  }
}

BehaviorProfile FromSequenceForm(const SequenceStrategy& seq,
                                 const GameTree& tree) {
  Policy policy(tree.num_infosets());
  FromSequenceForm(tree, seq, &policy);
  return PlayerProfile(tree, policy, seq.player);
}

void PadSequenceForm(const GameTree& tree, int player,
                     std::vector<double>* values) {
  const int old_size = static_cast<int>(values->size());
  const int new_size = tree.num_sequences(player);
  if (old_size >= new_size) return;
  values->resize(new_size, 0.0);
  if (old_size == 0) (*values)[0] = 1.0;
  for (int j : tree.player_infosets(player)) {
    const Infoset& info = tree.infoset(j);
    if (info.first_seq < old_size) continue;
    const int k = info.num_actions();
    for (int a = 0; a < k; ++a) {
      (*values)[info.first_seq + a] = (*values)[info.parent_seq] / k;
    }
  }
}

BehaviorProfile AverageProfile(const GameTree& tree,
                               const std::vector<SequenceStrategy>& profiles,
                               const std::vector<double>& weights) {
  CERTIGAME_CHECK(!profiles.empty(), "nothing to average");
  CERTIGAME_CHECK(profiles.size() == weights.size(),
                  "one weight per profile required");
  const int player = profiles[0].player;
  double total = 0;
  for (double w : weights) {
    CERTIGAME_CHECK(w >= 0, "negative averaging weight");
    total += w;
  }
  CERTIGAME_CHECK(total > 0, "averaging weights sum to zero");
  std::vector<double> sum(tree.num_sequences(player), 0.0);
  for (size_t k = 0; k < profiles.size(); ++k) {
    CERTIGAME_CHECK(profiles[k].player == player, "mixed players in average");
    std::vector<double> x = profiles[k].values;
    PadSequenceForm(tree, player, &x);
    for (size_t s = 0; s < sum.size(); ++s) sum[s] += weights[k] * x[s];
  }
  SequenceStrategy avg;
  avg.player = player;
  avg.values.resize(sum.size());
  for (size_t s = 0; s < sum.size(); ++s) avg.values[s] = sum[s] / total;
  return FromSequenceForm(avg, tree);
}

void SequenceAverager::Add(const GameTree& tree, const std::vector<double>& x,
                           double weight) {
  if (sum_.empty()) sum_.assign(1, 0.0);
  // Pad the running sum first so earlier mass is spread uniformly over
  // infosets that did not exist when it was recorded.
  const int old_size = static_cast<int>(sum_.size());
  sum_.resize(tree.num_sequences(player_), 0.0);
  for (int j : tree.player_infosets(player_)) {
    const Infoset& info = tree.infoset(j);
    if (info.first_seq < old_size) continue;
    const int k = info.num_actions();
    for (int a = 0; a < k; ++a) {
      sum_[info.first_seq + a] = sum_[info.parent_seq] / k;
    }
  }
  CERTIGAME_CHECK(x.size() <= sum_.size(), "strategy larger than tree");
  for (size_t s = 0; s < x.size(); ++s) sum_[s] += weight * x[s];
  total_weight_ += weight;
}

std::vector<double> SequenceAverager::Average(const GameTree& tree) const {
  CERTIGAME_CHECK(total_weight_ > 0, "nothing to average");
  std::vector<double> avg(sum_.size());
  for (size_t s = 0; s < sum_.size(); ++s) avg[s] = sum_[s] / total_weight_;
  PadSequenceForm(tree, player_, &avg);
  return avg;
}

}  // namespace certigame

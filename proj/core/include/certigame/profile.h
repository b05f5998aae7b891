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

#ifndef CERTIGAME_PROFILE_H_
#define CERTIGAME_PROFILE_H_

#include <map>
#include <string>
#include <vector>

#include "certigame/game_tree.h"

namespace certigame {

// Behavior profile keyed by infoset string. Keys are unique across players.
struct BehaviorProfile {
  std::map<std::string, std::vector<double>> dist;

  bool Has(const std::string& key) const { return dist.count(key) > 0; }
  const std::vector<double>& at(const std::string& key) const {
    return dist.at(key);
  }
  void Set(const std::string& key, std::vector<double> probs) {
    dist[key] = std::move(probs);
  }
  bool operator==(const BehaviorProfile& other) const {
    return dist == other.dist;
  }
};

// Dense behavior profile indexed by the tree's infoset ids. An empty entry
// means the infoset is not covered.
using Policy = std::vector<std::vector<double>>;

// Sequence-form strategy of one player, indexed by the tree's sequence ids.
// Entry 0 is the empty sequence and always equals 1.
struct SequenceStrategy {
  int player = 1;
  std::vector<double> values;
};

Policy UniformPolicy(const GameTree& tree);
// Missing infosets become uniform when fill_uniform is set, else empty.
Policy ToPolicy(const GameTree& tree, const BehaviorProfile& profile,
                bool fill_uniform = true);
BehaviorProfile ToProfile(const GameTree& tree, const Policy& policy);
// Keeps only the infosets of one player.
BehaviorProfile PlayerProfile(const GameTree& tree, const Policy& policy,
                              int player);
// Replaces the entries of `player` in `into` with those of `from`.
void MergePlayer(const GameTree& tree, int player, const Policy& from,
                 Policy* into);

// Throws unless every distribution is nonnegative and sums to 1.
void ValidateProfile(const BehaviorProfile& profile);

SequenceStrategy ToSequenceForm(const GameTree& tree, int player,
                                const Policy& policy);
SequenceStrategy ToSequenceForm(const BehaviorProfile& profile, int player,
                                const GameTree& tree);
// Writes the behavior strategy of seq.player into `policy`; zero-reach
// infosets become uniform.
void FromSequenceForm(const GameTree& tree, const SequenceStrategy& seq,
                      Policy* policy);
BehaviorProfile FromSequenceForm(const SequenceStrategy& seq,
                                 const GameTree& tree);
void ValidateSequenceForm(const GameTree& tree, const SequenceStrategy& seq);

// Pads a sequence-form vector recorded on an older, smaller tree: each new
// infoset is played uniformly from its parent sequence's mass.
void PadSequenceForm(const GameTree& tree, int player,
                     std::vector<double>* values);

// Weighted average in sequence form, then converted to behavior.
BehaviorProfile AverageProfile(const GameTree& tree,
                               const std::vector<SequenceStrategy>& profiles,
                               const std::vector<double>& weights);

// Running weighted sum of one player's sequence-form strategies that follows
// the tree as it grows.
class SequenceAverager {
 public:
  explicit SequenceAverager(int player) : player_(player) {}
  void Add(const GameTree& tree, const std::vector<double>& x, double weight);
  void Reset() {
    sum_.clear();
    total_weight_ = 0;
  }
  double total_weight() const { return total_weight_; }
  // Normalized average, padded to the tree's current sequence set.
  std::vector<double> Average(const GameTree& tree) const;

 private:
  int player_;
  std::vector<double> sum_;
  double total_weight_ = 0;
};

}  // namespace certigame

#endif  // CERTIGAME_PROFILE_H_

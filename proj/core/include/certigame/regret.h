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

#ifndef CERTIGAME_REGRET_H_
#define CERTIGAME_REGRET_H_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "certigame/game_tree.h"
#include "certigame/profile.h"

namespace certigame {

enum class RegretRule { kRegretMatching, kRegretMatchingPlus };

// Distribution proportional to the positive parts of the regrets, uniform
// when none is positive.
std::vector<double> RegretMatchingPolicy(const std::vector<double>& regret);

struct LocalRegret {
  std::vector<double> regret;
  int64_t created_at = 0;
};

// One regret-matching step on a simplex: returns the distribution that was
// played against `loss` and updates r_a += <loss, x> - loss_a.
std::vector<double> RmStep(LocalRegret* state, const std::vector<double>& loss,
                           RegretRule rule);

struct TreeplexInfoset {
  std::string key;
  int parent_seq = 0;
  int first_seq = 0;
  int num_actions = 0;
};

// Counterfactual regret state of one player over a growing treeplex. The
// k-th infoset here is the k-th infoset of that player in the game tree, so
// sequence ids agree with the tree. Infosets are only ever appended and
// start with zero regret, which makes the state extendable.
class RegretState {
 public:
  explicit RegretState(RegretRule rule = RegretRule::kRegretMatchingPlus)
      : rule_(rule) {}

  RegretRule rule() const { return rule_; }
  int num_infosets() const { return static_cast<int>(infosets_.size()); }
  int num_sequences() const { return num_sequences_; }
  const TreeplexInfoset& infoset(int j) const { return infosets_[j]; }
  const LocalRegret& local(int j) const { return local_[j]; }

  // Adds a decision point with zero regret. Throws on duplicates.
  int Extend(const std::string& key, int parent_seq, int num_actions,
             int64_t t_created);
  // Extends with every infoset of `player` the tree has and we lack.
  void SyncWithTree(const GameTree& tree, int player, int64_t t_created);

  std::vector<double> Behavior(int j) const {
    return RegretMatchingPolicy(local_[j].regret);
  }
  std::vector<double> SequenceForm() const;
  // Writes the current strategy into the tree-indexed policy.
  void WritePolicy(const GameTree& tree, int player, Policy* policy) const;

  // Observes a loss over sequences (missing trailing entries are zero).
  void Observe(const std::vector<double>& loss);
  // Same update for a loss supported on a few sequences.
  void ObserveSparse(const std::vector<std::pair<int, double>>& loss);

  bool operator==(const RegretState& other) const;

 private:
  void Update(int j, const std::vector<double>& cf_loss, double* value);

  RegretRule rule_;
  std::vector<TreeplexInfoset> infosets_;
  std::vector<LocalRegret> local_;
  std::vector<int> seq_owner_{-1};
  std::unordered_map<std::string, int> index_;
  int num_sequences_ = 1;
};

// Range max_x <x, v> - min_x <x, v> of a sparse linear function over the
// treeplex described by a regret state.
double SparseRange(const RegretState& treeplex,
                   const std::vector<std::pair<int, double>>& values);

}  // namespace certigame

#endif  // CERTIGAME_REGRET_H_

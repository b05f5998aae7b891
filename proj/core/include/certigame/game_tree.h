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

#ifndef CERTIGAME_GAME_TREE_H_
#define CERTIGAME_GAME_TREE_H_

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "certigame/common.h"

namespace certigame {

enum class NodeKind { kFrontier, kDecision, kChance, kTerminal };

// Everything the simulator reveals about a node when it is visited.
struct NodeReport {
  NodeKind kind = NodeKind::kTerminal;
  int player = kChancePlayer;
  std::string infoset;  // decision nodes only
  std::vector<std::string> actions;
  std::vector<double> reward;  // gained at this node, per player
  // child_lb[a][i], child_ub[a][i]: residual bounds of child a for player i.
  std::vector<std::vector<double>> child_lb;
  std::vector<std::vector<double>> child_ub;
  std::string chance_signature;      // empty means no merging
  std::vector<double> chance_probs;  // true distribution, oracle games only
};

struct Node {
  NodeKind kind = NodeKind::kFrontier;
  int player = kChancePlayer;
  int infoset = -1;
  int parent = -1;
  int parent_action = -1;
  // Children are allocated contiguously: first_child + a.
  int first_child = -1;
  int depth = 0;
  std::vector<std::string> actions;
  std::string chance_signature;
  std::vector<double> chance_probs;

  int num_actions() const { return static_cast<int>(actions.size()); }
  int child(int a) const { return first_child + a; }
  bool is_leaf() const {
    return kind == NodeKind::kFrontier || kind == NodeKind::kTerminal;
  }
};

struct Infoset {
  std::string key;
  int player = 0;
  std::vector<std::string> actions;
  int parent_seq = 0;  // sequence of the owning player leading here
  int first_seq = 0;   // sequences first_seq .. first_seq + |A| - 1
  int index_in_player = 0;

  int num_actions() const { return static_cast<int>(actions.size()); }
};

// An explicit game tree whose nodes are stored so that a parent always has a
// smaller index than its children. Frontier nodes are pseudo-leaves carrying
// only residual bounds. Sequence 0 is the empty sequence of every player.
class GameTree {
 public:
  GameTree(int num_players, bool zero_sum, std::vector<double> root_lb,
           std::vector<double> root_ub);

  int num_players() const { return num_players_; }
  bool zero_sum() const { return zero_sum_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int root() const { return 0; }

  const Node& node(int h) const { return nodes_[h]; }
  double reward(int h, int player) const { return reward_[Index(h, player)]; }
  double lb(int h, int player) const { return lb_[Index(h, player)]; }
  double ub(int h, int player) const { return ub_[Index(h, player)]; }
  // Residual width Delta_i(h->*) of the subtree at h.
  double width(int h, int player) const {
    return ub(h, player) - lb(h, player);
  }
  int seq(int h, int player) const { return seq_[Index(h, player)]; }

  int num_infosets() const { return static_cast<int>(infosets_.size()); }
  const Infoset& infoset(int id) const { return infosets_[id]; }
  // Infosets of one player in creation order.
  const std::vector<int>& player_infosets(int player) const {
    return player_infosets_[player - 1];
  }
  int num_sequences(int player) const { return num_sequences_[player - 1]; }
  // Owning infoset of a non-empty sequence.
  int sequence_infoset(int player, int s) const {
    return seq_infoset_[player - 1][s];
  }
  int FindInfoset(const std::string& key) const;

  // Fills in a frontier node from a simulator report, creating frontier
  // children that carry the reported residual bounds.
  void Expand(int h, const NodeReport& report);

  // Directly overwrites the residual bounds of a node (used when loading).
  void SetBounds(int h, const std::vector<double>& lb,
                 const std::vector<double>& ub);

  int num_frontier() const { return num_frontier_; }
  bool has_chance_policy() const;
  bool fully_expanded() const { return num_frontier_ == 0; }

  std::string Path(int h) const;
  std::vector<std::string> PathLabels(int h) const;
  // Returns -1 when the path is not in the tree.
  int FindNode(const std::vector<std::string>& labels) const;
  int FindNode(const std::string& path) const;

  // Largest and smallest root bound over players.
  std::pair<double, double> RootRange(int player) const {
    return {lb(0, player), ub(0, player)};
  }

  // Checks structural invariants; throws on violation.
  void Validate() const;

  // GameTree JSON schema: nodes keyed by path string.
  std::string ToJson(int indent = -1) const;
  static GameTree FromJson(const std::string& text);

 private:
  size_t Index(int h, int player) const {
    return static_cast<size_t>(h) * num_players_ + (player - 1);
  }
  int AddNode(int parent, int action);
  int RegisterInfoset(int h, const NodeReport& report);

  int num_players_;
  bool zero_sum_;
  std::vector<Node> nodes_;
  std::vector<double> reward_;
  std::vector<double> lb_;
  std::vector<double> ub_;
  std::vector<int> seq_;
  std::vector<Infoset> infosets_;
  std::vector<std::vector<int>> player_infosets_;
  std::vector<int> num_sequences_;
  std::vector<std::vector<int>> seq_infoset_;
  std::unordered_map<std::string, int> infoset_index_;
  int num_frontier_ = 0;
};

}  // namespace certigame

#endif  // CERTIGAME_GAME_TREE_H_

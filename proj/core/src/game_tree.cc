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

#include "certigame/game_tree.h"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace certigame {
namespace {

using json = nlohmann::ordered_json;

const char* KindName(NodeKind kind) {
  switch (kind) {
    case NodeKind::kFrontier:
      return "frontier";
    case NodeKind::kDecision:
      return "decision";
    case NodeKind::kChance:
      return "chance";
    case NodeKind::kTerminal:
      return "terminal";
  }
  return "frontier";
}

NodeKind KindFromName(const std::string& name) {
  if (name == "frontier") return NodeKind::kFrontier;
  if (name == "decision") return NodeKind::kDecision;
  if (name == "chance") return NodeKind::kChance;
  if (name == "terminal") return NodeKind::kTerminal;
  throw CertigameError("unknown node kind: " + name);
}

}  // namespace

GameTree::GameTree(int num_players, bool zero_sum, std::vector<double> root_lb,
                   std::vector<double> root_ub)
    : num_players_(num_players),
      zero_sum_(zero_sum),
      player_infosets_(num_players),
      num_sequences_(num_players, 1),
      seq_infoset_(num_players, std::vector<int>{-1}) {
  CERTIGAME_CHECK(num_players >= 1, "need at least one player");
  CERTIGAME_CHECK(static_cast<int>(root_lb.size()) == num_players &&
                      static_cast<int>(root_ub.size()) == num_players,
                  "root bounds must have one entry per player");
  AddNode(-1, -1);
  for (int p = 1; p <= num_players_; ++p) {
    CERTIGAME_CHECK(root_lb[p - 1] <= root_ub[p - 1], "root bounds inverted");
    lb_[Index(0, p)] = root_lb[p - 1];
    ub_[Index(0, p)] = root_ub[p - 1];
  }
}

int GameTree::AddNode(int parent, int action) {
  int id = static_cast<int>(nodes_.size());
  Node node;
  node.parent = parent;
  node.parent_action = action;
  node.depth = parent < 0 ? 0 : nodes_[parent].depth + 1;
  nodes_.push_back(std::move(node));
  reward_.resize(reward_.size() + num_players_, 0.0);
  lb_.resize(lb_.size() + num_players_, 0.0);
  ub_.resize(ub_.size() + num_players_, 0.0);
  seq_.resize(seq_.size() + num_players_, 0);
  if (parent >= 0) {
    for (int p = 1; p <= num_players_; ++p) {
      seq_[Index(id, p)] = seq_[Index(parent, p)];
    }
    const Node& par = nodes_[parent];
    if (par.kind == NodeKind::kDecision) {
      seq_[Index(id, par.player)] = infosets_[par.infoset].first_seq + action;
    }
  }
  ++num_frontier_;
  return id;
}

int GameTree::RegisterInfoset(int h, const NodeReport& report) {
  const int player = report.player;
  const int parent_seq = seq(h, player);
  auto it = infoset_index_.find(report.infoset);
  if (it != infoset_index_.end()) {
    const Infoset& info = infosets_[it->second];
    CERTIGAME_CHECK(info.player == player,
                    "infoset key shared across players: " + report.infoset);
    CERTIGAME_CHECK(info.actions == report.actions,
                    "infoset members disagree on actions: " + report.infoset);
    CERTIGAME_CHECK(info.parent_seq == parent_seq,
                    "imperfect recall at infoset " + report.infoset);
    return it->second;
  }
  Infoset info;
  info.key = report.infoset;
  info.player = player;
  info.actions = report.actions;
  info.parent_seq = parent_seq;
  info.first_seq = num_sequences_[player - 1];
  info.index_in_player = static_cast<int>(player_infosets_[player - 1].size());
  const int id = static_cast<int>(infosets_.size());
  num_sequences_[player - 1] += info.num_actions();
  for (int a = 0; a < info.num_actions(); ++a) {
    seq_infoset_[player - 1].push_back(id);
  }
  player_infosets_[player - 1].push_back(id);
  infoset_index_.emplace(info.key, id);
  infosets_.push_back(std::move(info));
  return id;
}

int GameTree::FindInfoset(const std::string& key) const {
  auto it = infoset_index_.find(key);
  return it == infoset_index_.end() ? -1 : it->second;
}

void GameTree::Expand(int h, const NodeReport& report) {
  CERTIGAME_CHECK(h >= 0 && h < num_nodes(), "node out of range");
  CERTIGAME_CHECK(nodes_[h].kind == NodeKind::kFrontier,
                  "node already expanded");
  CERTIGAME_CHECK(static_cast<int>(report.reward.size()) == num_players_,
                  "reward must have one entry per player");
  for (int p = 1; p <= num_players_; ++p) {
    reward_[Index(h, p)] = report.reward[p - 1];
  }
  const int num_actions = static_cast<int>(report.actions.size());
  if (report.kind == NodeKind::kTerminal) {
    CERTIGAME_CHECK(num_actions == 0, "terminal node with actions");
    nodes_[h].kind = NodeKind::kTerminal;
    --num_frontier_;
    return;
  }
  CERTIGAME_CHECK(
      report.kind == NodeKind::kDecision || report.kind == NodeKind::kChance,
      "cannot expand into a frontier node");
  CERTIGAME_CHECK(num_actions >= 1, "non-terminal node without actions");
  CERTIGAME_CHECK(static_cast<int>(report.child_lb.size()) == num_actions &&
                      static_cast<int>(report.child_ub.size()) == num_actions,
                  "child bounds must have one entry per action");
  int infoset = -1;
  if (report.kind == NodeKind::kDecision) {
    CERTIGAME_CHECK(report.player >= 1 && report.player <= num_players_,
                    "decision node with invalid player");
    infoset = RegisterInfoset(h, report);
  } else if (!report.chance_probs.empty()) {
    CERTIGAME_CHECK(static_cast<int>(report.chance_probs.size()) == num_actions,
                    "chance distribution size mismatch");
  }
  {
    Node& node = nodes_[h];
    node.kind = report.kind;
    node.player =
        report.kind == NodeKind::kDecision ? report.player : kChancePlayer;
    node.infoset = infoset;
    node.actions = report.actions;
    node.chance_signature = report.chance_signature;
    node.chance_probs = report.chance_probs;
    node.first_child = num_nodes();
  }
  --num_frontier_;
  for (int a = 0; a < num_actions; ++a) {
    const int c = AddNode(h, a);
    for (int p = 1; p <= num_players_; ++p) {
      lb_[Index(c, p)] = report.child_lb[a][p - 1];
      ub_[Index(c, p)] = report.child_ub[a][p - 1];
      CERTIGAME_CHECK(lb_[Index(c, p)] <= ub_[Index(c, p)],
                      "child bounds inverted");
    }
  }
}

void GameTree::SetBounds(int h, const std::vector<double>& lb,
                         const std::vector<double>& ub) {
  for (int p = 1; p <= num_players_; ++p) {
    lb_[Index(h, p)] = lb[p - 1];
    ub_[Index(h, p)] = ub[p - 1];
  }
}

bool GameTree::has_chance_policy() const {
  for (const Node& node : nodes_) {
    if (node.kind == NodeKind::kChance && node.chance_probs.empty()) {
      return false;
    }
  }
  return true;
}

std::vector<std::string> GameTree::PathLabels(int h) const {
  std::vector<std::string> labels;
  while (nodes_[h].parent >= 0) {
    const Node& par = nodes_[nodes_[h].parent];
    labels.push_back(par.actions[nodes_[h].parent_action]);
    h = nodes_[h].parent;
  }
  return {labels.rbegin(), labels.rend()};
}

std::string GameTree::Path(int h) const {
  std::string path;
  for (const std::string& label : PathLabels(h)) {
    if (!path.empty()) path += '/';
    path += label;
  }
  return path;
}

int GameTree::FindNode(const std::vector<std::string>& labels) const {
  int h = 0;
  for (const std::string& label : labels) {
    const Node& node = nodes_[h];
    if (node.is_leaf()) return -1;
    int next = -1;
    for (int a = 0; a < node.num_actions(); ++a) {
      if (node.actions[a] == label) {
        next = node.child(a);
        break;
      }
    }
    if (next < 0) return -1;
    h = next;
  }
  return h;
}

int GameTree::FindNode(const std::string& path) const {
  std::vector<std::string> labels;
  if (!path.empty()) {
    size_t start = 0;
    while (true) {
      size_t pos = path.find('/', start);
      labels.push_back(path.substr(start, pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
  }
  return FindNode(labels);
}

void GameTree::Validate() const {
  for (int h = 0; h < num_nodes(); ++h) {
    const Node& node = nodes_[h];
    for (int p = 1; p <= num_players_; ++p) {
      CERTIGAME_CHECK(lb(h, p) <= ub(h, p), "bounds inverted at " + Path(h));
    }
    if (node.is_leaf()) {
      CERTIGAME_CHECK(node.first_child < 0, "leaf with children");
      continue;
    }
    CERTIGAME_CHECK(node.num_actions() >= 1, "internal node without actions");
    for (int a = 0; a < node.num_actions(); ++a) {
      const Node& c = nodes_[node.child(a)];
      CERTIGAME_CHECK(c.parent == h && c.parent_action == a,
                      "inconsistent parent link at " + Path(h));
    }
    if (node.kind == NodeKind::kDecision) {
      const Infoset& info = infosets_[node.infoset];
      CERTIGAME_CHECK(info.actions == node.actions,
                      "infoset action mismatch at " + Path(h));
      CERTIGAME_CHECK(info.parent_seq == seq(h, node.player),
                      "imperfect recall at " + Path(h));
    }
    if (node.kind == NodeKind::kChance && !node.chance_probs.empty()) {
      double total = 0;
      for (double p : node.chance_probs) {
        CERTIGAME_CHECK(p >= 0, "negative chance probability");
        total += p;
      }
      CERTIGAME_CHECK(std::abs(total - 1.0) <= kTolerance,
                      "chance distribution does not sum to 1");
    }
  }
  if (zero_sum_ && num_players_ == 2) {
    for (int h = 0; h < num_nodes(); ++h) {
      CERTIGAME_CHECK(std::abs(reward(h, 1) + reward(h, 2)) <= kTolerance &&
                          std::abs(lb(h, 2) + ub(h, 1)) <= kTolerance &&
                          std::abs(ub(h, 2) + lb(h, 1)) <= kTolerance,
                      "zero-sum bound symmetry violated at " + Path(h));
    }
  }
}

std::string GameTree::ToJson(int indent) const {
  json doc;
  doc["num_players"] = num_players_;
  doc["zero_sum"] = zero_sum_;
  json infosets = json::array();
  for (const Infoset& info : infosets_) {
    infosets.push_back({{"key", info.key},
                        {"player", info.player},
                        {"actions", info.actions},
                        {"parent_seq", info.parent_seq},
                        {"first_seq", info.first_seq}});
  }
  doc["infosets"] = std::move(infosets);
  json nodes = json::object();
  for (int h = 0; h < num_nodes(); ++h) {
    const Node& node = nodes_[h];
    std::vector<double> reward(num_players_), lo(num_players_),
        hi(num_players_);
    for (int p = 1; p <= num_players_; ++p) {
      reward[p - 1] = this->reward(h, p);
      lo[p - 1] = lb(h, p);
      hi[p - 1] = ub(h, p);
    }
    json entry;
    entry["kind"] = KindName(node.kind);
    entry["player"] = node.player;
    entry["infoset"] =
        node.infoset >= 0 ? json(infosets_[node.infoset].key) : json(nullptr);
    entry["actions"] = node.actions;
    json children = json::array();
    if (!node.is_leaf()) {
      for (int a = 0; a < node.num_actions(); ++a) {
        children.push_back(Path(node.child(a)));
      }
    }
    entry["children"] = std::move(children);
    entry["reward"] = reward;
    entry["lb"] = lo;
    entry["ub"] = hi;
    entry["frontier"] = node.kind == NodeKind::kFrontier;
    if (!node.chance_signature.empty()) {
      entry["chance_signature"] = node.chance_signature;
    }
    if (!node.chance_probs.empty()) entry["chance_probs"] = node.chance_probs;
    nodes[Path(h)] = std::move(entry);
  }
  doc["nodes"] = std::move(nodes);
  return doc.dump(indent);
}

GameTree GameTree::FromJson(const std::string& text) {
  json doc = json::parse(text);
  const int n = doc.at("num_players").get<int>();
  const json& nodes = doc.at("nodes");
  CERTIGAME_CHECK(nodes.is_object() && !nodes.empty(), "tree without nodes");
  const json& root = nodes.begin().value();
  GameTree tree(n, doc.at("zero_sum").get<bool>(),
                root.at("lb").get<std::vector<double>>(),
                root.at("ub").get<std::vector<double>>());
  for (const json& entry : doc.at("infosets")) {
    Infoset info;
    info.key = entry.at("key").get<std::string>();
    info.player = entry.at("player").get<int>();
    info.actions = entry.at("actions").get<std::vector<std::string>>();
    info.parent_seq = entry.at("parent_seq").get<int>();
    info.first_seq = entry.at("first_seq").get<int>();
    const int p = info.player;
    CERTIGAME_CHECK(p >= 1 && p <= n, "infoset with invalid player");
    CERTIGAME_CHECK(info.first_seq == tree.num_sequences_[p - 1],
                    "infoset sequences out of order");
    info.index_in_player =
        static_cast<int>(tree.player_infosets_[p - 1].size());
    const int id = static_cast<int>(tree.infosets_.size());
    tree.num_sequences_[p - 1] += info.num_actions();
    for (int a = 0; a < info.num_actions(); ++a) {
      tree.seq_infoset_[p - 1].push_back(id);
    }
    tree.player_infosets_[p - 1].push_back(id);
    tree.infoset_index_.emplace(info.key, id);
    tree.infosets_.push_back(std::move(info));
  }
  // Nodes are stored in index order, so parents precede children and the
  // children of a node are contiguous.
  std::unordered_map<std::string, int> index;
  int h = 0;
  for (auto it = nodes.begin(); it != nodes.end(); ++it, ++h) {
    const json& entry = it.value();
    if (h > 0) {
      const std::string& path = it.key();
      const size_t cut = path.rfind('/');
      const std::string parent_path =
          cut == std::string::npos ? std::string() : path.substr(0, cut);
      auto found = index.find(parent_path);
      CERTIGAME_CHECK(found != index.end(), "orphan node " + path);
      const int parent = found->second;
      Node& par = tree.nodes_[parent];
      const std::string label =
          cut == std::string::npos ? path : path.substr(cut + 1);
      int action = -1;
      for (int a = 0; a < par.num_actions(); ++a) {
        if (par.actions[a] == label) action = a;
      }
      CERTIGAME_CHECK(action >= 0, "unknown action label in " + path);
      if (par.first_child < 0) par.first_child = h;
      CERTIGAME_CHECK(par.first_child + action == h,
                      "children not contiguous at " + path);
      tree.AddNode(parent, action);
    }
    index.emplace(it.key(), h);
    Node& node = tree.nodes_[h];
    node.kind = KindFromName(entry.at("kind").get<std::string>());
    node.player = entry.at("player").get<int>();
    node.actions = entry.at("actions").get<std::vector<std::string>>();
    if (!entry.at("infoset").is_null()) {
      node.infoset = tree.FindInfoset(entry.at("infoset").get<std::string>());
      CERTIGAME_CHECK(node.infoset >= 0, "unknown infoset");
    }
    if (entry.contains("chance_signature")) {
      node.chance_signature = entry.at("chance_signature").get<std::string>();
    }
    if (entry.contains("chance_probs")) {
      node.chance_probs = entry.at("chance_probs").get<std::vector<double>>();
    }
    if (node.kind != NodeKind::kFrontier) --tree.num_frontier_;
    const auto reward = entry.at("reward").get<std::vector<double>>();
    const auto lo = entry.at("lb").get<std::vector<double>>();
    const auto hi = entry.at("ub").get<std::vector<double>>();
    for (int p = 1; p <= n; ++p) {
      tree.reward_[tree.Index(h, p)] = reward[p - 1];
      tree.lb_[tree.Index(h, p)] = lo[p - 1];
      tree.ub_[tree.Index(h, p)] = hi[p - 1];
    }
  }
  tree.Validate();
  return tree;
}

}  // namespace certigame

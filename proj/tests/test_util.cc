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

#include "test_util.h"

#include <algorithm>
#include <random>
#include <string>
#include <utility>

namespace certigame {
namespace testing {
namespace {

struct SpecNode {
  NodeKind kind = NodeKind::kTerminal;
  int player = 0;
  std::string key;
  std::vector<std::string> actions;
  std::vector<double> probs;
  std::string signature;
  std::vector<double> reward;
  std::vector<double> lo, hi;
  std::vector<SpecNode> children;
};

struct Builder {
  RandomGameOptions options;
  std::mt19937_64 rng;
  std::vector<int> level_player;  // 0 for chance
  std::vector<std::vector<double>> level_probs;
  std::vector<std::vector<bool>> visible;  // [level][player]

  double Reward() {
    return std::uniform_int_distribution<int>(-4, 4)(rng) / 2.0;
  }

  int ActionsFor(const std::string& key) const {
    const size_t h = std::hash<std::string>()(key);
    return 2 + static_cast<int>(h % (options.max_actions - 1));
  }

  SpecNode Make(int level, std::vector<std::string> obs) {
    const int n = options.num_players;
    SpecNode node;
    node.reward.resize(n);
    node.reward[0] = level == 0 ? 0 : Reward() / 2;
    for (int p = 1; p < n; ++p) {
      node.reward[p] = options.zero_sum ? -node.reward[0] : Reward() / 2;
    }
    if (level == options.depth) {
      node.kind = NodeKind::kTerminal;
      node.reward[0] += Reward();
      for (int p = 1; p < n; ++p) {
        node.reward[p] = options.zero_sum ? -node.reward[0] : Reward();
      }
      node.lo = node.hi = node.reward;
      return node;
    }
    const int mover = level_player[level];
    int k = 0;
    if (mover == 0) {
      node.kind = NodeKind::kChance;
      node.probs = level_probs[level];
      k = static_cast<int>(node.probs.size());
      if (options.signatures) node.signature = "level" + std::to_string(level);
    } else {
      node.kind = NodeKind::kDecision;
      node.player = mover;
      node.key = "P" + std::to_string(mover) + "|" + std::to_string(level) +
                 "|" + obs[mover - 1];
      k = ActionsFor(node.key);
    }
    for (int a = 0; a < k; ++a) {
      const std::string label =
          std::string(mover == 0 ? "c" : "a") + std::to_string(a);
      node.actions.push_back(label);
      std::vector<std::string> next = obs;
      for (int p = 0; p < n; ++p) {
        if (mover == p + 1 || (mover == 0 && visible[level][p])) {
          next[p] += label + ".";
        } else {
          next[p] += "?.";
        }
      }
      node.children.push_back(Make(level + 1, next));
    }
    node.lo = node.hi = node.reward;
    for (int p = 0; p < n; ++p) {
      double lo = 1e300, hi = -1e300;
      for (const SpecNode& c : node.children) {
        lo = std::min(lo, c.lo[p]);
        hi = std::max(hi, c.hi[p]);
      }
      node.lo[p] += lo;
      node.hi[p] += hi;
    }
    return node;
  }

  void Expand(GameTree* tree, int h, const SpecNode& spec) {
    NodeReport report;
    report.kind = spec.kind;
    report.player = spec.kind == NodeKind::kDecision ? spec.player : 0;
    report.infoset = spec.key;
    report.actions = spec.actions;
    report.reward = spec.reward;
    report.chance_probs = spec.probs;
    report.chance_signature = spec.signature;
    for (const SpecNode& c : spec.children) {
      report.child_lb.push_back(c.lo);
      report.child_ub.push_back(c.hi);
    }
    tree->Expand(h, report);
    for (size_t a = 0; a < spec.children.size(); ++a) {
      Expand(tree, tree->node(h).child(static_cast<int>(a)), spec.children[a]);
    }
  }
};

}  // namespace

std::shared_ptr<GameTree> RandomGame(uint64_t seed,
                                     const RandomGameOptions& options) {
  Builder b;
  b.options = options;
  b.rng.seed(seed);
  const int n = options.num_players;
  for (int level = 0; level < options.depth; ++level) {
    int mover = 1 + static_cast<int>(b.rng() % n);
    if (options.chance && (level == 0 || b.rng() % 3 == 0)) mover = 0;
    b.level_player.push_back(mover);
    const int k = 2 + static_cast<int>(b.rng() % 2);
    std::vector<double> probs(k);
    double total = 0;
    for (double& p : probs) {
      p = 1 + static_cast<double>(b.rng() % 4);
      total += p;
    }
    for (double& p : probs) p /= total;
    b.level_probs.push_back(probs);
    std::vector<bool> vis(n);
    for (int p = 0; p < n; ++p) vis[p] = (b.rng() % 2) == 0;
    b.visible.push_back(vis);
  }
  const SpecNode root = b.Make(0, std::vector<std::string>(n));
  auto tree = std::make_shared<GameTree>(n, options.zero_sum, root.lo, root.hi);
  b.Expand(tree.get(), 0, root);
  tree->Validate();
  return tree;
}

std::vector<double> NaiveValue(const GameTree& tree,
                               const BehaviorProfile& profile) {
  const int n = tree.num_players();
  std::function<std::vector<double>(int)> value = [&](int h) {
    const Node& node = tree.node(h);
    std::vector<double> out(n);
    for (int p = 0; p < n; ++p) out[p] = tree.reward(h, p + 1);
    if (node.kind == NodeKind::kTerminal) return out;
    if (node.kind == NodeKind::kFrontier) {
      throw CertigameError("naive value needs a fully expanded tree");
    }
    const std::vector<double>& probs =
        node.kind == NodeKind::kChance
            ? node.chance_probs
            : profile.at(tree.infoset(node.infoset).key);
    for (int a = 0; a < node.num_actions(); ++a) {
      if (probs[a] == 0) continue;
      const std::vector<double> child = value(node.child(a));
      for (int p = 0; p < n; ++p) out[p] += probs[a] * child[p];
    }
    return out;
  };
  return value(0);
}

void ForEachPurePlan(const GameTree& tree, int player,
                     const std::function<bool(const BehaviorProfile&)>& visit) {
  const std::vector<int>& infosets = tree.player_infosets(player);
  std::vector<int> choice(infosets.size(), 0);
  while (true) {
    BehaviorProfile plan;
    for (size_t i = 0; i < infosets.size(); ++i) {
      const Infoset& info = tree.infoset(infosets[i]);
      std::vector<double> probs(info.num_actions(), 0.0);
      probs[choice[i]] = 1.0;
      plan.Set(info.key, probs);
    }
    if (!visit(plan)) return;
    size_t i = 0;
    for (; i < infosets.size(); ++i) {
      if (++choice[i] < tree.infoset(infosets[i]).num_actions()) break;
      choice[i] = 0;
    }
    if (i == infosets.size()) return;
  }
}

BehaviorProfile RandomProfile(const GameTree& tree, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  BehaviorProfile profile;
  for (int j = 0; j < tree.num_infosets(); ++j) {
    const Infoset& info = tree.infoset(j);
    std::vector<double> probs(info.num_actions());
    double total = 0;
    for (double& p : probs) {
      p = u(rng) + 1e-3;
      total += p;
    }
    for (double& p : probs) p /= total;
    profile.Set(info.key, probs);
  }
  return profile;
}

std::shared_ptr<GameTree> MatrixGame(
    const std::vector<std::vector<double>>& payoff) {
  double lo = 1e300, hi = -1e300;
  for (const auto& row : payoff) {
    for (double v : row) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const int rows = static_cast<int>(payoff.size());
  const int cols = static_cast<int>(payoff[0].size());
  auto tree = std::make_shared<GameTree>(2, true, std::vector<double>{lo, -hi},
                                         std::vector<double>{hi, -lo});
  NodeReport root;
  root.kind = NodeKind::kDecision;
  root.player = 1;
  root.infoset = "P1|";
  root.reward = {0, 0};
  for (int r = 0; r < rows; ++r) {
    root.actions.push_back("r" + std::to_string(r));
    root.child_lb.push_back({lo, -hi});
    root.child_ub.push_back({hi, -lo});
  }
  tree->Expand(0, root);
  for (int r = 0; r < rows; ++r) {
    const int h = tree->node(0).child(r);
    NodeReport col;
    col.kind = NodeKind::kDecision;
    col.player = 2;
    col.infoset = "P2|";
    col.reward = {0, 0};
    for (int c = 0; c < cols; ++c) {
      col.actions.push_back("c" + std::to_string(c));
      col.child_lb.push_back({payoff[r][c], -payoff[r][c]});
      col.child_ub.push_back({payoff[r][c], -payoff[r][c]});
    }
    tree->Expand(h, col);
    for (int c = 0; c < cols; ++c) {
      NodeReport leaf;
      leaf.kind = NodeKind::kTerminal;
      leaf.reward = {payoff[r][c], -payoff[r][c]};
      tree->Expand(tree->node(h).child(c), leaf);
    }
  }
  return tree;
}

std::shared_ptr<GameTree> ThreePlayerToy() {
  // Player i earns 1 when its bit equals player i+1's bit (cyclically).
  auto payoff = [](int b1, int b2, int b3) {
    const int bits[3] = {b1, b2, b3};
    std::vector<double> out(3);
    for (int i = 0; i < 3; ++i) out[i] = bits[i] == bits[(i + 1) % 3] ? 1 : 0;
    return out;
  };
  const std::vector<double> lo(3, 0.0), hi(3, 1.0);
  auto tree = std::make_shared<GameTree>(3, false, lo, hi);
  std::function<void(int, int, std::vector<int>)> build =
      [&](int h, int player, std::vector<int> bits) {
        if (player == 4) {
          NodeReport leaf;
          leaf.kind = NodeKind::kTerminal;
          leaf.reward = payoff(bits[0], bits[1], bits[2]);
          tree->Expand(h, leaf);
          return;
        }
        NodeReport report;
        report.kind = NodeKind::kDecision;
        report.player = player;
        report.infoset = "P" + std::to_string(player) + "|";
        report.actions = {"0", "1"};
        report.reward = {0, 0, 0};
        report.child_lb = {lo, lo};
        report.child_ub = {hi, hi};
        tree->Expand(h, report);
        for (int a = 0; a < 2; ++a) {
          std::vector<int> next = bits;
          next.push_back(a);
          build(tree->node(h).child(a), player + 1, next);
        }
      };
  build(0, 1, {});
  return tree;
}

}  // namespace testing
}  // namespace certigame

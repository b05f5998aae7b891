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

#include "certigame/games.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace certigame {
namespace {

// Helpers for two-player zero-sum reports, where everything is stated from
// player 1's point of view.
std::vector<double> ZeroSumReward(double u) { return {u, -u}; }

void AddZeroSumChild(double lo, double hi, NodeReport* report) {
  report->child_lb.push_back({lo, -hi});
  report->child_ub.push_back({hi, -lo});
}

std::string FormatNumber(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// Kuhn poker ---------------------------------------------------------------

constexpr char kKuhnRanks[] = "JQK";

class KuhnState : public GameState {
 public:
  KuhnState() = default;

  NodeReport Report() const override {
    NodeReport report;
    report.reward = ZeroSumReward(IsTerminal() ? Payoff() : 0.0);
    if (IsTerminal()) {
      report.kind = NodeKind::kTerminal;
      return report;
    }
    report.actions = Actions();
    if (card1_ < 0) {
      report.kind = NodeKind::kChance;
      report.chance_signature = "deal";
      report.chance_probs.assign(6, 1.0 / 6);
    } else {
      report.kind = NodeKind::kDecision;
      report.player = CurrentPlayer();
      const int card = report.player == 1 ? card1_ : card2_;
      report.infoset = std::string("P") + std::to_string(report.player) + "|" +
                       kKuhnRanks[card] + "|" + history_;
    }
    for (int a = 0; a < static_cast<int>(report.actions.size()); ++a) {
      auto child = Apply(a);
      if (child.IsTerminal()) {
        AddZeroSumChild(child.Payoff(), child.Payoff(), &report);
      } else {
        AddZeroSumChild(-2, 2, &report);
      }
    }
    return report;
  }

  std::unique_ptr<GameState> Child(int action) const override {
    return std::make_unique<KuhnState>(Apply(action));
  }

 private:
  std::vector<std::string> Actions() const {
    if (card1_ < 0) {
      std::vector<std::string> deals;
      for (int c1 = 0; c1 < 3; ++c1) {
        for (int c2 = 0; c2 < 3; ++c2) {
          if (c1 != c2) deals.push_back({kKuhnRanks[c1], kKuhnRanks[c2]});
        }
      }
      return deals;
    }
    return {"p", "b"};
  }

  KuhnState Apply(int action) const {
    KuhnState next = *this;
    if (card1_ < 0) {
      int index = 0;
      for (int c1 = 0; c1 < 3; ++c1) {
        for (int c2 = 0; c2 < 3; ++c2) {
          if (c1 == c2) continue;
          if (index++ == action) {
            next.card1_ = c1;
            next.card2_ = c2;
          }
        }
      }
    } else {
      next.history_ += action == 0 ? 'p' : 'b';
    }
    return next;
  }

  int CurrentPlayer() const { return history_.size() % 2 == 0 ? 1 : 2; }

  bool IsTerminal() const {
    return history_ == "pp" || history_ == "bp" || history_ == "bb" ||
           history_ == "pbp" || history_ == "pbb";
  }

  double Payoff() const {
    const double sign = card1_ > card2_ ? 1 : -1;
    if (history_ == "pp") return sign;
    if (history_ == "bp") return 1;
    if (history_ == "pbp") return -1;
    return 2 * sign;
  }

  int card1_ = -1;
  int card2_ = -1;
  std::string history_;
};

class KuhnGame : public BlackBoxGame {
 public:
  std::string id() const override { return "kuhn"; }
  int num_players() const override { return 2; }
  bool zero_sum() const override { return true; }
  std::vector<double> root_lb() const override { return {-2, -2}; }
  std::vector<double> root_ub() const override { return {2, 2}; }
  std::unique_ptr<GameState> NewRoot() const override {
    return std::make_unique<KuhnState>();
  }
};

// Leduc poker --------------------------------------------------------------

std::string RankName(int k, int rank) {
  static const std::string kNames = "23456789TJQKA";
  if (k <= 13) return std::string(1, kNames[13 - k + rank]);
  return "r" + std::to_string(rank);
}

class LeducState : public GameState {
 public:
  explicit LeducState(int k) : k_(k) {}

  NodeReport Report() const override {
    NodeReport report;
    const bool terminal = IsTerminal();
    report.reward = ZeroSumReward(terminal ? Payoff() : 0.0);
    if (terminal) {
      report.kind = NodeKind::kTerminal;
      return report;
    }
    if (IsChance()) {
      report.kind = NodeKind::kChance;
      std::vector<int> dealt;
      for (int c : {card1_, card2_}) {
        if (c >= 0) dealt.push_back(c);
      }
      std::sort(dealt.begin(), dealt.end());
      report.chance_signature = "dealt:";
      for (size_t i = 0; i < dealt.size(); ++i) {
        if (i > 0) report.chance_signature += ',';
        report.chance_signature += RankName(k_, dealt[i]);
      }
      const int deck = 2 * k_ - static_cast<int>(dealt.size());
      for (int r = 0; r < k_; ++r) {
        const int left = Remaining(r);
        if (left == 0) continue;
        report.actions.push_back(RankName(k_, r));
        report.chance_probs.push_back(static_cast<double>(left) / deck);
      }
    } else {
      report.kind = NodeKind::kDecision;
      report.player = to_act_;
      const int card = to_act_ == 1 ? card1_ : card2_;
      report.infoset = "P" + std::to_string(to_act_) + "|" +
                       RankName(k_, card) + "|" + history_[0];
      if (round_ == 2) {
        report.infoset += "|" + RankName(k_, board_) + "|" + history_[1];
      }
      for (char c : BetActions()) report.actions.push_back(std::string(1, c));
    }
    for (int a = 0; a < static_cast<int>(report.actions.size()); ++a) {
      LeducState child = Apply(a);
      const auto [lo, hi] = child.Bounds();
      AddZeroSumChild(lo, hi, &report);
    }
    return report;
  }

  std::unique_ptr<GameState> Child(int action) const override {
    return std::make_unique<LeducState>(Apply(action));
  }

  std::pair<double, double> Bounds() const {
    if (IsTerminal()) return {Payoff(), Payoff()};
    const double bet = round_ == 1 ? 2 : 4;
    const double cap = std::max(contrib_[0], contrib_[1]) + (2 - bets_) * bet +
                       (round_ == 1 ? 8 : 0);
    return {-cap, cap};
  }

 private:
  int Remaining(int rank) const {
    return 2 - (card1_ == rank) - (card2_ == rank) - (board_ == rank);
  }

  bool IsChance() const {
    return card1_ < 0 || card2_ < 0 || (round_ == 2 && board_ < 0);
  }

  std::string BetActions() const {
    const std::string& h = history_[round_ - 1];
    const bool facing = !h.empty() && h.back() == 'r';
    if (facing) return bets_ < 2 ? "fcr" : "fc";
    return "cr";
  }

  LeducState Apply(int action) const {
    LeducState next = *this;
    if (IsChance()) {
      int index = 0;
      for (int r = 0; r < k_; ++r) {
        if (Remaining(r) == 0) continue;
        if (index++ != action) continue;
        if (card1_ < 0) {
          next.card1_ = r;
        } else if (card2_ < 0) {
          next.card2_ = r;
        } else {
          next.board_ = r;
        }
      }
      return next;
    }
    const char move = BetActions()[action];
    std::string& h = next.history_[round_ - 1];
    const int me = to_act_ - 1;
    const int other = 1 - me;
    h += move;
    if (move == 'f') {
      next.folded_ = to_act_;
      return next;
    }
    if (move == 'r') {
      next.contrib_[me] = contrib_[other] + (round_ == 1 ? 2 : 4);
      ++next.bets_;
      next.to_act_ = 3 - to_act_;
      return next;
    }
    // Check or call.
    next.contrib_[me] = contrib_[other];
    const bool closes = h.size() >= 2;
    if (!closes) {
      next.to_act_ = 3 - to_act_;
      return next;
    }
    if (round_ == 1) {
      next.round_ = 2;
      next.bets_ = 0;
      next.to_act_ = 1;
    } else {
      next.showdown_ = true;
    }
    return next;
  }

  bool IsTerminal() const { return folded_ != 0 || showdown_; }

  double Payoff() const {
    if (folded_ == 1) return -contrib_[0];
    if (folded_ == 2) return contrib_[1];
    const bool pair1 = card1_ == board_;
    const bool pair2 = card2_ == board_;
    int winner = 0;
    if (pair1 != pair2) {
      winner = pair1 ? 1 : 2;
    } else if (card1_ != card2_) {
      winner = card1_ > card2_ ? 1 : 2;
    }
    if (winner == 1) return contrib_[1];
    if (winner == 2) return -contrib_[0];
    return 0;
  }

  int k_;
  int card1_ = -1;
  int card2_ = -1;
  int board_ = -1;
  int round_ = 1;
  int bets_ = 0;
  int to_act_ = 1;
  int folded_ = 0;
  bool showdown_ = false;
  double contrib_[2] = {1, 1};
  std::string history_[2];
};

class LeducGame : public BlackBoxGame {
 public:
  explicit LeducGame(int k) : k_(k) {}
  std::string id() const override { return "leduc:" + std::to_string(k_); }
  int num_players() const override { return 2; }
  bool zero_sum() const override { return true; }
  std::vector<double> root_lb() const override { return {-13, -13}; }
  std::vector<double> root_ub() const override { return {13, 13}; }
  std::unique_ptr<GameState> NewRoot() const override {
    return std::make_unique<LeducState>(k_);
  }

 private:
  int k_;
};

// Goofspiel ----------------------------------------------------------------

class GoofspielState : public GameState {
 public:
  explicit GoofspielState(int k) : k_(k) {
    const unsigned all = (1u << k) - 1;
    prizes_ = hand_[0] = hand_[1] = all;
    Normalize();
  }

  NodeReport Report() const override {
    NodeReport report;
    report.reward = ZeroSumReward(reward_);
    if (IsTerminal()) {
      report.kind = NodeKind::kTerminal;
      return report;
    }
    std::vector<int> options;
    if (prize_ < 0) {
      report.kind = NodeKind::kChance;
      const int left = std::popcount(prizes_);
      report.chance_signature = "remaining:" + std::to_string(left);
      for (int v = 0; v < k_; ++v) {
        if (prizes_ >> v & 1) {
          report.actions.push_back("p" + std::to_string(v + 1));
          report.chance_probs.push_back(1.0 / left);
        }
      }
    } else {
      report.kind = NodeKind::kDecision;
      report.player = bid1_ < 0 ? 1 : 2;
      report.infoset = "P" + std::to_string(report.player) + "|" +
                       history_[report.player - 1] + "p" +
                       std::to_string(prize_ + 1);
      for (int v = 0; v < k_; ++v) {
        if (hand_[report.player - 1] >> v & 1) {
          report.actions.push_back("b" + std::to_string(v + 1));
        }
      }
    }
    for (int a = 0; a < static_cast<int>(report.actions.size()); ++a) {
      GoofspielState child = Apply(a);
      const double open = child.Unresolved();
      AddZeroSumChild(child.reward_ - open, child.reward_ + open, &report);
    }
    return report;
  }

  std::unique_ptr<GameState> Child(int action) const override {
    return std::make_unique<GoofspielState>(Apply(action));
  }

 private:
  bool IsTerminal() const { return prizes_ == 0 && prize_ < 0; }

  // Total value of prizes not yet awarded.
  double Unresolved() const {
    double total = prize_ >= 0 ? prize_ + 1 : 0;
    for (int v = 0; v < k_; ++v) {
      if (prizes_ >> v & 1) total += v + 1;
    }
    return total;
  }

  // The last prize is revealed without a chance node.
  void Normalize() {
    if (prize_ < 0 && std::popcount(prizes_) == 1) {
      prize_ = std::countr_zero(prizes_);
      prizes_ = 0;
    }
  }

  static int NthBit(unsigned mask, int n) {
    for (int v = 0; v < 32; ++v) {
      if ((mask >> v & 1) && n-- == 0) return v;
    }
    return -1;
  }

  GoofspielState Apply(int action) const {
    GoofspielState next = *this;
    next.reward_ = 0;
    if (prize_ < 0) {
      const int v = NthBit(prizes_, action);
      next.prize_ = v;
      next.prizes_ &= ~(1u << v);
      return next;
    }
    if (bid1_ < 0) {
      next.bid1_ = NthBit(hand_[0], action);
      next.hand_[0] &= ~(1u << next.bid1_);
      return next;
    }
    const int bid2 = NthBit(hand_[1], action);
    next.hand_[1] &= ~(1u << bid2);
    const double value = prize_ + 1;
    char result[2];
    if (bid1_ > bid2) {
      next.reward_ = value;
      result[0] = 'W';
      result[1] = 'L';
    } else if (bid1_ < bid2) {
      next.reward_ = -value;
      result[0] = 'L';
      result[1] = 'W';
    } else {
      result[0] = result[1] = 'T';
    }
    const std::string prize = "p" + std::to_string(prize_ + 1);
    next.history_[0] +=
        prize + "b" + std::to_string(bid1_ + 1) + result[0] + ";";
    next.history_[1] +=
        prize + "b" + std::to_string(bid2 + 1) + result[1] + ";";
    next.prize_ = -1;
    next.bid1_ = -1;
    next.Normalize();
    return next;
  }

  int k_;
  unsigned prizes_ = 0;
  unsigned hand_[2] = {0, 0};
  int prize_ = -1;
  int bid1_ = -1;
  double reward_ = 0;
  std::string history_[2];
};

class GoofspielGame : public BlackBoxGame {
 public:
  explicit GoofspielGame(int k) : k_(k) {}
  std::string id() const override { return "goofspiel:" + std::to_string(k_); }
  int num_players() const override { return 2; }
  bool zero_sum() const override { return true; }
  std::vector<double> root_lb() const override { return {-Total(), -Total()}; }
  std::vector<double> root_ub() const override { return {Total(), Total()}; }
  std::unique_ptr<GameState> NewRoot() const override {
    return std::make_unique<GoofspielState>(k_);
  }

 private:
  double Total() const { return k_ * (k_ + 1) / 2.0; }
  int k_;
};

// Bandits ------------------------------------------------------------------

class BanditState : public GameState {
 public:
  BanditState(const std::vector<BanditArm>* arms, int arm, int outcome)
      : arms_(arms), arm_(arm), outcome_(outcome) {}

  NodeReport Report() const override {
    NodeReport report;
    report.reward = {outcome_ >= 0 ? (*arms_)[arm_].values[outcome_] : 0.0};
    if (outcome_ >= 0) {
      report.kind = NodeKind::kTerminal;
      return report;
    }
    if (arm_ < 0) {
      report.kind = NodeKind::kDecision;
      report.player = 1;
      report.infoset = "P1|";
      for (const BanditArm& arm : *arms_) {
        report.actions.push_back(arm.label);
        report.child_lb.push_back({arm.lb});
        report.child_ub.push_back({arm.ub});
      }
      return report;
    }
    const BanditArm& arm = (*arms_)[arm_];
    report.kind = NodeKind::kChance;
    report.chance_signature = "arm:" + arm.label;
    report.chance_probs = arm.probs;
    for (double v : arm.values) {
      report.actions.push_back(FormatNumber(v));
      report.child_lb.push_back({v});
      report.child_ub.push_back({v});
    }
    return report;
  }

  std::unique_ptr<GameState> Child(int action) const override {
    if (arm_ < 0) return std::make_unique<BanditState>(arms_, action, -1);
    return std::make_unique<BanditState>(arms_, arm_, action);
  }

 private:
  const std::vector<BanditArm>* arms_;
  int arm_;
  int outcome_;
};

class BanditGame : public BlackBoxGame {
 public:
  BanditGame(std::string id, std::vector<BanditArm> arms)
      : id_(std::move(id)), arms_(std::move(arms)) {}
  std::string id() const override { return id_; }
  int num_players() const override { return 1; }
  bool zero_sum() const override { return false; }
  std::vector<double> root_lb() const override {
    double lo = arms_[0].lb;
    for (const BanditArm& arm : arms_) lo = std::min(lo, arm.lb);
    return {lo};
  }
  std::vector<double> root_ub() const override {
    double hi = arms_[0].ub;
    for (const BanditArm& arm : arms_) hi = std::max(hi, arm.ub);
    return {hi};
  }
  std::unique_ptr<GameState> NewRoot() const override {
    return std::make_unique<BanditState>(&arms_, -1, -1);
  }

 private:
  std::string id_;
  std::vector<BanditArm> arms_;
};

// Explicit trees -----------------------------------------------------------

class TreeState : public GameState {
 public:
  TreeState(const GameTree* tree, int node) : tree_(tree), node_(node) {}

  NodeReport Report() const override {
    const Node& node = tree_->node(node_);
    const int n = tree_->num_players();
    NodeReport report;
    report.kind = node.kind;
    report.player = node.player;
    if (node.infoset >= 0) report.infoset = tree_->infoset(node.infoset).key;
    report.actions = node.actions;
    report.chance_signature = node.chance_signature;
    report.chance_probs = node.chance_probs;
    for (int p = 1; p <= n; ++p)
      report.reward.push_back(tree_->reward(node_, p));
    if (node.kind == NodeKind::kTerminal) report.actions.clear();
    if (node.is_leaf()) return report;
    for (int a = 0; a < node.num_actions(); ++a) {
      std::vector<double> lo(n), hi(n);
      for (int p = 1; p <= n; ++p) {
        lo[p - 1] = tree_->lb(node.child(a), p);
        hi[p - 1] = tree_->ub(node.child(a), p);
      }
      report.child_lb.push_back(std::move(lo));
      report.child_ub.push_back(std::move(hi));
    }
    return report;
  }

  std::unique_ptr<GameState> Child(int action) const override {
    return std::make_unique<TreeState>(tree_, tree_->node(node_).child(action));
  }

 private:
  const GameTree* tree_;
  int node_;
};

class TreeGame : public BlackBoxGame {
 public:
  TreeGame(std::string id, std::shared_ptr<GameTree> tree)
      : id_(std::move(id)), tree_(std::move(tree)) {}
  std::string id() const override { return id_; }
  int num_players() const override { return tree_->num_players(); }
  bool zero_sum() const override { return tree_->zero_sum(); }
  std::vector<double> root_lb() const override {
    std::vector<double> lo;
    for (int p = 1; p <= num_players(); ++p) lo.push_back(tree_->lb(0, p));
    return lo;
  }
  std::vector<double> root_ub() const override {
    std::vector<double> hi;
    for (int p = 1; p <= num_players(); ++p) hi.push_back(tree_->ub(0, p));
    return hi;
  }
  std::unique_ptr<GameState> NewRoot() const override {
    return std::make_unique<TreeState>(tree_.get(), 0);
  }

 private:
  std::string id_;
  std::shared_ptr<GameTree> tree_;
};

std::vector<std::string> Split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    const size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) return parts;
    start = pos + 1;
  }
}

double ParseNumber(const std::string& text) {
  size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw CertigameError("invalid game parameter: " + text);
  }
  CERTIGAME_CHECK(used == text.size() && std::isfinite(v),
                  "invalid game parameter: " + text);
  return v;
}

int ParseInt(const std::string& text) {
  const double v = ParseNumber(text);
  CERTIGAME_CHECK(v == std::floor(v), "invalid game parameter: " + text);
  return static_cast<int>(v);
}

}  // namespace

std::unique_ptr<BlackBoxGame> MakeGoofspiel(int k) {
  CERTIGAME_CHECK(k >= 2 && k <= 16, "invalid goofspiel size");
  return std::make_unique<GoofspielGame>(k);
}

std::unique_ptr<BlackBoxGame> MakeLeduc(int k) {
  CERTIGAME_CHECK(k >= 2, "invalid leduc size");
  return std::make_unique<LeducGame>(k);
}

std::unique_ptr<BlackBoxGame> MakeKuhn() {
  return std::make_unique<KuhnGame>();
}

std::unique_ptr<BlackBoxGame> MakeBandit(const std::string& id,
                                         std::vector<BanditArm> arms) {
  CERTIGAME_CHECK(!arms.empty(), "bandit without arms");
  for (const BanditArm& arm : arms) {
    CERTIGAME_CHECK(
        std::isfinite(arm.lb) && std::isfinite(arm.ub) && arm.lb <= arm.ub,
        "bandit arm needs a bounded declared support");
    CERTIGAME_CHECK(
        !arm.values.empty() && arm.values.size() == arm.probs.size(),
        "bandit arm distribution malformed");
    double total = 0;
    for (size_t i = 0; i < arm.values.size(); ++i) {
      CERTIGAME_CHECK(arm.values[i] >= arm.lb && arm.values[i] <= arm.ub,
                      "bandit reward outside declared support");
      CERTIGAME_CHECK(arm.probs[i] > 0, "bandit outcome with zero probability");
      total += arm.probs[i];
    }
    CERTIGAME_CHECK(std::abs(total - 1) <= kTolerance,
                    "bandit distribution does not sum to 1");
  }
  return std::make_unique<BanditGame>(id, std::move(arms));
}

std::unique_ptr<BlackBoxGame> MakeBanditSec4(double p, double eps) {
  const double q = p + eps;
  CERTIGAME_CHECK(q >= 0 && q <= 1, "bernoulli parameter outside [0, 1]");
  BanditArm left{"left", {}, {}, 0, 1};
  if (q < 1) {
    left.values.push_back(0);
    left.probs.push_back(1 - q);
  }
  if (q > 0) {
    left.values.push_back(1);
    left.probs.push_back(q);
  }
  BanditArm right{"right", {0.5}, {1.0}, 0.5, 0.5};
  return MakeBandit("bandit:sec4:" + FormatNumber(p) + ":" + FormatNumber(eps),
                    {left, right});
}

std::unique_ptr<BlackBoxGame> MakeBanditAppB1(int k) {
  CERTIGAME_CHECK(k >= 2, "invalid bandit parameter");
  BanditArm left{"left",
                 {-static_cast<double>(k), 0.0},
                 {1.0 / k, 1.0 - 1.0 / k},
                 -static_cast<double>(k),
                 0};
  BanditArm right{"right", {-1.0}, {1.0}, -1, -1};
  return MakeBandit("bandit:appB1:" + std::to_string(k), {left, right});
}

std::unique_ptr<BlackBoxGame> MakeTreeGame(const std::string& id,
                                           std::shared_ptr<GameTree> tree) {
  CERTIGAME_CHECK(tree->fully_expanded() && tree->has_chance_policy(),
                  "tree game needs a fully known tree");
  return std::make_unique<TreeGame>(id, std::move(tree));
}

std::unique_ptr<BlackBoxGame> MakeGame(const std::string& game_id) {
  const std::vector<std::string> parts = Split(game_id, ':');
  if (parts[0] == "kuhn" && parts.size() == 1) return MakeKuhn();
  if (parts[0] == "goofspiel" && parts.size() == 2) {
    return MakeGoofspiel(ParseInt(parts[1]));
  }
  if (parts[0] == "leduc" && parts.size() == 2) {
    return MakeLeduc(ParseInt(parts[1]));
  }
  if (parts[0] == "bandit" && parts.size() == 4 && parts[1] == "sec4") {
    return MakeBanditSec4(ParseNumber(parts[2]), ParseNumber(parts[3]));
  }
  if (parts[0] == "bandit" && parts.size() == 3 && parts[1] == "appB1") {
    return MakeBanditAppB1(ParseInt(parts[2]));
  }
  throw CertigameError("no such game: " + game_id);
}

}  // namespace certigame

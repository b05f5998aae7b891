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

#ifndef CERTIGAME_PSEUDOGAME_H_
#define CERTIGAME_PSEUDOGAME_H_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "certigame/blackbox.h"
#include "certigame/evaluation.h"
#include "certigame/game_tree.h"
#include "certigame/profile.h"

namespace certigame {

enum class ChanceMode { kKnown, kSignature, kIndependent };
enum class ExpandMode { kPath, kFirstNew };

const char* ChanceModeName(ChanceMode mode);
ChanceMode ParseChanceMode(const std::string& name);
const char* ExpandModeName(ExpandMode mode);
ExpandMode ParseExpandMode(const std::string& name);

// Empirical counts of one chance estimator, by action index.
struct ChanceStats {
  std::string signature;
  std::vector<int64_t> counts;
  int64_t t_h = 0;

  int num_actions() const { return static_cast<int>(counts.size()); }
};

// Confidence radius min(1, sqrt((|A| ln 2 + ln(t^gamma C n)) / (2 t_h))).
double Rho(const ChanceStats& stats, int num_actions, int64_t t, int64_t c_t,
           int n, double gamma = 2.0);

// Time-indexed pseudogame built from playthroughs. Chance nodes that have
// been sampled are evaluated with their empirical distribution widened by
// +/- rho * Delta; unexpanded nodes are frontier pseudo-leaves.
class Pseudogame {
 public:
  Pseudogame(int num_players, bool zero_sum, std::vector<double> root_lb,
             std::vector<double> root_ub, ChanceMode chance_mode,
             ExpandMode expand_mode, double gamma = 2.0);
  Pseudogame(const BlackBoxGame& game, ChanceMode chance_mode,
             ExpandMode expand_mode, double gamma = 2.0);

  // Adds one playthrough and increments t.
  void Record(const Trajectory& trajectory);

  const GameTree& tree() const { return tree_; }
  int num_players() const { return tree_.num_players(); }
  int64_t t() const { return t_; }
  // Number of distinct chance estimators C_t.
  int num_estimators() const { return num_estimators_; }
  int num_nodes() const { return tree_.num_nodes(); }
  ChanceMode chance_mode() const { return chance_mode_; }
  ExpandMode expand_mode() const { return expand_mode_; }
  double gamma() const { return gamma_; }

  // Estimator of a chance node, or -1 when its distribution is not
  // estimated (known mode or a single action).
  int estimator(int h) const { return node_estimator_[h]; }
  int num_estimator_slots() const { return static_cast<int>(stats_.size()); }
  const ChanceStats& stats(int e) const { return stats_[e]; }
  // Direct access for fault-injection tests.
  ChanceStats& mutable_stats(int e) { return stats_[e]; }

  double Rho(int h) const;
  std::vector<double> ChanceDistribution(int h) const;

  // Utility model in which player i uses side sides[i-1]. With `oracle`
  // non-null, chance nodes use the oracle's true distribution and no
  // confidence widening, giving the exact-chance pseudogame.
  UtilityModel BoundModel(const std::vector<Side>& sides,
                          const GameTree* oracle = nullptr) const;

  // Snapshot export: GameTree schema plus a chance section.
  std::string ToJson(int indent = -1) const;
  static Pseudogame FromJson(const std::string& text);

 private:
  int EstimatorFor(int h);
  void RecountEstimators();

  GameTree tree_;
  ChanceMode chance_mode_;
  ExpandMode expand_mode_;
  double gamma_;
  int64_t t_ = 0;
  int num_estimators_ = 0;
  std::vector<int> node_estimator_;
  std::vector<ChanceStats> stats_;
  std::unordered_map<std::string, int> signature_index_;
};

std::vector<Side> AllSides(int num_players, Side side);

// Returns (alpha_hat_i, beta_hat_i) for the profile (missing infosets are
// uniform) by a recursive bottom-up pass.
std::pair<double, double> EvalBounds(const Pseudogame& pg,
                                     const BehaviorProfile& profile,
                                     int player);

// Best response of `player` in the bound game of the given side.
std::pair<BehaviorProfile, double> PseudoBestResponse(
    const Pseudogame& pg, int player, const BehaviorProfile& opponents,
    Side side);

// beta_hat_i - alpha_hat_i for every player.
std::vector<double> Uncertainty(const Pseudogame& pg,
                                const BehaviorProfile& profile);
std::vector<double> Uncertainty(const Pseudogame& pg, const Policy& policy);

class UncertaintyLedger {
 public:
  explicit UncertaintyLedger(int num_players) : total_(num_players, 0.0) {}
  void Accrue(const std::vector<double>& delta);
  void Accrue(const Pseudogame& pg, const BehaviorProfile& profile) {
    Accrue(Uncertainty(pg, profile));
  }
  const std::vector<double>& total() const { return total_; }
  const std::vector<std::vector<double>>& log() const { return log_; }

 private:
  std::vector<double> total_;
  std::vector<std::vector<double>> log_;
};

// 2 C_T sqrt(2 T M) + N_T with M = max_h(|A_h| ln 2 + ln(2 T^2 C_T n)).
double UncertaintyBudget(int64_t c_t, int max_actions, int n, int64_t t,
                         int64_t n_t);
double UncertaintyBudget(const Pseudogame& pg, int64_t t);

struct AuditViolation {
  int profile = 0;
  int player = 0;
  bool upper = false;  // beta side violated
  double estimate = 0;
  double truth = 0;
};

struct AuditReport {
  int checks = 0;
  std::vector<AuditViolation> violations;
};

// Checks alpha_hat <= alpha_t and beta_t <= beta_hat for every profile and
// player, where alpha_t and beta_t use the oracle's true chance policy on
// the same trunk.
AuditReport CorrectnessAudit(const Pseudogame& pg, const GameTree& oracle,
                             const std::vector<BehaviorProfile>& profiles);

}  // namespace certigame

#endif  // CERTIGAME_PSEUDOGAME_H_

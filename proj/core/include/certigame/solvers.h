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

#ifndef CERTIGAME_SOLVERS_H_
#define CERTIGAME_SOLVERS_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "certigame/blackbox.h"
#include "certigame/evaluation.h"
#include "certigame/profile.h"
#include "certigame/pseudogame.h"
#include "certigame/regret.h"

namespace certigame {

struct CfrConfig {
  RegretRule rule = RegretRule::kRegretMatchingPlus;
  bool alternating = false;
  bool linear_averaging = false;
};

// Full-walk CFR over a (possibly growing) utility model, one regret state
// per player plus sequence-form averages.
class CfrSolver {
 public:
  CfrSolver(int num_players, CfrConfig config);

  // Runs one iteration and returns the profile played in it.
  Policy Iterate(const UtilityModel& model);

  Policy CurrentPolicy(const GameTree& tree) const;
  Policy AveragePolicy(const GameTree& tree) const;
  void ResetAverages();
  void Sync(const GameTree& tree);

  RegretState& state(int player) { return states_[player - 1]; }
  const RegretState& state(int player) const { return states_[player - 1]; }
  int64_t iterations() const { return iterations_; }

 private:
  CfrConfig config_;
  std::vector<RegretState> states_;
  std::vector<SequenceAverager> averages_;
  int64_t iterations_ = 0;
  int64_t averaged_ = 0;
};

// One CFR iteration on the bound game given by `sides`; updates the states
// simultaneously (or in player order when alternating) and returns the
// profile that was played.
BehaviorProfile CfrIteration(const Pseudogame& pg,
                             std::vector<RegretState>* states,
                             const std::vector<Side>& sides,
                             bool alternating = false);

struct StochasticLossEstimate {
  int player = 1;
  // Importance-corrected gain contributions per sequence; the loss handed to
  // the regret minimizer is their negation.
  std::vector<std::pair<int, double>> gain;
  int leaf = -1;
  double sample_prob = 0;
  double norm = 0;  // range of <x, gain> over the treeplex
  double alpha_estimate = 0;
};

// Number of leaves (terminal or frontier) under each node.
std::vector<double> LeafCounts(const GameTree& tree);

// Samples one leaf with the updating player mixing (1 - eps) of its policy
// with eps of the leaf-balanced uniform policy over the current tree, the
// others on-policy and chance from the model. The estimate is unbiased for
// GainVector(model, player, policy); with `alpha_model` it also estimates
// that model's value for the player under `policy`.
StochasticLossEstimate SampleLossEstimate(
    const UtilityModel& model, const UtilityModel* alpha_model, int player,
    const Policy& policy, const std::vector<double>& leaves, double epsilon,
    const RegretState& treeplex, Rng* rng);

// One outcome-sampling MCCFR step: every player samples one estimate under
// the current profile, then all states are updated along the sampled paths.
BehaviorProfile MccfrOutcomeStep(
    const Pseudogame& pg, std::vector<RegretState>* states,
    const std::vector<Side>& sides, double epsilon, uint64_t seed,
    std::vector<StochasticLossEstimate>* estimates);

struct ExactSolveOptions {
  double tol_rel = 1e-6;  // relative to the root reward range
  int max_iterations = 200000;
  int check_every = 25;
  // Keep regrets from earlier solves as the starting point.
  bool warm_start = true;
};

struct ExactSolveResult {
  Policy policy;  // both players, indexed by the tree's infosets
  BehaviorProfile profile;
  double value = 0;  // midpoint of the certified bracket, player 1
  double lower = 0;  // min_y u1(x, y)
  double upper = 0;  // max_x u1(x, y)
  double achieved_gap = 0;
  bool converged = false;
  int iterations = 0;
};

// Solves a two-player zero-sum utility model (or a one-player model by
// direct best response) with alternating predictive CFR+ and quadratic
// averaging. Regrets persist across calls unless warm_start is off, so later
// solves on a grown tree start warm. The returned gap is measured by
// independent best responses, and the better of the last iterate and the
// average is returned.
class ExactSolver {
 public:
  explicit ExactSolver(ExactSolveOptions options = {}) : options_(options) {}

  ExactSolveResult Solve(const UtilityModel& model);
  // Bound game of the pseudogame: kPessimistic solves the alpha-hat game,
  // kOptimistic the beta-hat game.
  ExactSolveResult Solve(const Pseudogame& pg, Side side);

  const ExactSolveOptions& options() const { return options_; }
  ExactSolveOptions& mutable_options() { return options_; }

 private:
  ExactSolveOptions options_;
  struct PlayerState {
    std::vector<double> regret;      // per sequence, clipped at zero
    std::vector<double> prediction;  // last instantaneous regret
  };
  void WritePolicy(const GameTree& tree, int player, Policy* policy) const;
  void Update(const GameTree& tree, int player, const std::vector<double>& gain,
              const Policy& policy);

  PlayerState players_[2];
  int64_t solves_ = 0;
};

// Sides of the two bound games of a two-player zero-sum pseudogame.
std::vector<Side> BoundGameSides(const Pseudogame& pg, Side side);

// Gap of a profile in a zero-sum model: max_x u1(x, y) + max_y u2(x, y).
double ZeroSumGap(const UtilityModel& model, const Policy& policy,
                  double* upper = nullptr, double* lower = nullptr);

}  // namespace certigame

#endif  // CERTIGAME_SOLVERS_H_

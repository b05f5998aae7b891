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

#include "certigame/solvers.h"

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

namespace certigame {
namespace {

std::vector<double> Negated(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  for (size_t k = 0; k < v.size(); ++k) out[k] = -v[k];
  return out;
}

double RootRange(const GameTree& tree) {
  double range = 0;
  for (int p = 1; p <= tree.num_players(); ++p) {
    range = std::max(range, tree.width(0, p));
  }
  return range;
}

}  // namespace

CfrSolver::CfrSolver(int num_players, CfrConfig config) : config_(config) {
  for (int p = 1; p <= num_players; ++p) {
    states_.emplace_back(config.rule);
    averages_.emplace_back(p);
  }
}

void CfrSolver::Sync(const GameTree& tree) {
  for (int p = 1; p <= static_cast<int>(states_.size()); ++p) {
    states_[p - 1].SyncWithTree(tree, p, iterations_);
  }
}

Policy CfrSolver::CurrentPolicy(const GameTree& tree) const {
  Policy policy(tree.num_infosets());
  for (int p = 1; p <= static_cast<int>(states_.size()); ++p) {
    states_[p - 1].WritePolicy(tree, p, &policy);
  }
  return policy;
}

Policy CfrSolver::AveragePolicy(const GameTree& tree) const {
  Policy policy(tree.num_infosets());
  for (int p = 1; p <= static_cast<int>(states_.size()); ++p) {
    SequenceStrategy seq;
    seq.player = p;
    seq.values = averages_[p - 1].Average(tree);
    FromSequenceForm(tree, seq, &policy);
  }
  return policy;
}

void CfrSolver::ResetAverages() {
  for (SequenceAverager& avg : averages_) avg.Reset();
  averaged_ = 0;
}

Policy CfrSolver::Iterate(const UtilityModel& model) {
  const GameTree& tree = *model.tree;
  Sync(tree);
  ++iterations_;
  ++averaged_;
  const double weight =
      config_.linear_averaging ? static_cast<double>(averaged_) : 1.0;
  Policy policy = CurrentPolicy(tree);
  const Policy played = policy;
  const int n = static_cast<int>(states_.size());
  if (config_.alternating) {
    for (int p = 1; p <= n; ++p) {
      averages_[p - 1].Add(tree, states_[p - 1].SequenceForm(), weight);
      const std::vector<double> gain = GainVector(model, p, policy);
      states_[p - 1].Observe(Negated(gain));
      states_[p - 1].WritePolicy(tree, p, &policy);
    }
    return played;
  }
  std::vector<std::vector<double>> gains(n);
  for (int p = 1; p <= n; ++p) {
    averages_[p - 1].Add(tree, states_[p - 1].SequenceForm(), weight);
    gains[p - 1] = GainVector(model, p, policy);
  }
  for (int p = 1; p <= n; ++p) states_[p - 1].Observe(Negated(gains[p - 1]));
  return played;
}

BehaviorProfile CfrIteration(const Pseudogame& pg,
                             std::vector<RegretState>* states,
                             const std::vector<Side>& sides, bool alternating) {
  const GameTree& tree = pg.tree();
  const int n = pg.num_players();
  CERTIGAME_CHECK(static_cast<int>(states->size()) == n,
                  "one regret state per player required");
  const UtilityModel model = pg.BoundModel(sides);
  Policy policy(tree.num_infosets());
  for (int p = 1; p <= n; ++p) {
    (*states)[p - 1].SyncWithTree(tree, p, pg.t());
    (*states)[p - 1].WritePolicy(tree, p, &policy);
  }
  const Policy played = policy;
  if (alternating) {
    for (int p = 1; p <= n; ++p) {
      (*states)[p - 1].Observe(Negated(GainVector(model, p, policy)));
      (*states)[p - 1].WritePolicy(tree, p, &policy);
    }
  } else {
    std::vector<std::vector<double>> gains;
    for (int p = 1; p <= n; ++p) gains.push_back(GainVector(model, p, policy));
    for (int p = 1; p <= n; ++p)
      (*states)[p - 1].Observe(Negated(gains[p - 1]));
  }
  return ToProfile(tree, played);
}

std::vector<double> LeafCounts(const GameTree& tree) {
  std::vector<double> leaves(tree.num_nodes(), 0.0);
  for (int h = tree.num_nodes() - 1; h >= 0; --h) {
    const Node& node = tree.node(h);
    if (node.is_leaf()) {
      leaves[h] = 1;
      continue;
    }
    for (int a = 0; a < node.num_actions(); ++a) {
      leaves[h] += leaves[node.child(a)];
    }
  }
  return leaves;
}

StochasticLossEstimate SampleLossEstimate(
    const UtilityModel& model, const UtilityModel* alpha_model, int player,
    const Policy& policy, const std::vector<double>& leaves, double epsilon,
    const RegretState& treeplex, Rng* rng) {
  CERTIGAME_CHECK(epsilon > 0 && epsilon <= 1,
                  "exploration must lie in (0, 1]");
  const GameTree& tree = *model.tree;
  StochasticLossEstimate est;
  est.player = player;
  std::map<int, double> gain;
  double q_own = 1;   // sampling probability of the player's own choices
  double pi_own = 1;  // the player's own reach under the policy
  double q_all = 1;
  std::vector<double> mixed;
  int h = 0;
  while (true) {
    if (model.active[player - 1][h]) {
      const double local = model.local[player - 1][h];
      if (local != 0) gain[tree.seq(h, player)] += local / q_own;
    }
    if (alpha_model != nullptr && alpha_model->active[player - 1][h]) {
      est.alpha_estimate += alpha_model->local[player - 1][h] * pi_own / q_own;
    }
    const Node& node = tree.node(h);
    if (node.is_leaf()) break;
    int a = 0;
    if (node.kind == NodeKind::kChance) {
      a = rng->Sample(model.chance[h]);
      q_all *= model.chance[h][a];
    } else if (node.player == player) {
      const std::vector<double>& probs = policy[node.infoset];
      mixed.resize(node.num_actions());
      for (int b = 0; b < node.num_actions(); ++b) {
        mixed[b] = (1 - epsilon) * probs[b] +
                   epsilon * leaves[node.child(b)] / leaves[h];
      }
      a = rng->Sample(mixed);
      q_own *= mixed[a];
      q_all *= mixed[a];
      pi_own *= probs[a];
    } else {
      const std::vector<double>& probs = policy[node.infoset];
      a = rng->Sample(probs);
      q_all *= probs[a];
    }
    h = node.child(a);
  }
  est.leaf = h;
  est.sample_prob = q_all;
  est.gain.assign(gain.begin(), gain.end());
  est.norm = SparseRange(treeplex, est.gain);
  return est;
}

BehaviorProfile MccfrOutcomeStep(
    const Pseudogame& pg, std::vector<RegretState>* states,
    const std::vector<Side>& sides, double epsilon, uint64_t seed,
    std::vector<StochasticLossEstimate>* estimates) {
  const GameTree& tree = pg.tree();
  const int n = pg.num_players();
  const UtilityModel model = pg.BoundModel(sides);
  const std::vector<double> leaves = LeafCounts(tree);
  Policy policy(tree.num_infosets());
  for (int p = 1; p <= n; ++p) {
    (*states)[p - 1].SyncWithTree(tree, p, pg.t());
    (*states)[p - 1].WritePolicy(tree, p, &policy);
  }
  Rng rng(seed);
  std::vector<StochasticLossEstimate> local;
  for (int p = 1; p <= n; ++p) {
    local.push_back(SampleLossEstimate(model, nullptr, p, policy, leaves,
                                       epsilon, (*states)[p - 1], &rng));
  }
  for (int p = 1; p <= n; ++p) {
    std::vector<std::pair<int, double>> loss = local[p - 1].gain;
    for (auto& entry : loss) entry.second = -entry.second;
    (*states)[p - 1].ObserveSparse(loss);
  }
  if (estimates != nullptr) *estimates = std::move(local);
  return ToProfile(tree, policy);
}

std::vector<Side> BoundGameSides(const Pseudogame& pg, Side side) {
  if (pg.num_players() == 1) return {side};
  CERTIGAME_CHECK(pg.num_players() == 2 && pg.tree().zero_sum(),
                  "zero-sum required");
  const Side other =
      side == Side::kOptimistic ? Side::kPessimistic : Side::kOptimistic;
  return {side, other};
}

double ZeroSumGap(const UtilityModel& model, const Policy& policy,
                  double* upper, double* lower) {
  const GameTree& tree = *model.tree;
  const double br1 =
      TreeplexBestResponse(tree, 1, GainVector(model, 1, policy), nullptr);
  if (tree.num_players() == 1) {
    const double value = ModelValues(model, policy)[0];
    if (upper != nullptr) *upper = br1;
    if (lower != nullptr) *lower = value;
    return br1 - value;
  }
  const double br2 =
      TreeplexBestResponse(tree, 2, GainVector(model, 2, policy), nullptr);
  if (upper != nullptr) *upper = br1;
  if (lower != nullptr) *lower = -br2;
  return br1 + br2;
}

void ExactSolver::WritePolicy(const GameTree& tree, int player,
                              Policy* policy) const {
  const PlayerState& state = players_[player - 1];
  for (int j : tree.player_infosets(player)) {
    const Infoset& info = tree.infoset(j);
    std::vector<double>& probs = (*policy)[j];
    probs.assign(info.num_actions(), 0.0);
    double total = 0;
    for (int a = 0; a < info.num_actions(); ++a) {
      const int s = info.first_seq + a;
      probs[a] = std::max(0.0, state.regret[s] + state.prediction[s]);
      total += probs[a];
    }
    for (double& p : probs) {
      p = total > 0 ? p / total : 1.0 / info.num_actions();
    }
  }
}

void ExactSolver::Update(const GameTree& tree, int player,
                         const std::vector<double>& gain,
                         const Policy& policy) {
  PlayerState& state = players_[player - 1];
  // Counterfactual value of each sequence, filled bottom-up.
  std::vector<double> value(gain);
  value.resize(tree.num_sequences(player), 0.0);
  const std::vector<int>& infosets = tree.player_infosets(player);
  for (auto it = infosets.rbegin(); it != infosets.rend(); ++it) {
    const Infoset& info = tree.infoset(*it);
    const std::vector<double>& probs = policy[*it];
    double v = 0;
    for (int a = 0; a < info.num_actions(); ++a) {
      v += probs[a] * value[info.first_seq + a];
    }
    for (int a = 0; a < info.num_actions(); ++a) {
      const int s = info.first_seq + a;
      const double r = value[s] - v;
      state.prediction[s] = r;
      state.regret[s] = std::max(0.0, state.regret[s] + r);
    }
    value[info.parent_seq] += v;
  }
}

ExactSolveResult ExactSolver::Solve(const UtilityModel& model) {
  const GameTree& tree = *model.tree;
  const int n = tree.num_players();
  ExactSolveResult result;
  ++solves_;
  if (n == 1) {
    Policy response;
    const std::vector<double> gain = GainVector(model, 1, Policy());
    result.value = TreeplexBestResponse(tree, 1, gain, &response);
    result.upper = result.lower = result.value;
    result.policy = std::move(response);
    result.profile = ToProfile(tree, result.policy);
    result.converged = true;
    return result;
  }
  CERTIGAME_CHECK(n == 2 && tree.zero_sum(), "zero-sum required");
  const double tol = options_.tol_rel * RootRange(tree);
  for (int p = 1; p <= 2; ++p) {
    PlayerState& state = players_[p - 1];
    if (!options_.warm_start) {
      state.regret.clear();
      state.prediction.clear();
    }
    state.regret.resize(tree.num_sequences(p), 0.0);
    state.prediction.resize(tree.num_sequences(p), 0.0);
  }
  Policy policy(tree.num_infosets());
  for (int p = 1; p <= 2; ++p) WritePolicy(tree, p, &policy);
  SequenceAverager avg[2] = {SequenceAverager(1), SequenceAverager(2)};
  Policy best = policy;
  double best_gap = ZeroSumGap(model, policy);
  int it = 0;
  while (best_gap > tol && it < options_.max_iterations) {
    ++it;
    const double weight = static_cast<double>(it) * it;
    for (int p = 1; p <= 2; ++p) {
      avg[p - 1].Add(tree, ToSequenceForm(tree, p, policy).values, weight);
      Update(tree, p, GainVector(model, p, policy), policy);
      WritePolicy(tree, p, &policy);
    }
    if (it % options_.check_every == 0 || it == options_.max_iterations) {
      const double current_gap = ZeroSumGap(model, policy);
      if (current_gap < best_gap) {
        best_gap = current_gap;
        best = policy;
      }
      Policy averaged(tree.num_infosets());
      for (int p = 1; p <= 2; ++p) {
        SequenceStrategy seq;
        seq.player = p;
        seq.values = avg[p - 1].Average(tree);
        FromSequenceForm(tree, seq, &averaged);
      }
      const double average_gap = ZeroSumGap(model, averaged);
      if (average_gap < best_gap) {
        best_gap = average_gap;
        best = std::move(averaged);
      }
    }
  }
  result.achieved_gap = ZeroSumGap(model, best, &result.upper, &result.lower);
  result.value = 0.5 * (result.upper + result.lower);
  result.converged = result.achieved_gap <= tol;
  result.iterations = it;
  result.policy = std::move(best);
  result.profile = ToProfile(tree, result.policy);
  return result;
}

ExactSolveResult ExactSolver::Solve(const Pseudogame& pg, Side side) {
  const UtilityModel model = pg.BoundModel(BoundGameSides(pg, side));
  return Solve(model);
}

}  // namespace certigame

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

#ifndef CERTIGAME_CERTIFY_H_
#define CERTIGAME_CERTIFY_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "certigame/blackbox.h"
#include "certigame/evaluation.h"
#include "certigame/profile.h"
#include "certigame/pseudogame.h"
#include "certigame/regret.h"
#include "certigame/solvers.h"

namespace certigame {

enum class Algo { kCertLp, kCertLpIndep, kCertCfr, kCertMccfr, kMccfrBaseline };
const char* AlgoName(Algo algo);
Algo ParseAlgo(const std::string& name);

enum class Exploration { kOptimistic, kUniform };

struct CertOptions {
  ChanceMode chance_mode = ChanceMode::kSignature;
  ExpandMode expand_mode = ExpandMode::kPath;
  double gamma = 2.0;
  int solve_every = 100;
  ExactSolveOptions exact{1e-4};  // certified gaps absorb the solver gap
  RegretRule rule = RegretRule::kRegretMatchingPlus;
  double mccfr_epsilon = 0.6;
  // Maintain the accumulated losses needed for eps-bar / eps-tilde.
  bool eps_bar = false;
  bool eps_tilde = false;
  // Feed the regret minimizers sampled true payoffs instead of bounds.
  bool warning1 = false;
  Exploration exploration = Exploration::kOptimistic;
  uint64_t seed = 0;
};

// Plays a tree policy at infosets it covers and uniformly elsewhere.
class TreePolicy : public PlayPolicy {
 public:
  TreePolicy(const GameTree* tree, const Policy* policy)
      : tree_(tree), policy_(policy) {}
  void Distribution(const Observation& obs,
                    std::vector<double>* probs) const override;

 private:
  const GameTree* tree_;
  const Policy* policy_;
};

struct GapReport {
  std::vector<double> per_player;
  // Nash gap for two-player zero-sum games, max over players otherwise.
  double provable_gap = 0;
};

// Deviation gaps of a uniform mixture of profiles (a single product profile
// when the list has one entry): for each player, best response against
// `upper` minus the value under `lower`. With `nash` set (two-player
// zero-sum, single profile) the headline is the sum of both best responses
// in `upper`.
GapReport DeviationGaps(const UtilityModel& upper, const UtilityModel& lower,
                        const std::vector<Policy>& mixture, bool nash);

// Provable gaps of a profile mixture in the pseudogame.
GapReport PseudogameGaps(const Pseudogame& pg,
                         const std::vector<Policy>& mixture);

// A trunk plus a profile whose pseudogame gaps bound the true gaps with
// probability at least 1 - 2/t^2.
struct Certificate {
  std::string game_id;
  std::string algo;
  int64_t t = 0;
  uint64_t seed = 0;
  std::vector<double> gaps;
  double provable_gap = 0;
  std::string confidence = "1 - 2/t^2";
  std::shared_ptr<const Pseudogame> trunk;
  // One entry for a product profile, several for a uniform correlated mix.
  std::vector<BehaviorProfile> profiles;
  std::vector<double> eps_bar;
  std::vector<double> eps_tilde;

  std::vector<Policy> Policies() const;
  GapReport Recompute() const;
  // True when the stored gaps are reproduced exactly by Recompute.
  bool Verify() const;
  std::string ToJson(int indent = 2) const;
  static Certificate FromJson(const std::string& text);
};

// Dense per-player sums of gain vectors over iterations. A sequence created
// at time t has zero mass before t; earlier mass reaching it sits on its
// parent sequence, which every strategy through the new sequence also plays.
class AccumulatedLoss {
 public:
  AccumulatedLoss() = default;

  void Add(const std::vector<double>& gain, double alpha, double played);
  void AddSparse(const std::vector<std::pair<int, double>>& gain, double alpha);

  // max over pure strategies of <x, sum of gains>.
  double MaxValue(const GameTree& tree, int player) const;
  double Value(const std::vector<double>& x) const { return Dot(x, sum_); }
  double alpha_sum() const { return alpha_sum_; }
  double played_sum() const { return played_sum_; }
  int64_t count() const { return count_; }
  const std::vector<double>& values() const { return sum_; }

 private:
  std::vector<double> sum_;
  double alpha_sum_ = 0;
  double played_sum_ = 0;
  int64_t count_ = 0;
};

// Slack terms added to the accumulated-loss gaps.
double EpsBarSlack(double range, int64_t t);
double EpsTildeSlack(double m_est, int n, int64_t t);

// One CertLp solve point: eps must not exceed delta + solver slack.
struct SolvePoint {
  int64_t t = 0;
  double eps = 0;
  double delta = 0;
  double alpha_gap = 0;
  double beta_gap = 0;
  bool holds = true;
};

class CertificateFinder {
 public:
  CertificateFinder(std::shared_ptr<const BlackBoxGame> game,
                    const CertOptions& options, const std::string& algo);
  virtual ~CertificateFinder() = default;

  // One iteration: exactly one playthrough is recorded. With `evaluate`
  // set the certificate held at the start of the iteration is scored.
  virtual void Step(bool evaluate) = 0;

  const Pseudogame& pseudogame() const { return pg_; }
  const UncertaintyLedger& ledger() const { return ledger_; }
  const CertOptions& options() const { return options_; }
  int64_t t() const { return pg_.t(); }

  // Gap of the most recently scored certificate, and the best so far.
  const GapReport& last_gap() const { return last_gap_; }
  double best_gap() const { return best_.provable_gap; }
  // Solver gap of this iteration's solves, negative if none ran.
  double last_solver_gap() const { return last_solver_gap_; }
  const Policy& last_played() const { return played_; }
  // Best certificate found so far (ties keep the earliest).
  const Certificate& best_certificate() const { return best_; }
  // Profiles of the most recently scored certificate.
  const std::vector<Policy>& last_mixture() const { return last_mixture_; }

 protected:
  void Consider(const std::vector<Policy>& mixture, const GapReport& gap);
  Trajectory Sample(const Policy& policy, uint64_t index) const;

  std::shared_ptr<const BlackBoxGame> game_;
  CertOptions options_;
  std::string algo_;
  Pseudogame pg_;
  UncertaintyLedger ledger_;
  GapReport last_gap_;
  std::vector<Policy> last_mixture_;
  Certificate best_;
  bool have_best_ = false;
  double last_solver_gap_ = -1;
  Policy played_;
};

// Certificate finding by exact solves of both bound games every solve_every
// iterations, optimistic exploration in between.
class CertLp : public CertificateFinder {
 public:
  CertLp(std::shared_ptr<const BlackBoxGame> game, const CertOptions& options,
         const std::string& algo = "cert-lp");
  void Step(bool evaluate) override;

  const std::vector<SolvePoint>& solve_points() const { return solve_points_; }

 private:
  void Solve();

  ExactSolver alpha_solver_;
  ExactSolver beta_solver_;
  Policy explore_;
  std::vector<SolvePoint> solve_points_;
};

// Certificate finding with one extendable regret minimizer per player, fed
// the optimistic bound gains (exactly, or by outcome sampling).
class CertRm : public CertificateFinder {
 public:
  CertRm(std::shared_ptr<const BlackBoxGame> game, const CertOptions& options,
         bool sampled, const std::string& algo);
  void Step(bool evaluate) override;

  // Current average (or mixture) profile.
  std::vector<Policy> AverageMixture() const;

  // Accumulated-loss gaps; require the matching option.
  std::vector<double> EpsBar() const;
  std::vector<double> EpsTilde() const;
  // max_x <x, G>/T - (sum of alpha)/T without slack, and the regret R_T of
  // the minimizer against the accumulated gains.
  std::vector<double> EpsBarNoSlack() const;
  std::vector<double> Regret() const;
  double m_est() const { return m_est_; }

  const RegretState& state(int player) const { return states_[player - 1]; }
  const AccumulatedLoss& accumulated(int player) const {
    return exact_loss_[player - 1];
  }
  const AccumulatedLoss& accumulated_estimate(int player) const {
    return estimated_loss_[player - 1];
  }
  const std::vector<StochasticLossEstimate>& last_estimates() const {
    return estimates_;
  }

 private:
  bool Mixture() const;
  void SampledReturnUpdate(const Trajectory& trajectory, const Policy& policy);

  bool sampled_;
  std::vector<RegretState> states_;
  std::vector<SequenceAverager> averages_;
  std::vector<Policy> history_;  // played profiles, mixture games only
  std::vector<AccumulatedLoss> exact_loss_;
  std::vector<AccumulatedLoss> estimated_loss_;
  std::vector<StochasticLossEstimate> estimates_;
  double m_est_ = 0;
};

std::unique_ptr<CertificateFinder> MakeFinder(
    std::shared_ptr<const BlackBoxGame> game, Algo algo,
    const CertOptions& options);

}  // namespace certigame

#endif  // CERTIGAME_CERTIFY_H_

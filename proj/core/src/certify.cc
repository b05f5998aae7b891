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

#include "certigame/certify.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "certigame/games.h"
#include "json.hpp"

namespace certigame {
namespace {

using json = nlohmann::ordered_json;

// Fills infosets the policy does not cover with the uniform distribution.
Policy Complete(const GameTree& tree, const Policy& policy) {
  Policy out = policy;
  out.resize(tree.num_infosets());
  for (int j = 0; j < tree.num_infosets(); ++j) {
    if (out[j].empty()) {
      const int k = tree.infoset(j).num_actions();
      out[j].assign(k, 1.0 / k);
    }
  }
  return out;
}

bool NashGame(const GameTree& tree, size_t mixture_size) {
  return tree.num_players() == 2 && tree.zero_sum() && mixture_size == 1;
}

}  // namespace

const char* AlgoName(Algo algo) {
  switch (algo) {
    case Algo::kCertLp:
      return "cert-lp";
    case Algo::kCertLpIndep:
      return "cert-lp-indep";
    case Algo::kCertCfr:
      return "cert-cfr";
    case Algo::kCertMccfr:
      return "cert-mccfr";
    case Algo::kMccfrBaseline:
      return "mccfr-baseline";
  }
  return "";
}

Algo ParseAlgo(const std::string& name) {
  for (Algo algo : {Algo::kCertLp, Algo::kCertLpIndep, Algo::kCertCfr,
                    Algo::kCertMccfr, Algo::kMccfrBaseline}) {
    if (name == AlgoName(algo)) return algo;
  }
  throw CertigameError("unknown algorithm: " + name);
}

void TreePolicy::Distribution(const Observation& obs,
                              std::vector<double>* probs) const {
  const int k = static_cast<int>(obs.report.actions.size());
  const int j = tree_->FindInfoset(obs.report.infoset);
  if (j >= 0 && j < static_cast<int>(policy_->size()) &&
      static_cast<int>((*policy_)[j].size()) == k) {
    *probs = (*policy_)[j];
    return;
  }
  probs->assign(k, 1.0 / k);
}

GapReport DeviationGaps(const UtilityModel& upper, const UtilityModel& lower,
                        const std::vector<Policy>& mixture, bool nash) {
  CERTIGAME_CHECK(!mixture.empty(), "empty profile mixture");
  const GameTree& tree = *upper.tree;
  const int n = tree.num_players();
  const double k = static_cast<double>(mixture.size());
  std::vector<double> low(n, 0.0);
  std::vector<std::vector<double>> gains(n);
  for (const Policy& policy : mixture) {
    const std::vector<double> values = ModelValues(lower, policy);
    for (int p = 0; p < n; ++p) {
      low[p] += values[p];
      const std::vector<double> g = GainVector(upper, p + 1, policy);
      if (gains[p].empty()) {
        gains[p] = g;
      } else {
        for (size_t s = 0; s < g.size(); ++s) gains[p][s] += g[s];
      }
    }
  }
  GapReport report;
  std::vector<double> br(n);
  for (int p = 0; p < n; ++p) {
    for (double& g : gains[p]) g /= k;
    br[p] = TreeplexBestResponse(tree, p + 1, gains[p], nullptr);
    report.per_player.push_back(br[p] - low[p] / k);
  }
  if (nash) {
    report.provable_gap = br[0] + br[1];
  } else {
    report.provable_gap =
        *std::max_element(report.per_player.begin(), report.per_player.end());
  }
  return report;
}

GapReport PseudogameGaps(const Pseudogame& pg,
                         const std::vector<Policy>& mixture) {
  const GameTree& tree = pg.tree();
  const int n = pg.num_players();
  std::vector<Policy> complete;
  for (const Policy& policy : mixture)
    complete.push_back(Complete(tree, policy));
  return DeviationGaps(pg.BoundModel(AllSides(n, Side::kOptimistic)),
                       pg.BoundModel(AllSides(n, Side::kPessimistic)), complete,
                       NashGame(tree, mixture.size()));
}

std::vector<Policy> Certificate::Policies() const {
  CERTIGAME_CHECK(trunk != nullptr, "certificate has no trunk");
  std::vector<Policy> out;
  for (const BehaviorProfile& profile : profiles) {
    out.push_back(ToPolicy(trunk->tree(), profile, true));
  }
  return out;
}

GapReport Certificate::Recompute() const {
  return PseudogameGaps(*trunk, Policies());
}

bool Certificate::Verify() const {
  const GapReport again = Recompute();
  return again.per_player == gaps && again.provable_gap == provable_gap;
}

std::string Certificate::ToJson(int indent) const {
  CERTIGAME_CHECK(trunk != nullptr, "certificate has no trunk");
  json pg = json::parse(trunk->ToJson());
  json doc;
  doc["game_id"] = game_id;
  doc["algo"] = algo;
  doc["t"] = t;
  doc["seed"] = seed;
  doc["gaps"] = gaps;
  doc["provable_gap"] = provable_gap;
  doc["confidence"] = confidence;
  if (!eps_bar.empty()) doc["eps_bar"] = eps_bar;
  if (!eps_tilde.empty()) doc["eps_tilde"] = eps_tilde;
  doc["chance_mode"] = pg["chance_mode"];
  doc["expand_mode"] = pg["expand_mode"];
  doc["gamma"] = pg["gamma"];
  doc["num_estimators"] = pg["num_estimators"];
  doc["trunk"] = std::move(pg["tree"]);
  doc["chance"] = std::move(pg["chance"]);
  auto profile_json = [](const BehaviorProfile& profile) {
    json out = json::object();
    for (const auto& [key, probs] : profile.dist) out[key] = probs;
    return out;
  };
  if (profiles.size() == 1) {
    doc["profile"] = profile_json(profiles[0]);
  } else {
    json list = json::array();
    for (const BehaviorProfile& profile : profiles) {
      list.push_back(profile_json(profile));
    }
    doc["profiles"] = std::move(list);
  }
  return doc.dump(indent);
}

Certificate Certificate::FromJson(const std::string& text) {
  const json doc = json::parse(text);
  Certificate cert;
  cert.game_id = doc.at("game_id").get<std::string>();
  cert.algo = doc.at("algo").get<std::string>();
  cert.t = doc.at("t").get<int64_t>();
  cert.seed = doc.value("seed", uint64_t{0});
  cert.gaps = doc.at("gaps").get<std::vector<double>>();
  cert.provable_gap = doc.at("provable_gap").get<double>();
  cert.confidence = doc.at("confidence").get<std::string>();
  if (doc.contains("eps_bar")) {
    cert.eps_bar = doc["eps_bar"].get<std::vector<double>>();
  }
  if (doc.contains("eps_tilde")) {
    cert.eps_tilde = doc["eps_tilde"].get<std::vector<double>>();
  }
  json pg;
  pg["t"] = cert.t;
  pg["chance_mode"] = doc.at("chance_mode");
  pg["expand_mode"] = doc.at("expand_mode");
  pg["gamma"] = doc.at("gamma");
  pg["num_estimators"] = doc.at("num_estimators");
  pg["tree"] = doc.at("trunk");
  pg["chance"] = doc.at("chance");
  cert.trunk = std::make_shared<Pseudogame>(Pseudogame::FromJson(pg.dump()));
  auto read_profile = [](const json& entry) {
    BehaviorProfile profile;
    for (auto it = entry.begin(); it != entry.end(); ++it) {
      profile.Set(it.key(), it.value().get<std::vector<double>>());
    }
    ValidateProfile(profile);
    return profile;
  };
  if (doc.contains("profile")) {
    cert.profiles.push_back(read_profile(doc["profile"]));
  } else {
    for (const json& entry : doc.at("profiles")) {
      cert.profiles.push_back(read_profile(entry));
    }
  }
  CERTIGAME_CHECK(!cert.profiles.empty(), "certificate has no profile");
  return cert;
}

void AccumulatedLoss::Add(const std::vector<double>& gain, double alpha,
                          double played) {
  if (sum_.size() < gain.size()) sum_.resize(gain.size(), 0.0);
  for (size_t s = 0; s < gain.size(); ++s) sum_[s] += gain[s];
  alpha_sum_ += alpha;
  played_sum_ += played;
  ++count_;
}

void AccumulatedLoss::AddSparse(const std::vector<std::pair<int, double>>& gain,
                                double alpha) {
  for (const auto& [s, g] : gain) {
    if (static_cast<int>(sum_.size()) <= s) sum_.resize(s + 1, 0.0);
    sum_[s] += g;
  }
  alpha_sum_ += alpha;
  ++count_;
}

double AccumulatedLoss::MaxValue(const GameTree& tree, int player) const {
  return TreeplexBestResponse(tree, player, sum_, nullptr);
}

double EpsBarSlack(double range, int64_t t) {
  const double td = static_cast<double>(t);
  return range * std::ceil(std::sqrt(td)) / td;
}

double EpsTildeSlack(double m_est, int n, int64_t t) {
  const double td = static_cast<double>(t);
  return m_est * std::sqrt(std::log(2.0 * n * td * td) / (2.0 * td));
}

CertificateFinder::CertificateFinder(std::shared_ptr<const BlackBoxGame> game,
                                     const CertOptions& options,
                                     const std::string& algo)
    : game_(std::move(game)),
      options_(options),
      algo_(algo),
      pg_(*game_, options.chance_mode, options.expand_mode, options.gamma),
      ledger_(game_->num_players()) {}

void CertificateFinder::Consider(const std::vector<Policy>& mixture,
                                 const GapReport& gap) {
  last_gap_ = gap;
  last_mixture_ = mixture;
  if (have_best_ && !(gap.provable_gap < best_.provable_gap)) return;
  have_best_ = true;
  Certificate cert;
  cert.game_id = game_->id();
  cert.algo = algo_;
  cert.t = pg_.t();
  cert.seed = options_.seed;
  cert.gaps = gap.per_player;
  cert.provable_gap = gap.provable_gap;
  cert.trunk = std::make_shared<Pseudogame>(pg_);
  for (const Policy& policy : mixture) {
    cert.profiles.push_back(
        ToProfile(pg_.tree(), Complete(pg_.tree(), policy)));
  }
  best_ = std::move(cert);
}

Trajectory CertificateFinder::Sample(const Policy& policy,
                                     uint64_t index) const {
  TreePolicy play(&pg_.tree(), &policy);
  return Play(*game_, play, DeriveSeed(options_.seed, index));
}

CertLp::CertLp(std::shared_ptr<const BlackBoxGame> game,
               const CertOptions& options, const std::string& algo)
    : CertificateFinder(std::move(game), options, algo),
      alpha_solver_(options.exact),
      beta_solver_(options.exact) {
  const int n = game_->num_players();
  CERTIGAME_CHECK(n == 1 || (n == 2 && game_->zero_sum()),
                  "Algorithm 1 requires zero-sum");
  CERTIGAME_CHECK(options.solve_every >= 1, "solve cadence must be positive");
}

void CertLp::Solve() {
  const GameTree& tree = pg_.tree();
  const int n = pg_.num_players();
  const ExactSolveResult alpha = alpha_solver_.Solve(pg_, Side::kPessimistic);
  const ExactSolveResult beta = beta_solver_.Solve(pg_, Side::kOptimistic);
  Policy cert(tree.num_infosets());
  MergePlayer(tree, 1, alpha.policy, &cert);
  explore_.assign(tree.num_infosets(), {});
  MergePlayer(tree, 1, beta.policy, &explore_);
  if (n == 2) {
    MergePlayer(tree, 2, beta.policy, &cert);
    MergePlayer(tree, 2, alpha.policy, &explore_);
  }
  const GapReport gap = PseudogameGaps(pg_, {cert});
  SolvePoint point;
  point.t = pg_.t() + 1;
  point.eps = gap.provable_gap;
  point.delta = Uncertainty(pg_, Complete(tree, explore_))[0];
  point.alpha_gap = alpha.achieved_gap;
  point.beta_gap = beta.achieved_gap;
  const double slack = kTolerance * std::max(1.0, tree.width(0, 1));
  point.holds =
      point.eps <= point.delta + point.alpha_gap + point.beta_gap + slack;
  solve_points_.push_back(point);
  last_solver_gap_ = std::max(alpha.achieved_gap, beta.achieved_gap);
  Consider({cert}, gap);
}

void CertLp::Step(bool /*evaluate*/) {
  last_solver_gap_ = -1;
  if (pg_.t() % options_.solve_every == 0) Solve();
  const GameTree& tree = pg_.tree();
  if (options_.exploration == Exploration::kUniform) {
    played_ = UniformPolicy(tree);
  } else {
    played_ = Complete(tree, explore_);
  }
  ledger_.Accrue(Uncertainty(pg_, played_));
  pg_.Record(Sample(played_, static_cast<uint64_t>(pg_.t()) + 1));
}

CertRm::CertRm(std::shared_ptr<const BlackBoxGame> game,
               const CertOptions& options, bool sampled,
               const std::string& algo)
    : CertificateFinder(std::move(game), options, algo), sampled_(sampled) {
  const int n = game_->num_players();
  for (int p = 1; p <= n; ++p) {
    states_.emplace_back(options.rule);
    averages_.emplace_back(p);
  }
  exact_loss_.resize(n);
  estimated_loss_.resize(n);
}

bool CertRm::Mixture() const {
  const int n = pg_.num_players();
  return n >= 3 || (n == 2 && !pg_.tree().zero_sum());
}

std::vector<Policy> CertRm::AverageMixture() const {
  const GameTree& tree = pg_.tree();
  if (Mixture()) {
    if (history_.empty()) return {UniformPolicy(tree)};
    std::vector<Policy> out;
    for (const Policy& policy : history_) out.push_back(Complete(tree, policy));
    return out;
  }
  if (averages_[0].total_weight() == 0) return {UniformPolicy(tree)};
  Policy policy(tree.num_infosets());
  for (int p = 1; p <= pg_.num_players(); ++p) {
    SequenceStrategy seq;
    seq.player = p;
    seq.values = averages_[p - 1].Average(tree);
    FromSequenceForm(tree, seq, &policy);
  }
  return {policy};
}

void CertRm::Step(bool evaluate) {
  if (evaluate) {
    const std::vector<Policy> mixture = AverageMixture();
    Consider(mixture, PseudogameGaps(pg_, mixture));
  }
  const int64_t t = pg_.t() + 1;
  const GameTree& tree = pg_.tree();
  const int n = pg_.num_players();
  Policy policy(tree.num_infosets());
  for (int p = 1; p <= n; ++p) {
    states_[p - 1].SyncWithTree(tree, p, t);
    states_[p - 1].WritePolicy(tree, p, &policy);
  }
  played_ = policy;
  ledger_.Accrue(Uncertainty(pg_, policy));
  for (int p = 1; p <= n; ++p) {
    averages_[p - 1].Add(tree, states_[p - 1].SequenceForm(), 1.0);
  }
  if (Mixture()) history_.push_back(policy);

  const UtilityModel upper = pg_.BoundModel(AllSides(n, Side::kOptimistic));
  const bool need_lower = options_.eps_bar || options_.eps_tilde;
  UtilityModel lower;
  std::vector<double> lower_values;
  if (need_lower) {
    lower = pg_.BoundModel(AllSides(n, Side::kPessimistic));
    lower_values = ModelValues(lower, policy);
  }
  std::vector<std::vector<double>> gains(n);
  if (!sampled_ || options_.eps_bar) {
    for (int p = 1; p <= n; ++p) {
      gains[p - 1] = GainVector(upper, p, policy);
      if (options_.eps_bar) {
        const double played = Dot(states_[p - 1].SequenceForm(), gains[p - 1]);
        exact_loss_[p - 1].Add(gains[p - 1], lower_values[p - 1], played);
      }
    }
  }
  if (sampled_ && !options_.warning1) {
    const std::vector<double> leaves = LeafCounts(tree);
    Rng rng(DeriveSeed(options_.seed, 2 * static_cast<uint64_t>(t) + 1));
    estimates_.clear();
    for (int p = 1; p <= n; ++p) {
      estimates_.push_back(SampleLossEstimate(
          upper, options_.eps_tilde ? &lower : nullptr, p, policy, leaves,
          options_.mccfr_epsilon, states_[p - 1], &rng));
    }
    for (int p = 1; p <= n; ++p) {
      const StochasticLossEstimate& est = estimates_[p - 1];
      if (options_.eps_tilde) {
        estimated_loss_[p - 1].AddSparse(est.gain, est.alpha_estimate);
        // |<x, g>| is at most the l1 norm of g on the treeplex; the exact
        // term contributes at most the root width.
        double l1 = std::abs(est.alpha_estimate) + tree.width(0, p);
        for (const auto& entry : est.gain) l1 += std::abs(entry.second);
        m_est_ = std::max(m_est_, l1);
      }
      std::vector<std::pair<int, double>> loss = est.gain;
      for (auto& entry : loss) entry.second = -entry.second;
      states_[p - 1].ObserveSparse(loss);
    }
  } else if (!options_.warning1) {
    for (int p = 1; p <= n; ++p) {
      std::vector<double> loss(gains[p - 1].size());
      for (size_t s = 0; s < loss.size(); ++s) loss[s] = -gains[p - 1][s];
      states_[p - 1].Observe(loss);
    }
  }
  const Trajectory trajectory = Sample(policy, 2 * static_cast<uint64_t>(t));
  pg_.Record(trajectory);
  if (options_.warning1) SampledReturnUpdate(trajectory, policy);
}

void CertRm::SampledReturnUpdate(const Trajectory& trajectory,
                                 const Policy& /*played*/) {
  const GameTree& tree = pg_.tree();
  const int n = pg_.num_players();
  const int64_t t = pg_.t();
  Policy policy(tree.num_infosets());
  for (int p = 1; p <= n; ++p) {
    states_[p - 1].SyncWithTree(tree, p, t);
    states_[p - 1].WritePolicy(tree, p, &policy);
  }
  std::vector<double> total(n, 0.0);
  std::vector<double> reach(n, 1.0);
  int h = 0;
  for (const TrajectoryStep& step : trajectory.steps) {
    const Node& node = tree.node(h);
    for (int p = 0; p < n; ++p) total[p] += step.observation.report.reward[p];
    if (node.kind == NodeKind::kDecision) {
      reach[node.player - 1] *= policy[node.infoset][step.action];
    }
    h = node.child(step.action);
  }
  for (int p = 0; p < n; ++p) {
    total[p] += trajectory.terminal.report.reward[p];
  }
  for (int p = 1; p <= n; ++p) {
    if (reach[p - 1] <= 0) continue;
    states_[p - 1].ObserveSparse(
        {{tree.seq(h, p), -total[p - 1] / reach[p - 1]}});
  }
}

std::vector<double> CertRm::EpsBarNoSlack() const {
  CERTIGAME_CHECK(options_.eps_bar, "eps-bar unavailable");
  std::vector<double> out;
  for (int p = 1; p <= pg_.num_players(); ++p) {
    const AccumulatedLoss& acc = exact_loss_[p - 1];
    CERTIGAME_CHECK(acc.count() > 0, "eps-bar unavailable");
    out.push_back((acc.MaxValue(pg_.tree(), p) - acc.alpha_sum()) /
                  static_cast<double>(acc.count()));
  }
  return out;
}

std::vector<double> CertRm::EpsBar() const {
  std::vector<double> out = EpsBarNoSlack();
  for (int p = 1; p <= pg_.num_players(); ++p) {
    out[p - 1] +=
        EpsBarSlack(pg_.tree().width(0, p), exact_loss_[p - 1].count());
  }
  return out;
}

std::vector<double> CertRm::Regret() const {
  CERTIGAME_CHECK(options_.eps_bar, "eps-bar unavailable");
  std::vector<double> out;
  for (int p = 1; p <= pg_.num_players(); ++p) {
    const AccumulatedLoss& acc = exact_loss_[p - 1];
    out.push_back(acc.MaxValue(pg_.tree(), p) - acc.played_sum());
  }
  return out;
}

std::vector<double> CertRm::EpsTilde() const {
  CERTIGAME_CHECK(sampled_ && options_.eps_tilde,
                  "eps-tilde undefined for exact losses");
  std::vector<double> out;
  const int n = pg_.num_players();
  for (int p = 1; p <= n; ++p) {
    const AccumulatedLoss& acc = estimated_loss_[p - 1];
    CERTIGAME_CHECK(acc.count() > 0, "eps-tilde unavailable");
    const double td = static_cast<double>(acc.count());
    out.push_back((acc.MaxValue(pg_.tree(), p) - acc.alpha_sum()) / td +
                  EpsTildeSlack(m_est_, n, acc.count()));
  }
  return out;
}

std::unique_ptr<CertificateFinder> MakeFinder(
    std::shared_ptr<const BlackBoxGame> game, Algo algo,
    const CertOptions& options) {
  CertOptions opts = options;
  switch (algo) {
    case Algo::kCertLp:
      return std::make_unique<CertLp>(std::move(game), opts, "cert-lp");
    case Algo::kCertLpIndep:
      opts.chance_mode = ChanceMode::kIndependent;
      return std::make_unique<CertLp>(std::move(game), opts, "cert-lp-indep");
    case Algo::kCertCfr:
      return std::make_unique<CertRm>(std::move(game), opts, false, "cert-cfr");
    case Algo::kCertMccfr:
      return std::make_unique<CertRm>(std::move(game), opts, true,
                                      "cert-mccfr");
    case Algo::kMccfrBaseline:
      break;
  }
  throw CertigameError("mccfr-baseline produces no certificate");
}

}  // namespace certigame

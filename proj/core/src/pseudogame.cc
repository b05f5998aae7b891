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

#include "certigame/pseudogame.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace certigame {
namespace {

using json = nlohmann::ordered_json;

double EvalRecursive(const UtilityModel& model, const Policy& policy,
                     int player, int h) {
  const GameTree& tree = *model.tree;
  double v = model.local[player - 1][h];
  if (model.leaf[player - 1][h]) return v;
  const Node& node = tree.node(h);
  if (node.is_leaf()) return v;
  const std::vector<double>& probs =
      node.kind == NodeKind::kChance ? model.chance[h] : policy[node.infoset];
  for (int a = 0; a < node.num_actions(); ++a) {
    if (probs[a] != 0) {
      v += probs[a] * EvalRecursive(model, policy, player, node.child(a));
    }
  }
  return v;
}

}  // namespace

const char* ChanceModeName(ChanceMode mode) {
  switch (mode) {
    case ChanceMode::kKnown:
      return "known";
    case ChanceMode::kSignature:
      return "signature";
    case ChanceMode::kIndependent:
      return "independent";
  }
  return "signature";
}

ChanceMode ParseChanceMode(const std::string& name) {
  if (name == "known") return ChanceMode::kKnown;
  if (name == "signature") return ChanceMode::kSignature;
  if (name == "independent") return ChanceMode::kIndependent;
  throw CertigameError("unknown chance mode: " + name);
}

const char* ExpandModeName(ExpandMode mode) {
  return mode == ExpandMode::kPath ? "path" : "first-new";
}

ExpandMode ParseExpandMode(const std::string& name) {
  if (name == "path") return ExpandMode::kPath;
  if (name == "first-new") return ExpandMode::kFirstNew;
  throw CertigameError("unknown expand mode: " + name);
}

double Rho(const ChanceStats& stats, int num_actions, int64_t t, int64_t c_t,
           int n, double gamma) {
  CERTIGAME_CHECK(stats.t_h >= 1, "unsampled chance node");
  CERTIGAME_CHECK(t >= 1 && c_t >= 1 && n >= 1,
                  "rho needs t >= 1, C_t >= 1 and n >= 1");
  const double numerator =
      num_actions * std::log(2.0) + gamma * std::log(static_cast<double>(t)) +
      std::log(static_cast<double>(c_t)) + std::log(static_cast<double>(n));
  const double rho =
      std::sqrt(numerator / (2.0 * static_cast<double>(stats.t_h)));
  return std::min(1.0, rho);
}

Pseudogame::Pseudogame(int num_players, bool zero_sum,
                       std::vector<double> root_lb, std::vector<double> root_ub,
                       ChanceMode chance_mode, ExpandMode expand_mode,
                       double gamma)
    : tree_(num_players, zero_sum, std::move(root_lb), std::move(root_ub)),
      chance_mode_(chance_mode),
      expand_mode_(expand_mode),
      gamma_(gamma),
      node_estimator_(1, -1) {}

Pseudogame::Pseudogame(const BlackBoxGame& game, ChanceMode chance_mode,
                       ExpandMode expand_mode, double gamma)
    : Pseudogame(game.num_players(), game.zero_sum(), game.root_lb(),
                 game.root_ub(), chance_mode, expand_mode, gamma) {}

int Pseudogame::EstimatorFor(int h) {
  const Node& node = tree_.node(h);
  if (chance_mode_ == ChanceMode::kKnown || node.num_actions() < 2) return -1;
  if (chance_mode_ == ChanceMode::kSignature &&
      !node.chance_signature.empty()) {
    auto it = signature_index_.find(node.chance_signature);
    if (it != signature_index_.end()) {
      CERTIGAME_CHECK(stats_[it->second].num_actions() == node.num_actions(),
                      "chance signature shared by nodes with different "
                      "action counts: " +
                          node.chance_signature);
      return it->second;
    }
  }
  ChanceStats stats;
  stats.signature = node.chance_signature;
  stats.counts.assign(node.num_actions(), 0);
  const int id = static_cast<int>(stats_.size());
  stats_.push_back(std::move(stats));
  if (chance_mode_ == ChanceMode::kSignature &&
      !node.chance_signature.empty()) {
    signature_index_.emplace(node.chance_signature, id);
  }
  return id;
}

void Pseudogame::RecountEstimators() {
  num_estimators_ = static_cast<int>(stats_.size());
}

void Pseudogame::Record(const Trajectory& trajectory) {
  CERTIGAME_CHECK(trajectory.terminal.report.kind == NodeKind::kTerminal,
                  "trajectory does not end at a terminal");
  int h = 0;
  bool expanded = false;
  // Returns false once the walk leaves the stored tree.
  auto visit = [&](const Observation& obs) {
    const Node& node = tree_.node(h);
    if (node.kind == NodeKind::kFrontier) {
      if (expand_mode_ == ExpandMode::kFirstNew && expanded) return false;
      NodeReport report = obs.report;
      if (chance_mode_ == ChanceMode::kKnown) {
        CERTIGAME_CHECK(
            report.kind != NodeKind::kChance || !report.chance_probs.empty(),
            "known chance mode needs chance probabilities");
      } else {
        report.chance_probs.clear();
      }
      tree_.Expand(h, report);
      node_estimator_.resize(tree_.num_nodes(), -1);
      if (report.kind == NodeKind::kChance) {
        node_estimator_[h] = EstimatorFor(h);
      }
      expanded = true;
      return true;
    }
    CERTIGAME_CHECK(node.kind == obs.report.kind &&
                        (node.is_leaf() || node.actions == obs.report.actions),
                    "simulator/tree divergence at " + tree_.Path(h));
    return true;
  };
  bool inside = true;
  for (const TrajectoryStep& step : trajectory.steps) {
    if (!visit(step.observation)) {
      inside = false;
      break;
    }
    const Node& node = tree_.node(h);
    CERTIGAME_CHECK(step.action >= 0 && step.action < node.num_actions(),
                    "simulator/tree divergence at " + tree_.Path(h));
    if (node.kind == NodeKind::kChance && node_estimator_[h] >= 0) {
      ChanceStats& stats = stats_[node_estimator_[h]];
      ++stats.counts[step.action];
      ++stats.t_h;
    }
    h = node.child(step.action);
  }
  if (inside) visit(trajectory.terminal);
  ++t_;
  RecountEstimators();
}

double Pseudogame::Rho(int h) const {
  const int e = node_estimator_[h];
  if (e < 0) return 0.0;
  return certigame::Rho(stats_[e], tree_.node(h).num_actions(), t_,
                        num_estimators_, num_players(), gamma_);
}

std::vector<double> Pseudogame::ChanceDistribution(int h) const {
  const Node& node = tree_.node(h);
  CERTIGAME_CHECK(node.kind == NodeKind::kChance, "not a chance node");
  if (chance_mode_ == ChanceMode::kKnown) return node.chance_probs;
  const int e = node_estimator_[h];
  if (e < 0) return std::vector<double>(node.num_actions(), 1.0);
  const ChanceStats& stats = stats_[e];
  CERTIGAME_CHECK(stats.t_h >= 1, "unsampled chance node");
  std::vector<double> probs(node.num_actions());
  for (int a = 0; a < node.num_actions(); ++a) {
    probs[a] =
        static_cast<double>(stats.counts[a]) / static_cast<double>(stats.t_h);
  }
  return probs;
}

UtilityModel Pseudogame::BoundModel(const std::vector<Side>& sides,
                                    const GameTree* oracle) const {
  const int n = num_players();
  const int num_nodes = tree_.num_nodes();
  CERTIGAME_CHECK(static_cast<int>(sides.size()) == n,
                  "one side per player required");
  UtilityModel model;
  model.tree = &tree_;
  model.chance.resize(num_nodes);
  std::vector<double> rho(num_nodes, 0.0);
  for (int h = 0; h < num_nodes; ++h) {
    if (tree_.node(h).kind != NodeKind::kChance) continue;
    if (oracle != nullptr) {
      const int o = oracle->FindNode(tree_.PathLabels(h));
      CERTIGAME_CHECK(o >= 0 && oracle->node(o).kind == NodeKind::kChance,
                      "oracle does not match the pseudogame");
      model.chance[h] = oracle->node(o).chance_probs;
    } else {
      model.chance[h] = ChanceDistribution(h);
      rho[h] = Rho(h);
    }
  }
  model.local.assign(n, std::vector<double>(num_nodes, 0.0));
  model.leaf.assign(n, std::vector<char>(num_nodes, 0));
  std::vector<double> extreme(num_nodes, 0.0);
  for (int p = 1; p <= n; ++p) {
    const bool optimistic = sides[p - 1] == Side::kOptimistic;
    std::vector<double>& local = model.local[p - 1];
    std::vector<char>& leaf = model.leaf[p - 1];
    // extreme[h] is the least favourable value of the subtree over all
    // profiles; it decides whether a chance node's widened value can be
    // replaced by the a-priori bound independently of the profile.
    for (int h = num_nodes - 1; h >= 0; --h) {
      const Node& node = tree_.node(h);
      const double reward = tree_.reward(h, p);
      switch (node.kind) {
        case NodeKind::kFrontier:
          local[h] = optimistic ? tree_.ub(h, p) : tree_.lb(h, p);
          leaf[h] = 1;
          extreme[h] = local[h];
          break;
        case NodeKind::kTerminal:
          local[h] = reward;
          leaf[h] = 1;
          extreme[h] = reward;
          break;
        case NodeKind::kDecision: {
          double e = extreme[node.child(0)];
          for (int a = 1; a < node.num_actions(); ++a) {
            const double c = extreme[node.child(a)];
            e = optimistic ? std::min(e, c) : std::max(e, c);
          }
          local[h] = reward;
          extreme[h] = reward + e;
          break;
        }
        case NodeKind::kChance: {
          const double adjust = rho[h] * tree_.width(h, p);
          const double l = optimistic ? reward + adjust : reward - adjust;
          double e = l;
          const std::vector<double>& probs = model.chance[h];
          for (int a = 0; a < node.num_actions(); ++a) {
            e += probs[a] * extreme[node.child(a)];
          }
          const bool capped = rho[h] > 0 && (optimistic ? e >= tree_.ub(h, p)
                                                        : e <= tree_.lb(h, p));
          if (capped) {
            local[h] = optimistic ? tree_.ub(h, p) : tree_.lb(h, p);
            leaf[h] = 1;
            extreme[h] = local[h];
          } else {
            local[h] = l;
            extreme[h] = e;
          }
          break;
        }
      }
    }
  }
  FinalizeModel(&model);
  return model;
}

std::string Pseudogame::ToJson(int indent) const {
  json doc;
  doc["t"] = t_;
  doc["chance_mode"] = ChanceModeName(chance_mode_);
  doc["expand_mode"] = ExpandModeName(expand_mode_);
  doc["gamma"] = gamma_;
  doc["num_estimators"] = num_estimators_;
  doc["tree"] = json::parse(tree_.ToJson());
  std::vector<std::vector<std::string>> members(stats_.size());
  for (int h = 0; h < tree_.num_nodes(); ++h) {
    if (node_estimator_[h] >= 0) {
      members[node_estimator_[h]].push_back(tree_.Path(h));
    }
  }
  json chance = json::array();
  for (size_t e = 0; e < stats_.size(); ++e) {
    const ChanceStats& stats = stats_[e];
    json entry;
    entry["signature"] = stats.signature;
    entry["counts"] = stats.counts;
    entry["t_h"] = stats.t_h;
    entry["rho"] = certigame::Rho(stats, stats.num_actions(), t_,
                                  num_estimators_, num_players(), gamma_);
    entry["nodes"] = members[e];
    chance.push_back(std::move(entry));
  }
  doc["chance"] = std::move(chance);
  return doc.dump(indent);
}

Pseudogame Pseudogame::FromJson(const std::string& text) {
  const json doc = json::parse(text);
  GameTree tree = GameTree::FromJson(doc.at("tree").dump());
  std::vector<double> lo, hi;
  for (int p = 1; p <= tree.num_players(); ++p) {
    lo.push_back(tree.lb(0, p));
    hi.push_back(tree.ub(0, p));
  }
  Pseudogame pg(tree.num_players(), tree.zero_sum(), lo, hi,
                ParseChanceMode(doc.at("chance_mode").get<std::string>()),
                ParseExpandMode(doc.at("expand_mode").get<std::string>()),
                doc.at("gamma").get<double>());
  pg.tree_ = std::move(tree);
  pg.t_ = doc.at("t").get<int64_t>();
  pg.node_estimator_.assign(pg.tree_.num_nodes(), -1);
  for (const json& entry : doc.at("chance")) {
    ChanceStats stats;
    stats.signature = entry.at("signature").get<std::string>();
    stats.counts = entry.at("counts").get<std::vector<int64_t>>();
    stats.t_h = entry.at("t_h").get<int64_t>();
    int64_t total = 0;
    for (int64_t c : stats.counts) total += c;
    CERTIGAME_CHECK(total == stats.t_h, "chance counts do not sum to t_h");
    const int id = static_cast<int>(pg.stats_.size());
    for (const json& path : entry.at("nodes")) {
      const int h = pg.tree_.FindNode(path.get<std::string>());
      CERTIGAME_CHECK(h >= 0 && pg.tree_.node(h).kind == NodeKind::kChance &&
                          pg.tree_.node(h).num_actions() == stats.num_actions(),
                      "chance estimator refers to an unknown node");
      pg.node_estimator_[h] = id;
    }
    if (pg.chance_mode_ == ChanceMode::kSignature && !stats.signature.empty()) {
      pg.signature_index_.emplace(stats.signature, id);
    }
    pg.stats_.push_back(std::move(stats));
  }
  pg.RecountEstimators();
  CERTIGAME_CHECK(pg.num_estimators_ == doc.at("num_estimators").get<int>(),
                  "estimator count mismatch");
  return pg;
}

std::vector<Side> AllSides(int num_players, Side side) {
  return std::vector<Side>(num_players, side);
}

std::pair<double, double> EvalBounds(const Pseudogame& pg,
                                     const BehaviorProfile& profile,
                                     int player) {
  CERTIGAME_CHECK(player >= 1 && player <= pg.num_players(), "invalid player");
  const Policy policy = ToPolicy(pg.tree(), profile);
  const UtilityModel lower =
      pg.BoundModel(AllSides(pg.num_players(), Side::kPessimistic));
  const UtilityModel upper =
      pg.BoundModel(AllSides(pg.num_players(), Side::kOptimistic));
  return {EvalRecursive(lower, policy, player, 0),
          EvalRecursive(upper, policy, player, 0)};
}

std::pair<BehaviorProfile, double> PseudoBestResponse(
    const Pseudogame& pg, int player, const BehaviorProfile& opponents,
    Side side) {
  CERTIGAME_CHECK(player >= 1 && player <= pg.num_players(), "invalid player");
  const UtilityModel model = pg.BoundModel(AllSides(pg.num_players(), side));
  const Policy policy = ToPolicy(pg.tree(), opponents);
  const std::vector<double> gain = GainVector(model, player, policy);
  Policy response;
  const double value = TreeplexBestResponse(pg.tree(), player, gain, &response);
  return {PlayerProfile(pg.tree(), response, player), value};
}

std::vector<double> Uncertainty(const Pseudogame& pg, const Policy& policy) {
  const int n = pg.num_players();
  const std::vector<double> hi =
      ModelValues(pg.BoundModel(AllSides(n, Side::kOptimistic)), policy);
  const std::vector<double> lo =
      ModelValues(pg.BoundModel(AllSides(n, Side::kPessimistic)), policy);
  std::vector<double> delta(n);
  for (int p = 0; p < n; ++p) delta[p] = hi[p] - lo[p];
  return delta;
}

std::vector<double> Uncertainty(const Pseudogame& pg,
                                const BehaviorProfile& profile) {
  return Uncertainty(pg, ToPolicy(pg.tree(), profile));
}

void UncertaintyLedger::Accrue(const std::vector<double>& delta) {
  CERTIGAME_CHECK(delta.size() == total_.size(), "one entry per player");
  for (size_t p = 0; p < delta.size(); ++p) {
    // Widths are nonnegative; clip rounding noise.
    total_[p] += std::max(0.0, delta[p]);
  }
  log_.push_back(delta);
}

double UncertaintyBudget(int64_t c_t, int max_actions, int n, int64_t t,
                         int64_t n_t) {
  if (c_t == 0) return static_cast<double>(n_t);
  const double td = static_cast<double>(t);
  const double m = max_actions * std::log(2.0) +
                   std::log(2.0 * td * td * static_cast<double>(c_t) * n);
  return 2.0 * static_cast<double>(c_t) * std::sqrt(2.0 * td * m) +
         static_cast<double>(n_t);
}

double UncertaintyBudget(const Pseudogame& pg, int64_t t) {
  int max_actions = 0;
  for (int e = 0; e < pg.num_estimator_slots(); ++e) {
    max_actions = std::max(max_actions, pg.stats(e).num_actions());
  }
  return UncertaintyBudget(pg.num_estimators(), max_actions, pg.num_players(),
                           t, pg.num_nodes());
}

AuditReport CorrectnessAudit(const Pseudogame& pg, const GameTree& oracle,
                             const std::vector<BehaviorProfile>& profiles) {
  const int n = pg.num_players();
  const UtilityModel hat_lo = pg.BoundModel(AllSides(n, Side::kPessimistic));
  const UtilityModel hat_hi = pg.BoundModel(AllSides(n, Side::kOptimistic));
  const UtilityModel true_lo =
      pg.BoundModel(AllSides(n, Side::kPessimistic), &oracle);
  const UtilityModel true_hi =
      pg.BoundModel(AllSides(n, Side::kOptimistic), &oracle);
  AuditReport report;
  for (int k = 0; k < static_cast<int>(profiles.size()); ++k) {
    const Policy policy = ToPolicy(pg.tree(), profiles[k]);
    const std::vector<double> a_hat = ModelValues(hat_lo, policy);
    const std::vector<double> b_hat = ModelValues(hat_hi, policy);
    const std::vector<double> a_true = ModelValues(true_lo, policy);
    const std::vector<double> b_true = ModelValues(true_hi, policy);
    for (int p = 0; p < n; ++p) {
      report.checks += 2;
      if (a_hat[p] > a_true[p] + kTolerance) {
        report.violations.push_back({k, p + 1, false, a_hat[p], a_true[p]});
      }
      if (b_true[p] > b_hat[p] + kTolerance) {
        report.violations.push_back({k, p + 1, true, b_hat[p], b_true[p]});
      }
    }
  }
  return report;
}

}  // namespace certigame

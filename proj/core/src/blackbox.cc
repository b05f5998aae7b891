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

#include "certigame/blackbox.h"

#include <cstdlib>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "certigame/games.h"
#include "json.hpp"

namespace certigame {
namespace {

using json = nlohmann::ordered_json;

const char* KindName(NodeKind kind) {
  switch (kind) {
    case NodeKind::kDecision:
      return "decision";
    case NodeKind::kChance:
      return "chance";
    case NodeKind::kTerminal:
      return "terminal";
    case NodeKind::kFrontier:
      return "frontier";
  }
  return "terminal";
}

json ObservationToJson(const Observation& obs) {
  const NodeReport& r = obs.report;
  json out;
  out["node"] = obs.node;
  out["kind"] = KindName(r.kind);
  out["player"] = r.player;
  out["infoset"] =
      r.kind == NodeKind::kDecision ? json(r.infoset) : json(nullptr);
  out["actions"] = r.actions;
  out["reward"] = r.reward;
  out["child_lb"] = r.child_lb;
  out["child_ub"] = r.child_ub;
  if (!r.chance_signature.empty()) {
    out["chance_signature"] = r.chance_signature;
  }
  if (!r.chance_probs.empty()) out["chance_probs"] = r.chance_probs;
  return out;
}

Observation ObservationFromJson(const json& in) {
  Observation obs;
  obs.node = in.at("node").get<std::string>();
  NodeReport& r = obs.report;
  const std::string kind = in.at("kind").get<std::string>();
  if (kind == "decision") {
    r.kind = NodeKind::kDecision;
  } else if (kind == "chance") {
    r.kind = NodeKind::kChance;
  } else {
    CERTIGAME_CHECK(kind == "terminal", "bad observation kind " + kind);
    r.kind = NodeKind::kTerminal;
  }
  r.player = in.at("player").get<int>();
  if (!in.at("infoset").is_null()) {
    r.infoset = in.at("infoset").get<std::string>();
  }
  r.actions = in.at("actions").get<std::vector<std::string>>();
  r.reward = in.at("reward").get<std::vector<double>>();
  r.child_lb = in.at("child_lb").get<std::vector<std::vector<double>>>();
  r.child_ub = in.at("child_ub").get<std::vector<std::vector<double>>>();
  if (in.contains("chance_signature")) {
    r.chance_signature = in.at("chance_signature").get<std::string>();
  }
  if (in.contains("chance_probs")) {
    r.chance_probs = in.at("chance_probs").get<std::vector<double>>();
  }
  return obs;
}

}  // namespace

uint64_t Rng::Next() {
  // SplitMix64.
  uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::Uniform() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

int Rng::Sample(const std::vector<double>& probs) {
  const double u = Uniform();
  double acc = 0;
  int last = -1;
  for (int a = 0; a < static_cast<int>(probs.size()); ++a) {
    if (probs[a] <= 0) continue;
    acc += probs[a];
    last = a;
    if (u < acc) return a;
  }
  CERTIGAME_CHECK(last >= 0, "cannot sample from an all-zero distribution");
  return last;
}

uint64_t DeriveSeed(uint64_t seed, uint64_t index) {
  Rng rng(seed ^ (index * 0xd1b54a32d192ed03ULL));
  rng.Next();
  return rng.Next();
}

void ProfilePolicy::Distribution(const Observation& obs,
                                 std::vector<double>* probs) const {
  if (profile_ != nullptr) {
    auto it = profile_->dist.find(obs.report.infoset);
    if (it != profile_->dist.end()) {
      *probs = it->second;
      return;
    }
  }
  if (fallback_ != nullptr) {
    fallback_->Distribution(obs, probs);
    return;
  }
  const size_t k = obs.report.actions.size();
  probs->assign(k, 1.0 / k);
}

Trajectory Play(const BlackBoxGame& game, const PlayPolicy& policy,
                uint64_t seed) {
  Trajectory trajectory;
  trajectory.rng_seed = seed;
  Rng rng(seed);
  std::unique_ptr<GameState> state = game.NewRoot();
  std::string path;
  std::vector<double> probs;
  while (true) {
    Observation obs;
    obs.node = path;
    obs.report = state->Report();
    if (obs.report.kind == NodeKind::kTerminal) {
      trajectory.terminal = std::move(obs);
      return trajectory;
    }
    if (obs.report.kind == NodeKind::kChance) {
      probs = obs.report.chance_probs;
    } else {
      policy.Distribution(obs, &probs);
      CERTIGAME_CHECK(probs.size() == obs.report.actions.size(),
                      "policy action count mismatch at " + obs.report.infoset);
    }
    const int a = rng.Sample(probs);
    if (!path.empty()) path += '/';
    path += obs.report.actions[a];
    state = state->Child(a);
    trajectory.steps.push_back({std::move(obs), a});
  }
}

Trajectory Play(const std::string& game_id, const BehaviorProfile& profile,
                uint64_t seed, const PlayPolicy* fallback) {
  std::unique_ptr<BlackBoxGame> game = MakeGame(game_id);
  ProfilePolicy policy(&profile, fallback);
  return Play(*game, policy, seed);
}

std::string TrajectoryToJson(const Trajectory& trajectory) {
  json out;
  out["rng_seed"] = trajectory.rng_seed;
  json steps = json::array();
  for (const TrajectoryStep& step : trajectory.steps) {
    json entry = ObservationToJson(step.observation);
    entry["action"] = step.observation.report.actions[step.action];
    steps.push_back(std::move(entry));
  }
  out["steps"] = std::move(steps);
  out["terminal"] = ObservationToJson(trajectory.terminal);
  return out.dump();
}

Trajectory TrajectoryFromJson(const std::string& line) {
  json in = json::parse(line);
  Trajectory trajectory;
  trajectory.rng_seed = in.at("rng_seed").get<uint64_t>();
  for (const json& entry : in.at("steps")) {
    TrajectoryStep step;
    step.observation = ObservationFromJson(entry);
    const std::string label = entry.at("action").get<std::string>();
    const auto& actions = step.observation.report.actions;
    for (int a = 0; a < static_cast<int>(actions.size()); ++a) {
      if (actions[a] == label) step.action = a;
    }
    CERTIGAME_CHECK(step.action >= 0, "action not in observation: " + label);
    trajectory.steps.push_back(std::move(step));
  }
  trajectory.terminal = ObservationFromJson(in.at("terminal"));
  return trajectory;
}

int64_t OracleNodeCap() {
  const char* env = std::getenv("CERTIGAME_NODE_CAP");
  if (env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long long cap = std::strtoll(env, &end, 10);
    CERTIGAME_CHECK(end != env && *end == '\0' && cap > 0,
                    "CERTIGAME_NODE_CAP must be a positive integer");
    return cap;
  }
  return 2000000;
}

GameTree Oracle(const BlackBoxGame& game, int64_t node_cap) {
  if (node_cap < 0) node_cap = OracleNodeCap();
  GameTree tree(game.num_players(), game.zero_sum(), game.root_lb(),
                game.root_ub());
  std::vector<std::pair<int, std::unique_ptr<GameState>>> stack;
  stack.emplace_back(0, game.NewRoot());
  while (!stack.empty()) {
    auto [h, state] = std::move(stack.back());
    stack.pop_back();
    const NodeReport report = state->Report();
    tree.Expand(h, report);
    if (tree.num_nodes() > node_cap) throw CertigameError("oracle too large");
    const Node& node = tree.node(h);
    for (int a = node.num_actions() - 1; a >= 0; --a) {
      stack.emplace_back(node.child(a), state->Child(a));
    }
  }
  return tree;
}

GameTree Oracle(const std::string& game_id, int64_t node_cap) {
  return Oracle(*MakeGame(game_id), node_cap);
}

}  // namespace certigame

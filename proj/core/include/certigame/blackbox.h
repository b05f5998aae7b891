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

#ifndef CERTIGAME_BLACKBOX_H_
#define CERTIGAME_BLACKBOX_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "certigame/game_tree.h"
#include "certigame/profile.h"

namespace certigame {

// A simulator state. Only the root can be created directly; every other
// state is reached by playing actions from it.
class GameState {
 public:
  virtual ~GameState() = default;
  virtual NodeReport Report() const = 0;
  virtual std::unique_ptr<GameState> Child(int action) const = 0;
};

class BlackBoxGame {
 public:
  virtual ~BlackBoxGame() = default;
  virtual std::string id() const = 0;
  virtual int num_players() const = 0;
  virtual bool zero_sum() const = 0;
  virtual std::vector<double> root_lb() const = 0;
  virtual std::vector<double> root_ub() const = 0;
  virtual std::unique_ptr<GameState> NewRoot() const = 0;
};

struct Observation {
  std::string node;  // action path from the root
  NodeReport report;
};

struct TrajectoryStep {
  Observation observation;
  int action = -1;
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;
  Observation terminal;
  uint64_t rng_seed = 0;
};

// Chooses action distributions for the players during a playthrough.
class PlayPolicy {
 public:
  virtual ~PlayPolicy() = default;
  virtual void Distribution(const Observation& obs,
                            std::vector<double>* probs) const = 0;
};

// Plays the profile where it is defined and the fallback (uniform when null)
// everywhere else.
class ProfilePolicy : public PlayPolicy {
 public:
  explicit ProfilePolicy(const BehaviorProfile* profile,
                         const PlayPolicy* fallback = nullptr)
      : profile_(profile), fallback_(fallback) {}
  void Distribution(const Observation& obs,
                    std::vector<double>* probs) const override;

 private:
  const BehaviorProfile* profile_;
  const PlayPolicy* fallback_;
};

// Deterministic 64-bit generator; identical seeds give identical streams.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}
  uint64_t Next();
  // Uniform in [0, 1).
  double Uniform();
  int Sample(const std::vector<double>& probs);

 private:
  uint64_t state_;
};

// Mixes a run seed and an index into a fresh seed.
uint64_t DeriveSeed(uint64_t seed, uint64_t index);

// Samples one root-to-terminal playthrough.
Trajectory Play(const BlackBoxGame& game, const PlayPolicy& policy,
                uint64_t seed);
Trajectory Play(const std::string& game_id, const BehaviorProfile& profile,
                uint64_t seed, const PlayPolicy* fallback = nullptr);

// One JSON object per line.
std::string TrajectoryToJson(const Trajectory& trajectory);
Trajectory TrajectoryFromJson(const std::string& line);

// Default node cap for oracle expansion, overridable by CERTIGAME_NODE_CAP.
int64_t OracleNodeCap();
// Fully expands the game with its true chance policy.
GameTree Oracle(const BlackBoxGame& game, int64_t node_cap = -1);
GameTree Oracle(const std::string& game_id, int64_t node_cap = -1);

}  // namespace certigame

#endif  // CERTIGAME_BLACKBOX_H_

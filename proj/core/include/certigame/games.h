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

#ifndef CERTIGAME_GAMES_H_
#define CERTIGAME_GAMES_H_

#include <memory>
#include <string>
#include <vector>

#include "certigame/blackbox.h"
#include "certigame/game_tree.h"

namespace certigame {

// Goofspiel with prizes 1..k revealed in random order; payoff is the
// difference in collected prize points.
std::unique_ptr<BlackBoxGame> MakeGoofspiel(int k);
// Leduc hold'em with k ranks and two suits.
std::unique_ptr<BlackBoxGame> MakeLeduc(int k);
std::unique_ptr<BlackBoxGame> MakeKuhn();

struct BanditArm {
  std::string label;
  std::vector<double> values;
  std::vector<double> probs;
  double lb = 0;
  double ub = 0;
};
std::unique_ptr<BlackBoxGame> MakeBandit(const std::string& id,
                                         std::vector<BanditArm> arms);
// Left arm Bernoulli(p + eps), right arm constant 1/2.
std::unique_ptr<BlackBoxGame> MakeBanditSec4(double p, double eps);
// Left arm -K with probability 1/K else 0, right arm constant -1.
std::unique_ptr<BlackBoxGame> MakeBanditAppB1(int k);

// Wraps a fully expanded tree (with chance policy) as a simulator.
std::unique_ptr<BlackBoxGame> MakeTreeGame(const std::string& id,
                                           std::shared_ptr<GameTree> tree);

// Parses goofspiel:<k>, leduc:<k>, kuhn, bandit:sec4:<p>:<eps>,
// bandit:appB1:<K>.
std::unique_ptr<BlackBoxGame> MakeGame(const std::string& game_id);

}  // namespace certigame

#endif  // CERTIGAME_GAMES_H_

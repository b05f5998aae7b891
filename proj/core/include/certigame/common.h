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

#ifndef CERTIGAME_COMMON_H_
#define CERTIGAME_COMMON_H_

#include <stdexcept>
#include <string>

namespace certigame {

// Player 0 is chance; players are numbered 1..n.
inline constexpr int kChancePlayer = 0;

// Absolute tolerance for probability and utility comparisons.
inline constexpr double kTolerance = 1e-9;
// Tolerance used when validating sequence-form vectors.
inline constexpr double kPolytopeTolerance = 1e-7;

class CertigameError : public std::runtime_error {
 public:
  explicit CertigameError(const std::string& what) : std::runtime_error(what) {}
};

// Which bound a player's utility is taken from in a pseudogame.
enum class Side { kPessimistic, kOptimistic };

#define CERTIGAME_CHECK(cond, msg)                       \
  do {                                                   \
    if (!(cond)) throw ::certigame::CertigameError(msg); \
  } while (0)

}  // namespace certigame

#endif  // CERTIGAME_COMMON_H_

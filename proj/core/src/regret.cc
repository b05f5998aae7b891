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

#include "certigame/regret.h"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace certigame {

std::vector<double> RegretMatchingPolicy(const std::vector<double>& regret) {
  const size_t k = regret.size();
  std::vector<double> probs(k, 0.0);
  double total = 0;
  for (size_t a = 0; a < k; ++a) {
    if (regret[a] > 0) {
      probs[a] = regret[a];
      total += regret[a];
    }
  }
  if (total <= 0) {
    std::fill(probs.begin(), probs.end(), 1.0 / k);
    return probs;
  }
  for (double& p : probs) p /= total;
  return probs;
}

std::vector<double> RmStep(LocalRegret* state, const std::vector<double>& loss,
                           RegretRule rule) {
  CERTIGAME_CHECK(loss.size() == state->regret.size(), "dimension mismatch");
  std::vector<double> x = RegretMatchingPolicy(state->regret);
  double expected = 0;
  for (size_t a = 0; a < x.size(); ++a) expected += x[a] * loss[a];
  for (size_t a = 0; a < x.size(); ++a) {
    double& r = state->regret[a];
    r += expected - loss[a];
    if (rule == RegretRule::kRegretMatchingPlus && r < 0) r = 0;
  }
  return x;
}

int RegretState::Extend(const std::string& key, int parent_seq, int num_actions,
                        int64_t t_created) {
  CERTIGAME_CHECK(index_.count(key) == 0, "duplicate infoset " + key);
  CERTIGAME_CHECK(parent_seq >= 0 && parent_seq < num_sequences_,
                  "parent sequence out of range");
  CERTIGAME_CHECK(num_actions >= 1, "infoset without actions");
  TreeplexInfoset info{key, parent_seq, num_sequences_, num_actions};
  const int j = num_infosets();
  infosets_.push_back(info);
  local_.push_back({std::vector<double>(num_actions, 0.0), t_created});
  seq_owner_.resize(num_sequences_ + num_actions, j);
  num_sequences_ += num_actions;
  index_.emplace(key, j);
  return j;
}

void RegretState::SyncWithTree(const GameTree& tree, int player,
                               int64_t t_created) {
  const std::vector<int>& ids = tree.player_infosets(player);
  for (size_t k = infosets_.size(); k < ids.size(); ++k) {
    const Infoset& info = tree.infoset(ids[k]);
    const int j =
        Extend(info.key, info.parent_seq, info.num_actions(), t_created);
    CERTIGAME_CHECK(infosets_[j].first_seq == info.first_seq,
                    "regret state out of sync with tree");
  }
}

std::vector<double> RegretState::SequenceForm() const {
  std::vector<double> x(num_sequences_, 0.0);
  x[0] = 1.0;
  for (int j = 0; j < num_infosets(); ++j) {
    const TreeplexInfoset& info = infosets_[j];
    const std::vector<double> probs = Behavior(j);
    for (int a = 0; a < info.num_actions; ++a) {
      x[info.first_seq + a] = x[info.parent_seq] * probs[a];
    }
  }
  return x;
}

void RegretState::WritePolicy(const GameTree& tree, int player,
                              Policy* policy) const {
  policy->resize(tree.num_infosets());
  const std::vector<int>& ids = tree.player_infosets(player);
  for (size_t k = 0; k < ids.size(); ++k) {
    if (static_cast<int>(k) < num_infosets()) {
      (*policy)[ids[k]] = Behavior(static_cast<int>(k));
    } else {
      const int n = tree.infoset(ids[k]).num_actions();
      (*policy)[ids[k]].assign(n, 1.0 / n);
    }
  }
}

// Updates infoset j from the counterfactual losses of its sequences and
// returns its expected counterfactual loss through `value`.
void RegretState::Update(int j, const std::vector<double>& cf_loss,
                         double* value) {
  const TreeplexInfoset& info = infosets_[j];
  std::vector<double> local(
      cf_loss.begin() + info.first_seq,
      cf_loss.begin() + info.first_seq + info.num_actions);
  const std::vector<double> x = RmStep(&local_[j], local, rule_);
  double expected = 0;
  for (int a = 0; a < info.num_actions; ++a) expected += x[a] * local[a];
  *value = expected;
}

void RegretState::Observe(const std::vector<double>& loss) {
  CERTIGAME_CHECK(static_cast<int>(loss.size()) <= num_sequences_,
                  "loss over unknown sequences");
  std::vector<double> cf(loss);
  cf.resize(num_sequences_, 0.0);
  // Children infosets are created after their parents, so a reverse sweep
  // is bottom-up.
  for (int j = num_infosets() - 1; j >= 0; --j) {
    double value = 0;
    Update(j, cf, &value);
    cf[infosets_[j].parent_seq] += value;
  }
}

void RegretState::ObserveSparse(
    const std::vector<std::pair<int, double>>& loss) {
  std::map<int, double> cf;
  std::set<int> pending;
  for (const auto& [s, v] : loss) {
    CERTIGAME_CHECK(s >= 0 && s < num_sequences_, "loss over unknown sequence");
    cf[s] += v;
    if (s > 0) pending.insert(seq_owner_[s]);
  }
  std::vector<double> local;
  while (!pending.empty()) {
    const int j = *pending.rbegin();
    pending.erase(std::prev(pending.end()));
    const TreeplexInfoset& info = infosets_[j];
    local.assign(info.num_actions, 0.0);
    for (int a = 0; a < info.num_actions; ++a) {
      auto it = cf.find(info.first_seq + a);
      if (it != cf.end()) local[a] = it->second;
    }
    const std::vector<double> x = RmStep(&local_[j], local, rule_);
    double expected = 0;
    for (int a = 0; a < info.num_actions; ++a) expected += x[a] * local[a];
    cf[info.parent_seq] += expected;
    if (info.parent_seq > 0) pending.insert(seq_owner_[info.parent_seq]);
  }
}

bool RegretState::operator==(const RegretState& other) const {
  if (rule_ != other.rule_ || num_sequences_ != other.num_sequences_ ||
      infosets_.size() != other.infosets_.size()) {
    return false;
  }
  for (size_t j = 0; j < infosets_.size(); ++j) {
    const TreeplexInfoset& a = infosets_[j];
    const TreeplexInfoset& b = other.infosets_[j];
    if (a.key != b.key || a.parent_seq != b.parent_seq ||
        a.num_actions != b.num_actions ||
        local_[j].regret != other.local_[j].regret ||
        local_[j].created_at != other.local_[j].created_at) {
      return false;
    }
  }
  return true;
}

double SparseRange(const RegretState& treeplex,
                   const std::vector<std::pair<int, double>>& values) {
  // Owner infoset of a sequence: the last infoset with first_seq <= s.
  auto owner = [&](int s) {
    int low = 0, high = treeplex.num_infosets() - 1, j = 0;
    while (low <= high) {
      const int mid = (low + high) / 2;
      if (treeplex.infoset(mid).first_seq <= s) {
        j = mid;
        low = mid + 1;
      } else {
        high = mid - 1;
      }
    }
    return j;
  };
  std::map<int, double> hi, lo;
  std::set<int> pending;
  for (const auto& [s, v] : values) {
    hi[s] += v;
    lo[s] += v;
    if (s > 0) pending.insert(owner(s));
  }
  while (!pending.empty()) {
    const int j = *pending.rbegin();
    pending.erase(std::prev(pending.end()));
    const TreeplexInfoset& info = treeplex.infoset(j);
    double best = 0, worst = 0;
    for (int a = 0; a < info.num_actions; ++a) {
      const int s = info.first_seq + a;
      auto h = hi.find(s);
      auto l = lo.find(s);
      const double vh = h == hi.end() ? 0.0 : h->second;
      const double vl = l == lo.end() ? 0.0 : l->second;
      if (a == 0 || vh > best) best = vh;
      if (a == 0 || vl < worst) worst = vl;
    }
    hi[info.parent_seq] += best;
    lo[info.parent_seq] += worst;
    if (info.parent_seq > 0) pending.insert(owner(info.parent_seq));
  }
  return hi[0] - lo[0];
}

}  // namespace certigame

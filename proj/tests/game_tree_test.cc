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

#include "certigame/game_tree.h"

#include <gtest/gtest.h>

#include "certigame/blackbox.h"
#include "certigame/games.h"
#include "test_util.h"

namespace certigame {
namespace {

NodeReport Decision(int player, const std::string& key,
                    std::vector<std::string> actions, double lo, double hi) {
  NodeReport r;
  r.kind = NodeKind::kDecision;
  r.player = player;
  r.infoset = key;
  r.actions = std::move(actions);
  r.reward = {0, 0};
  for (size_t a = 0; a < r.actions.size(); ++a) {
    r.child_lb.push_back({lo, -hi});
    r.child_ub.push_back({hi, -lo});
  }
  return r;
}

TEST(GameTreeTest, RootOnlyTreeIsFrontier) {
  GameTree tree(2, true, {-1, -1}, {1, 1});
  EXPECT_EQ(tree.num_nodes(), 1);
  EXPECT_EQ(tree.num_frontier(), 1);
  EXPECT_FALSE(tree.fully_expanded());
  EXPECT_EQ(tree.num_sequences(1), 1);
  EXPECT_EQ(tree.RootRange(1), std::make_pair(-1.0, 1.0));
}

TEST(GameTreeTest, ChildrenAreContiguousAndAfterParent) {
  auto tree = testing::RandomGame(7, {});
  for (int h = 0; h < tree->num_nodes(); ++h) {
    const Node& node = tree->node(h);
    if (node.is_leaf()) continue;
    for (int a = 0; a < node.num_actions(); ++a) {
      EXPECT_GT(node.child(a), h);
      EXPECT_EQ(tree->node(node.child(a)).parent, h);
      EXPECT_EQ(tree->node(node.child(a)).depth, node.depth + 1);
    }
  }
}

TEST(GameTreeTest, SequencesFollowInfosetCreation) {
  auto tree = testing::RandomGame(11, {});
  for (int p = 1; p <= 2; ++p) {
    int expected = 1;
    for (int j : tree->player_infosets(p)) {
      const Infoset& info = tree->infoset(j);
      EXPECT_EQ(info.first_seq, expected);
      EXPECT_LT(info.parent_seq, info.first_seq);
      for (int a = 0; a < info.num_actions(); ++a) {
        EXPECT_EQ(tree->sequence_infoset(p, info.first_seq + a), j);
      }
      expected += info.num_actions();
    }
    EXPECT_EQ(tree->num_sequences(p), expected);
  }
}

TEST(GameTreeTest, RejectsImperfectRecall) {
  GameTree tree(2, true, {-1, -1}, {1, 1});
  tree.Expand(0, Decision(1, "P1|", {"l", "r"}, -1, 1));
  // The same player-1 infoset below different own actions forgets them.
  tree.Expand(1, Decision(1, "P1|x", {"a", "b"}, -1, 1));
  EXPECT_THROW(tree.Expand(2, Decision(1, "P1|x", {"a", "b"}, -1, 1)),
               CertigameError);
}

TEST(GameTreeTest, RejectsActionMismatchAndSharedKeys) {
  GameTree tree(2, true, {-1, -1}, {1, 1});
  tree.Expand(0, Decision(1, "P1|", {"l", "r"}, -1, 1));
  tree.Expand(1, Decision(2, "P2|", {"a", "b"}, -1, 1));
  EXPECT_THROW(tree.Expand(2, Decision(2, "P2|", {"a", "c"}, -1, 1)),
               CertigameError);
  EXPECT_THROW(tree.Expand(2, Decision(1, "P2|", {"a", "b"}, -1, 1)),
               CertigameError);
  EXPECT_THROW(tree.Expand(1, Decision(2, "P2|", {"a", "b"}, -1, 1)),
               CertigameError);
}

TEST(GameTreeTest, RejectsInvertedBounds) {
  GameTree tree(2, false, {-1, -1}, {1, 1});
  NodeReport r = Decision(1, "P1|", {"l"}, -1, 1);
  r.child_lb[0] = {2, 0};
  r.child_ub[0] = {1, 0};
  EXPECT_THROW(tree.Expand(0, r), CertigameError);
}

TEST(GameTreeTest, JsonRoundTripIsExact) {
  for (uint64_t seed : {1, 2, 3}) {
    auto tree = testing::RandomGame(seed, {});
    const std::string text = tree->ToJson();
    const GameTree back = GameTree::FromJson(text);
    EXPECT_EQ(back.ToJson(), text);
    EXPECT_EQ(back.num_nodes(), tree->num_nodes());
    EXPECT_EQ(back.num_infosets(), tree->num_infosets());
    for (int h = 0; h < tree->num_nodes(); ++h) {
      EXPECT_EQ(back.Path(h), tree->Path(h));
      EXPECT_EQ(back.seq(h, 1), tree->seq(h, 1));
      EXPECT_EQ(back.reward(h, 1), tree->reward(h, 1));
    }
  }
}

TEST(GameTreeTest, PartialTreeJsonKeepsFrontier) {
  GameTree partial(2, true, {-2, -2}, {2, 2});
  NodeReport r = Decision(1, "P1|", {"l", "r"}, -2, 2);
  partial.Expand(0, r);
  EXPECT_EQ(partial.num_frontier(), 2);
  const GameTree back = GameTree::FromJson(partial.ToJson());
  EXPECT_EQ(back.num_frontier(), 2);
  EXPECT_EQ(back.ToJson(), partial.ToJson());
  EXPECT_EQ(back.lb(0, 1), -2);
}

TEST(GameTreeTest, FindNodeByPath) {
  GameTree oracle = Oracle("kuhn");
  for (int h = 0; h < oracle.num_nodes(); h += 7) {
    EXPECT_EQ(oracle.FindNode(oracle.Path(h)), h);
    EXPECT_EQ(oracle.FindNode(oracle.PathLabels(h)), h);
  }
  EXPECT_EQ(oracle.FindNode("nope"), -1);
}

TEST(GameTreeTest, ZeroSumSymmetryChecked) {
  GameTree tree(2, true, {-1, -1}, {1, 1});
  NodeReport r = Decision(1, "P1|", {"l"}, -1, 1);
  r.reward = {0.5, 0.5};
  tree.Expand(0, r);
  EXPECT_THROW(tree.Validate(), CertigameError);
}

}  // namespace
}  // namespace certigame

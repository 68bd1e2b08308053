// Copyright 2026 The psro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "psro/kuhn.h"

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "reference.h"

namespace psro::kuhn {
namespace {

// Converts to the hand-enumeration layout (bet probability per card and
// situation).
reference::KuhnTwoPlayerPolicy ToReference(const KuhnGame& g, const BehavioralPolicy& p) {
  reference::KuhnTwoPlayerPolicy r{};
  for (int c = 0; c < 3; ++c) {
    const std::string card = "s" + std::to_string(p.player) + ":c" + std::to_string(c) + ":";
    const std::string first = p.player == 0 ? card : card + "p";
    const std::string second = p.player == 0 ? card + "pb" : card + "b";
    r.bet[c][0] = p.probs[g.FindInfoset(p.player, first)][kBet];
    r.bet[c][1] = p.probs[g.FindInfoset(p.player, second)][kBet];
  }
  return r;
}

BehavioralPolicy RandomPolicy(const KuhnGame& g, int player, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  BehavioralPolicy p = g.UniformPolicy(player);
  for (auto& a : p.probs) {
    a[kBet] = u(rng);
    a[kPass] = 1.0 - a[kBet];
  }
  return p;
}

BehavioralPolicy RandomPurePolicy(const KuhnGame& g, int player, std::mt19937_64& rng) {
  BehavioralPolicy p = g.UniformPolicy(player);
  for (auto& a : p.probs) {
    const int b = std::bernoulli_distribution(0.5)(rng);
    a = {1.0 - b, static_cast<double>(b)};
  }
  return p;
}

TEST(KuhnTreeTest, DealCountsAndPlayerRange) {
  EXPECT_EQ(KuhnGame(2).num_deals(), 6);
  EXPECT_EQ(KuhnGame(3).num_deals(), 24);
  EXPECT_EQ(KuhnGame(4).num_deals(), 120);
  EXPECT_EQ(KuhnGame(5).num_deals(), 720);
  EXPECT_THROW(KuhnGame(1), InvalidInput);
  EXPECT_THROW(KuhnGame(6), InvalidInput);
}

TEST(KuhnTreeTest, TerminalsAreZeroSum) {
  for (int k = 2; k <= 5; ++k) {
    const KuhnGame g(k);
    for (int t = 0; t < g.num_terminals(); ++t) {
      double sum = 0.0;
      for (double u : g.terminal_payoffs(t)) sum += u;
      EXPECT_EQ(sum, 0.0);
    }
  }
}

TEST(KuhnTreeTest, InformationStates) {
  const KuhnGame g2(2);
  EXPECT_EQ(g2.num_infosets(0), 6);
  EXPECT_EQ(g2.num_infosets(1), 6);
  EXPECT_GE(g2.FindInfoset(0, "s0:c2:pb"), 0);
  EXPECT_GE(g2.FindInfoset(1, "s1:c0:b"), 0);
  EXPECT_EQ(g2.FindInfoset(0, "s0:c2:bb"), -1);
  // Three players without raises: each seat acts at four public histories.
  const KuhnGame g3(3);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(g3.num_infosets(k), 16);
  // Every decision node of an information state shares card and history.
  for (const auto& nd : g3.nodes()) {
    if (nd.terminal >= 0 || nd.player < 0) continue;
    const std::string& id = g3.infoset_id(nd.player, nd.infoset);
    EXPECT_EQ(id.substr(0, 2), "s" + std::to_string(nd.player));
  }
}

TEST(KuhnPayoffTest, MatchesHandEnumeration) {
  const KuhnGame g(2);
  std::mt19937_64 rng(1);
  for (int c = 0; c < 100; ++c) {
    const auto p1 = RandomPolicy(g, 0, rng);
    const auto p2 = RandomPolicy(g, 1, rng);
    const auto v = ExactExpectedPayoffs(g, {p1, p2});
    EXPECT_NEAR(v[0], reference::KuhnTwoPlayerValue(ToReference(g, p1), ToReference(g, p2)),
                1e-12);
    EXPECT_NEAR(v[0] + v[1], 0.0, 1e-12);
  }
}

TEST(KuhnPayoffTest, FoldAgainstAlwaysBet) {
  const KuhnGame g(2);
  // Player 1 always checks and folds; player 2 bets after every check.
  const auto v = ExactExpectedPayoffs(g, {g.ConstantPolicy(0, kPass), g.ConstantPolicy(1, kBet)});
  EXPECT_DOUBLE_EQ(v[1], 1.0);
  EXPECT_DOUBLE_EQ(v[0], -1.0);
}

TEST(KuhnPayoffTest, ZeroSumForManyPlayers) {
  std::mt19937_64 rng(2);
  for (int k = 3; k <= 4; ++k) {
    const KuhnGame g(k);
    for (int c = 0; c < 10; ++c) {
      std::vector<BehavioralPolicy> joint;
      for (int j = 0; j < k; ++j) joint.push_back(RandomPolicy(g, j, rng));
      double sum = 0.0;
      for (double u : ExactExpectedPayoffs(g, joint)) sum += u;
      EXPECT_NEAR(sum, 0.0, 1e-10);
    }
  }
}

TEST(KuhnPayoffTest, MultilinearInEachPlayer) {
  std::mt19937_64 rng(3);
  const KuhnGame g(3);
  std::vector<BehavioralPolicy> joint;
  for (int j = 0; j < 3; ++j) joint.push_back(RandomPolicy(g, j, rng));
  for (int k = 0; k < 3; ++k) {
    // Per-episode mixture of two policies, through reach weights.
    const auto a = RandomPolicy(g, k, rng);
    const auto b = RandomPolicy(g, k, rng);
    for (double lambda : {0.0, 0.25, 0.5, 1.0}) {
      auto ja = joint, jb = joint;
      ja[k] = a;
      jb[k] = b;
      const auto ua = ExactExpectedPayoffs(g, ja);
      const auto ub = ExactExpectedPayoffs(g, jb);
      std::vector<std::vector<double>> reach(3);
      for (int j = 0; j < 3; ++j) reach[j] = PlayerReach(g, joint[j]);
      reach[k] = MixtureReach(g, {&a, &b}, {lambda, 1.0 - lambda});
      const auto mixed = ExpectedPayoffsFromReach(g, reach);
      for (int j = 0; j < 3; ++j) {
        EXPECT_NEAR(mixed[j], lambda * ua[j] + (1 - lambda) * ub[j], 1e-12);
      }
    }
  }
}

TEST(KuhnPayoffTest, MissingStateIsNamed) {
  const KuhnGame g(2);
  auto j = PolicyToJson(g, g.UniformPolicy(0));
  j.erase("s0:c1:pb");
  try {
    PolicyFromJson(g, 0, j);
    FAIL() << "expected InvalidInput";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("s0:c1:pb"), std::string::npos);
  }
  auto bad = g.UniformPolicy(1);
  bad.probs.pop_back();
  EXPECT_THROW(ExactExpectedPayoffs(g, {g.UniformPolicy(0), bad}), InvalidInput);
  bad = g.UniformPolicy(1);
  bad.probs[0] = {0.7, 0.7};
  EXPECT_THROW(ExactExpectedPayoffs(g, {g.UniformPolicy(0), bad}), InvalidInput);
  EXPECT_THROW(ExactExpectedPayoffs(g, {g.UniformPolicy(0)}), InvalidInput);
}

TEST(KuhnPayoffTest, PolicyJsonRoundTrip) {
  const KuhnGame g(3);
  std::mt19937_64 rng(4);
  const auto p = RandomPolicy(g, 2, rng);
  EXPECT_TRUE(PolicyEqual(PolicyFromJson(g, 2, PolicyToJson(g, p)), p));
  EXPECT_THROW(PolicyFromJson(g, 2, {{"nonsense", {0.5, 0.5}}}), InvalidInput);
}

TEST(KuhnSimulationTest, AgreesWithExactValue) {
  const KuhnGame g(2);
  const std::vector<BehavioralPolicy> joint = {g.UniformPolicy(0), g.UniformPolicy(1)};
  const auto exact = ExactExpectedPayoffs(g, joint);
  const auto mc = Simulate(g, joint, 1000000, 17);
  // Payoffs lie in [-2, 2], so the standard error is at most 2e-3.
  for (int k = 0; k < 2; ++k) EXPECT_NEAR(mc[k], exact[k], 3 * 2e-3);
  EXPECT_EQ(Simulate(g, joint, 100, 5), Simulate(g, joint, 100, 5));
  EXPECT_NE(Simulate(g, joint, 100, 5), Simulate(g, joint, 100, 6));
  EXPECT_THROW(Simulate(g, joint, 0, 5), InvalidInput);
}

TEST(KuhnBestResponseTest, BeatsSampledDeviations) {
  std::mt19937_64 rng(5);
  for (int k = 2; k <= 3; ++k) {
    const KuhnGame g(k);
    std::vector<BehavioralPolicy> joint;
    for (int j = 0; j < k; ++j) joint.push_back(RandomPolicy(g, j, rng));
    for (int player = 0; player < k; ++player) {
      const auto br = ExactBestResponse(g, joint, player);
      auto with_br = joint;
      with_br[player] = br.policy;
      EXPECT_NEAR(ExactExpectedPayoffs(g, with_br)[player], br.value, 1e-12);
      for (int d = 0; d < 100; ++d) {
        auto dev = joint;
        dev[player] = d % 2 ? RandomPolicy(g, player, rng) : RandomPurePolicy(g, player, rng);
        EXPECT_LE(ExactExpectedPayoffs(g, dev)[player], br.value + 1e-12);
      }
    }
  }
}

TEST(KuhnBestResponseTest, ExhaustiveOverPurePoliciesTwoPlayer) {
  const KuhnGame g(2);
  std::mt19937_64 rng(6);
  const auto opp = RandomPolicy(g, 1, rng);
  const auto br = ExactBestResponse(g, {g.UniformPolicy(0), opp}, 0);
  double best = -1e9;
  for (int mask = 0; mask < 64; ++mask) {
    BehavioralPolicy p = g.UniformPolicy(0);
    for (int i = 0; i < 6; ++i) {
      const int b = (mask >> i) & 1;
      p.probs[i] = {1.0 - b, static_cast<double>(b)};
    }
    best = std::max(best, ExactExpectedPayoffs(g, {p, opp})[0]);
  }
  EXPECT_NEAR(br.value, best, 1e-12);
}

TEST(KuhnBestResponseTest, IdempotentAndDeterministic) {
  std::mt19937_64 rng(7);
  const KuhnGame g(3);
  std::vector<BehavioralPolicy> joint;
  for (int j = 0; j < 3; ++j) joint.push_back(RandomPolicy(g, j, rng));
  const auto a = ExactBestResponse(g, joint, 1);
  const auto b = ExactBestResponse(g, joint, 1);
  EXPECT_TRUE(PolicyEqual(a.policy, b.policy));
  EXPECT_EQ(a.value, b.value);
  auto with_br = joint;
  with_br[1] = a.policy;
  EXPECT_NEAR(ExactBestResponse(g, with_br, 1).value, a.value, 1e-12);
  EXPECT_FALSE(PolicyEqual(a.policy, g.UniformPolicy(1)));
  EXPECT_TRUE(PolicyEqual(a.policy, a.policy));
}

TEST(KuhnBestResponseTest, AgainstAlwaysPass) {
  const KuhnGame g(2);
  const auto br = ExactBestResponse(g, {g.UniformPolicy(0), g.ConstantPolicy(1, kPass)}, 0);
  // Betting always takes the pot; with the top card checking does too, and
  // the tie goes to the first action.
  EXPECT_DOUBLE_EQ(br.value, 1.0);
  const auto r = ToReference(g, br.policy);
  EXPECT_EQ(r.bet[0][0], 1.0);
  EXPECT_EQ(r.bet[1][0], 1.0);
  EXPECT_EQ(r.bet[2][0], 0.0);
  auto always_bet = g.ConstantPolicy(0, kBet);
  EXPECT_DOUBLE_EQ(ExactExpectedPayoffs(g, {always_bet, g.ConstantPolicy(1, kPass)})[0], 1.0);
}

}  // namespace
}  // namespace psro::kuhn

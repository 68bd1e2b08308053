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

// K-player Kuhn poker: K+1 ranked cards, ante 1, one betting round in which
// each player may bet once (no raises). Provides exact expected payoffs,
// exact best responses against (mixtures of) behavioral policies, seeded
// simulation, and policy (de)serialization.

#ifndef PSRO_KUHN_H_
#define PSRO_KUHN_H_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "psro/errors.h"
#include "psro/rng.h"

namespace psro::kuhn {

inline constexpr int kPass = 0;  // check, or fold facing a bet
inline constexpr int kBet = 1;   // bet, or call facing a bet
inline constexpr int kNumActions = 2;

struct Node {
  int parent = -1;
  int depth = 0;      // actions taken so far
  int player = -1;    // acting seat; -1 at terminals
  int infoset = -1;   // index into the acting player's information states
  int deal = -1;
  std::array<int, kNumActions> child = {-1, -1};
  int terminal = -1;  // index into payoffs
};

// Distribution over {pass, bet} at each of one player's information states.
struct BehavioralPolicy {
  int player = 0;
  std::vector<std::array<double, kNumActions>> probs;
};

class KuhnGame {
 public:
  explicit KuhnGame(int num_players) : num_players_(num_players) {
    if (num_players < 2 || num_players > 5) {
      throw InvalidInput("Kuhn poker supports 2 to 5 players");
    }
    std::vector<int> cards(num_players + 1);
    std::iota(cards.begin(), cards.end(), 0);
    do {
      deals_.emplace_back(cards.begin(), cards.begin() + num_players);
    } while (std::next_permutation(cards.begin(), cards.end()));
    infoset_ids_.resize(num_players);
    infoset_index_.resize(num_players);
    for (int d = 0; d < num_deals(); ++d) {
      deal_roots_.push_back(Build(d, -1, ""));
    }
    by_depth_.resize(max_depth_ + 1);
    for (int v = 0; v < static_cast<int>(nodes_.size()); ++v) {
      by_depth_[nodes_[v].depth].push_back(v);
    }
  }

  int num_players() const { return num_players_; }
  int num_cards() const { return num_players_ + 1; }
  int num_deals() const { return static_cast<int>(deals_.size()); }
  double deal_probability() const { return 1.0 / num_deals(); }
  const std::vector<int>& deal(int d) const { return deals_[d]; }
  const std::vector<int>& deal_roots() const { return deal_roots_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(int v) const { return nodes_[v]; }
  const std::vector<double>& terminal_payoffs(int t) const {
    return payoffs_[t];
  }
  int num_terminals() const { return static_cast<int>(payoffs_.size()); }
  const std::vector<std::vector<int>>& nodes_by_depth() const {
    return by_depth_;
  }

  int num_infosets(int player) const {
    return static_cast<int>(infoset_ids_[player].size());
  }
  const std::string& infoset_id(int player, int i) const {
    return infoset_ids_[player][i];
  }
  int FindInfoset(int player, const std::string& id) const {
    auto it = infoset_index_[player].find(id);
    return it == infoset_index_[player].end() ? -1 : it->second;
  }

  BehavioralPolicy UniformPolicy(int player) const {
    BehavioralPolicy p;
    p.player = player;
    p.probs.assign(num_infosets(player), {0.5, 0.5});
    return p;
  }
  // Plays `action` everywhere.
  BehavioralPolicy ConstantPolicy(int player, int action) const {
    BehavioralPolicy p;
    p.player = player;
    std::array<double, kNumActions> a = {0.0, 0.0};
    a[action] = 1.0;
    p.probs.assign(num_infosets(player), a);
    return p;
  }

  void Validate(const BehavioralPolicy& p) const {
    if (p.player < 0 || p.player >= num_players_) {
      throw InvalidInput("policy has an invalid player");
    }
    if (static_cast<int>(p.probs.size()) != num_infosets(p.player)) {
      throw InvalidInput("policy for player " + std::to_string(p.player) +
                         " does not cover every information state");
    }
    for (int i = 0; i < num_infosets(p.player); ++i) {
      const auto& a = p.probs[i];
      if (!(a[0] >= 0 && a[1] >= 0) || std::abs(a[0] + a[1] - 1.0) > 1e-12) {
        throw InvalidInput("invalid distribution at " +
                           infoset_id(p.player, i));
      }
    }
  }

 private:
  // Appends the subtree for `history` under deal d; returns its node index.
  int Build(int d, int parent, const std::string& history) {
    const int v = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    nodes_[v].parent = parent;
    nodes_[v].deal = d;
    nodes_[v].depth = static_cast<int>(history.size());
    max_depth_ = std::max(max_depth_, nodes_[v].depth);
    int to_act = -1;
    if (!IsTerminal(history, to_act)) {
      nodes_[v].player = to_act;
      const std::string id = "s" + std::to_string(to_act) + ":c" +
                             std::to_string(deals_[d][to_act]) + ":" + history;
      auto [it, inserted] = infoset_index_[to_act].emplace(
          id, static_cast<int>(infoset_ids_[to_act].size()));
      if (inserted) infoset_ids_[to_act].push_back(id);
      nodes_[v].infoset = it->second;
      for (int a = 0; a < kNumActions; ++a) {
        const int c = Build(d, v, history + (a == kBet ? 'b' : 'p'));
        nodes_[v].child[a] = c;
      }
    } else {
      nodes_[v].terminal = static_cast<int>(payoffs_.size());
      payoffs_.push_back(Payoffs(deals_[d], history));
    }
    return v;
  }

  // Seats act in order 0..K-1 until someone bets; after a bet at seat b the
  // other K-1 seats (b+1, ..., b-1 cyclically) each call or fold once.
  bool IsTerminal(const std::string& h, int& to_act) const {
    const int n = num_players_;
    const auto bet = h.find('b');
    if (bet == std::string::npos) {
      if (static_cast<int>(h.size()) == n) return true;
      to_act = static_cast<int>(h.size());
      return false;
    }
    const int responses = static_cast<int>(h.size() - bet - 1);
    if (responses == n - 1) return true;
    to_act = (static_cast<int>(bet) + 1 + responses) % n;
    return false;
  }

  std::vector<double> Payoffs(const std::vector<int>& cards,
                              const std::string& h) const {
    const int n = num_players_;
    std::vector<double> contrib(n, 1.0);
    std::vector<char> in(n, 1);
    const auto bet = h.find('b');
    if (bet != std::string::npos) {
      const int bettor = static_cast<int>(bet);
      contrib[bettor] += 1.0;
      for (size_t r = bet + 1; r < h.size(); ++r) {
        const int seat = (bettor + static_cast<int>(r - bet)) % n;
        if (h[r] == 'b') {
          contrib[seat] += 1.0;
        } else {
          in[seat] = 0;
        }
      }
    }
    int winner = -1;
    for (int i = 0; i < n; ++i) {
      if (in[i] && (winner < 0 || cards[i] > cards[winner])) winner = i;
    }
    const double pot = std::accumulate(contrib.begin(), contrib.end(), 0.0);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = (i == winner ? pot : 0.0) - contrib[i];
    return out;
  }

  int num_players_;
  std::vector<std::vector<int>> deals_;
  std::vector<Node> nodes_;
  std::vector<int> deal_roots_;
  std::vector<std::vector<double>> payoffs_;
  std::vector<std::vector<std::string>> infoset_ids_;
  std::vector<std::unordered_map<std::string, int>> infoset_index_;
  std::vector<std::vector<int>> by_depth_;
  int max_depth_ = 0;
};

// Probability that `player` takes the actions leading to each node.
inline std::vector<double> PlayerReach(const KuhnGame& game,
                                       const BehavioralPolicy& policy) {
  game.Validate(policy);
  const auto& nodes = game.nodes();
  std::vector<double> reach(nodes.size(), 1.0);
  for (int v = 0; v < static_cast<int>(nodes.size()); ++v) {
    const Node& n = nodes[v];
    if (n.terminal >= 0) continue;
    for (int a = 0; a < kNumActions; ++a) {
      reach[n.child[a]] =
          reach[v] * (n.player == policy.player ? policy.probs[n.infoset][a]
                                                : 1.0);
    }
  }
  return reach;
}

// Reach of a per-episode mixture over several policies of one player.
inline std::vector<double> MixtureReach(
    const KuhnGame& game, const std::vector<const BehavioralPolicy*>& policies,
    const std::vector<double>& weights) {
  std::vector<double> reach(game.nodes().size(), 0.0);
  for (size_t i = 0; i < policies.size(); ++i) {
    if (weights[i] == 0.0) continue;
    const auto r = PlayerReach(game, *policies[i]);
    for (size_t v = 0; v < r.size(); ++v) reach[v] += weights[i] * r[v];
  }
  return reach;
}

// Expected payoffs given each player's reach vector.
inline std::vector<double> ExpectedPayoffsFromReach(
    const KuhnGame& game, const std::vector<std::vector<double>>& reach) {
  const int n = game.num_players();
  std::vector<double> out(n, 0.0);
  const auto& nodes = game.nodes();
  for (int v = 0; v < static_cast<int>(nodes.size()); ++v) {
    if (nodes[v].terminal < 0) continue;
    double w = game.deal_probability();
    for (int j = 0; j < n; ++j) w *= reach[j][v];
    if (w == 0.0) continue;
    const auto& u = game.terminal_payoffs(nodes[v].terminal);
    for (int j = 0; j < n; ++j) out[j] += w * u[j];
  }
  return out;
}

inline void ValidateJoint(const KuhnGame& game,
                          const std::vector<BehavioralPolicy>& joint) {
  if (static_cast<int>(joint.size()) != game.num_players()) {
    throw InvalidInput("joint policy must have one policy per player");
  }
  for (int j = 0; j < game.num_players(); ++j) {
    if (joint[j].player != j) {
      throw InvalidInput("joint policy entry " + std::to_string(j) +
                         " belongs to another player");
    }
  }
}

inline std::vector<double> ExactExpectedPayoffs(
    const KuhnGame& game, const std::vector<BehavioralPolicy>& joint) {
  ValidateJoint(game, joint);
  std::vector<std::vector<double>> reach;
  for (const auto& p : joint) reach.push_back(PlayerReach(game, p));
  return ExpectedPayoffsFromReach(game, reach);
}

struct BestResponseResult {
  BehavioralPolicy policy;
  double value = 0.0;
};

inline constexpr double kBrTieTolerance = 1e-12;

// Best response of `player` when every other seat j plays with reach
// opponent_reach[j] (entry `player` is ignored). Ties go to the lower action
// index.
inline BestResponseResult BestResponseFromReach(
    const KuhnGame& game, int player,
    const std::vector<std::vector<double>>& opponent_reach) {
  const auto& nodes = game.nodes();
  const int n = game.num_players();
  std::vector<double> u(nodes.size(), 0.0);
  BestResponseResult br;
  br.policy.player = player;
  br.policy.probs.assign(game.num_infosets(player), {1.0, 0.0});
  std::vector<std::array<double, kNumActions>> q(game.num_infosets(player));
  const auto& levels = game.nodes_by_depth();
  for (int d = static_cast<int>(levels.size()) - 1; d >= 0; --d) {
    for (auto& x : q) x = {0.0, 0.0};
    for (int v : levels[d]) {
      const Node& nd = nodes[v];
      if (nd.player == player) {
        for (int a = 0; a < kNumActions; ++a) q[nd.infoset][a] += u[nd.child[a]];
      }
    }
    for (int v : levels[d]) {
      const Node& nd = nodes[v];
      if (nd.player != player) continue;
      const auto& qa = q[nd.infoset];
      const int best = qa[kBet] > qa[kPass] + kBrTieTolerance ? kBet : kPass;
      br.policy.probs[nd.infoset] = {best == kPass ? 1.0 : 0.0,
                                     best == kBet ? 1.0 : 0.0};
    }
    for (int v : levels[d]) {
      const Node& nd = nodes[v];
      if (nd.terminal >= 0) {
        double w = game.deal_probability();
        for (int j = 0; j < n; ++j) {
          if (j != player) w *= opponent_reach[j][v];
        }
        u[v] = w * game.terminal_payoffs(nd.terminal)[player];
      } else if (nd.player == player) {
        const auto& pr = br.policy.probs[nd.infoset];
        u[v] = pr[kBet] > 0.5 ? u[nd.child[kBet]] : u[nd.child[kPass]];
      } else {
        u[v] = u[nd.child[kPass]] + u[nd.child[kBet]];
      }
    }
  }
  for (int r : game.deal_roots()) br.value += u[r];
  return br;
}

inline BestResponseResult ExactBestResponse(
    const KuhnGame& game, const std::vector<BehavioralPolicy>& joint,
    int player) {
  ValidateJoint(game, joint);
  std::vector<std::vector<double>> reach(game.num_players());
  for (int j = 0; j < game.num_players(); ++j) {
    if (j != player) reach[j] = PlayerReach(game, joint[j]);
  }
  return BestResponseFromReach(game, player, reach);
}

// Mean payoffs over seeded Monte Carlo episodes.
inline std::vector<double> Simulate(const KuhnGame& game,
                                    const std::vector<BehavioralPolicy>& joint,
                                    int64_t episodes, uint64_t seed) {
  ValidateJoint(game, joint);
  for (const auto& p : joint) game.Validate(p);
  if (episodes < 1) throw InvalidInput("episodes must be positive");
  Rng rng(seed);
  std::vector<double> total(game.num_players(), 0.0);
  for (int64_t e = 0; e < episodes; ++e) {
    int v = game.deal_roots()[rng.UniformInt(game.num_deals())];
    while (game.node(v).terminal < 0) {
      const Node& nd = game.node(v);
      const auto& pr = joint[nd.player].probs[nd.infoset];
      v = nd.child[rng.Uniform() < pr[kPass] ? kPass : kBet];
    }
    const auto& u = game.terminal_payoffs(game.node(v).terminal);
    for (int j = 0; j < game.num_players(); ++j) total[j] += u[j];
  }
  for (double& t : total) t /= static_cast<double>(episodes);
  return total;
}

inline bool PolicyEqual(const BehavioralPolicy& a, const BehavioralPolicy& b,
                        double tol = 1e-9) {
  if (a.player != b.player || a.probs.size() != b.probs.size()) return false;
  for (size_t i = 0; i < a.probs.size(); ++i) {
    for (int k = 0; k < kNumActions; ++k) {
      if (std::abs(a.probs[i][k] - b.probs[i][k]) > tol) return false;
    }
  }
  return true;
}

inline bool operator==(const BehavioralPolicy& a, const BehavioralPolicy& b) {
  return PolicyEqual(a, b);
}

inline nlohmann::json PolicyToJson(const KuhnGame& game,
                                   const BehavioralPolicy& p) {
  nlohmann::json j = nlohmann::json::object();
  for (int i = 0; i < game.num_infosets(p.player); ++i) {
    j[game.infoset_id(p.player, i)] = {p.probs[i][0], p.probs[i][1]};
  }
  return j;
}

inline BehavioralPolicy PolicyFromJson(const KuhnGame& game, int player,
                                       const nlohmann::json& j) {
  BehavioralPolicy p;
  p.player = player;
  p.probs.assign(game.num_infosets(player), {-1.0, -1.0});
  for (auto it = j.begin(); it != j.end(); ++it) {
    const int i = game.FindInfoset(player, it.key());
    if (i < 0) throw InvalidInput("unknown information state " + it.key());
    const auto v = it.value().get<std::vector<double>>();
    if (v.size() != kNumActions) {
      throw InvalidInput("expected 2 probabilities at " + it.key());
    }
    p.probs[i] = {v[0], v[1]};
  }
  for (int i = 0; i < game.num_infosets(player); ++i) {
    if (p.probs[i][0] < 0) {
      throw InvalidInput("missing information state " +
                         game.infoset_id(player, i));
    }
  }
  game.Validate(p);
  return p;
}

}  // namespace psro::kuhn

#endif  // PSRO_KUHN_H_

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

// Per-player strategy populations and the meta-game they induce.

#ifndef PSRO_POPULATION_H_
#define PSRO_POPULATION_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "psro/errors.h"
#include "psro/game.h"
#include "psro/response_graph.h"

namespace psro {

// Strategy is an index into the underlying game's strategies for normal-form
// games and a behavioral policy for poker. In single-population mode there
// is one list shared by both seats.
template <class Strategy>
class Population {
 public:
  Population() = default;
  Population(PopulationMode mode, int num_players,
             std::vector<std::vector<Strategy>> lists)
      : mode_(mode), num_players_(num_players), lists_(std::move(lists)) {
    const size_t expected =
        mode == PopulationMode::kSingle ? 1 : static_cast<size_t>(num_players);
    if (lists_.size() != expected) {
      throw InvalidInput("population needs " + std::to_string(expected) +
                         " strategy lists");
    }
    for (const auto& l : lists_) {
      if (l.empty()) throw InvalidInput("empty population");
    }
  }

  PopulationMode mode() const { return mode_; }
  int num_players() const { return num_players_; }
  int num_lists() const { return static_cast<int>(lists_.size()); }
  // List used by seat k.
  int ListOf(int k) const { return mode_ == PopulationMode::kSingle ? 0 : k; }
  const std::vector<Strategy>& members(int k) const { return lists_[ListOf(k)]; }
  const std::vector<Strategy>& list(int i) const { return lists_[i]; }
  int size(int k) const { return static_cast<int>(members(k).size()); }
  void Append(int list_index, Strategy s) {
    lists_[list_index].push_back(std::move(s));
  }
  // Sum of list sizes.
  int total_pool_length() const {
    int n = 0;
    for (const auto& l : lists_) n += static_cast<int>(l.size());
    return n;
  }
  std::vector<int> MetaCounts() const {
    std::vector<int> c(num_players_);
    for (int k = 0; k < num_players_; ++k) c[k] = size(k);
    return c;
  }

 private:
  PopulationMode mode_ = PopulationMode::kMulti;
  int num_players_ = 0;
  std::vector<std::vector<Strategy>> lists_;
};

using NfgPopulation = Population<int>;

inline bool Contains(const std::vector<int>& list, int s) {
  for (int x : list) {
    if (x == s) return true;
  }
  return false;
}

// Underlying pure profile for a meta-game profile.
inline Profile LiftProfile(const NfgPopulation& pop, const Profile& meta) {
  Profile s(meta.size());
  for (size_t k = 0; k < meta.size(); ++k) {
    s[k] = pop.members(static_cast<int>(k))[meta[k]];
  }
  return s;
}

// The game restricted to the population's strategies.
inline NormalFormGame RestrictGame(const NormalFormGame& game,
                                   const NfgPopulation& pop) {
  const int n = game.num_players();
  const std::vector<int> counts = pop.MetaCounts();
  Shape shape(counts);
  std::vector<std::vector<double>> payoffs(n,
                                           std::vector<double>(shape.size()));
  Profile m(n, 0);
  int64_t flat = 0;
  do {
    const int64_t u = game.shape().Ravel(LiftProfile(pop, m));
    for (int k = 0; k < n; ++k) payoffs[k][flat] = game.payoff(k, u);
    ++flat;
  } while (shape.Next(m));
  NormalFormGame meta(counts, std::move(payoffs));
  if (!game.labels().empty()) {
    std::vector<std::vector<std::string>> labels(n);
    for (int k = 0; k < n; ++k) {
      for (int s : pop.members(k)) labels[k].push_back(game.Label(k, s));
    }
    meta.set_labels(std::move(labels));
  }
  return meta;
}

// Lifts per-player meta weights onto the underlying game's strategies.
inline MixedProfile LiftMixed(const NormalFormGame& game,
                              const NfgPopulation& pop,
                              const MixedProfile& meta) {
  MixedProfile p(game.num_players());
  for (int k = 0; k < game.num_players(); ++k) {
    p[k].assign(game.num_strategies(k), 0.0);
    for (int i = 0; i < pop.size(k); ++i) p[k][pop.members(k)[i]] += meta[k][i];
  }
  return p;
}

}  // namespace psro

#endif  // PSRO_POPULATION_H_

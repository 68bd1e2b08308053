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

// Convergence and quality measures: NashConv, PBR-Score, alpha-Conv,
// PCS-Score and policy diversity.

#ifndef PSRO_METRICS_H_
#define PSRO_METRICS_H_

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "psro/errors.h"
#include "psro/game.h"
#include "psro/kuhn.h"
#include "psro/meta_solvers.h"
#include "psro/oracles.h"
#include "psro/population.h"
#include "psro/response_graph.h"

namespace psro {

// sum_k [max_sigma M^k(sigma, pi^{-k}) - M^k(pi)].
inline double NashConv(const NormalFormGame& game, const MixedProfile& profile) {
  ValidateProfile(game, profile, 1e-9);
  const auto value = ExpectedPayoffs(game, profile);
  double total = 0.0;
  for (int k = 0; k < game.num_players(); ++k) {
    const auto dev = DeviationPayoffs(game, profile, k);
    total += *std::max_element(dev.begin(), dev.end()) - value[k];
  }
  return total;
}

// NashConv of the mixture profile in which seat k samples a population policy
// from weights[k] at the start of every episode.
inline double PokerNashConv(const kuhn::KuhnGame& tree, const PokerPopulation& pop,
                            const MixedProfile& weights) {
  const int n = tree.num_players();
  std::vector<std::vector<double>> reach(n);
  for (int k = 0; k < n; ++k) {
    reach[k] = internal::SeatMixtureReach(tree, pop, k, weights[k]);
  }
  const auto value = kuhn::ExpectedPayoffsFromReach(tree, reach);
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    auto others = reach;
    others[k].clear();
    total += kuhn::BestResponseFromReach(tree, k, others).value - value[k];
  }
  return total;
}

// PBR-Score of one candidate for seat k.
inline double PbrScore(const NormalFormGame& game, const NfgPopulation& pop,
                       const MetaDistribution& d, int k, int candidate) {
  return PbrScores(game, pop, d, k)[candidate];
}

// sum_k [max over all strategies - max over population strategies] of the
// PBR-Score; one term in single-population mode.
inline double AlphaConv(const NormalFormGame& game, const NfgPopulation& pop,
                        const MetaDistribution& d) {
  double total = 0.0;
  for (int i = 0; i < pop.num_lists(); ++i) {
    const auto score = PbrScores(game, pop, d, i);
    double in_pop = -1.0;
    for (int s : pop.list(i)) in_pop = std::max(in_pop, score[s]);
    total += *std::max_element(score.begin(), score.end()) - in_pop;
  }
  return total;
}

// Underlying nodes (profiles, or strategies for a single population) in the
// population's meta sink components, as a set.
inline std::set<int64_t> MetaSinkNodes(const NormalFormGame& game,
                                       const NfgPopulation& pop,
                                       const ResponseGraph& meta_graph) {
  std::set<int64_t> nodes;
  Shape meta_shape(pop.MetaCounts());
  for (int v : meta_graph.SinkNodes()) {
    if (pop.mode() == PopulationMode::kSingle) {
      nodes.insert(pop.list(0)[v]);
    } else {
      nodes.insert(game.shape().Ravel(LiftProfile(pop, meta_shape.Unravel(v))));
    }
  }
  return nodes;
}

// Fraction of meta sink-component nodes that lie in the game's sink
// components.
inline double PcsScore(const NormalFormGame& game, const ResponseGraph& full,
                       const NfgPopulation& pop, const ResponseGraph& meta_graph) {
  const auto nodes = MetaSinkNodes(game, pop, meta_graph);
  if (nodes.empty()) throw NumericalFailure("meta-game has no sink component");
  int64_t hit = 0;
  for (int64_t v : nodes) hit += full.InSink(static_cast<int>(v)) ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(nodes.size());
}

inline double PcsScore(const NormalFormGame& game, const ResponseGraph& full,
                       const NfgPopulation& pop) {
  return PcsScore(game, full, pop,
                  BuildResponseGraph(RestrictGame(game, pop), pop.mode()));
}

// Number of pairwise-distinct policies.
inline int Diversity(const std::vector<kuhn::BehavioralPolicy>& policies) {
  std::vector<const kuhn::BehavioralPolicy*> unique;
  for (const auto& p : policies) {
    bool seen = false;
    for (const auto* q : unique) {
      if (kuhn::PolicyEqual(p, *q)) {
        seen = true;
        break;
      }
    }
    if (!seen) unique.push_back(&p);
  }
  return static_cast<int>(unique.size());
}

inline std::vector<int> Diversity(const PokerPopulation& pop) {
  std::vector<int> out;
  for (int i = 0; i < pop.num_lists(); ++i) out.push_back(Diversity(pop.list(i)));
  return out;
}

}  // namespace psro

#endif  // PSRO_METRICS_H_

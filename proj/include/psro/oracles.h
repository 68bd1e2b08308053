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

// Oracles that expand a population: best response, preference-based best
// response (single- and multi-population), its novelty-bound variant, and
// rectified best response. Normal-form and Kuhn poker versions.

#ifndef PSRO_ORACLES_H_
#define PSRO_ORACLES_H_

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "psro/errors.h"
#include "psro/game.h"
#include "psro/kuhn.h"
#include "psro/meta_solvers.h"
#include "psro/population.h"
#include "psro/response_graph.h"

namespace psro {

enum class OracleKind { kBr, kPbr, kPbrNoveltyBound, kRectifiedBr };

inline const char* OracleName(OracleKind k) {
  switch (k) {
    case OracleKind::kBr: return "br";
    case OracleKind::kPbr: return "pbr";
    case OracleKind::kPbrNoveltyBound: return "pbr_novelty_bound";
    case OracleKind::kRectifiedBr: return "rectified_br";
  }
  return "?";
}

inline OracleKind ParseOracle(const std::string& s) {
  if (s == "br") return OracleKind::kBr;
  if (s == "pbr") return OracleKind::kPbr;
  if (s == "pbr_novelty_bound" || s == "novelty") return OracleKind::kPbrNoveltyBound;
  if (s == "rectified_br" || s == "rectified") return OracleKind::kRectifiedBr;
  throw InvalidInput("unknown oracle '" + s + "'");
}

struct OracleConfig {
  OracleKind kind = OracleKind::kBr;
  double beats_tolerance = 0.0;
};

template <class Strategy>
struct OracleEntry {
  Strategy strategy;
  double score = 0.0;
  int meta_sscc = -1;  // meta sink component responded to, if any
  bool duplicate = false;
};

// One entry list per population list.
template <class Strategy>
struct OracleOutput {
  std::vector<std::vector<OracleEntry<Strategy>>> per_list;
  std::vector<bool> converged;
  std::vector<std::string> diagnostics;

  bool AllConverged() const {
    for (bool c : converged) {
      if (!c) return false;
    }
    return true;
  }
};

namespace internal {

// Smallest index attaining the maximum, or -1 when the maximum is not
// positive and `need_positive` is set.
inline int ArgmaxMin(const std::vector<double>& v, bool need_positive,
                     const std::vector<char>* allowed = nullptr) {
  int best = -1;
  for (int i = 0; i < static_cast<int>(v.size()); ++i) {
    if (allowed && !(*allowed)[i]) continue;
    if (need_positive && !(v[i] > 0.0)) continue;
    if (best < 0 || v[i] > v[best]) best = i;
  }
  return best;
}

template <class S>
void AddEntry(std::vector<OracleEntry<S>>& out, OracleEntry<S> e) {
  for (const auto& o : out) {
    if (o.strategy == e.strategy) return;
  }
  out.push_back(std::move(e));
}

template <class S>
void FinishConverged(OracleOutput<S>& out) {
  out.converged.assign(out.per_list.size(), true);
  for (size_t i = 0; i < out.per_list.size(); ++i) {
    for (const auto& e : out.per_list[i]) {
      if (!e.duplicate) out.converged[i] = false;
    }
  }
}

}  // namespace internal

// ---------------------------------------------------------------------------
// Preference-based scores.

// score(sigma) = sum_i w_i 1[M^1(sigma, s_i) > M^2(sigma, s_i)] over the
// candidates sigma of a two-player game.
inline std::vector<double> SinglePopPbrScores(const NormalFormGame& game,
                                              const std::vector<int>& members,
                                              const std::vector<double>& weights,
                                              double beats_tol = 0.0) {
  if (game.num_players() != 2) {
    throw Unsupported("single-population scores need a two-player game");
  }
  std::vector<double> score(game.num_strategies(0), 0.0);
  for (size_t i = 0; i < members.size(); ++i) {
    if (weights[i] == 0.0) continue;
    for (int sigma = 0; sigma < game.num_strategies(0); ++sigma) {
      const Profile p{sigma, members[i]};
      if (game.payoff(0, p) - game.payoff(1, p) > beats_tol) {
        score[sigma] += weights[i];
      }
    }
  }
  return score;
}

// score(sigma) = sum_f w_f 1[M^k(sigma, s_f^{-k}) > M^k(s_f)] where f ranges
// over `meta_profiles` (flat indices into the meta-game) with weights w.
inline std::vector<double> MultiPopPbrScores(
    const NormalFormGame& game, const NfgPopulation& pop, int k,
    const std::vector<int64_t>& meta_profiles,
    const std::vector<double>& weights, double beats_tol = 0.0) {
  Shape meta_shape(pop.MetaCounts());
  std::vector<double> score(game.num_strategies(k), 0.0);
  for (size_t i = 0; i < meta_profiles.size(); ++i) {
    if (weights[i] == 0.0) continue;
    const Profile s = LiftProfile(pop, meta_shape.Unravel(meta_profiles[i]));
    const int64_t flat = game.shape().Ravel(s);
    const double cur = game.payoff(k, flat);
    for (int sigma = 0; sigma < game.num_strategies(k); ++sigma) {
      if (game.payoff(k, game.shape().Replace(flat, k, sigma)) - cur > beats_tol) {
        score[sigma] += weights[i];
      }
    }
  }
  return score;
}

// Meta sink components paired with their (unrenormalized) weights. Without
// a joint distribution, the whole meta-game forms one component weighted by
// the product of marginals.
struct WeightedComponent {
  std::vector<int64_t> profiles;
  std::vector<double> weights;
};

inline std::vector<WeightedComponent> MetaComponents(const NfgPopulation& pop,
                                                     const MetaDistribution& d) {
  std::vector<WeightedComponent> out;
  if (d.graph && !d.joint.empty()) {
    for (const auto& comp : d.graph->SinkComponents()) {
      WeightedComponent c;
      for (int v : comp) {
        c.profiles.push_back(v);
        c.weights.push_back(d.joint[v]);
      }
      out.push_back(std::move(c));
    }
    return out;
  }
  Shape shape(pop.MetaCounts());
  WeightedComponent c;
  Profile m(pop.num_players(), 0);
  int64_t flat = 0;
  do {
    double w = 1.0;
    for (int k = 0; k < pop.num_players(); ++k) w *= d.Marginal(k)[m[k]];
    c.profiles.push_back(flat++);
    c.weights.push_back(w);
  } while (shape.Next(m));
  out.push_back(std::move(c));
  return out;
}

// Total preference score of every candidate for player k, summed over meta
// sink components (single population: against the full distribution).
inline std::vector<double> PbrScores(const NormalFormGame& game,
                                     const NfgPopulation& pop,
                                     const MetaDistribution& d, int k,
                                     double beats_tol = 0.0) {
  if (pop.mode() == PopulationMode::kSingle) {
    return SinglePopPbrScores(game, pop.list(0), d.Marginal(0), beats_tol);
  }
  std::vector<double> total(game.num_strategies(k), 0.0);
  for (const auto& c : MetaComponents(pop, d)) {
    const auto s = MultiPopPbrScores(game, pop, k, c.profiles, c.weights, beats_tol);
    for (size_t i = 0; i < s.size(); ++i) total[i] += s[i];
  }
  return total;
}

// ---------------------------------------------------------------------------
// Normal-form oracles.

namespace internal {

inline void CheckNfgInputs(const NormalFormGame& game, const NfgPopulation& pop,
                           const MetaDistribution& d) {
  if (pop.num_players() != game.num_players()) {
    throw InvalidInput("population and game disagree on player count");
  }
  for (int i = 0; i < pop.num_lists(); ++i) {
    if (pop.list(i).empty()) throw InvalidInput("empty population");
  }
  if (static_cast<int>(d.per_player.size()) != pop.num_lists()) {
    throw InvalidInput("meta-distribution does not match the population");
  }
}

// Best response of seat k to per-seat mixtures over underlying strategies.
inline OracleEntry<int> NfgBestResponse(const NormalFormGame& game,
                                        const MixedProfile& lifted, int k) {
  const auto payoffs = DeviationPayoffs(game, lifted, k);
  const int best = ArgmaxMin(payoffs, false);
  return {best, payoffs[best], -1, false};
}

}  // namespace internal

inline OracleOutput<int> NfgBrOracle(const NormalFormGame& game,
                                     const NfgPopulation& pop,
                                     const MetaDistribution& d) {
  internal::CheckNfgInputs(game, pop, d);
  const MixedProfile lifted = LiftMixed(game, pop, d.Profile(game.num_players()));
  OracleOutput<int> out;
  out.per_list.resize(pop.num_lists());
  for (int i = 0; i < pop.num_lists(); ++i) {
    OracleEntry<int> e = internal::NfgBestResponse(game, lifted, i);
    e.duplicate = Contains(pop.list(i), e.strategy);
    out.per_list[i].push_back(e);
  }
  internal::FinishConverged(out);
  return out;
}

// Preference-based best response. A list whose best score is zero gets no
// strategy. With novelty_bound, only strategies outside the population with a
// positive score are eligible.
inline OracleOutput<int> NfgPbrOracle(const NormalFormGame& game,
                                      const NfgPopulation& pop,
                                      const MetaDistribution& d,
                                      bool novelty_bound,
                                      double beats_tol = 0.0) {
  internal::CheckNfgInputs(game, pop, d);
  OracleOutput<int> out;
  out.per_list.resize(pop.num_lists());
  auto select = [&](int list, const std::vector<double>& score, int comp) {
    std::vector<char> allowed(score.size(), 1);
    if (novelty_bound) {
      for (int s : pop.list(list)) allowed[s] = 0;
    }
    const int best = internal::ArgmaxMin(score, true, &allowed);
    if (best < 0) return;
    internal::AddEntry(out.per_list[list],
                       OracleEntry<int>{best, score[best], comp,
                                        Contains(pop.list(list), best)});
  };
  if (pop.mode() == PopulationMode::kSingle) {
    select(0, SinglePopPbrScores(game, pop.list(0), d.Marginal(0), beats_tol), -1);
  } else {
    const auto comps = MetaComponents(pop, d);
    for (size_t c = 0; c < comps.size(); ++c) {
      for (int k = 0; k < game.num_players(); ++k) {
        select(k,
               MultiPopPbrScores(game, pop, k, comps[c].profiles,
                                 comps[c].weights, beats_tol),
               static_cast<int>(c));
      }
    }
  }
  internal::FinishConverged(out);
  return out;
}

// For each population strategy with positive weight, a best response to the
// opponent mixture restricted to the opponent strategies it beats or ties.
// `meta` is the population's meta-game. Two players only.
inline OracleOutput<int> NfgRectifiedOracle(const NormalFormGame& game,
                                            const NfgPopulation& pop,
                                            const NormalFormGame& meta,
                                            const MetaDistribution& d,
                                            double beats_tol = 0.0);

// ---------------------------------------------------------------------------
// Rectified opponent weights (shared by both domains).

namespace internal {

// Weights over the opponent list for meta strategy i of seat k: the meta
// mixture restricted to opponents that i beats or ties. If all restricted
// weight is zero but the set is nonempty, uniform over the set. Empty
// vector when i beats nothing; callers then fall back to the full mixture
// (skipping i would freeze a seat whose only policy loses, e.g. the second
// Kuhn seat at the uniform start).
inline std::vector<double> RectifiedWeights(const NormalFormGame& meta, int k,
                                            int i,
                                            const std::vector<double>& opp,
                                            double beats_tol) {
  const int other = 1 - k;
  const int n = meta.num_strategies(other);
  std::vector<double> w(n, 0.0);
  std::vector<int> beaten;
  for (int j = 0; j < n; ++j) {
    Profile p(2);
    p[k] = i;
    p[other] = j;
    if (meta.payoff(k, p) >= -beats_tol) beaten.push_back(j);
  }
  if (beaten.empty()) return {};
  double total = 0.0;
  for (int j : beaten) total += opp[j];
  if (total > 0.0) {
    for (int j : beaten) w[j] = opp[j] / total;
  } else {
    for (int j : beaten) w[j] = 1.0 / beaten.size();
  }
  return w;
}

}  // namespace internal

inline OracleOutput<int> NfgRectifiedOracle(const NormalFormGame& game,
                                            const NfgPopulation& pop,
                                            const NormalFormGame& meta,
                                            const MetaDistribution& d,
                                            double beats_tol) {
  internal::CheckNfgInputs(game, pop, d);
  if (game.num_players() != 2) {
    throw Unsupported("rectified best response needs a two-player game");
  }
  OracleOutput<int> out;
  out.per_list.resize(pop.num_lists());
  for (int list = 0; list < pop.num_lists(); ++list) {
    const int k = list;
    const int other = 1 - k;
    const auto& mine = d.Marginal(k);
    for (int i = 0; i < pop.size(k); ++i) {
      if (!(mine[i] > 0.0)) continue;
      auto w = internal::RectifiedWeights(meta, k, i, d.Marginal(other),
                                          beats_tol);
      if (w.empty()) {
        out.diagnostics.push_back("seat " + std::to_string(k) + " strategy " +
                                  std::to_string(pop.members(k)[i]) +
                                  " beats nothing; using the full mixture");
        w = d.Marginal(other);
      }
      MixedProfile meta_profile(2);
      meta_profile[k] = mine;
      meta_profile[other] = w;
      const MixedProfile lifted = LiftMixed(game, pop, meta_profile);
      OracleEntry<int> e = internal::NfgBestResponse(game, lifted, k);
      e.duplicate = Contains(pop.list(list), e.strategy);
      internal::AddEntry(out.per_list[list], e);
    }
  }
  internal::FinishConverged(out);
  return out;
}

inline OracleOutput<int> RunNfgOracle(const NormalFormGame& game,
                                      const NfgPopulation& pop,
                                      const NormalFormGame& meta,
                                      const MetaDistribution& d,
                                      const OracleConfig& cfg) {
  if (!(cfg.beats_tolerance >= 0.0)) {
    throw InvalidInput("beats_tolerance must be nonnegative");
  }
  switch (cfg.kind) {
    case OracleKind::kBr:
      return NfgBrOracle(game, pop, d);
    case OracleKind::kPbr:
      return NfgPbrOracle(game, pop, d, false, cfg.beats_tolerance);
    case OracleKind::kPbrNoveltyBound:
      return NfgPbrOracle(game, pop, d, true, cfg.beats_tolerance);
    case OracleKind::kRectifiedBr:
      return NfgRectifiedOracle(game, pop, meta, d, cfg.beats_tolerance);
  }
  throw InvalidInput("unknown oracle");
}

// ---------------------------------------------------------------------------
// Kuhn poker oracles.

using PokerPopulation = Population<kuhn::BehavioralPolicy>;

inline bool ContainsPolicy(const std::vector<kuhn::BehavioralPolicy>& list,
                           const kuhn::BehavioralPolicy& p) {
  for (const auto& q : list) {
    if (kuhn::PolicyEqual(p, q)) return true;
  }
  return false;
}

namespace internal {

inline std::vector<double> SeatMixtureReach(const kuhn::KuhnGame& tree,
                                            const PokerPopulation& pop, int j,
                                            const std::vector<double>& w) {
  std::vector<const kuhn::BehavioralPolicy*> ptrs;
  for (const auto& p : pop.members(j)) ptrs.push_back(&p);
  return kuhn::MixtureReach(tree, ptrs, w);
}

}  // namespace internal

// Exact best response of seat k when every other seat samples a population
// policy per episode from its marginal.
inline kuhn::BestResponseResult PokerBestResponse(const kuhn::KuhnGame& tree,
                                                  const PokerPopulation& pop,
                                                  const MixedProfile& weights,
                                                  int k) {
  std::vector<std::vector<double>> reach(tree.num_players());
  for (int j = 0; j < tree.num_players(); ++j) {
    if (j != k) reach[j] = internal::SeatMixtureReach(tree, pop, j, weights[j]);
  }
  return kuhn::BestResponseFromReach(tree, k, reach);
}

inline OracleOutput<kuhn::BehavioralPolicy> RunPokerOracle(
    const kuhn::KuhnGame& tree, const PokerPopulation& pop,
    const NormalFormGame& meta, const MetaDistribution& d,
    const OracleConfig& cfg) {
  if (pop.mode() != PopulationMode::kMulti) {
    throw Unsupported("poker populations are per seat");
  }
  const int n = tree.num_players();
  const MixedProfile marg = d.Profile(n);
  OracleOutput<kuhn::BehavioralPolicy> out;
  out.per_list.resize(n);
  auto add = [&](int k, kuhn::BestResponseResult br) {
    const bool dup = ContainsPolicy(pop.members(k), br.policy);
    internal::AddEntry(out.per_list[k],
                       OracleEntry<kuhn::BehavioralPolicy>{std::move(br.policy),
                                                           br.value, -1, dup});
  };
  switch (cfg.kind) {
    case OracleKind::kBr:
      for (int k = 0; k < n; ++k) add(k, PokerBestResponse(tree, pop, marg, k));
      break;
    case OracleKind::kRectifiedBr:
      if (n != 2) throw Unsupported("rectified best response needs two players");
      for (int k = 0; k < n; ++k) {
        for (int i = 0; i < pop.size(k); ++i) {
          if (!(marg[k][i] > 0.0)) continue;
          auto w = internal::RectifiedWeights(meta, k, i, marg[1 - k],
                                              cfg.beats_tolerance);
          if (w.empty()) {
            out.diagnostics.push_back("seat " + std::to_string(k) + " policy " +
                                      std::to_string(i) +
                                      " beats nothing; using the full mixture");
            w = marg[1 - k];
          }
          MixedProfile restricted = marg;
          restricted[1 - k] = std::move(w);
          add(k, PokerBestResponse(tree, pop, restricted, k));
        }
      }
      break;
    default:
      throw Unsupported(std::string("oracle ") + OracleName(cfg.kind) +
                        " is only available for normal-form games");
  }
  internal::FinishConverged(out);
  return out;
}

}  // namespace psro

#endif  // PSRO_ORACLES_H_

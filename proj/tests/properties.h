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

// Randomized checks of the convergence and compatibility guarantees. Each
// returns a tally of cases and violations so unit tests can run small
// batches and the acceptance binary the full ones.

#ifndef PSRO_TESTS_PROPERTIES_H_
#define PSRO_TESTS_PROPERTIES_H_

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "psro/game.h"
#include "psro/meta_solvers.h"
#include "psro/oracles.h"
#include "psro/population.h"
#include "psro/psro.h"
#include "psro/response_graph.h"
#include "reference.h"

namespace psro::properties {

struct Tally {
  int cases = 0;
  int violations = 0;
  int numerical_failures = 0;
  std::string first_violation;

  void Violation(const std::string& what) {
    if (violations++ == 0) first_violation = what;
  }
  bool ok() const { return violations == 0 && numerical_failures == 0; }
  std::string Summary() const {
    std::ostringstream s;
    s << violations << "/" << cases << " violations";
    if (numerical_failures) s << ", " << numerical_failures << " numerical failures";
    if (!first_violation.empty()) s << " (first: " << first_violation << ")";
    return s.str();
  }
};

// Wide alpha grid; near-ties need alpha well past 1e4 to settle.
inline PsroConfig AlphaPsroConfig(OracleKind oracle) {
  PsroConfig cfg;
  cfg.solver.kind = MetaSolverKind::kAlphaRank;
  cfg.solver.alpharank.policy.alpha_max = 1e8;
  cfg.solver.alpharank.policy.grid_points = 33;
  cfg.oracle.kind = oracle;
  cfg.max_iterations = 500;
  return cfg;
}

inline int Uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline std::vector<double> RandomWeights(int n, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(n);
  double total = 0;
  for (double& x : w) total += (x = e(rng));
  for (double& x : w) x /= total;
  return w;
}

inline std::vector<int> RandomSubset(int n, std::mt19937_64& rng) {
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(Uniform(rng, 1, n));
  std::sort(all.begin(), all.end());
  return all;
}

// Lifted underlying nodes of a meta-game node set.
inline std::set<int> LiftNodes(const NormalFormGame& g, const NfgPopulation& pop,
                               const std::vector<int>& meta_nodes) {
  std::set<int> out;
  Shape meta_shape(pop.MetaCounts());
  for (int v : meta_nodes) {
    if (pop.mode() == PopulationMode::kSingle) {
      out.insert(pop.list(0)[v]);
    } else {
      out.insert(static_cast<int>(
          g.shape().Ravel(LiftProfile(pop, meta_shape.Unravel(v)))));
    }
  }
  return out;
}

inline Psro<NfgDomain> RunAlphaPsro(const NormalFormGame& g, NfgPopulation init,
                                    OracleKind oracle) {
  Psro<NfgDomain> psro(NfgDomain{&g}, std::move(init), AlphaPsroConfig(oracle));
  psro.Run();
  return psro;
}

// Started on a member of a sink component, alpha-PSRO with PBR ends with a
// meta sink component inside that component that is a cycle, or the whole
// component when it is a single profile.
inline Tally PartialConvergence(int cases, uint64_t seed) {
  Tally t;
  std::mt19937_64 rng(seed);
  for (int c = 0; c < cases; ++c) {
    const int k = c % 2 ? 3 : 2;
    const int s = k == 2 ? Uniform(rng, 3, 8) : Uniform(rng, 2, 5);
    const NormalFormGame g = GenerateRandomGame(s, k, DeriveSeed(seed, c));
    const auto sinks = reference::SinkComponents(g, PopulationMode::kMulti);
    std::vector<std::set<int>> comps(sinks.begin(), sinks.end());
    const auto& target = comps[Uniform(rng, 0, static_cast<int>(comps.size()) - 1)];
    auto it = target.begin();
    std::advance(it, Uniform(rng, 0, static_cast<int>(target.size()) - 1));
    const Profile start = g.shape().Unravel(*it);
    std::vector<std::vector<int>> lists;
    for (int p : start) lists.push_back({p});
    ++t.cases;
    try {
      auto psro = RunAlphaPsro(g, NfgPopulation(PopulationMode::kMulti, k, lists),
                               OracleKind::kPbr);
      if (!psro.converged()) {
        t.Violation("game " + std::to_string(c) + " did not terminate");
        continue;
      }
      bool found = false;
      for (const auto& mc : psro.last_distribution().graph->SinkComponents()) {
        const auto lifted = LiftNodes(g, psro.population(), mc);
        const bool inside = std::includes(target.begin(), target.end(),
                                          lifted.begin(), lifted.end());
        if (inside && (mc.size() >= 2 || target.size() == 1)) found = true;
      }
      if (!found) t.Violation("game " + std::to_string(c));
    } catch (const NumericalFailure&) {
      ++t.numerical_failures;
    }
  }
  return t;
}

// With the novelty-bound oracle, the final population contains every
// profile of at least one sink component.
inline Tally NoveltyBoundFullConvergence(int cases, uint64_t seed) {
  Tally t;
  std::mt19937_64 rng(seed);
  for (int c = 0; c < cases; ++c) {
    const int k = c % 2 ? 3 : 2;
    const int s = k == 2 ? Uniform(rng, 3, 8) : Uniform(rng, 2, 5);
    const NormalFormGame g = GenerateRandomGame(s, k, DeriveSeed(seed, c));
    ++t.cases;
    try {
      auto psro = RunAlphaPsro(
          g, InitialNfgPopulation(g, PopulationMode::kMulti, DeriveSeed(seed, c + 1000000)),
          OracleKind::kPbrNoveltyBound);
      if (!psro.converged()) {
        t.Violation("game " + std::to_string(c) + " did not terminate");
        continue;
      }
      const auto& pop = psro.population();
      bool found = false;
      for (const auto& comp : reference::SinkComponents(g, PopulationMode::kMulti)) {
        bool all = true;
        for (int v : comp) {
          const Profile p = g.shape().Unravel(v);
          for (int j = 0; j < k && all; ++j) all = Contains(pop.list(j), p[j]);
        }
        found = found || all;
      }
      if (!found) t.Violation("game " + std::to_string(c));
    } catch (const NumericalFailure&) {
      ++t.numerical_failures;
    }
  }
  return t;
}

// Single population on random symmetric games: alpha-PSRO ends with a
// population that meets the unique sink component.
inline Tally SinglePopulationConvergence(int cases, uint64_t seed) {
  Tally t;
  std::mt19937_64 rng(seed);
  for (int c = 0; c < cases; ++c) {
    const NormalFormGame g = reference::RandomSymmetricGame(Uniform(rng, 3, 10), rng);
    const auto sink = reference::SinkNodes(g, PopulationMode::kSingle);
    ++t.cases;
    try {
      auto psro = RunAlphaPsro(
          g, InitialNfgPopulation(g, PopulationMode::kSingle, DeriveSeed(seed, c)),
          OracleKind::kPbr);
      bool meets = false;
      for (int s : psro.population().list(0)) meets = meets || sink.count(s);
      if (!psro.converged() || !meets) t.Violation("game " + std::to_string(c));
    } catch (const NumericalFailure&) {
      ++t.numerical_failures;
    }
  }
  return t;
}

// Every maximizer of sum_i w_i M^1(sigma, s_i) is in the PBR argmax, or with
// `every` false, at least one is.
inline bool BrInsidePbr(const NormalFormGame& g, const std::vector<int>& members,
                        const std::vector<double>& w, bool every = true) {
  const int n = g.num_strategies(0);
  std::vector<double> value(n, 0.0);
  for (int s = 0; s < n; ++s) {
    for (size_t i = 0; i < members.size(); ++i) value[s] += w[i] * g.payoff(0, {s, members[i]});
  }
  const auto score = SinglePopPbrScores(g, members, w);
  const double best_v = *std::max_element(value.begin(), value.end());
  const double best_s = *std::max_element(score.begin(), score.end());
  bool all = true, any = false;
  for (int s = 0; s < n; ++s) {
    if (value[s] < best_v - 1e-12) continue;
    const bool in = score[s] >= best_s - 1e-12;
    all = all && in;
    any = any || in;
  }
  return every ? all : any;
}

// Two-player win-loss games (M^1 in {0,1}, M^2 = 1 - M^1).
inline Tally WinLossCompatibility(int cases, uint64_t seed) {
  Tally t;
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  for (int c = 0; c < cases; ++c) {
    const int n = Uniform(rng, 2, 10);
    reference::Matrix m1(n, std::vector<double>(n)), m2 = m1;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        m1[i][j] = coin(rng) ? 1.0 : 0.0;
        m2[i][j] = 1.0 - m1[i][j];
      }
    }
    const NormalFormGame g = MakeBimatrixGame(m1, m2);
    const auto members = RandomSubset(n, rng);
    const auto w = RandomWeights(static_cast<int>(members.size()), rng);
    ++t.cases;
    if (!BrInsidePbr(g, members, w)) t.Violation("game " + std::to_string(c));
  }
  return t;
}

// Monotonic games M^1(s, v) = sigma(f(s) - f(v)) with integer f in [0, 4]
// and a non-decreasing step function sigma whose increments are drawn from
// {0, 1, 2}, so plateaus occur; {1, 2} with `strict`. `strict_violations`
// counts violations on games whose sigma came out strictly increasing.
inline Tally MonotonicCompatibility(int cases, uint64_t seed,
                                    int* strict_cases = nullptr,
                                    int* strict_violations = nullptr,
                                    bool strict_sigma = false, bool every = true) {
  Tally t;
  std::mt19937_64 rng(seed);
  int sc = 0, sv = 0;
  for (int c = 0; c < cases; ++c) {
    const int n = Uniform(rng, 2, 10);
    std::vector<int> f(n);
    for (int& x : f) x = Uniform(rng, 0, 4);
    std::vector<double> sigma(9);  // d = -4..4
    double level = -4.0;
    bool strict = true;
    for (double& x : sigma) {
      const int inc = Uniform(rng, strict_sigma ? 1 : 0, 2);
      strict = strict && inc > 0;
      x = (level += inc);
    }
    reference::Matrix m(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m[i][j] = sigma[f[i] - f[j] + 4];
    }
    const NormalFormGame g = MakeSymmetricGame(m);
    const auto members = RandomSubset(n, rng);
    const auto w = RandomWeights(static_cast<int>(members.size()), rng);
    ++t.cases;
    sc += strict;
    if (!BrInsidePbr(g, members, w, every)) {
      t.Violation("game " + std::to_string(c) + (strict ? " (strict sigma)" : ""));
      sv += strict;
    }
  }
  if (strict_cases) *strict_cases = sc;
  if (strict_violations) *strict_violations = sv;
  return t;
}

inline bool SupportInside(const std::vector<double>& x, const std::set<int>& s) {
  for (int i = 0; i < static_cast<int>(x.size()); ++i) {
    if (x[i] > 1e-9 && !s.count(i)) return false;
  }
  return true;
}

inline std::set<int> AlphaRankSupport(const NormalFormGame& g) {
  const auto r = AlphaRank(g, PopulationMode::kSingle);
  return std::set<int>(r.support.begin(), r.support.end());
}

// Symmetric zero-sum games with +-1 off-diagonal payoffs: every equilibrium
// found by support enumeration lives inside the alpha-Rank support.
inline Tally EqualMagnitudeNashInsideAlphaRank(int cases, uint64_t seed) {
  Tally t;
  std::mt19937_64 rng(seed);
  for (int c = 0; c < cases; ++c) {
    const NormalFormGame g =
        reference::RandomSymmetricZeroSum(Uniform(rng, 2, 5), true, rng);
    ++t.cases;
    try {
      const auto support = AlphaRankSupport(g);
      const auto all = EnumerateSupportNash(g, 5);
      if (all.empty()) t.Violation("game " + std::to_string(c) + ": no equilibrium");
      for (const auto& ne : all) {
        if (!SupportInside(ne[0], support) || !SupportInside(ne[1], support)) {
          t.Violation("game " + std::to_string(c));
          break;
        }
      }
    } catch (const NumericalFailure&) {
      ++t.numerical_failures;
    }
  }
  return t;
}

// Symmetric zero-sum games with Gaussian payoffs: some equilibrium lives
// inside the alpha-Rank support.
inline Tally SomeNashInsideAlphaRank(int cases, uint64_t seed) {
  Tally t;
  std::mt19937_64 rng(seed);
  for (int c = 0; c < cases; ++c) {
    const NormalFormGame g =
        reference::RandomSymmetricZeroSum(Uniform(rng, 2, 5), false, rng);
    ++t.cases;
    try {
      const auto support = AlphaRankSupport(g);
      bool found = false;
      for (const auto& ne : EnumerateSupportNash(g, 5)) {
        found = found || (SupportInside(ne[0], support) && SupportInside(ne[1], support));
      }
      if (!found) t.Violation("game " + std::to_string(c));
    } catch (const NumericalFailure&) {
      ++t.numerical_failures;
    }
  }
  return t;
}

}  // namespace psro::properties

#endif  // PSRO_TESTS_PROPERTIES_H_

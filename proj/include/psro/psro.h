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

// The PSRO loop: complete the meta-game, solve it, expand the population.

#ifndef PSRO_PSRO_H_
#define PSRO_PSRO_H_

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "psro/errors.h"
#include "psro/game.h"
#include "psro/kuhn.h"
#include "psro/meta_solvers.h"
#include "psro/oracles.h"
#include "psro/population.h"
#include "psro/response_graph.h"
#include "psro/rng.h"

namespace psro {

// Underlying normal-form game.
struct NfgDomain {
  using Strategy = int;
  const NormalFormGame* game = nullptr;

  int num_players() const { return game->num_players(); }
  std::vector<double> Evaluate(const std::vector<int>& profile) const {
    const int64_t f = game->shape().Ravel(profile);
    std::vector<double> u(game->num_players());
    for (int k = 0; k < game->num_players(); ++k) u[k] = game->payoff(k, f);
    return u;
  }
  OracleOutput<int> Oracle(const Population<int>& pop, const NormalFormGame& meta,
                           const MetaDistribution& d,
                           const OracleConfig& cfg) const {
    return RunNfgOracle(*game, pop, meta, d, cfg);
  }
  std::string Describe(int list, int s) const { return game->Label(list, s); }
};

// Kuhn poker; meta-game entries from exact traversal, or the mean of
// `episodes` seeded simulations when episodes > 0.
struct PokerDomain {
  using Strategy = kuhn::BehavioralPolicy;
  const kuhn::KuhnGame* tree = nullptr;
  int64_t episodes = 0;
  uint64_t seed = 0;

  int num_players() const { return tree->num_players(); }
  std::vector<double> Evaluate(
      const std::vector<kuhn::BehavioralPolicy>& joint) const {
    if (episodes > 0) {
      // One stream per evaluated entry, derived from the policies' contents
      // so results do not depend on evaluation order.
      uint64_t h = seed;
      for (const auto& p : joint) {
        for (const auto& a : p.probs) {
          h = SplitMix64(h ^ static_cast<uint64_t>(a[1] * 9007199254740992.0));
        }
      }
      return kuhn::Simulate(*tree, joint, episodes, h);
    }
    return kuhn::ExactExpectedPayoffs(*tree, joint);
  }
  OracleOutput<kuhn::BehavioralPolicy> Oracle(const PokerPopulation& pop,
                                              const NormalFormGame& meta,
                                              const MetaDistribution& d,
                                              const OracleConfig& cfg) const {
    return RunPokerOracle(*tree, pop, meta, d, cfg);
  }
  std::string Describe(int, const kuhn::BehavioralPolicy&) const {
    return "policy";
  }
};

struct PsroConfig {
  MetaSolverConfig solver;
  OracleConfig oracle;
  int max_iterations = 100;
  // Keep iterating (without growth) after the oracle stops adding.
  bool continue_after_convergence = false;
  bool allow_duplicates = false;
};

struct IterationRecord {
  int iteration = 0;
  int total_pool_length = 0;  // when the meta-game was solved
  std::vector<int> pool_sizes;
  std::vector<std::vector<double>> meta_distribution;
  double alpha_used = std::numeric_limits<double>::quiet_NaN();
  double solver_residual = 0.0;
  std::vector<std::vector<std::string>> added;  // per list, newly appended
  std::vector<std::vector<double>> added_scores;
  bool converged = false;
  int64_t entries_evaluated = 0;
  std::map<std::string, double> metrics;
  std::vector<std::string> diagnostics;
  double wall_clock_s = 0.0;
};

template <class Domain>
class Psro {
 public:
  using Strategy = typename Domain::Strategy;
  // Hook run after each solve, before expansion; fills record.metrics.
  using MetricHook = std::function<void(const Psro&, const MetaDistribution&,
                                        IterationRecord&)>;

  Psro(Domain domain, Population<Strategy> initial, PsroConfig cfg)
      : domain_(std::move(domain)), pop_(std::move(initial)), cfg_(std::move(cfg)) {
    cfg_.solver.Validate();
    if (pop_.num_players() != domain_.num_players()) {
      throw InvalidInput("population and game disagree on player count");
    }
    cfg_.solver.mode = pop_.mode();
    for (int i = 0; i < pop_.num_lists(); ++i) {
      for (int a = 0; a < static_cast<int>(pop_.list(i).size()); ++a) {
        for (int b = 0; b < a; ++b) {
          if (!cfg_.allow_duplicates && pop_.list(i)[a] == pop_.list(i)[b]) {
            throw InvalidInput("initial population contains duplicates");
          }
        }
      }
    }
  }

  void set_metric_hook(MetricHook hook) { hook_ = std::move(hook); }
  const Population<Strategy>& population() const { return pop_; }
  const Domain& domain() const { return domain_; }
  const PsroConfig& config() const { return cfg_; }
  bool converged() const { return converged_; }
  int iteration() const { return iteration_; }

  // Fills in meta-game entries not evaluated yet; returns how many profiles
  // were evaluated.
  int64_t Complete() {
    const std::vector<int> counts = pop_.MetaCounts();
    if (counts == counts_) return 0;
    const int n = domain_.num_players();
    Shape shape(counts);
    std::vector<std::vector<double>> payoffs(n, std::vector<double>(shape.size()));
    std::vector<char> done(shape.size(), 0);
    int64_t evaluated = 0;
    Profile m(n, 0);
    int64_t flat = 0;
    do {
      bool old = !counts_.empty();
      for (int k = 0; old && k < n; ++k) old = m[k] < counts_[k];
      if (old) {
        const int64_t of = Shape(counts_).Ravel(m);
        for (int k = 0; k < n; ++k) payoffs[k][flat] = meta_.payoff(k, of);
      } else {
        std::vector<Strategy> joint;
        for (int k = 0; k < n; ++k) joint.push_back(pop_.members(k)[m[k]]);
        const auto u = domain_.Evaluate(joint);
        for (int k = 0; k < n; ++k) payoffs[k][flat] = u[k];
        ++evaluated;
      }
      done[flat] = 1;
      ++flat;
    } while (shape.Next(m));
    meta_ = NormalFormGame(counts, std::move(payoffs));
    mask_ = std::move(done);
    counts_ = counts;
    return evaluated;
  }

  const NormalFormGame& meta_game() const { return meta_; }
  const std::vector<char>& completion_mask() const { return mask_; }

  // One complete/solve/expand iteration.
  IterationRecord Step() {
    const auto start = std::chrono::steady_clock::now();
    IterationRecord rec;
    rec.iteration = ++iteration_;
    rec.entries_evaluated = Complete();
    rec.total_pool_length = pop_.total_pool_length();
    for (int i = 0; i < pop_.num_lists(); ++i) {
      rec.pool_sizes.push_back(static_cast<int>(pop_.list(i).size()));
    }
    last_ = SolveMeta(meta_, cfg_.solver);
    rec.meta_distribution = last_.per_player;
    rec.alpha_used = last_.alpha_used;
    rec.solver_residual = last_.residual;
    if (hook_) hook_(*this, last_, rec);
    auto out = domain_.Oracle(pop_, meta_, last_, cfg_.oracle);
    rec.diagnostics = out.diagnostics;
    rec.added.resize(pop_.num_lists());
    rec.added_scores.resize(pop_.num_lists());
    for (int i = 0; i < pop_.num_lists(); ++i) {
      for (auto& e : out.per_list[i]) {
        if (e.duplicate && !cfg_.allow_duplicates) continue;
        rec.added[i].push_back(domain_.Describe(i, e.strategy));
        rec.added_scores[i].push_back(e.score);
        pop_.Append(i, std::move(e.strategy));
      }
    }
    converged_ = out.AllConverged();
    rec.converged = converged_;
    rec.wall_clock_s = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start)
                           .count();
    return rec;
  }

  const MetaDistribution& last_distribution() const { return last_; }

  std::vector<IterationRecord> Run() {
    std::vector<IterationRecord> trace;
    for (int it = 0; it < cfg_.max_iterations; ++it) {
      trace.push_back(Step());
      if (converged_ && !cfg_.continue_after_convergence) break;
    }
    return trace;
  }

 private:
  Domain domain_;
  Population<Strategy> pop_;
  PsroConfig cfg_;
  MetricHook hook_;
  NormalFormGame meta_;
  std::vector<int> counts_;
  std::vector<char> mask_;
  MetaDistribution last_;
  bool converged_ = false;
  int iteration_ = 0;
};

// Initial populations.

// One seeded random pure strategy per list.
inline NfgPopulation InitialNfgPopulation(const NormalFormGame& game,
                                          PopulationMode mode, uint64_t seed) {
  if (mode == PopulationMode::kSingle) internal::RequireSinglePopulation(game);
  Rng rng(seed);
  const int lists = mode == PopulationMode::kSingle ? 1 : game.num_players();
  std::vector<std::vector<int>> l;
  for (int k = 0; k < lists; ++k) {
    l.push_back({static_cast<int>(rng.UniformInt(game.num_strategies(k)))});
  }
  return NfgPopulation(mode, game.num_players(), std::move(l));
}

inline PokerPopulation InitialPokerPopulation(const kuhn::KuhnGame& tree) {
  std::vector<std::vector<kuhn::BehavioralPolicy>> l;
  for (int k = 0; k < tree.num_players(); ++k) l.push_back({tree.UniformPolicy(k)});
  return PokerPopulation(PopulationMode::kMulti, tree.num_players(), std::move(l));
}

// Trace serialization.

// Wall-clock is left out unless asked for so traces stay byte-stable.
inline nlohmann::json RecordToJson(const IterationRecord& r,
                                   bool with_timing = false) {
  nlohmann::json j;
  j["iteration"] = r.iteration;
  j["total_pool_length"] = r.total_pool_length;
  j["pool_sizes"] = r.pool_sizes;
  j["meta_distribution"] = r.meta_distribution;
  if (std::isnan(r.alpha_used)) {
    j["alpha_used"] = nullptr;
  } else if (std::isinf(r.alpha_used)) {
    j["alpha_used"] = "infinite";
  } else {
    j["alpha_used"] = r.alpha_used;
  }
  j["solver_residual"] = r.solver_residual;
  j["added"] = r.added;
  j["added_scores"] = r.added_scores;
  j["converged"] = r.converged;
  j["entries_evaluated"] = r.entries_evaluated;
  j["metrics"] = r.metrics;
  j["diagnostics"] = r.diagnostics;
  if (with_timing) j["wall_clock_s"] = r.wall_clock_s;
  return j;
}

inline void WriteTraceJsonl(std::ostream& out,
                            const std::vector<IterationRecord>& trace,
                            bool with_timing = false) {
  for (const auto& r : trace) out << RecordToJson(r, with_timing).dump() << "\n";
}

inline std::string FormatNumber(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

// Flat CSV: iteration, total_pool_length, then the named metric columns.
inline void WriteTraceCsv(std::ostream& out,
                          const std::vector<IterationRecord>& trace,
                          const std::vector<std::string>& columns) {
  out << "iteration,total_pool_length";
  for (const auto& c : columns) out << "," << c;
  out << "\n";
  for (const auto& r : trace) {
    out << r.iteration << "," << r.total_pool_length;
    for (const auto& c : columns) {
      auto it = r.metrics.find(c);
      out << "," << (it == r.metrics.end() ? "" : FormatNumber(it->second));
    }
    out << "\n";
  }
}

}  // namespace psro

#endif  // PSRO_PSRO_H_

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

// Experiment runners behind psro_cli: oracle comparison on random games,
// Kuhn poker meta-solver comparison, fixture walkthroughs and a standalone
// alpha-Rank solve.

#ifndef PSRO_EXPERIMENTS_H_
#define PSRO_EXPERIMENTS_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "psro/errors.h"
#include "psro/game.h"
#include "psro/kuhn.h"
#include "psro/meta_solvers.h"
#include "psro/metrics.h"
#include "psro/oracles.h"
#include "psro/population.h"
#include "psro/psro.h"
#include "psro/response_graph.h"

namespace psro {

struct ExperimentConfig {
  // oracle_compare | poker_meta_solvers | fixture_walkthrough | alpharank_solve
  std::string experiment = "fixture_walkthrough";
  // random | transitive | cyclic | kuhn | <fixture name> | file:<path>
  std::string game = "random";
  int players = 2;
  int strategies = 10;
  std::string mode = "multi";
  std::string walkthrough = "example1";
  std::vector<std::string> meta_solvers = {"alpharank"};
  std::vector<std::string> oracles = {"br", "pbr"};
  int games = 100;
  int trials = 10;
  uint64_t seed = 0;
  int max_iterations = 1000;
  int max_pool_length = 0;  // 0 means no cap
  std::string out_dir = "out";
  std::string payoff_mode = "exact";  // exact | simulate:N
  std::string alpha_policy = "sweep";
  int m = 50;
  bool allow_duplicates = false;
  bool timing = false;

  bool operator==(const ExperimentConfig&) const = default;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(
    ExperimentConfig, experiment, game, players, strategies, mode, walkthrough,
    meta_solvers, oracles, games, trials, seed, max_iterations, max_pool_length,
    out_dir, payoff_mode, alpha_policy, m, allow_duplicates, timing)

inline nlohmann::json ConfigToJson(const ExperimentConfig& cfg) {
  return nlohmann::json(cfg);
}

inline ExperimentConfig ConfigFromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  const nlohmann::json known = ConfigToJson(ExperimentConfig{});
  for (const auto& item : j.items()) {
    if (!known.contains(item.key())) {
      throw InvalidInput("unknown config key: " + item.key());
    }
  }
  try {
    return j.get<ExperimentConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("bad config: ") + e.what());
  }
}

inline double ParseDouble(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidInput("bad " + what + ": " + s);
  }
}

// sweep | sweep:<alpha_max>:<points> | fixed:<alpha> | infinite
inline AlphaPolicy ParseAlphaPolicy(const std::string& s) {
  if (s == "sweep") return AlphaPolicy::Sweep();
  if (s == "infinite") return AlphaPolicy::Infinite();
  if (s.rfind("fixed:", 0) == 0) {
    const double a = ParseDouble(s.substr(6), "alpha");
    if (!(a >= 0) || !std::isfinite(a)) throw InvalidInput("alpha must be >= 0");
    return AlphaPolicy::Fixed(a);
  }
  if (s.rfind("sweep:", 0) == 0) {
    const auto rest = s.substr(6);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw InvalidInput("bad alpha policy: " + s);
    AlphaPolicy p = AlphaPolicy::Sweep();
    p.alpha_max = ParseDouble(rest.substr(0, colon), "alpha_max");
    p.grid_points = static_cast<int>(ParseDouble(rest.substr(colon + 1), "grid size"));
    if (!(p.alpha_max > p.alpha_min) || p.grid_points < 2) {
      throw InvalidInput("bad alpha sweep: " + s);
    }
    return p;
  }
  throw InvalidInput("bad alpha policy: " + s);
}

// Episodes per meta-game entry; 0 means exact evaluation.
inline int64_t ParsePayoffMode(const std::string& s) {
  if (s == "exact") return 0;
  if (s.rfind("simulate:", 0) == 0) {
    const double n = ParseDouble(s.substr(9), "episode count");
    if (!(n >= 1) || n != std::floor(n)) throw InvalidInput("episodes must be >= 1");
    return static_cast<int64_t>(n);
  }
  throw InvalidInput("bad payoff mode: " + s);
}

inline PopulationMode ParseMode(const std::string& s) {
  if (s == "single") return PopulationMode::kSingle;
  if (s == "multi") return PopulationMode::kMulti;
  throw InvalidInput("mode must be single or multi: " + s);
}

inline const std::vector<std::string>& WalkthroughNames() {
  static const std::vector<std::string> names = {"example1", "example2",
                                                 "example3", "snowflake"};
  return names;
}

// Solver entry for poker runs: a meta-solver name, or rectified_<solver>
// which swaps the oracle for the rectified one.
struct PokerSolverSpec {
  std::string name;
  MetaSolverKind solver = MetaSolverKind::kAlphaRank;
  bool rectified = false;
};

inline PokerSolverSpec ParsePokerSolver(const std::string& s) {
  PokerSolverSpec spec;
  spec.name = s;
  std::string base = s;
  if (s.rfind("rectified_", 0) == 0) {
    spec.rectified = true;
    base = s.substr(10);
    if (base == "nash") base = "nash_lp";
  }
  try {
    spec.solver = ParseMetaSolver(base);
  } catch (const InvalidInput&) {
    throw InvalidInput("unknown meta-solver: " + s);
  }
  return spec;
}

inline void ValidateConfig(const ExperimentConfig& c) {
  static const std::set<std::string> kinds = {
      "oracle_compare", "poker_meta_solvers", "fixture_walkthrough",
      "alpharank_solve"};
  if (!kinds.count(c.experiment)) {
    throw InvalidInput("unknown experiment: " + c.experiment);
  }
  if (c.players < 1) throw InvalidInput("players must be >= 1");
  if (c.strategies < 1) throw InvalidInput("strategies must be >= 1");
  if (c.games < 1 || c.trials < 1) throw InvalidInput("games and trials must be >= 1");
  if (c.max_iterations < 1) throw InvalidInput("max_iterations must be >= 1");
  if (c.max_pool_length < 0) throw InvalidInput("max_pool_length must be >= 0");
  if (c.m < 1) throw InvalidInput("m must be >= 1");
  if (c.meta_solvers.empty()) throw InvalidInput("no meta-solver given");
  ParseMode(c.mode);
  ParseAlphaPolicy(c.alpha_policy);
  ParsePayoffMode(c.payoff_mode);
  if (c.experiment == "fixture_walkthrough") {
    const auto& names = WalkthroughNames();
    if (std::find(names.begin(), names.end(), c.walkthrough) == names.end()) {
      throw InvalidInput("unknown walkthrough: " + c.walkthrough);
    }
  }
  if (c.experiment == "poker_meta_solvers") {
    if (c.game != "kuhn") throw InvalidInput("poker experiments need game=kuhn");
    if (c.players < 2 || c.players > 5) {
      throw InvalidInput("Kuhn poker supports 2 to 5 players");
    }
    for (const auto& s : c.meta_solvers) {
      const auto spec = ParsePokerSolver(s);
      const bool exact_nash = spec.solver == MetaSolverKind::kNashLp ||
                              spec.solver == MetaSolverKind::kNashSupportEnum;
      if (exact_nash && c.players > 2) {
        throw Unsupported("exact Nash meta-solver needs two players: " + s);
      }
      if (spec.rectified && c.players != 2) {
        throw Unsupported("rectified oracle needs two players: " + s);
      }
    }
    if (!c.oracles.empty()) {
      const auto o = ParseOracle(c.oracles[0]);
      if (o != OracleKind::kBr && o != OracleKind::kRectifiedBr) {
        throw Unsupported("poker runs support br and rectified_br only");
      }
    }
  }
  if (c.experiment == "oracle_compare") {
    if (c.oracles.empty()) throw InvalidInput("no oracle given");
    for (const auto& o : c.oracles) ParseOracle(o);
    ParseMetaSolver(c.meta_solvers[0]);
    if (c.game == "random" && (c.players < 2 || c.players > 5)) {
      throw InvalidInput("oracle comparison uses 2 to 5 players");
    }
  }
}

inline NormalFormGame MakeNfgGame(const ExperimentConfig& c, uint64_t seed) {
  if (c.game == "random") return GenerateRandomGame(c.strategies, c.players, seed);
  if (c.game == "transitive") {
    return GenerateTransitive(c.strategies, c.players, TransitiveParams{}, seed);
  }
  if (c.game == "cyclic") return GenerateCyclic(c.strategies, c.players, 0.4, seed);
  if (c.game.rfind("file:", 0) == 0) return ReadGameFile(c.game.substr(5));
  if (c.game == "kuhn") throw InvalidInput("kuhn is not a normal-form game");
  return FixtureGame(c.game);
}

inline MetaSolverConfig SolverFromConfig(const ExperimentConfig& c,
                                         MetaSolverKind kind) {
  MetaSolverConfig s;
  s.kind = kind;
  s.alpharank.policy = ParseAlphaPolicy(c.alpha_policy);
  s.alpharank.m = c.m;
  return s;
}

// ---------------------------------------------------------------------------
// Oracle comparison.

struct OracleCompareRun {
  int game = 0;
  int trial = 0;
  std::string oracle;
  bool failed = false;
  double alpha_conv = std::numeric_limits<double>::quiet_NaN();
  double pcs_score = std::numeric_limits<double>::quiet_NaN();
  int pool_length = 0;
  int iterations = 0;
};

struct OracleCompareSummary {
  std::string oracle;
  int runs = 0;
  int failed = 0;
  double mean_alpha_conv = 0.0;
  double pcs_mid_fraction = 0.0;  // PCS-Score in (0.05, 0.95)
  double mean_pool_length = 0.0;
};

struct OracleCompareResult {
  int players = 0;
  int strategies = 0;
  std::vector<OracleCompareRun> runs;
  std::vector<OracleCompareSummary> summary;
};

inline bool PcsInMidRange(double pcs) { return pcs > 0.05 && pcs < 0.95; }

// For every game and trial, runs PSRO(meta-solver, oracle) for each oracle
// from the same seeded starting profile. Runs whose alpha sweep fails are
// counted, not averaged.
inline OracleCompareResult RunOracleCompare(const ExperimentConfig& c) {
  ValidateConfig(c);
  const PopulationMode mode = ParseMode(c.mode);
  std::vector<OracleKind> oracles;
  for (const auto& o : c.oracles) oracles.push_back(ParseOracle(o));
  PsroConfig pc;
  pc.solver = SolverFromConfig(c, ParseMetaSolver(c.meta_solvers[0]));
  pc.max_iterations = c.max_iterations;

  OracleCompareResult out;
  out.players = c.players;
  out.strategies = c.strategies;
  for (int g = 0; g < c.games; ++g) {
    const uint64_t game_seed = DeriveSeed(c.seed, g);
    const NormalFormGame game = MakeNfgGame(c, game_seed);
    const ResponseGraph full = BuildResponseGraph(game, mode);
    for (int t = 0; t < c.trials; ++t) {
      const NfgPopulation init =
          InitialNfgPopulation(game, mode, DeriveSeed(game_seed, t + 1));
      for (OracleKind o : oracles) {
        OracleCompareRun run;
        run.game = g;
        run.trial = t;
        run.oracle = OracleName(o);
        PsroConfig cfg = pc;
        cfg.oracle.kind = o;
        Psro<NfgDomain> psro(NfgDomain{&game}, init, cfg);
        try {
          psro.Run();
          const auto& d = psro.last_distribution();
          run.alpha_conv = AlphaConv(game, psro.population(), d);
          run.pcs_score = d.graph ? PcsScore(game, full, psro.population(), *d.graph)
                                  : PcsScore(game, full, psro.population());
        } catch (const NumericalFailure&) {
          run.failed = true;
        }
        run.pool_length = psro.population().total_pool_length();
        run.iterations = psro.iteration();
        out.runs.push_back(run);
      }
    }
  }
  for (OracleKind o : oracles) {
    OracleCompareSummary s;
    s.oracle = OracleName(o);
    int ok = 0;
    int mid = 0;
    for (const auto& r : out.runs) {
      if (r.oracle != s.oracle) continue;
      ++s.runs;
      if (r.failed) {
        ++s.failed;
        continue;
      }
      ++ok;
      s.mean_alpha_conv += r.alpha_conv;
      s.mean_pool_length += r.pool_length;
      if (PcsInMidRange(r.pcs_score)) ++mid;
    }
    if (ok > 0) {
      s.mean_alpha_conv /= ok;
      s.mean_pool_length /= ok;
      s.pcs_mid_fraction = static_cast<double>(mid) / ok;
    }
    out.summary.push_back(s);
  }
  return out;
}

inline void WriteOracleCompareRunsCsv(std::ostream& out,
                                      const OracleCompareResult& r) {
  out << "players,strategies,game,trial,oracle,failed,alpha_conv,pcs_score,"
         "pool_length,iterations\n";
  for (const auto& x : r.runs) {
    out << r.players << "," << r.strategies << "," << x.game << "," << x.trial
        << "," << x.oracle << "," << (x.failed ? 1 : 0) << ","
        << FormatNumber(x.alpha_conv) << "," << FormatNumber(x.pcs_score) << ","
        << x.pool_length << "," << x.iterations << "\n";
  }
}

inline void WriteOracleCompareSummaryCsv(std::ostream& out,
                                         const OracleCompareResult& r) {
  out << "players,strategies,oracle,runs,failed,mean_alpha_conv,"
         "pcs_mid_fraction,mean_pool_length\n";
  for (const auto& s : r.summary) {
    out << r.players << "," << r.strategies << "," << s.oracle << "," << s.runs
        << "," << s.failed << "," << FormatNumber(s.mean_alpha_conv) << ","
        << FormatNumber(s.pcs_mid_fraction) << ","
        << FormatNumber(s.mean_pool_length) << "\n";
  }
}

// ---------------------------------------------------------------------------
// Kuhn poker meta-solver comparison.

struct PokerTrace {
  std::string solver;
  int players = 0;
  std::vector<IterationRecord> records;
};

inline std::vector<std::string> PokerColumns(int players) {
  std::vector<std::string> cols = {"nashconv", "diversity"};
  for (int k = 0; k < players; ++k) cols.push_back("diversity_" + std::to_string(k));
  return cols;
}

// One PSRO(solver, BR) run on K-player Kuhn poker, recording NashConv of the
// meta-distribution and policy diversity at every solve. With duplicates
// allowed the run keeps going after the oracle stops finding new policies.
inline PokerTrace RunPokerSolver(const ExperimentConfig& c,
                                 const std::string& solver) {
  ValidateConfig(c);
  const PokerSolverSpec spec = ParsePokerSolver(solver);
  kuhn::KuhnGame tree(c.players);
  PsroConfig pc;
  pc.solver = SolverFromConfig(c, spec.solver);
  pc.oracle.kind = spec.rectified ? OracleKind::kRectifiedBr
                   : c.oracles.empty() ? OracleKind::kBr
                                       : ParseOracle(c.oracles[0]);
  pc.max_iterations = c.max_iterations;
  pc.allow_duplicates = c.allow_duplicates;
  pc.continue_after_convergence = c.allow_duplicates;
  PokerDomain domain{&tree, ParsePayoffMode(c.payoff_mode), c.seed};
  Psro<PokerDomain> psro(domain, InitialPokerPopulation(tree), pc);
  const int n = c.players;
  psro.set_metric_hook([&tree, n](const Psro<PokerDomain>& p,
                                  const MetaDistribution& d, IterationRecord& r) {
    r.metrics["nashconv"] = PokerNashConv(tree, p.population(), d.Profile(n));
    const auto div = Diversity(p.population());
    int total = 0;
    for (int k = 0; k < static_cast<int>(div.size()); ++k) {
      r.metrics["diversity_" + std::to_string(k)] = div[k];
      total += div[k];
    }
    r.metrics["diversity"] = total;
  });
  PokerTrace trace;
  trace.solver = solver;
  trace.players = n;
  for (int it = 0; it < c.max_iterations; ++it) {
    if (c.max_pool_length > 0 &&
        psro.population().total_pool_length() > c.max_pool_length) {
      break;
    }
    trace.records.push_back(psro.Step());
    if (psro.converged() && !pc.continue_after_convergence) break;
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Fixture walkthroughs: replay a worked example step by step and compare
// against the expected trace.

struct WalkthroughResult {
  std::string name;
  std::vector<nlohmann::json> steps;
  std::vector<std::string> mismatches;
  bool ok() const { return mismatches.empty(); }
};

namespace internal {

inline int StrategyIndex(const NormalFormGame& g, int k, const std::string& label) {
  for (int s = 0; s < g.num_strategies(k); ++s) {
    if (g.Label(k, s) == label) return s;
  }
  throw InvalidInput("no strategy labelled " + label);
}

inline std::vector<std::string> ListLabels(const NormalFormGame& g,
                                           const NfgPopulation& pop, int list) {
  std::vector<std::string> out;
  for (int s : pop.list(list)) out.push_back(g.Label(list, s));
  return out;
}

// Mass the distribution puts on the member labelled `label` of list i.
inline double MassOn(const NormalFormGame& g, const NfgPopulation& pop,
                     const std::vector<double>& w, int list,
                     const std::string& label) {
  const auto& l = pop.list(list);
  for (size_t i = 0; i < l.size(); ++i) {
    if (g.Label(list, l[i]) == label) return w[i];
  }
  return 0.0;
}

class Checker {
 public:
  explicit Checker(WalkthroughResult& r) : r_(r) {}
  void Expect(bool ok, int step, const std::string& what) {
    if (!ok) r_.mismatches.push_back("step " + std::to_string(step) + ": " + what);
  }
  void ExpectNear(double got, double want, double tol, int step,
                  const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
      std::ostringstream s;
      s << what << " is " << std::setprecision(10) << got << ", expected " << want;
      Expect(false, step, s.str());
    }
  }

 private:
  WalkthroughResult& r_;
};

inline nlohmann::json StepJson(const NormalFormGame& g, const NfgPopulation& pop,
                               const IterationRecord& rec) {
  nlohmann::json j = RecordToJson(rec);
  nlohmann::json lists = nlohmann::json::array();
  for (int i = 0; i < pop.num_lists(); ++i) lists.push_back(ListLabels(g, pop, i));
  j["population_after"] = lists;
  return j;
}

struct LoggedRun {
  std::vector<IterationRecord> trace;
  NfgPopulation population;
  MetaDistribution last;
};

// Runs PSRO(alpha-Rank, oracle) to termination, logging each step.
inline LoggedRun RunLogged(const NormalFormGame& g, PopulationMode mode,
                           std::vector<std::vector<int>> init, OracleKind oracle,
                           WalkthroughResult& r) {
  PsroConfig cfg;
  cfg.solver.kind = MetaSolverKind::kAlphaRank;
  cfg.oracle.kind = oracle;
  cfg.max_iterations = 20;
  Psro<NfgDomain> psro(NfgDomain{&g},
                       NfgPopulation(mode, g.num_players(), std::move(init)), cfg);
  LoggedRun out;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    out.trace.push_back(psro.Step());
    r.steps.push_back(StepJson(g, psro.population(), out.trace.back()));
    if (psro.converged()) break;
  }
  out.population = psro.population();
  out.last = psro.last_distribution();
  return out;
}

inline std::string Join(const std::vector<std::string>& v) {
  std::string s = "{";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
  return s + "}";
}

}  // namespace internal

// Single population from {C}; BR adds D, A, B and then returns C, which is
// already present. X is never reached.
inline WalkthroughResult WalkthroughExample1() {
  WalkthroughResult r{"example1", {}, {}};
  internal::Checker check(r);
  const NormalFormGame g = Table2Game();
  const int c = internal::StrategyIndex(g, 0, "C");
  auto run = internal::RunLogged(g, PopulationMode::kSingle, {{c}},
                                 OracleKind::kBr, r);
  const std::vector<std::string> adds = {"D", "A", "B"};
  const std::vector<std::string> dirac = {"C", "D", "A"};
  check.Expect(run.trace.size() == 4, 0,
               "expected 4 steps, got " + std::to_string(run.trace.size()));
  for (size_t i = 0; i < run.trace.size() && i < 4; ++i) {
    const auto& rec = run.trace[i];
    const int step = rec.iteration;
    if (i < 3) {
      // The population before step i+1 is the first i+1 entries of C,D,A,B.
      const std::vector<double>& w = rec.meta_distribution[0];
      check.ExpectNear(w[i], 1.0, 1e-6, step, "mass on " + dirac[i]);
      check.Expect(rec.added[0] == std::vector<std::string>{adds[i]}, step,
                   "added " + internal::Join(rec.added[0]) + ", expected {" +
                       adds[i] + "}");
      check.Expect(!rec.converged, step, "converged too early");
    } else {
      check.Expect(rec.added[0].empty(), step,
                   "added " + internal::Join(rec.added[0]) + ", expected nothing");
      check.Expect(rec.converged, step, "did not terminate");
    }
  }
  const auto final_list = internal::ListLabels(g, run.population, 0);
  check.Expect(final_list == std::vector<std::string>{"C", "D", "A", "B"},
               static_cast<int>(run.trace.size()),
               "final population " + internal::Join(final_list));
  return r;
}

// Two populations from (C,C): Dirac at (C,C), (D,D), (A,A), then a
// distribution over the 4x4 subgame; X is never added.
inline WalkthroughResult WalkthroughExample2() {
  WalkthroughResult r{"example2", {}, {}};
  internal::Checker check(r);
  const NormalFormGame g = Table2Game();
  const int c = internal::StrategyIndex(g, 0, "C");
  auto run = internal::RunLogged(g, PopulationMode::kMulti, {{c}, {c}},
                                 OracleKind::kBr, r);
  const std::vector<std::string> dirac = {"C", "D", "A"};
  const std::vector<std::string> adds = {"D", "A", "B"};
  check.Expect(run.trace.size() >= 4, 0, "terminated before the 4x4 subgame");
  for (size_t i = 0; i < run.trace.size(); ++i) {
    const auto& rec = run.trace[i];
    const int step = rec.iteration;
    for (int k = 0; k < 2; ++k) {
      for (const auto& a : rec.added[k]) {
        check.Expect(a != "X", step, "X added for player " + std::to_string(k + 1));
      }
      if (i < 3) {
        check.ExpectNear(rec.meta_distribution[k][i], 1.0, 1e-6, step,
                         "player " + std::to_string(k + 1) + " mass on " + dirac[i]);
        check.Expect(rec.added[k] == std::vector<std::string>{adds[i]}, step,
                     "player " + std::to_string(k + 1) + " added " +
                         internal::Join(rec.added[k]));
      }
    }
    if (i == 3) {
      check.Expect(rec.pool_sizes == std::vector<int>{4, 4}, step,
                   "expected a 4x4 meta-game");
      int support = 0;
      for (double x : rec.meta_distribution[0]) support += x > 1e-6;
      check.Expect(support > 1, step, "expected a mixed distribution");
    }
  }
  check.Expect(!run.trace.empty() && run.trace.back().converged,
               static_cast<int>(run.trace.size()), "did not terminate");
  for (int k = 0; k < 2; ++k) {
    const auto l = internal::ListLabels(g, run.population, k);
    check.Expect(l == std::vector<std::string>{"C", "D", "A", "B"},
                 static_cast<int>(run.trace.size()),
                 "final population " + internal::Join(l));
  }
  return r;
}

// Single population from {C} with PBR. Each expected addition must lie in
// the PBR argmax set (ties are resolved toward the worked example's choice),
// the scores on {C,D,A,B} must be (1/3, 1/2, 1/3, 1/6, 1) on (A,B,C,D,X) and
// X must be selected; with X added the oracle terminates.
inline WalkthroughResult WalkthroughExample3() {
  WalkthroughResult r{"example3", {}, {}};
  internal::Checker check(r);
  const NormalFormGame g = Table2Game();
  auto idx = [&](const std::string& l) { return internal::StrategyIndex(g, 0, l); };
  NfgPopulation pop(PopulationMode::kSingle, 2, {{idx("C")}});
  MetaSolverConfig solver;
  solver.kind = MetaSolverKind::kAlphaRank;
  solver.mode = PopulationMode::kSingle;
  const std::vector<std::string> picks = {"D", "A", "B", "X"};
  const std::vector<double> step4 = {1.0 / 3, 1.0 / 2, 1.0 / 3, 1.0 / 6, 1.0};
  for (int step = 1; step <= 5; ++step) {
    const NormalFormGame meta = RestrictGame(g, pop);
    const MetaDistribution d = SolveMeta(meta, solver);
    const auto scores = PbrScores(g, pop, d, 0);
    const double best = *std::max_element(scores.begin(), scores.end());
    std::vector<std::string> argmax;
    for (int s = 0; s < g.num_strategies(0); ++s) {
      if (best > 0.0 && scores[s] == best) argmax.push_back(g.Label(0, s));
    }
    nlohmann::json j;
    j["iteration"] = step;
    j["population"] = internal::ListLabels(g, pop, 0);
    j["meta_distribution"] = d.per_player[0];
    j["alpha_used"] = d.alpha_used;
    j["pbr_scores"] = scores;
    j["argmax"] = argmax;
    if (step <= 4) {
      const std::string& pick = picks[step - 1];
      check.Expect(std::find(argmax.begin(), argmax.end(), pick) != argmax.end(),
                   step, pick + " not in PBR argmax " + internal::Join(argmax));
      if (step == 4) {
        for (int s = 0; s < 5; ++s) {
          check.ExpectNear(scores[s], step4[s], 1e-9, step,
                           "PBR score of " + g.Label(0, s));
        }
        check.Expect(argmax == std::vector<std::string>{"X"}, step,
                     "argmax " + internal::Join(argmax) + ", expected {X}");
      }
      j["added"] = {pick};
      pop.Append(0, idx(pick));
    } else {
      OracleConfig oc;
      oc.kind = OracleKind::kPbr;
      const auto out = RunNfgOracle(g, pop, meta, d, oc);
      check.Expect(out.AllConverged(), step, "PBR still adds a strategy");
      check.ExpectNear(internal::MassOn(g, pop, d.per_player[0], 0, "X"), 1.0,
                       1e-6, step, "mass on X");
      j["converged"] = out.AllConverged();
    }
    r.steps.push_back(j);
  }
  return r;
}

// Three populations from ([2],[1],[1]) with PBR. Player 2 adds 2, then
// player 3 adds 2, then player 1 adds 1, then the oracle terminates without
// reaching the sink profile (3,2,3).
inline WalkthroughResult WalkthroughSnowflake() {
  WalkthroughResult r{"snowflake", {}, {}};
  internal::Checker check(r);
  const NormalFormGame g = SnowflakeGame();
  auto run = internal::RunLogged(g, PopulationMode::kMulti, {{1}, {0}, {0}},
                                 OracleKind::kPbr, r);
  struct Expected {
    std::vector<std::string> dirac;  // per player, empty at the last step
    std::vector<std::vector<std::string>> added;
  };
  const std::vector<Expected> want = {
      {{"2", "1", "1"}, {{}, {"2"}, {}}},
      {{"2", "2", "1"}, {{}, {}, {"2"}}},
      {{"2", "2", "2"}, {{"1"}, {}, {}}},
      {{}, {{}, {}, {}}},
  };
  check.Expect(run.trace.size() == want.size(), 0,
               "expected 4 PSRO iterations, got " + std::to_string(run.trace.size()));
  const size_t steps = std::min(run.trace.size(), want.size());
  for (size_t i = 0; i < steps; ++i) {
    const auto& rec = run.trace[i];
    const int step = rec.iteration;
    for (int k = 0; k < 3; ++k) {
      check.Expect(rec.added[k] == want[i].added[k], step,
                   "player " + std::to_string(k + 1) + " added " +
                       internal::Join(rec.added[k]) + ", expected " +
                       internal::Join(want[i].added[k]));
    }
    if (!want[i].dirac.empty()) {
      // The population before this step is the one after the previous one.
      NfgPopulation before(PopulationMode::kMulti, 3, {{1}, {0}, {0}});
      for (size_t j = 0; j < i; ++j) {
        for (int k = 0; k < 3; ++k) {
          for (const auto& a : run.trace[j].added[k]) {
            before.Append(k, internal::StrategyIndex(g, k, a));
          }
        }
      }
      for (int k = 0; k < 3; ++k) {
        check.ExpectNear(internal::MassOn(g, before, rec.meta_distribution[k], k,
                                          want[i].dirac[k]),
                         1.0, 1e-6, step,
                         "player " + std::to_string(k + 1) + " mass on " +
                             want[i].dirac[k]);
      }
    }
    check.Expect(rec.converged == (i + 1 == want.size()), step,
                 rec.converged ? "terminated early" : "did not terminate");
  }
  if (run.trace.size() == want.size()) {
    // Player 1's scores at the last solve: strategy 2 earns the mass on
    // (1,1,1) and (1,2,1); strategy 3 only that on (1,2,1).
    const auto& pop = run.population;
    const auto& d = run.last;
    Shape meta_shape(pop.MetaCounts());
    auto joint_at = [&](const std::vector<std::string>& labels) {
      Profile m(3);
      for (int k = 0; k < 3; ++k) {
        const auto l = internal::ListLabels(g, pop, k);
        m[k] = static_cast<int>(std::find(l.begin(), l.end(), labels[k]) - l.begin());
      }
      return d.joint[meta_shape.Ravel(m)];
    };
    const double s111 = joint_at({"1", "1", "1"});
    const double s121 = joint_at({"1", "2", "1"});
    const auto scores = PbrScores(g, pop, d, 0);
    const int step = run.trace.back().iteration;
    check.ExpectNear(scores[1], s111 + s121, 1e-9, step, "player 1 score of 2");
    check.ExpectNear(scores[2], s121, 1e-9, step, "player 1 score of 3");
    check.Expect(scores[2] < scores[1], step, "strategy 3 not below strategy 2");
    r.steps.push_back({{"iteration", step},
                       {"player1_scores", scores},
                       {"mass_111", s111},
                       {"mass_121", s121}});
  }
  const bool reached = Contains(run.population.list(0), 2) &&
                       Contains(run.population.list(1), 1) &&
                       Contains(run.population.list(2), 2);
  check.Expect(!reached, static_cast<int>(run.trace.size()),
               "population reached (3,2,3)");
  return r;
}

inline WalkthroughResult RunWalkthrough(const std::string& name) {
  if (name == "example1") return WalkthroughExample1();
  if (name == "example2") return WalkthroughExample2();
  if (name == "example3") return WalkthroughExample3();
  if (name == "snowflake") return WalkthroughSnowflake();
  throw InvalidInput("unknown walkthrough: " + name);
}

// ---------------------------------------------------------------------------
// Standalone alpha-Rank.

inline nlohmann::json AlphaRankReport(const NormalFormGame& game,
                                      PopulationMode mode,
                                      const AlphaRankOptions& opts) {
  const AlphaRankResult res = AlphaRank(game, mode, opts);
  const ResponseGraph& graph = res.graph;
  nlohmann::json j;
  j["mode"] = ModeName(mode);
  if (std::isinf(res.alpha_used)) {
    j["alpha_used"] = "infinite";
  } else {
    j["alpha_used"] = res.alpha_used;
  }
  j["residual"] = res.residual;
  j["off_sink_mass"] = res.off_sink_mass;
  nlohmann::json dist = nlohmann::json::array();
  for (int v = 0; v < graph.num_nodes; ++v) {
    dist.push_back({{"node", NodeLabel(game, graph, v)},
                    {"mass", res.distribution[v]},
                    {"scc", graph.scc_id[v]},
                    {"in_sink", graph.InSink(v)}});
  }
  j["distribution"] = dist;
  std::vector<std::string> support;
  for (int v : res.support) support.push_back(NodeLabel(game, graph, v));
  j["support"] = support;
  std::vector<std::vector<std::string>> sinks;
  for (const auto& comp : graph.SinkComponents()) {
    sinks.emplace_back();
    for (int v : comp) sinks.back().push_back(NodeLabel(game, graph, v));
  }
  j["sink_components"] = sinks;
  return j;
}

}  // namespace psro

#endif  // PSRO_EXPERIMENTS_H_

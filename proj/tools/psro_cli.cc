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

// Command-line runner for the PSRO experiments.
//
//   psro_cli --experiment fixture_walkthrough --walkthrough example1
//   psro_cli --experiment oracle_compare --players 2 --strategies 10
//   psro_cli --experiment poker_meta_solvers --game kuhn --players 2
//            --meta-solver alpharank,nash_lp,uniform
//   psro_cli --experiment alpharank_solve --game chicken
//
// Exit codes: 0 success, 2 config error, 3 reproduction mismatch,
// 4 numerical failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "psro/errors.h"
#include "psro/experiments.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitMismatch = 3;
constexpr int kExitNumerical = 4;

std::ofstream OpenOut(const psro::ExperimentConfig& c, const std::string& file) {
  std::filesystem::create_directories(c.out_dir);
  const auto path = std::filesystem::path(c.out_dir) / file;
  std::ofstream out(path);
  if (!out) throw psro::InvalidInput("cannot write " + path.string());
  return out;
}

int OracleCompare(const psro::ExperimentConfig& c) {
  const auto r = psro::RunOracleCompare(c);
  const std::string tag =
      "K" + std::to_string(c.players) + "_S" + std::to_string(c.strategies);
  {
    auto out = OpenOut(c, "oracle_compare_" + tag + "_runs.csv");
    psro::WriteOracleCompareRunsCsv(out, r);
  }
  auto out = OpenOut(c, "oracle_compare_" + tag + ".csv");
  psro::WriteOracleCompareSummaryCsv(out, r);
  psro::WriteOracleCompareSummaryCsv(std::cout, r);
  return 0;
}

int Poker(const psro::ExperimentConfig& c) {
  for (const auto& solver : c.meta_solvers) {
    const auto trace = psro::RunPokerSolver(c, solver);
    const std::string tag = "poker_K" + std::to_string(c.players) + "_" + solver;
    {
      auto out = OpenOut(c, tag + ".csv");
      psro::WriteTraceCsv(out, trace.records, psro::PokerColumns(c.players));
    }
    auto out = OpenOut(c, tag + ".jsonl");
    psro::WriteTraceJsonl(out, trace.records, c.timing);
    const auto& last = trace.records.back();
    std::cout << solver << ": iterations=" << trace.records.size()
              << " total_pool_length=" << last.total_pool_length
              << " nashconv=" << psro::FormatNumber(last.metrics.at("nashconv"))
              << " diversity=" << last.metrics.at("diversity") << "\n";
  }
  return 0;
}

int Walkthrough(const psro::ExperimentConfig& c) {
  const auto r = psro::RunWalkthrough(c.walkthrough);
  auto out = OpenOut(c, "walkthrough_" + c.walkthrough + ".jsonl");
  for (const auto& s : r.steps) {
    out << s.dump() << "\n";
    std::cout << s.dump() << "\n";
  }
  for (const auto& m : r.mismatches) std::cerr << "mismatch: " << m << "\n";
  std::cout << c.walkthrough << ": " << (r.ok() ? "match" : "MISMATCH") << "\n";
  return r.ok() ? 0 : kExitMismatch;
}

int AlphaRankSolve(const psro::ExperimentConfig& c) {
  psro::NormalFormGame game;
  if (c.game.size() > 5 && c.game.substr(c.game.size() - 5) == ".json") {
    game = psro::ReadGameFile(c.game);
  } else {
    game = psro::MakeNfgGame(c, c.seed);
  }
  psro::AlphaRankOptions opts;
  opts.policy = psro::ParseAlphaPolicy(c.alpha_policy);
  opts.m = c.m;
  const auto j = psro::AlphaRankReport(game, psro::ParseMode(c.mode), opts);
  auto out = OpenOut(c, "alpharank.json");
  out << j.dump(2) << "\n";
  std::cout << j.dump(2) << "\n";
  return 0;
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Policy-space response oracles experiments"};
  std::string config_file;
  std::string dump_config;
  std::string experiment, game, mode, walkthrough, meta_solver, oracle,
      out_dir, payoff_mode, alpha_policy;
  int players = 0, strategies = 0, games = 0, trials = 0, max_iterations = 0,
      max_pool = -1, m = 0;
  uint64_t seed = 0;
  bool allow_duplicates = false, timing = false;

  app.add_option("--config", config_file, "JSON experiment config")
      ->check(CLI::ExistingFile);
  app.add_option("--dump-config", dump_config,
                 "write the effective config to this path and exit");
  app.add_option("--experiment", experiment,
                 "oracle_compare | poker_meta_solvers | fixture_walkthrough | "
                 "alpharank_solve");
  app.add_option("--game", game,
                 "random | transitive | cyclic | kuhn | fixture name | "
                 "file:<path> (alpharank_solve also takes a .json path)");
  app.add_option("--players", players, "number of players");
  app.add_option("--strategies", strategies, "strategies per player");
  app.add_option("--mode", mode, "single | multi");
  app.add_option("--walkthrough", walkthrough,
                 "example1 | example2 | example3 | snowflake");
  app.add_option("--meta-solver", meta_solver,
                 "comma-separated: uniform, nash_lp, nash_support_enum, "
                 "alpharank, prd, rectified_nash, rectified_prd");
  app.add_option("--oracle", oracle, "comma-separated: br, pbr, "
                                     "pbr_novelty_bound, rectified_br");
  app.add_option("--games", games, "games per cell");
  app.add_option("--trials", trials, "trials per game");
  app.add_option("--seed", seed, "base seed");
  app.add_option("--max-iterations", max_iterations, "PSRO iteration budget");
  app.add_option("--max-pool-length", max_pool, "stop past this total pool length");
  app.add_option("--out-dir", out_dir, "output directory");
  app.add_option("--payoff-mode", payoff_mode, "exact | simulate:N");
  app.add_option("--alpha-policy", alpha_policy,
                 "sweep | sweep:<alpha_max>:<points> | fixed:<alpha> | infinite");
  app.add_option("--m", m, "alpha-Rank population-size parameter");
  app.add_flag("--allow-duplicates", allow_duplicates,
               "append oracle outputs even when already present");
  app.add_flag("--timing", timing, "include wall-clock in JSON traces");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    psro::ExperimentConfig c;
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw psro::InvalidInput(std::string("cannot parse config: ") + e.what());
      }
      c = psro::ConfigFromJson(j);
    }
    // Flags override the file.
    if (!experiment.empty()) c.experiment = experiment;
    if (!game.empty()) c.game = game;
    if (players) c.players = players;
    if (strategies) c.strategies = strategies;
    if (!mode.empty()) c.mode = mode;
    if (!walkthrough.empty()) c.walkthrough = walkthrough;
    if (!meta_solver.empty()) c.meta_solvers = SplitList(meta_solver);
    if (!oracle.empty()) c.oracles = SplitList(oracle);
    if (games) c.games = games;
    if (trials) c.trials = trials;
    if (app.count("--seed")) c.seed = seed;
    if (max_iterations) c.max_iterations = max_iterations;
    if (max_pool >= 0) c.max_pool_length = max_pool;
    if (!out_dir.empty()) c.out_dir = out_dir;
    if (!payoff_mode.empty()) c.payoff_mode = payoff_mode;
    if (!alpha_policy.empty()) c.alpha_policy = alpha_policy;
    if (m) c.m = m;
    if (allow_duplicates) c.allow_duplicates = true;
    if (timing) c.timing = true;
    psro::ValidateConfig(c);

    if (!dump_config.empty()) {
      std::ofstream out(dump_config);
      out << psro::ConfigToJson(c).dump(2) << "\n";
      return 0;
    }
    if (c.experiment == "oracle_compare") return OracleCompare(c);
    if (c.experiment == "poker_meta_solvers") return Poker(c);
    if (c.experiment == "fixture_walkthrough") return Walkthrough(c);
    return AlphaRankSolve(c);
  } catch (const psro::InvalidInput& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const psro::Unsupported& e) {
    std::cerr << "unsupported configuration: " << e.what() << "\n";
    return kExitConfig;
  } catch (const psro::Mismatch& e) {
    std::cerr << "mismatch: " << e.what() << "\n";
    return kExitMismatch;
  } catch (const psro::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

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

#include "psro/experiments.h"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

namespace psro {
namespace {

namespace fs = std::filesystem;

TEST(ConfigTest, JsonRoundTrip) {
  ExperimentConfig c;
  c.experiment = "poker_meta_solvers";
  c.game = "kuhn";
  c.players = 3;
  c.meta_solvers = {"alpharank", "uniform"};
  c.oracles = {"br"};
  c.seed = 1234567890123ULL;
  c.max_pool_length = 60;
  c.payoff_mode = "simulate:100";
  c.alpha_policy = "sweep:1e8:33";
  c.allow_duplicates = true;
  const auto j = ConfigToJson(c);
  EXPECT_EQ(ConfigFromJson(j), c);
  EXPECT_EQ(ConfigFromJson(nlohmann::json::parse(j.dump())), c);
  // Missing keys take defaults.
  EXPECT_EQ(ConfigFromJson(nlohmann::json::object()), ExperimentConfig{});
}

TEST(ConfigTest, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(ConfigFromJson({{"experiment", "oracle_compare"}, {"gamez", "x"}}),
               InvalidInput);
  EXPECT_THROW(ConfigFromJson(nlohmann::json::array()), InvalidInput);
  auto bad = [](auto edit) {
    ExperimentConfig c;
    edit(c);
    return c;
  };
  EXPECT_NO_THROW(ValidateConfig(ExperimentConfig{}));
  EXPECT_THROW(ValidateConfig(bad([](auto& c) { c.experiment = "train"; })), InvalidInput);
  EXPECT_THROW(ValidateConfig(bad([](auto& c) { c.walkthrough = "example9"; })),
               InvalidInput);
  EXPECT_THROW(ValidateConfig(bad([](auto& c) { c.mode = "both"; })), InvalidInput);
  EXPECT_THROW(ValidateConfig(bad([](auto& c) { c.max_iterations = 0; })), InvalidInput);
  EXPECT_THROW(ValidateConfig(bad([](auto& c) { c.m = 0; })), InvalidInput);
  auto poker = [](auto edit) {
    ExperimentConfig c;
    c.experiment = "poker_meta_solvers";
    c.game = "kuhn";
    c.oracles = {};
    edit(c);
    return c;
  };
  EXPECT_NO_THROW(ValidateConfig(poker([](auto&) {})));
  EXPECT_THROW(ValidateConfig(poker([](auto& c) { c.players = 6; })), InvalidInput);
  EXPECT_THROW(ValidateConfig(poker([](auto& c) { c.game = "random"; })), InvalidInput);
  EXPECT_THROW(ValidateConfig(poker([](auto& c) {
                 c.players = 3;
                 c.meta_solvers = {"nash_lp"};
               })),
               Unsupported);
  EXPECT_THROW(ValidateConfig(poker([](auto& c) {
                 c.players = 3;
                 c.meta_solvers = {"rectified_nash"};
               })),
               Unsupported);
  EXPECT_THROW(ValidateConfig(poker([](auto& c) { c.oracles = {"pbr"}; })), Unsupported);
}

TEST(ParseTest, AlphaPolicies) {
  EXPECT_EQ(ParseAlphaPolicy("sweep").kind, AlphaPolicy::Kind::kSweep);
  EXPECT_EQ(ParseAlphaPolicy("infinite").kind, AlphaPolicy::Kind::kInfinite);
  const auto f = ParseAlphaPolicy("fixed:2.5");
  EXPECT_EQ(f.kind, AlphaPolicy::Kind::kFixed);
  EXPECT_EQ(f.alpha, 2.5);
  const auto s = ParseAlphaPolicy("sweep:1e8:33");
  EXPECT_EQ(s.alpha_max, 1e8);
  EXPECT_EQ(s.grid_points, 33);
  for (const char* b : {"", "fixed:", "fixed:-1", "fixed:abc", "sweep:1e8", "sweep:0.001:5",
                        "sweep:10:1", "lots"}) {
    EXPECT_THROW(ParseAlphaPolicy(b), InvalidInput) << b;
  }
}

TEST(ParseTest, PayoffModesAndSolvers) {
  EXPECT_EQ(ParsePayoffMode("exact"), 0);
  EXPECT_EQ(ParsePayoffMode("simulate:1000"), 1000);
  for (const char* b : {"simulate:0", "simulate:1.5", "simulate:", "mc"}) {
    EXPECT_THROW(ParsePayoffMode(b), InvalidInput) << b;
  }
  const auto r = ParsePokerSolver("rectified_nash");
  EXPECT_TRUE(r.rectified);
  EXPECT_EQ(r.solver, MetaSolverKind::kNashLp);
  EXPECT_FALSE(ParsePokerSolver("prd").rectified);
  EXPECT_THROW(ParsePokerSolver("rectified_magic"), InvalidInput);
}

TEST(WalkthroughTest, WorkedExamplesReplay) {
  for (const std::string name : {"example1", "example2", "snowflake"}) {
    const auto r = RunWalkthrough(name);
    EXPECT_TRUE(r.ok()) << name << ": " << (r.mismatches.empty() ? "" : r.mismatches[0]);
    EXPECT_FALSE(r.steps.empty());
  }
  EXPECT_THROW(RunWalkthrough("nope"), InvalidInput);
}

TEST(WalkthroughTest, PbrExamplePicksAndArgmax) {
  // Every pick lies in the PBR argmax and X is the unique maximizer at step 4;
  // any mismatches are limited to the step-4 score values.
  const auto r = RunWalkthrough("example3");
  for (const auto& m : r.mismatches) {
    EXPECT_EQ(m.find("argmax"), std::string::npos) << m;
    EXPECT_EQ(m.find("still adds"), std::string::npos) << m;
  }
  ASSERT_GE(r.steps.size(), 5u);
  EXPECT_EQ(r.steps[3]["argmax"], nlohmann::json::array({"X"}));
}

TEST(OracleCompareTest, SmallRunIsDeterministic) {
  ExperimentConfig c;
  c.experiment = "oracle_compare";
  c.players = 2;
  c.strategies = 5;
  c.games = 3;
  c.trials = 2;
  c.seed = 9;
  c.alpha_policy = "sweep:1e8:33";
  const auto a = RunOracleCompare(c);
  const auto b = RunOracleCompare(c);
  std::ostringstream sa, sb;
  WriteOracleCompareRunsCsv(sa, a);
  WriteOracleCompareRunsCsv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  ASSERT_EQ(a.runs.size(), 12u);
  ASSERT_EQ(a.summary.size(), 2u);
  for (const auto& s : a.summary) EXPECT_EQ(s.runs, 6);
  for (const auto& r : a.runs) {
    if (r.failed) continue;
    EXPECT_GE(r.alpha_conv, 0.0);
    EXPECT_GE(r.pcs_score, 0.0);
    EXPECT_LE(r.pcs_score, 1.0);
  }
}

TEST(PokerExperimentTest, TraceColumnsAndPoolCap) {
  ExperimentConfig c;
  c.experiment = "poker_meta_solvers";
  c.game = "kuhn";
  c.oracles = {};
  c.max_pool_length = 8;
  const auto t = RunPokerSolver(c, "uniform");
  ASSERT_FALSE(t.records.empty());
  for (const auto& r : t.records) {
    EXPECT_LE(r.total_pool_length, 8);
    for (const auto& col : PokerColumns(2)) {
      if (col == "nashconv" || col.rfind("diversity", 0) == 0) {
        EXPECT_TRUE(r.metrics.count(col)) << col;
      }
    }
  }
}

// CLI exit codes and outputs.

int RunCli(const std::string& args, const fs::path& dir) {
  const std::string cmd = std::string(PSRO_CLI_PATH) + " " + args + " --out-dir " +
                          dir.string() + " > " + (dir / "stdout.txt").string() +
                          " 2> " + (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("psro_cli_test_" + std::to_string(getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string Read(const std::string& name) const {
    std::ifstream in(dir_ / name);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }
  fs::path dir_;
};

TEST_F(CliTest, WalkthroughSucceeds) {
  EXPECT_EQ(RunCli("--experiment fixture_walkthrough --walkthrough example1", dir_), 0);
  EXPECT_TRUE(fs::exists(dir_ / "walkthrough_example1.jsonl"));
  EXPECT_NE(Read("stdout.txt").find("example1: match"), std::string::npos);
}

TEST_F(CliTest, ConfigErrorsExitTwo) {
  EXPECT_EQ(RunCli("--experiment nonsense", dir_), 2);
  EXPECT_EQ(RunCli("--experiment poker_meta_solvers --game kuhn --oracle pbr", dir_), 2);
  EXPECT_EQ(RunCli("--bogus-flag", dir_), 2);
  std::ofstream(dir_ / "bad.json") << "{\"unknown\": 1}";
  EXPECT_EQ(RunCli("--config " + (dir_ / "bad.json").string(), dir_), 2);
  EXPECT_NE(Read("stderr.txt").find("unknown"), std::string::npos);
}

TEST_F(CliTest, MismatchExitsThree) {
  EXPECT_EQ(RunCli("--experiment fixture_walkthrough --walkthrough example3", dir_),
            RunWalkthrough("example3").ok() ? 0 : 3);
}

TEST_F(CliTest, NumericalFailureExitsFour) {
  // A two-point sweep at tiny alpha cannot stabilize on a generic game.
  const std::string game = "--experiment alpharank_solve --game random --strategies 4 --seed 3 ";
  EXPECT_EQ(RunCli(game + "--alpha-policy sweep:0.02:2", dir_), 4);
  EXPECT_NE(Read("stderr.txt").find("did not stabilize"), std::string::npos);
  EXPECT_EQ(RunCli(game + "--alpha-policy fixed:1", dir_), 0);
}

TEST_F(CliTest, ConfigFileAndDumpRoundTrip) {
  EXPECT_EQ(RunCli("--experiment alpharank_solve --game chicken --dump-config " +
                       (dir_ / "c.json").string(),
                   dir_),
            0);
  std::ifstream in(dir_ / "c.json");
  const auto c = ConfigFromJson(nlohmann::json::parse(in));
  EXPECT_EQ(c.game, "chicken");
  EXPECT_EQ(RunCli("--config " + (dir_ / "c.json").string(), dir_), 0);
  const auto report = nlohmann::json::parse(Read("alpharank.json"));
  EXPECT_EQ(report["support"].size(), 2u);
}

}  // namespace
}  // namespace psro

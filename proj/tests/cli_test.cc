// Copyright 2026 The Oraclearn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "oraclearn/cli.h"
#include "oraclearn/error.h"

namespace oraclearn {
namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

TEST(Cli, HelpAndParseErrors) {
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
  EXPECT_EQ(cli({}).code, kExitConfig);
  EXPECT_EQ(cli({"run", "--bogus"}).code, kExitConfig);
  EXPECT_EQ(cli({"run", "--format", "xml"}).code, kExitConfig);
  EXPECT_EQ(cli({"run", "--t", "abc"}).code, kExitConfig);
}

TEST(Cli, ConfigErrors) {
  EXPECT_EQ(cli({"run", "--learner", "nope"}).code, kExitConfig);
  EXPECT_EQ(cli({"run", "--adversary", "nope"}).code, kExitConfig);
  EXPECT_EQ(cli({"run", "--learner", "ham-1q", "--class", "thresholds"}).code, kExitConfig);
  EXPECT_EQ(cli({"run", "--budget", "wc"}).code, kExitConfig);
  EXPECT_EQ(cli({"run", "--budget", "xyz=4"}).code, kExitConfig);
  EXPECT_EQ(cli({"run", "--delta", "1.5"}).code, kExitConfig);
  const CliResult r = cli({"run", "--learner", "erm-probe"});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("adv-nested"), std::string::npos);
}

TEST(Cli, BudgetExhaustionIsAnAssertionFailure) {
  const CliResult r = cli({"run", "--t", "32", "--budget", "wc=5"});
  EXPECT_EQ(r.code, kExitAssertion);
  EXPECT_NE(r.err.find("BudgetExceeded"), std::string::npos);
}

TEST(Cli, CsvLayout) {
  const CliResult r = cli({"run", "--t", "16", "--trials", "3", "--seed", "5"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto v = lines(r.out);
  ASSERT_EQ(v.size(), 10u);
  EXPECT_EQ(v[0], "# oraclearn-csv v1");
  EXPECT_NE(v[1].find("learner=thr-sort-wc"), std::string::npos);
  EXPECT_NE(v[1].find("config_hash="), std::string::npos);
  EXPECT_EQ(v[2], "seed,mistakes,wc_queries,erm_queries,agnostic_erm_queries,restricted_erm_queries,regret");
  EXPECT_EQ(v[3].rfind("5,", 0), 0u);
  EXPECT_EQ(v[5].rfind("7,", 0), 0u);
  EXPECT_EQ(v[6], "# summary");
  EXPECT_EQ(v[8].rfind("mean,", 0), 0u);
  EXPECT_EQ(v[9].rfind("max,", 0), 0u);
}

TEST(Cli, JsonLayout) {
  const CliResult r = cli({"run", "--adversary", "adv-noise", "--learner", "mwu", "--t", "12", "--trials", "2",
                     "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["format"], "oraclearn-json v1");
  EXPECT_EQ(j["config"]["learner"], "mwu");
  ASSERT_EQ(j["trials"].size(), 2u);
  EXPECT_TRUE(j["trials"][0].contains("regret"));
  EXPECT_TRUE(j["summary"]["mean"].contains("regret"));
}

TEST(Cli, DeterministicAcrossRepeatsAndJobs) {
  const std::vector<std::string> base{"run", "--class", "thresholds", "--t", "64", "--learner", "thr-rand-wc",
                                      "--trials", "12", "--seed", "99"};
  const CliResult a = cli(base), b = cli(base);
  auto threaded = base;
  threaded.insert(threaded.end(), {"--jobs", "4"});
  const CliResult c = cli(threaded);
  ASSERT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, b.out);
  // Jobs only change scheduling, so only the hashed config line differs.
  auto la = lines(a.out), lc = lines(c.out);
  ASSERT_EQ(la.size(), lc.size());
  for (std::size_t i = 2; i < la.size(); ++i) EXPECT_EQ(la[i], lc[i]);
}

TEST(Cli, SeedChangesTrials) {
  const CliResult a = cli({"run", "--t", "64", "--learner", "thr-rand-wc", "--seed", "1"});
  const CliResult b = cli({"run", "--t", "64", "--learner", "thr-rand-wc", "--seed", "2"});
  EXPECT_NE(a.out, b.out);
}

TEST(Cli, WritesOutputFile) {
  const auto path = std::filesystem::temp_directory_path() / "oraclearn_cli_test.csv";
  const CliResult r = cli({"run", "--t", "8", "--out", path.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  std::string first;
  std::getline(f, first);
  EXPECT_EQ(first, "# oraclearn-csv v1");
  std::filesystem::remove(path);
  EXPECT_EQ(cli({"run", "--t", "8", "--out", "/nonexistent-dir/x.csv"}).code, kExitIo);
}

TEST(Cli, EveryLearnerRunsSomewhere) {
  const std::vector<std::vector<std::string>> runs{
      {"--learner", "thr-sort-wc"},
      {"--learner", "thr-rand-wc"},
      {"--learner", "thr-det-erm"},
      {"--learner", "thr-rand-erm"},
      {"--learner", "thr-det-erm-wc"},
      {"--learner", "kint-wc", "--class", "kintervals", "--k", "1"},
      {"--learner", "ham-1q", "--class", "hamming", "--d", "2"},
      {"--learner", "ham-1q-wc", "--class", "hamming", "--d", "2"},
      {"--learner", "ham-opt", "--class", "hamming", "--d", "2"},
      {"--learner", "enum-halving", "--class", "kintervals", "--k", "2"},
      {"--learner", "enum-soa", "--class", "hamming", "--d", "1"},
      {"--learner", "erm-follow"},
      {"--learner", "predict-0"},
      {"--learner", "mwu"},
      {"--learner", "mwu", "--adversary", "adv-noise"},
      {"--learner", "erm-follow", "--adversary", "adv-eqclass", "--d", "2"},
      {"--learner", "erm-refit", "--adversary", "adv-nested"},
      {"--learner", "erm-probe", "--adversary", "adv-nested", "--agnostic", "--phase", "4"},
      {"--learner", "erm-perturb", "--adversary", "adv-nested"},
      {"--learner", "thr-sort-wc", "--adversary", "adv-uniform", "--budget", "wc=12"},
      {"--learner", "enum-halving", "--adversary", "adv-uniform", "--class", "hamming"},
  };
  for (const auto& extra : runs) {
    std::vector<std::string> args{"run", "--t", "12", "--trials", "2"};
    args.insert(args.end(), extra.begin(), extra.end());
    const CliResult r = cli(args);
    EXPECT_EQ(r.code, kExitOk) << extra[1] << ": " << r.err;
  }
}

TEST(Cli, Dims) {
  const CliResult r = cli({"dims", "--class", "thresholds", "--t", "8"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "class thresholds\nt 8\nsize 9\nvc 1\nlittlestone 3\n");
  EXPECT_NE(cli({"dims", "--class", "kintervals", "--t", "6"}).out.find("vc 2\nnote"), std::string::npos);
  EXPECT_EQ(cli({"dims", "--class", "hamming", "--t", "30"}).code, kExitConfig);
  const CliResult h = cli({"dims", "--class", "hamming", "--t", "6", "--d", "2"});
  EXPECT_NE(h.out.find("size 22\nvc 2\nlittlestone 2\n"), std::string::npos);
}

TEST(Cli, TreeCost) {
  EXPECT_EQ(cli({"treecost", "--n", "4", "--depth", "2"}).out, "n 4\ndepth 2\ncost 4\nbound 0.800000\nPASS\n");
  EXPECT_EQ(cli({"treecost", "--n", "1"}).out, "n 1\ndepth 0\ncost 0\nbound 0.000000\nPASS\n");
  EXPECT_NE(cli({"treecost", "--n", "2"}).out.find("cost 1\n"), std::string::npos);
  const CliResult big = cli({"treecost", "--n", "256"});
  EXPECT_EQ(big.code, kExitOk);
  EXPECT_NE(big.out.find("depth 8\n"), std::string::npos);
  EXPECT_NE(big.out.find("PASS"), std::string::npos);
  EXPECT_EQ(cli({"treecost", "--n", "5", "--depth", "2"}).code, kExitAssertion);
  const CliResult sweep = cli({"treecost", "--sweep"});
  EXPECT_EQ(sweep.code, kExitOk);
  EXPECT_EQ(lines(sweep.out).size(), 512u);
}

TEST(Cli, Enumerate) {
  const CliResult r = cli({"enumerate", "--class", "thresholds", "--t", "8"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto v = lines(r.out);
  ASSERT_EQ(v.size(), 10u);
  EXPECT_NE(v[0].find("labelings=9"), std::string::npos);
}

TEST(Cli, Pareto) {
  const CliResult r = cli({"pareto", "--t", "32", "--trials", "4", "--learner", "thr-sort-wc", "thr-det-erm",
                     "predict-0"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto v = lines(r.out);
  ASSERT_EQ(v.size(), 4u);
  EXPECT_EQ(v[0], "learner,mean_mistakes,mean_queries,trials,on_frontier");
  EXPECT_EQ(v[1].rfind("predict-0,", 0), 0u);
}

TEST(Cli, ParetoFromRunFiles) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto a = dir / "oraclearn_pareto_a.csv", b = dir / "oraclearn_pareto_b.json";
  ASSERT_EQ(cli({"run", "--t", "32", "--trials", "3", "--out", a.string()}).code, kExitOk);
  ASSERT_EQ(cli({"run", "--t", "32", "--trials", "3", "--learner", "predict-0", "--format", "json", "--out",
                 b.string()}).code,
            kExitOk);
  const CliResult both = cli({"pareto", a.string(), b.string()});
  ASSERT_EQ(both.code, kExitOk) << both.err;
  const auto v = lines(both.out);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[1].rfind("predict-0,", 0), 0u);
  EXPECT_EQ(v[2].rfind("thr-sort-wc,", 0), 0u);
  const CliResult single = cli({"pareto", a.string()});
  EXPECT_EQ(lines(single.out).size(), 2u);
  EXPECT_EQ(lines(single.out)[1].back(), '1');
  EXPECT_EQ(cli({"pareto", (dir / "missing.csv").string()}).code, kExitIo);
  EXPECT_EQ(cli({"pareto"}).code, kExitAssertion);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST(Config, HashTracksConfig) {
  RunConfig a, b;
  b.learner = "thr-det-erm";
  EXPECT_NE(config_hash(a), config_hash(b));
  b = a;
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.budgets[OracleKind::kErm] = 3;
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(Config, TrialsAreSeedIndexed) {
  RunConfig c;
  c.learner = "thr-rand-erm";
  c.t = 40;
  c.trials = 3;
  c.seed = 10;
  const auto batch = run_batch(c);
  for (std::size_t i = 0; i < 3; ++i) {
    const TrialRecord single = run_trial(c, 10 + i);
    EXPECT_EQ(batch[i].seed, 10 + i);
    EXPECT_EQ(batch[i].prediction_string(), single.prediction_string());
    EXPECT_EQ(batch[i].queries, single.queries);
  }
}

TEST(Config, IdsAreListed) {
  EXPECT_EQ(learner_ids().size(), 17u);
  EXPECT_EQ(adversary_ids().size(), 5u);
  RunConfig c;
  c.trials = 0;
  EXPECT_THROW(validate(c), Error);
}

}  // namespace
}  // namespace oraclearn

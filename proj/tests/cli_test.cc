// Copyright 2026 The privrl Authors
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

// End-to-end checks of the privrl binary.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>
#include "privrl/envs.h"
#include "privrl/harness.h"
#include "privrl/mdp_io.h"

namespace privrl {
namespace {

const std::string kCli = PRIVRL_CLI_PATH;
const std::string kData = PRIVRL_TESTDATA_DIR;

struct CliResult {
  int exit_code = -1;
  std::string out;  // stdout and stderr interleaved
};

CliResult RunCli(const std::string& args) {
  CliResult result;
  const std::string cmd = kCli + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return result;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) result.out.append(buf, n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

TEST(CliRunTest, WritesTenRowsPerReplica) {
  const std::string out = TempPath("privrl_cli_run.csv");
  const CliResult r =
      RunCli("run --config " + kData + "/chain.json --episodes 10 --noise-free --out " + out);
  ASSERT_EQ(r.exit_code, 0) << r.out;
  auto parsed = ParseRecordsCsv(*ReadFile(out));
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  ASSERT_EQ(parsed->records.size(), 20u);
  for (int rep = 0; rep < 2; ++rep) {
    int rows = 0;
    for (const EpisodeRecord& rec : parsed->records) rows += rec.replica == rep;
    EXPECT_EQ(rows, 10);
  }
  // The effective configuration is echoed next to the output.
  const std::string echoed = *ReadFile(out + ".config.json");
  EXPECT_NE(echoed.find("\"episodes\": 10"), std::string::npos) << echoed;
  EXPECT_NE(echoed.find("\"inf\""), std::string::npos) << echoed;
  std::filesystem::remove(out);
  std::filesystem::remove(out + ".config.json");
}

TEST(CliRunTest, IsDeterministic) {
  const std::string args = "run --config " + kData + "/chain.json --episodes 30 --epsilon 2";
  const CliResult a = RunCli(args), b = RunCli(args);
  ASSERT_EQ(a.exit_code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind(kCsvHeader, 0), 0u);
}

TEST(CliRunTest, JsonFormat) {
  const CliResult r =
      RunCli("run --config " + kData + "/chain.json --episodes 3 --replicas 1 --format json");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  EXPECT_NE(r.out.find("{\"replica\":0,\"episode\":3"), std::string::npos) << r.out;
}

TEST(CliRunTest, MissingConfigIsUsageError) {
  const CliResult r = RunCli("run --config /nonexistent/cfg.json");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.out.find("error: kind=usage"), std::string::npos);
  EXPECT_NE(r.out.find("/nonexistent/cfg.json"), std::string::npos);
}

TEST(CliRunTest, RejectsZeroEpsilonAndUnknownFlags) {
  EXPECT_EQ(RunCli("run --config " + kData + "/chain.json --epsilon 0").exit_code, 2);
  EXPECT_EQ(RunCli("run --config " + kData + "/chain.json --frobnicate").exit_code, 2);
  EXPECT_EQ(RunCli("run --config " + kData + "/chain.json --episodes many").exit_code, 2);
  EXPECT_EQ(RunCli("teleport").exit_code, 2);
}

TEST(CliSweepTest, WritesSummary) {
  const std::string dir = TempPath("privrl_cli_sweep");
  std::filesystem::remove_all(dir);
  const CliResult r = RunCli("sweep --config " + kData +
                             "/chain.json --episodes 5 --epsilons 1,inf --out " + dir);
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const std::string summary = *ReadFile(dir + "/summary.csv");
  EXPECT_EQ(summary.rfind(kSummaryHeader, 0), 0u);
  EXPECT_NE(summary.find("\ninf,"), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(CliEvalMdpTest, ChainMatchesHandValue) {
  const std::string path = TempPath("privrl_cli_chain.json");
  ASSERT_TRUE(SaveMdp(*ChainFixture(2), path).ok());
  const CliResult r = RunCli("eval-mdp --mdp " + path);
  EXPECT_EQ(r.exit_code, 0) << r.out;
  EXPECT_NE(r.out.find("rho_star=1\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("validation: ok"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(CliEvalMdpTest, HardMdpClosedForm) {
  const std::string path = TempPath("privrl_cli_hard.json");
  ASSERT_TRUE(SaveMdp(*HardMdp({2, 1, 0.25, 4, {1, 1}}), path).ok());
  const CliResult r = RunCli("eval-mdp --mdp " + path);
  EXPECT_EQ(r.exit_code, 0) << r.out;
  EXPECT_NE(r.out.find("rho_star=3\n"), std::string::npos) << r.out;
  std::filesystem::remove(path);
}

TEST(CliEvalMdpTest, ListsViolations) {
  const std::string path = TempPath("privrl_cli_bad.json");
  TabularMdp bad = *ChainFixture(2);
  bad.transition(1, 0, 1, 2) = 0.5;
  ASSERT_TRUE(SaveMdp(bad, path).ok());
  const CliResult r = RunCli("eval-mdp --mdp " + path);
  EXPECT_EQ(r.exit_code, 2) << r.out;
  EXPECT_NE(r.out.find("s=1 a=0 h=1"), std::string::npos) << r.out;
  std::filesystem::remove(path);
}

TEST(CliProbeTest, IdenticalAndNoiseFreeStreams) {
  const CliResult same = RunCli("probe-privacy --epsilon 1 --length 16 --trials 10000 --identical");
  ASSERT_EQ(same.exit_code, 0) << same.out;
  EXPECT_NE(same.out.find("\"within_bound\": true"), std::string::npos);
  const CliResult nf = RunCli("probe-privacy --noise-free --length 16 --trials 10000");
  ASSERT_EQ(nf.exit_code, 0) << nf.out;
  EXPECT_NE(nf.out.find("\"estimate\": \"inf\""), std::string::npos) << nf.out;
}

TEST(CliProbeTest, StandardCaseWithinBound) {
  const CliResult r = RunCli("probe-privacy --epsilon 1 --length 64 --trials 100000");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  EXPECT_NE(r.out.find("\"within_bound\": true"), std::string::npos) << r.out;
}

TEST(CliPlotTest, RendersAndRefusesPartialInput) {
  const std::string out = TempPath("privrl_cli_plot.svg");
  CliResult r = RunCli("plot " + kData + "/sweep/eps_1.csv " + kData +
                       "/sweep/eps_10.csv --out " + out);
  ASSERT_EQ(r.exit_code, 0) << r.out;
  EXPECT_EQ(ReadFile(out)->rfind("<svg", 0), 0u);
  std::filesystem::remove(out);
  r = RunCli("plot " + kData + "/truncated.csv --out " + out);
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.out.find("truncation marker"), std::string::npos) << r.out;
  r = RunCli("plot " + kData + "/truncated.csv --allow-partial --out " + out);
  EXPECT_EQ(r.exit_code, 0) << r.out;
  std::filesystem::remove(out);
  EXPECT_EQ(RunCli("plot " + kData + "/chain.json --out " + out).exit_code, 2);
}

}  // namespace
}  // namespace privrl

// Copyright 2026 The cavcoord Authors
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


#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "json.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult RunCli(const std::string& args) {
  const std::string cmd =
      std::string("CAVCOORD_LOG=quiet '") + CAVCOORD_CLI_PATH + "' " + args +
      " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string ReadAll(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path FreshDir(const std::string& name) {
  const fs::path dir = fs::path(::testing::TempDir()) / name;
  fs::remove_all(dir);
  return dir;
}

TEST(CliTest, DefaultSimulationSucceeds) {
  const fs::path dir = FreshDir("cavcoord_cli_default");
  ASSERT_EQ(RunCli("simulate --out '" + dir.string() + "'").code, 0);
  std::istringstream schedules(ReadAll(dir / "schedules.csv"));
  std::string line;
  std::getline(schedules, line);
  EXPECT_EQ(line, "cav_id,zone,R,D,T,P,mode");
  std::set<std::string> cavs;
  while (std::getline(schedules, line)) cavs.insert(line.substr(0, line.find(',')));
  EXPECT_EQ(cavs.size(), 16u);
  const json manifest = json::parse(ReadAll(dir / "manifest.json"));
  EXPECT_EQ(manifest["counts"]["violations"].get<int>(), 0);
  fs::remove_all(dir);
}

TEST(CliTest, RepeatedRunsAreByteIdentical) {
  const fs::path a = FreshDir("cavcoord_cli_repeat_a");
  const fs::path b = FreshDir("cavcoord_cli_repeat_b");
  ASSERT_EQ(RunCli("simulate --seed 5 --out '" + a.string() + "'").code, 0);
  ASSERT_EQ(RunCli("simulate --seed 5 --out '" + b.string() + "'").code, 0);
  for (const char* name : {"schedules.csv", "trajectories.csv", "safety.json"}) {
    EXPECT_EQ(ReadAll(a / name), ReadAll(b / name)) << name;
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(CliTest, MissingScenarioIsConfigError) {
  EXPECT_EQ(RunCli("simulate --scenario /nonexistent.json --out '" +
                FreshDir("cavcoord_cli_missing").string() + "'")
                .code,
            3);
}

TEST(CliTest, UsageErrorIsConfigError) {
  EXPECT_EQ(RunCli("simulate --cavs notanumber").code, 3);
  EXPECT_EQ(RunCli("").code, 3);
}

TEST(CliTest, OvercrowdedWindowIsInfeasible) {
  const fs::path dir = FreshDir("cavcoord_cli_crowded");
  EXPECT_EQ(RunCli("simulate --headway 1000 --out '" + dir.string() + "'").code,
            2);
  fs::remove_all(dir);
}

TEST(CliTest, SweepWritesOneDirectoryPerSeed) {
  const fs::path dir = FreshDir("cavcoord_cli_sweep");
  ASSERT_EQ(RunCli("simulate --seed 10 --sweep 3 --out '" + dir.string() + "'")
                .code,
            0);
  for (const char* sub : {"seed_10", "seed_11", "seed_12"}) {
    EXPECT_TRUE(fs::exists(dir / sub / "manifest.json")) << sub;
  }
  const json m = json::parse(ReadAll(dir / "seed_11" / "manifest.json"));
  EXPECT_EQ(m["seed"].get<int>(), 11);
  fs::remove_all(dir);
}

TEST(CliTest, PlanMinTimePrintsSwitchingPoint) {
  const RunResult r =
      RunCli("plan min_time --p-s 0 --p-e 100 --v-s 10 --v-e 15");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["profile"], "accel_then_decel");
  EXPECT_FALSE(j["saturated"].get<bool>());
  EXPECT_NEAR(j["t_c"].get<double>(), 3.8353, 1e-4);
  EXPECT_NEAR(j["t_e"].get<double>(), 6.0039, 1e-4);
}

TEST(CliTest, PlanMinTimeUnreachableExitSpeedIsInfeasible) {
  EXPECT_EQ(RunCli("plan min_time --p-s 0 --p-e 100 --v-s 10 --v-e 26").code, 2);
}

TEST(CliTest, PlanMinEnergyPrintsCoefficients) {
  const RunResult r = RunCli(
      "plan min_energy --p-s 0 --p-e 100 --v-s 10 --v-e 10 --t-entry 0 "
      "--t-exit 10");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  ASSERT_EQ(j["coefficients"].size(), 4u);
  EXPECT_NEAR(j["coefficients"][0].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(j["coefficients"][1].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(j["coefficients"][2].get<double>(), 10.0, 1e-12);
  EXPECT_NEAR(j["coefficients"][3].get<double>(), 0.0, 1e-12);
}

TEST(CliTest, PlanMissingBoundaryIsUsageError) {
  EXPECT_EQ(RunCli("plan min_time --p-s 0 --p-e 100").code, 3);
}

}  // namespace

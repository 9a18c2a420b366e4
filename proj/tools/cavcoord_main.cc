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

// Command-line driver. Links only the C interface of the library.
//
//   cavcoord simulate [--scenario PATH] --out DIR [--seed N] [--cavs N]
//                     [--headway S] [--sweep K]
//   cavcoord plan min_time   --p-s --p-e --v-s --v-e [limit flags]
//   cavcoord plan min_energy --p-s --p-e --v-s --v-e --t-entry --t-exit
//
// Exit codes: 0 success, 1 safety violations, 2 infeasible, 3 configuration
// or usage error, 4 internal error. CAVCOORD_LOG=quiet|info|debug sets the
// verbosity of the diagnostics written to stderr (default info).

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "cavcoord/cavcoord.h"
#include "json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitConfig = 3;
constexpr int kExitInternal = 4;

enum class LogLevel { kQuiet, kInfo, kDebug };

LogLevel ReadLogLevel() {
  const char* env = std::getenv("CAVCOORD_LOG");
  if (env == nullptr) return LogLevel::kInfo;
  const std::string level(env);
  if (level == "quiet" || level == "0") return LogLevel::kQuiet;
  if (level == "debug" || level == "2") return LogLevel::kDebug;
  return LogLevel::kInfo;
}

const LogLevel kLogLevel = ReadLogLevel();
std::mutex log_mutex;

void Log(LogLevel level, const std::string& message) {
  if (kLogLevel < level) return;
  std::lock_guard<std::mutex> lock(log_mutex);
  std::cerr << "cavcoord: " << message << '\n';
}

int ExitCodeFor(cav_status status) {
  switch (status) {
    case CAV_OK:
      return kExitOk;
    case CAV_ERR_INFEASIBLE:
      return kExitInfeasible;
    case CAV_ERR_INVALID_ARGUMENT:
    case CAV_ERR_CONFIG:
    case CAV_ERR_IO:
      return kExitConfig;
    case CAV_ERR_INTERNAL:
      break;
  }
  return kExitInternal;
}

// Logs the failure unconditionally; errors are never silenced.
int Failed(cav_status status, const std::string& what) {
  std::lock_guard<std::mutex> lock(log_mutex);
  std::cerr << "cavcoord: " << what << ": " << cav_last_error() << '\n';
  return ExitCodeFor(status);
}

struct SimulateArgs {
  std::string scenario;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> cavs;
  std::optional<double> headway;
  int sweep = 0;
};

struct ScenarioDeleter {
  void operator()(cav_scenario* s) const { cav_scenario_free(s); }
};
struct ResultDeleter {
  void operator()(cav_result* r) const { cav_result_free(r); }
};
using ScenarioPtr = std::unique_ptr<cav_scenario, ScenarioDeleter>;
using ResultPtr = std::unique_ptr<cav_result, ResultDeleter>;

int LoadScenario(const SimulateArgs& args, ScenarioPtr* out) {
  cav_scenario* raw = nullptr;
  cav_status status = args.scenario.empty()
                          ? cav_scenario_load_default(&raw)
                          : cav_scenario_load_file(args.scenario.c_str(),
                                                   &raw);
  if (status != CAV_OK) return Failed(status, "loading scenario");
  out->reset(raw);
  if (args.seed) cav_scenario_set_seed(raw, *args.seed);
  if (args.cavs && (status = cav_scenario_set_cavs(raw, *args.cavs)) != CAV_OK)
    return Failed(status, "--cavs");
  if (args.headway &&
      (status = cav_scenario_set_headway(raw, *args.headway)) != CAV_OK)
    return Failed(status, "--headway");
  return kExitOk;
}

int RunOne(const cav_scenario* scenario, const std::string& dir) {
  std::uint64_t seed = 0;
  cav_scenario_get_seed(scenario, &seed);
  const auto start = std::chrono::steady_clock::now();
  cav_result* raw = nullptr;
  cav_status status = cav_simulate(scenario, &raw);
  if (status != CAV_OK) {
    return Failed(status, "seed " + std::to_string(seed));
  }
  ResultPtr result(raw);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  status = cav_result_write(result.get(), dir.c_str(), wall);
  if (status != CAV_OK) return Failed(status, "writing " + dir);

  cav_counts counts{};
  cav_result_counts(result.get(), &counts);
  const std::size_t violations =
      counts.lateral_violations + counts.rear_end_violations;
  char line[256];
  std::snprintf(line, sizeof(line),
                "seed %llu: %zu CAVs, %d energy-optimal zones, mean travel "
                "%.3f s, %zu violations",
                static_cast<unsigned long long>(seed), counts.cavs,
                counts.energy_optimal_zones, counts.mean_travel_time_s,
                violations);
  Log(LogLevel::kInfo, line);
  if (counts.energy_arc_limit_issues > 0) {
    Log(LogLevel::kDebug, "seed " + std::to_string(seed) + ": " +
                              std::to_string(counts.energy_arc_limit_issues) +
                              " energy arc limit issues (see safety.json)");
  }
  return violations == 0 ? kExitOk : kExitViolations;
}

// Higher codes are worse, except that internal errors dominate everything.
int Worse(int a, int b) {
  if (a == kExitInternal || b == kExitInternal) return kExitInternal;
  return std::max(a, b);
}

int CmdSimulate(const SimulateArgs& args) {
  ScenarioPtr base;
  if (int code = LoadScenario(args, &base); code != kExitOk) return code;
  if (args.sweep <= 0) return RunOne(base.get(), args.out);

  std::uint64_t first = 0;
  cav_scenario_get_seed(base.get(), &first);
  std::vector<ScenarioPtr> runs;
  for (int k = 0; k < args.sweep; ++k) {
    ScenarioPtr s;
    if (int code = LoadScenario(args, &s); code != kExitOk) return code;
    cav_scenario_set_seed(s.get(), first + static_cast<std::uint64_t>(k));
    runs.push_back(std::move(s));
  }
  std::vector<int> codes(runs.size(), kExitOk);
  std::atomic<std::size_t> next{0};
  const unsigned workers = std::max(
      1u, std::min(std::thread::hardware_concurrency(),
                   static_cast<unsigned>(runs.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < runs.size(); i = next++) {
        codes[i] = RunOne(runs[i].get(), args.out + "/seed_" +
                                             std::to_string(first + i));
      }
    });
  }
  for (std::thread& t : pool) t.join();
  int code = kExitOk;
  for (int c : codes) code = Worse(code, c);
  return code;
}

struct PlanArgs {
  cav_boundary boundary{0.0, 0.0, 0.0, 0.0};
  cav_limits limits{-3.0, 3.0, 1.0, 25.0};
  double t_entry = 0.0;
  double t_exit = 0.0;
};

const char* ProfileName(int profile) {
  switch (profile) {
    case 0:
      return "accel_then_decel";
    case 1:
      return "pure_accel";
    case 2:
      return "pure_decel";
    default:
      return "accel_cruise_decel";
  }
}

int CmdPlanMinTime(const PlanArgs& args) {
  cav_min_time_plan plan{};
  const cav_status status =
      cav_plan_min_time(&args.boundary, &args.limits, &plan);
  if (status != CAV_OK) return Failed(status, "min_time");
  const nlohmann::json doc = {
      {"kind", "min_time"},
      {"profile", ProfileName(plan.profile)},
      {"saturated", plan.saturated != 0},
      {"p_c", plan.p_c},
      {"v_c", plan.v_c},
      {"t_c", plan.t_c},
      {"t_e", plan.t_e}};
  std::cout << doc.dump(2) << '\n';
  return kExitOk;
}

int CmdPlanMinEnergy(const PlanArgs& args) {
  cav_min_energy_plan plan{};
  const cav_status status =
      cav_plan_min_energy(&args.boundary, args.t_entry, args.t_exit, &plan);
  if (status != CAV_OK) return Failed(status, "min_energy");
  const nlohmann::json doc = {
      {"kind", "min_energy"},
      {"coefficients", {plan.a, plan.b, plan.c, plan.d}},
      {"t_origin", plan.t_origin},
      {"effort", plan.effort}};
  std::cout << doc.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coordinate automated vehicles through interconnected "
               "intersections"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cav_version()));

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Run a simulation");
  simulate->add_option("--scenario", sim.scenario,
                       "Scenario JSON (default: built-in scenario)");
  simulate->add_option("--out", sim.out, "Output directory")
      ->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Override the random seed");
  simulate->add_option("--cavs", sim.cavs, "Override the number of CAVs");
  simulate->add_option("--headway", sim.headway, "Override the headway (s)");
  simulate->add_option("--sweep", sim.sweep,
                       "Run K consecutive seeds into DIR/seed_N")
      ->check(CLI::NonNegativeNumber);

  PlanArgs plan;
  CLI::App* plan_cmd = app.add_subcommand("plan", "Plan a single zone");
  plan_cmd->require_subcommand(1);
  CLI::App* min_time =
      plan_cmd->add_subcommand("min_time", "Minimum-time bang-bang plan");
  CLI::App* min_energy =
      plan_cmd->add_subcommand("min_energy", "Minimum-energy cubic plan");
  for (CLI::App* cmd : {min_time, min_energy}) {
    cmd->add_option("--p-s", plan.boundary.p_s, "Entry position (m)")
        ->required();
    cmd->add_option("--p-e", plan.boundary.p_e, "Exit position (m)")
        ->required();
    cmd->add_option("--v-s", plan.boundary.v_s, "Entry speed (m/s)")
        ->required();
    cmd->add_option("--v-e", plan.boundary.v_e, "Exit speed (m/s)")
        ->required();
  }
  min_time->add_option("--u-min", plan.limits.u_min)->capture_default_str();
  min_time->add_option("--u-max", plan.limits.u_max)->capture_default_str();
  min_time->add_option("--v-min", plan.limits.v_min)->capture_default_str();
  min_time->add_option("--v-max", plan.limits.v_max)->capture_default_str();
  min_energy->add_option("--t-entry", plan.t_entry, "Entry time (s)")
      ->required();
  min_energy->add_option("--t-exit", plan.t_exit, "Exit time (s)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (simulate->parsed()) return CmdSimulate(sim);
  if (min_time->parsed()) return CmdPlanMinTime(plan);
  return CmdPlanMinEnergy(plan);
}

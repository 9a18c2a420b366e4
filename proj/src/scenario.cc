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

#include "cavcoord/scenario.h"

#include <fstream>
#include <sstream>

#include "cavcoord/error.h"
#include "json_util.h"

namespace cavcoord {

SchedulerOptions SimConfig::scheduler_options() const {
  SchedulerOptions opts;
  opts.headway_s = headway_s;
  opts.entry_speed_mps = entry_speed_mps;
  opts.exit_speed_mps = exit_speed_mps;
  opts.deadline_rule = deadline_rule;
  return opts;
}

void SimConfig::Validate(const Topology& topology) const {
  try {
    limits.Validate();
  } catch (const Error& e) {
    ThrowConfig(std::string("simulation.") + e.what());
  }
  if (!(headway_s > 0.0)) ThrowConfig("simulation.headway_s: must be > 0");
  if (n_cavs < 1) ThrowConfig("simulation.n_cavs: must be >= 1");
  if (!(window_s > 0.0)) ThrowConfig("simulation.window_s: must be > 0");
  if (!(sample_step_s > 0.0)) {
    ThrowConfig("simulation.sample_step_s: must be > 0");
  }
  if (min_gap_m < 0.0) ThrowConfig("simulation.min_gap_m: must be >= 0");
  if (max_arrival_attempts < 1) {
    ThrowConfig("simulation.max_arrival_attempts: must be >= 1");
  }
  auto in_limits = [&](double v) {
    return v >= limits.v_min && v <= limits.v_max;
  };
  if (!in_limits(topology.merging_speed_mps())) {
    ThrowConfig("merging_speed_mps: must lie within [v_min, v_max]");
  }
  if (!in_limits(entry_speed_mps)) {
    ThrowConfig("simulation.entry_speed_mps: must lie within [v_min, v_max]");
  }
  if (!in_limits(exit_speed_mps)) {
    ThrowConfig("simulation.exit_speed_mps: must lie within [v_min, v_max]");
  }
  if (topology.paths().empty()) ThrowConfig("paths: at least one required");
}

Scenario LoadScenario(std::string_view document) {
  using internal::Json;
  Topology topology = LoadTopology(document);
  const Json doc = internal::ParseDocument(document);

  SimConfig cfg;
  if (doc.contains("simulation")) {
    const Json& sim = doc.at("simulation");
    const std::string at = "simulation";
    if (!sim.is_object()) ThrowConfig(at + ": expected a table");
    cfg.n_cavs = internal::IntOr(sim, "n_cavs", at, cfg.n_cavs);
    cfg.window_s = internal::NumberOr(sim, "window_s", at, cfg.window_s);
    cfg.headway_s = internal::NumberOr(sim, "headway_s", at, cfg.headway_s);
    if (sim.contains("seed")) {
      const Json& seed = sim.at("seed");
      if (!seed.is_number_unsigned() && !seed.is_number_integer()) {
        ThrowConfig("simulation.seed: expected a non-negative integer");
      }
      if (seed.is_number_integer() && seed.get<long long>() < 0) {
        ThrowConfig("simulation.seed: expected a non-negative integer");
      }
      cfg.seed = seed.get<std::uint64_t>();
    }
    cfg.sample_step_s =
        internal::NumberOr(sim, "sample_step_s", at, cfg.sample_step_s);
    cfg.entry_speed_mps =
        internal::NumberOr(sim, "entry_speed_mps", at, cfg.entry_speed_mps);
    cfg.exit_speed_mps =
        internal::NumberOr(sim, "exit_speed_mps", at, cfg.exit_speed_mps);
    cfg.min_gap_m = internal::NumberOr(sim, "min_gap_m", at, cfg.min_gap_m);
    cfg.max_arrival_attempts = internal::IntOr(
        sim, "max_arrival_attempts", at, cfg.max_arrival_attempts);
    if (sim.contains("deadline_rule")) {
      const std::string rule = internal::RequireString(sim, "deadline_rule", at);
      if (rule == "none") {
        cfg.deadline_rule = DeadlineRule::kNone;
      } else if (rule == "min_speed") {
        cfg.deadline_rule = DeadlineRule::kMinSpeed;
      } else {
        ThrowConfig(
            "simulation.deadline_rule: expected \"none\" or \"min_speed\"");
      }
    }
    if (sim.contains("limits")) {
      const Json& lim = sim.at("limits");
      const std::string lat = "simulation.limits";
      if (!lim.is_object()) ThrowConfig(lat + ": expected a table");
      cfg.limits.u_min = internal::NumberOr(lim, "u_min", lat, cfg.limits.u_min);
      cfg.limits.u_max = internal::NumberOr(lim, "u_max", lat, cfg.limits.u_max);
      cfg.limits.v_min = internal::NumberOr(lim, "v_min", lat, cfg.limits.v_min);
      cfg.limits.v_max = internal::NumberOr(lim, "v_max", lat, cfg.limits.v_max);
    }
  }
  cfg.Validate(topology);
  return Scenario{std::move(topology), cfg, std::string(document)};
}

Scenario LoadScenarioFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ThrowConfig("cannot open scenario file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return LoadScenario(text.str());
}

}  // namespace cavcoord

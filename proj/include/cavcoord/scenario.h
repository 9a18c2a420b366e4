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

#ifndef CAVCOORD_SCENARIO_H_
#define CAVCOORD_SCENARIO_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "cavcoord/dynamics.h"
#include "cavcoord/scheduler.h"
#include "cavcoord/topology.h"

namespace cavcoord {

struct SimConfig {
  Limits limits{-3.0, 3.0, 1.0, 25.0};
  double headway_s = 1.5;
  int n_cavs = 16;
  double window_s = 20.0;
  std::uint64_t seed = 1;
  double sample_step_s = 0.05;
  double entry_speed_mps = 15.0;
  double exit_speed_mps = 15.0;
  DeadlineRule deadline_rule = DeadlineRule::kNone;
  // Optional rear-end distance check; 0 disables it.
  double min_gap_m = 0.0;
  int max_arrival_attempts = 10000;

  SchedulerOptions scheduler_options() const;

  // Throws kConfig on any invalid field, including a merging speed outside
  // [v_min, v_max].
  void Validate(const Topology& topology) const;
};

struct Scenario {
  Topology topology;
  SimConfig config;
  std::string document;  // source text, hashed into run manifests
};

// Topology plus the `simulation` section. Missing simulation fields take the
// SimConfig defaults.
Scenario LoadScenario(std::string_view document);
// Throws kConfig when the file cannot be read.
Scenario LoadScenarioFile(const std::string& path);

// The shipped two-intersection scenario, identical to scenarios/default.json.
std::string_view DefaultScenarioDocument();

}  // namespace cavcoord

#endif  // CAVCOORD_SCENARIO_H_

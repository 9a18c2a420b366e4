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

#include "cavcoord/cavcoord.h"

#include <cmath>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "cavcoord/energy_optimal.h"
#include "cavcoord/error.h"
#include "cavcoord/export.h"
#include "cavcoord/scenario.h"
#include "cavcoord/simulation.h"
#include "cavcoord/time_optimal.h"

struct cav_scenario {
  cavcoord::Scenario scenario;
};

struct cav_result {
  cavcoord::Scenario scenario;
  cavcoord::SimResult result;
  std::vector<cav_schedule_row> rows;
};

namespace {

thread_local std::string last_error;

cav_status Fail(cav_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `body`, mapping exceptions onto status codes.
template <typename F>
cav_status Guard(F&& body) {
  try {
    body();
    last_error.clear();
    return CAV_OK;
  } catch (const cavcoord::Error& e) {
    switch (e.kind()) {
      case cavcoord::ErrorKind::kInvalidArgument:
        return Fail(CAV_ERR_INVALID_ARGUMENT, e.what());
      case cavcoord::ErrorKind::kConfig:
        return Fail(CAV_ERR_CONFIG, e.what());
      case cavcoord::ErrorKind::kInfeasible:
        return Fail(CAV_ERR_INFEASIBLE, e.what());
      case cavcoord::ErrorKind::kInternal:
        break;
    }
    return Fail(CAV_ERR_INTERNAL, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(CAV_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(CAV_ERR_INTERNAL, e.what());
  }
}

cav_status NullArgument(const char* name) {
  return Fail(CAV_ERR_INVALID_ARGUMENT, std::string(name) + " is null");
}

cav_status LoadInto(cavcoord::Scenario scenario, cav_scenario** out) {
  scenario.config.Validate(scenario.topology);
  *out = new cav_scenario{std::move(scenario)};
  return CAV_OK;
}

cavcoord::ZoneBoundary ToBoundary(const cav_boundary& b) {
  return {b.p_s, b.p_e, b.v_s, b.v_e};
}

}  // namespace

extern "C" {

const char* cav_version(void) { return CAVCOORD_VERSION; }

const char* cav_last_error(void) { return last_error.c_str(); }

cav_status cav_scenario_load_file(const char* path, cav_scenario** out) {
  if (path == nullptr) return NullArgument("path");
  if (out == nullptr) return NullArgument("out");
  *out = nullptr;
  return Guard([&] { LoadInto(cavcoord::LoadScenarioFile(path), out); });
}

cav_status cav_scenario_load_string(const char* json, cav_scenario** out) {
  if (json == nullptr) return NullArgument("json");
  if (out == nullptr) return NullArgument("out");
  *out = nullptr;
  return Guard([&] { LoadInto(cavcoord::LoadScenario(json), out); });
}

cav_status cav_scenario_load_default(cav_scenario** out) {
  if (out == nullptr) return NullArgument("out");
  *out = nullptr;
  return Guard([&] {
    LoadInto(cavcoord::LoadScenario(cavcoord::DefaultScenarioDocument()), out);
  });
}

void cav_scenario_free(cav_scenario* scenario) { delete scenario; }

cav_status cav_scenario_set_seed(cav_scenario* scenario, uint64_t seed) {
  if (scenario == nullptr) return NullArgument("scenario");
  scenario->scenario.config.seed = seed;
  last_error.clear();
  return CAV_OK;
}

cav_status cav_scenario_get_seed(const cav_scenario* scenario,
                                 uint64_t* seed) {
  if (scenario == nullptr) return NullArgument("scenario");
  if (seed == nullptr) return NullArgument("seed");
  *seed = scenario->scenario.config.seed;
  return CAV_OK;
}

cav_status cav_scenario_set_cavs(cav_scenario* scenario, int n_cavs) {
  if (scenario == nullptr) return NullArgument("scenario");
  return Guard([&] {
    cavcoord::SimConfig config = scenario->scenario.config;
    config.n_cavs = n_cavs;
    config.Validate(scenario->scenario.topology);
    scenario->scenario.config = config;
  });
}

cav_status cav_scenario_set_headway(cav_scenario* scenario,
                                    double headway_s) {
  if (scenario == nullptr) return NullArgument("scenario");
  return Guard([&] {
    cavcoord::SimConfig config = scenario->scenario.config;
    config.headway_s = headway_s;
    config.Validate(scenario->scenario.topology);
    scenario->scenario.config = config;
  });
}

cav_status cav_simulate(const cav_scenario* scenario, cav_result** out) {
  if (scenario == nullptr) return NullArgument("scenario");
  if (out == nullptr) return NullArgument("out");
  *out = nullptr;
  return Guard([&] {
    auto* r = new cav_result{scenario->scenario, {}, {}};
    try {
      r->result = cavcoord::RunSimulation(r->scenario.topology,
                                          r->scenario.config);
    } catch (...) {
      delete r;
      throw;
    }
    for (const cavcoord::Schedule& s : r->result.schedules) {
      for (const cavcoord::ScheduleEntry& e : s.entries) {
        r->rows.push_back(
            {cavcoord::Value(s.cav), cavcoord::Value(e.zone), e.release_s,
             e.deadline_s, e.entry_s, e.process_s,
             e.mode == cavcoord::ZoneMode::kEnergyOptimal ? 1 : 0});
      }
    }
    *out = r;
  });
}

void cav_result_free(cav_result* result) { delete result; }

cav_status cav_result_write(const cav_result* result, const char* dir,
                            double wall_clock_s) {
  if (result == nullptr) return NullArgument("result");
  if (dir == nullptr) return NullArgument("dir");
  const cav_status status = Guard([&] {
    cavcoord::WriteRunOutputs(dir, result->result, result->scenario,
                              wall_clock_s);
  });
  // Output failures surface as configuration errors in the core.
  return status == CAV_ERR_CONFIG ? Fail(CAV_ERR_IO, last_error) : status;
}

cav_status cav_result_counts(const cav_result* result, cav_counts* out) {
  if (result == nullptr) return NullArgument("result");
  if (out == nullptr) return NullArgument("out");
  const cavcoord::SimResult& r = result->result;
  out->cavs = r.schedules.size();
  out->schedule_rows = result->rows.size();
  out->trajectory_rows = r.log.rows.size();
  out->lateral_violations = r.safety.lateral.size();
  out->rear_end_violations = r.safety.rear_end.size();
  out->time_optimal_zones = r.metrics.time_optimal_zones;
  out->energy_optimal_zones = r.metrics.energy_optimal_zones;
  out->energy_arc_limit_issues = r.metrics.constraint_violations;
  out->mean_travel_time_s = r.metrics.mean_travel_time_s;
  last_error.clear();
  return CAV_OK;
}

cav_status cav_result_schedule_row(const cav_result* result, size_t index,
                                   cav_schedule_row* out) {
  if (result == nullptr) return NullArgument("result");
  if (out == nullptr) return NullArgument("out");
  if (index >= result->rows.size()) {
    return Fail(CAV_ERR_INVALID_ARGUMENT,
                "row index " + std::to_string(index) + " out of range");
  }
  *out = result->rows[index];
  last_error.clear();
  return CAV_OK;
}

cav_status cav_plan_min_time(const cav_boundary* boundary,
                             const cav_limits* limits,
                             cav_min_time_plan* out) {
  if (boundary == nullptr) return NullArgument("boundary");
  if (limits == nullptr) return NullArgument("limits");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    const cavcoord::Limits lim{limits->u_min, limits->u_max, limits->v_min,
                               limits->v_max};
    const cavcoord::BangBangPlan plan =
        cavcoord::PlanMinTime(ToBoundary(*boundary), lim);
    out->profile = static_cast<int>(plan.profile);
    out->saturated = plan.saturated ? 1 : 0;
    out->p_c = plan.p_c;
    out->v_c = plan.v_c;
    out->t_c = plan.t_c;
    out->t_e = plan.t_e;
  });
}

cav_status cav_plan_min_energy(const cav_boundary* boundary, double t_entry,
                               double t_exit, cav_min_energy_plan* out) {
  if (boundary == nullptr) return NullArgument("boundary");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    const cavcoord::TimedBoundary tb{ToBoundary(*boundary), t_entry, t_exit};
    const cavcoord::CubicCoeffs c = cavcoord::SolveEnergy(tb);
    // Adding zero folds negative zeros into plain zeros for printing.
    out->a = c.a + 0.0;
    out->b = c.b + 0.0;
    out->c = c.c + 0.0;
    out->d = c.d + 0.0;
    out->t_origin = c.t_origin;
    out->effort = cavcoord::ControlEffort(c);
  });
}

}  // extern "C"

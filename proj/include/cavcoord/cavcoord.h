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

// C interface to the cavcoord library. Objects are opaque handles owned by
// the caller and released with the matching *_free function. Every fallible
// call returns a cav_status; on failure cav_last_error() describes the error
// raised on the calling thread.

#ifndef CAVCOORD_CAVCOORD_H_
#define CAVCOORD_CAVCOORD_H_

#include <stddef.h>
#include <stdint.h>

#if defined(CAVCOORD_BUILDING_LIBRARY)
#define CAV_API __attribute__((visibility("default")))
#else
#define CAV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cav_status {
  CAV_OK = 0,
  CAV_ERR_INVALID_ARGUMENT = 1,
  CAV_ERR_CONFIG = 2,
  CAV_ERR_INFEASIBLE = 3,
  CAV_ERR_IO = 4,
  CAV_ERR_INTERNAL = 5,
} cav_status;

typedef struct cav_scenario cav_scenario;
typedef struct cav_result cav_result;

CAV_API const char* cav_version(void);
// Message of the last failed call on this thread, "" if none.
CAV_API const char* cav_last_error(void);

CAV_API cav_status cav_scenario_load_file(const char* path,
                                          cav_scenario** out);
CAV_API cav_status cav_scenario_load_string(const char* json,
                                            cav_scenario** out);
CAV_API cav_status cav_scenario_load_default(cav_scenario** out);
CAV_API void cav_scenario_free(cav_scenario* scenario);

CAV_API cav_status cav_scenario_set_seed(cav_scenario* scenario,
                                         uint64_t seed);
CAV_API cav_status cav_scenario_set_cavs(cav_scenario* scenario, int n_cavs);
CAV_API cav_status cav_scenario_set_headway(cav_scenario* scenario,
                                            double headway_s);
CAV_API cav_status cav_scenario_get_seed(const cav_scenario* scenario,
                                         uint64_t* seed);

CAV_API cav_status cav_simulate(const cav_scenario* scenario,
                                cav_result** out);
CAV_API void cav_result_free(cav_result* result);

// Writes schedules.csv, trajectories.csv, safety.json and manifest.json.
CAV_API cav_status cav_result_write(const cav_result* result, const char* dir,
                                    double wall_clock_s);

typedef struct cav_counts {
  size_t cavs;
  size_t schedule_rows;
  size_t trajectory_rows;
  size_t lateral_violations;
  size_t rear_end_violations;
  int time_optimal_zones;
  int energy_optimal_zones;
  int energy_arc_limit_issues;
  double mean_travel_time_s;
} cav_counts;

CAV_API cav_status cav_result_counts(const cav_result* result,
                                     cav_counts* out);

typedef struct cav_schedule_row {
  int32_t cav_id;
  int32_t zone;
  double release_s;
  double deadline_s;  // +inf when unbounded
  double entry_s;
  double process_s;
  int energy_optimal;  // 0 time optimal, 1 energy optimal
} cav_schedule_row;

// Rows in export order (queue order, then path order). index < schedule_rows.
CAV_API cav_status cav_result_schedule_row(const cav_result* result,
                                           size_t index,
                                           cav_schedule_row* out);

typedef struct cav_limits {
  double u_min;
  double u_max;
  double v_min;
  double v_max;
} cav_limits;

typedef struct cav_boundary {
  double p_s;
  double p_e;
  double v_s;
  double v_e;
} cav_boundary;

typedef struct cav_min_time_plan {
  int profile;  // 0 accel-decel, 1 accel, 2 decel, 3 accel-cruise-decel
  int saturated;
  double p_c;
  double v_c;
  double t_c;
  double t_e;
} cav_min_time_plan;

CAV_API cav_status cav_plan_min_time(const cav_boundary* boundary,
                                     const cav_limits* limits,
                                     cav_min_time_plan* out);

typedef struct cav_min_energy_plan {
  double a;
  double b;
  double c;
  double d;
  double t_origin;  // the cubic is in powers of (t - t_origin)
  double effort;    // one half of the integral of u squared
} cav_min_energy_plan;

CAV_API cav_status cav_plan_min_energy(const cav_boundary* boundary,
                                       double t_entry, double t_exit,
                                       cav_min_energy_plan* out);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // CAVCOORD_CAVCOORD_H_

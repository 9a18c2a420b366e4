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

#ifndef CAVCOORD_SIMULATION_H_
#define CAVCOORD_SIMULATION_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cavcoord/energy_optimal.h"
#include "cavcoord/scenario.h"
#include "cavcoord/scheduler.h"
#include "cavcoord/time_optimal.h"
#include "cavcoord/topology.h"

namespace cavcoord {

struct Arrival {
  CavId cav{};
  double arrival_s = 0.0;
  PathId path{};
};

// Uniform arrivals on [0, window] with paths assigned round-robin by CAV
// index. A draw is repeated until it keeps the headway against every earlier
// CAV entering through the same first zone. Throws kInfeasible with the
// offending CAV when max_arrival_attempts is exhausted.
std::vector<Arrival> SampleArrivals(const SimConfig& config,
                                    const Topology& topology);

struct TrajectoryPoint {
  VehicleState state;
  double u = 0.0;
  ZoneId zone{};
  ZoneMode mode = ZoneMode::kTimeOptimal;
};

// Full control-zone trajectory of one scheduled vehicle: bang-bang arcs in
// time-optimal zones, cubic arcs in energy-optimal zones, constant merging
// speed in merging zones. An energy-optimal zone whose cubic would cross a
// speed limit flies the speed-capped arc instead.
class ScheduledTrajectory {
 public:
  ScheduledTrajectory(const Schedule& schedule, const Topology& topology,
                      const Limits& limits);

  double begin_s() const { return begin_s_; }
  double end_s() const { return end_s_; }
  bool saturated() const;
  int speed_capped_zones() const;

  // t is clamped to [begin_s, end_s].
  TrajectoryPoint Eval(double t) const;

  // Limit violations of the energy-optimal arcs actually flown, by zone.
  struct EnergyIssue {
    ZoneId zone{};
    ConstraintViolation violation;
  };
  std::vector<EnergyIssue> EnergyIssues(const Limits& limits) const;

 private:
  struct Segment {
    ZoneId zone{};
    ZoneKind kind = ZoneKind::kRegular;
    ZoneMode mode = ZoneMode::kTimeOptimal;
    double t_begin = 0.0;
    double t_end = 0.0;
    TimedBoundary timed;
    BangBangPlan plan;
    CubicCoeffs cubic;
    std::optional<SpeedCappedArc> capped;
  };
  std::vector<Segment> segments_;
  double begin_s_ = 0.0;
  double end_s_ = 0.0;
};

struct TrajectorySample {
  CavId cav{};
  std::int64_t tick = 0;  // t = tick * step
  double t = 0.0;
  double p = 0.0;
  double v = 0.0;
  double u = 0.0;
  ZoneId zone{};
  ZoneMode mode = ZoneMode::kTimeOptimal;
};

// Rows grouped by vehicle (queue order), increasing ticks within a vehicle.
struct TrajectoryLog {
  double step_s = 0.0;
  std::vector<TrajectorySample> rows;
};

struct LateralViolation {
  ZoneId zone{};
  CavId first{};
  CavId second{};
  double separation_s = 0.0;
};

struct RearEndViolation {
  ZoneId zone{};
  CavId leader{};
  CavId follower{};
  double t = 0.0;
  double gap_m = 0.0;  // leader minus follower position along the zone
};

struct SafetyReport {
  std::vector<LateralViolation> lateral;
  std::vector<RearEndViolation> rear_end;

  std::size_t total() const { return lateral.size() + rear_end.size(); }
  bool empty() const { return total() == 0; }
};

// Independent check of a finished run. Lateral: headway at every zone shared
// by two schedules. Rear-end: for vehicles sharing a zone in the same travel
// direction (same predecessor or same successor zone), entry and exit order
// agree and, at every common sample inside the zone, the follower is not
// ahead of the leader (nor closer than min_gap_m when positive).
SafetyReport VerifySafety(std::span<const Schedule> schedules,
                          const Topology& topology, double headway_s,
                          const TrajectoryLog& log, double min_gap_m = 0.0);

struct CavMetrics {
  CavId cav{};
  PathId path{};
  double arrival_s = 0.0;
  double exit_s = 0.0;
  double travel_time_s = 0.0;
  int time_optimal_zones = 0;
  int energy_optimal_zones = 0;
  bool saturated = false;
  int speed_capped_zones = 0;
  int constraint_violations = 0;
};

// Limit violation of an energy-optimal arc, reported but not repaired.
struct EnergyIssueRecord {
  CavId cav{};
  ZoneId zone{};
  ConstraintViolation violation;
};

struct SimMetrics {
  std::vector<CavMetrics> per_cav;
  std::vector<EnergyIssueRecord> energy_issues;
  int time_optimal_zones = 0;
  int energy_optimal_zones = 0;
  int speed_capped_zones = 0;
  int constraint_violations = 0;
  double mean_travel_time_s = 0.0;
};

struct SimResult {
  std::vector<Arrival> arrivals;
  std::vector<Schedule> schedules;  // queue order
  TrajectoryLog log;
  SafetyReport safety;
  SimMetrics metrics;
};

// Samples arrivals from the config and runs the pipeline.
SimResult RunSimulation(const Topology& topology, const SimConfig& config);

// Runs the pipeline on explicit arrivals: queue them, then for each vehicle in
// queue order schedule, commit, synthesize and sample its trajectory; finally
// verify safety. Scheduling infeasibility propagates as kInfeasible.
SimResult RunSimulation(const Topology& topology, const SimConfig& config,
                        std::span<const Arrival> arrivals);

}  // namespace cavcoord

#endif  // CAVCOORD_SIMULATION_H_

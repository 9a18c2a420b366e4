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

#ifndef CAVCOORD_TIME_OPTIMAL_H_
#define CAVCOORD_TIME_OPTIMAL_H_

#include <vector>

#include "cavcoord/dynamics.h"
#include "cavcoord/topology.h"

namespace cavcoord {

// Entry and exit state of one zone traversal.
struct ZoneBoundary {
  double p_s = 0.0;
  double p_e = 0.0;
  double v_s = 0.0;
  double v_e = 0.0;
};

// Relative band inside which an exit speed counts as equal to a reachability
// bound (single-phase profile).
inline constexpr double kBoundaryBand = 1e-9;

struct SpeedBounds {
  double lo = 0.0;
  double hi = 0.0;
};

// Reachable exit speeds over [p_s, p_e] under full deceleration and full
// acceleration, clamped to [v_min, v_max]. When full braking would stop the
// vehicle before p_e the lower bound is v_min.
SpeedBounds FinalSpeedBounds(double p_s, double v_s, double p_e,
                             const Limits& limits);

struct SwitchingState {
  double p_c = 0.0;
  double v_c = 0.0;
};

// Switch point of the accelerate-then-decelerate profile. Throws
// kInvalidArgument when v_e sits on a reachability bound (no switch exists)
// and kInfeasible when v_e cannot be reached at all.
SwitchingState ComputeSwitchingState(const ZoneBoundary& b,
                                     const Limits& limits);

enum class ProfileKind {
  kAccelThenDecel,
  kPureAccel,
  kPureDecel,
  kAccelCruiseDecel,
};

const char* ToString(ProfileKind kind);

// One constant-control arc in zone-local time t (t = 0 at zone entry):
//   v(t) = u t + b,   p(t) = u t^2 / 2 + b t + c.
struct Phase {
  double t_begin = 0.0;
  double t_end = 0.0;
  double u = 0.0;
  double b = 0.0;
  double c = 0.0;
};

struct BangBangPlan {
  ZoneBoundary boundary;
  ProfileKind profile = ProfileKind::kAccelThenDecel;
  // Set when the unconstrained switch speed exceeded v_max and a cruise arc
  // at v_max was inserted.
  bool saturated = false;
  // State and zone-local time where deceleration begins.
  double p_c = 0.0;
  double v_c = 0.0;
  double t_c = 0.0;
  double t_e = 0.0;
  std::vector<Phase> phases;
};

// Minimum-time traversal of a regular zone. Throws kInfeasible when the exit
// speed is outside the reachable band or the speed limits.
BangBangPlan PlanMinTime(const ZoneBoundary& b, const Limits& limits);

// Minimum feasible traversal duration: the bang-bang duration for regular
// zones, length / v_z for merging zones.
double ProcessTime(const Zone& zone, const ZoneBoundary& b,
                   const Limits& limits, double merging_speed_mps);

// Control applied at absolute time t for a traversal that entered at
// t_entry. The first arc is half-open, the last one closed.
double FeedbackControl(const BangBangPlan& plan, double t, double t_entry);

// State at zone-local time t in [0, t_e].
VehicleState EvalTrajectory(const BangBangPlan& plan, double t);

}  // namespace cavcoord

#endif  // CAVCOORD_TIME_OPTIMAL_H_

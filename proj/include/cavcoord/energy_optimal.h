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

#ifndef CAVCOORD_ENERGY_OPTIMAL_H_
#define CAVCOORD_ENERGY_OPTIMAL_H_

#include <optional>
#include <vector>

#include "cavcoord/dynamics.h"
#include "cavcoord/time_optimal.h"

namespace cavcoord {

// Boundary states pinned to absolute entry and exit times.
struct TimedBoundary {
  ZoneBoundary boundary;
  double t_entry = 0.0;
  double t_exit = 0.0;
};

// Minimum-L2 control between timed boundary states. With s = t - t_origin:
//   u(s) = a s + b
//   v(s) = a s^2 / 2 + b s + c
//   p(s) = a s^3 / 6 + b s^2 / 2 + c s + d
// The origin defaults to the entry time, which keeps the 4x4 system well
// scaled for large absolute times. [t_begin, t_end] is the horizon the
// coefficients were solved for.
struct CubicCoeffs {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double t_origin = 0.0;
  double t_begin = 0.0;
  double t_end = 0.0;
};

CubicCoeffs SolveEnergy(const TimedBoundary& tb);
CubicCoeffs SolveEnergy(const TimedBoundary& tb, double t_origin);

struct EnergySample {
  double u = 0.0;
  VehicleState state;
  bool extrapolated = false;  // t outside [t_begin, t_end]
};

EnergySample EvalEnergy(const CubicCoeffs& c, double t);

struct ConstraintViolation {
  LimitKind kind = LimitKind::kControl;
  double t = 0.0;
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

// Checks u at both ends of the horizon and v at both ends and at its vertex.
// Violations are reported only; the trajectory is not repaired.
std::vector<ConstraintViolation> CheckInactiveConstraints(
    const CubicCoeffs& c, const TimedBoundary& tb, const Limits& limits);

// Re-solves from time t_now with the exit boundary unchanged, keeping the
// original time origin so coefficients stay comparable. The result is `c`
// plus the minimum-energy cubic that carries the deviation of the measured
// state from `c` to zero at t_exit; on the trajectory it is `c` itself.
// Throws kInvalidArgument when `c` does not end at the exit state of `tb`.
CubicCoeffs ReplanFrom(const CubicCoeffs& c, double t_now,
                       const TimedBoundary& tb);
CubicCoeffs ReplanFrom(const CubicCoeffs& c, double t_now,
                       const VehicleState& measured, const TimedBoundary& tb);

// 1/2 of the integral of u^2 over the horizon.
double ControlEffort(const CubicCoeffs& c);

// Minimum-energy traversal with an active speed limit. The cubic is optimal
// only while the limits stay inactive; when its speed would cross v_cap the
// optimum instead closes the speed gap on an entry arc, cruises at v_cap from
// t_join to t_leave, and opens the exit gap on a mirrored arc. On both arcs
// the control is the saturated ramp min(U, slope * s), s being the time to
// (or from) the cruise, U the control bound in the arc's direction, and one
// slope shared by both arcs.
struct SpeedCappedArc {
  TimedBoundary timed;
  double v_cap = 0.0;
  bool cap_above = true;  // v_cap bounds the speed from above
  double t_join = 0.0;
  double t_leave = 0.0;
  double slope = 0.0;      // m/s^3
  double u_bound_in = 0.0;  // |u| limit on the entry arc
  double u_bound_out = 0.0;
};

// Empty when no arc of this shape fits the horizon: the limit is then not
// active at the optimum, or the boundary is out of reach within the limits.
std::optional<SpeedCappedArc> SolveSpeedCapped(const TimedBoundary& tb,
                                               double v_cap,
                                               const Limits& limits);
EnergySample EvalSpeedCapped(const SpeedCappedArc& arc, double t);
double ControlEffort(const SpeedCappedArc& arc);

}  // namespace cavcoord

#endif  // CAVCOORD_ENERGY_OPTIMAL_H_

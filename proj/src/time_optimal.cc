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

#include "cavcoord/time_optimal.h"

#include <cmath>
#include <sstream>
#include <string>

#include "cavcoord/dense_solve.h"
#include "cavcoord/error.h"

namespace cavcoord {
namespace {

struct Reach {
  double hi_raw = 0.0;  // exit speed under full acceleration
  double lo_raw = 0.0;  // exit speed under full braking, 0 if it stops
};

Reach ComputeReach(double length, double v_s, const Limits& limits) {
  Reach r;
  r.hi_raw = std::sqrt(2.0 * limits.u_max * length + v_s * v_s);
  const double lo_sq = 2.0 * limits.u_min * length + v_s * v_s;
  r.lo_raw = lo_sq > 0.0 ? std::sqrt(lo_sq) : 0.0;
  return r;
}

bool OnBound(double v, double bound) {
  return bound > 0.0 && std::abs(v - bound) <= kBoundaryBand * bound;
}

std::string Describe(const ZoneBoundary& b) {
  std::ostringstream os;
  os << "[p_s=" << b.p_s << ", p_e=" << b.p_e << ", v_s=" << b.v_s
     << ", v_e=" << b.v_e << "]";
  return os.str();
}

void CheckBoundary(const ZoneBoundary& b, const Limits& limits) {
  limits.Validate();
  if (!(b.p_e > b.p_s)) {
    ThrowInvalidArgument("zone boundary requires p_e > p_s " + Describe(b));
  }
  const double lo = limits.v_min * (1.0 - kBoundaryBand);
  const double hi = limits.v_max * (1.0 + kBoundaryBand);
  if (b.v_s < lo || b.v_s > hi || b.v_e < lo || b.v_e > hi) {
    ThrowInfeasible("boundary speeds outside [v_min, v_max] " + Describe(b));
  }
  const Reach reach = ComputeReach(b.p_e - b.p_s, b.v_s, limits);
  if (b.v_e > reach.hi_raw * (1.0 + kBoundaryBand) ||
      b.v_e < reach.lo_raw * (1.0 - kBoundaryBand)) {
    ThrowInfeasible("exit speed not reachable within the zone " +
                    Describe(b));
  }
}

// Constants (b, c) of a constant-control arc pinned to state (p, v) at time t.
std::pair<double, double> PhaseConstants(double t, double u, double p,
                                         double v) {
  const DenseMatrix<2> e = {{{t, 1.0}, {1.0, 0.0}}};
  const DenseVector<2> q = {p - 0.5 * u * t * t, v - u * t};
  const auto x = SolveDense<2>(e, q);
  if (!x) ThrowInternal("singular phase-constant system");
  return {(*x)[0], (*x)[1]};
}

Phase MakePhase(double t_begin, double t_end, double u, double t_pin,
                double p_pin, double v_pin) {
  Phase ph;
  ph.t_begin = t_begin;
  ph.t_end = t_end;
  ph.u = u;
  std::tie(ph.b, ph.c) = PhaseConstants(t_pin, u, p_pin, v_pin);
  return ph;
}

// Single arc joining both boundary states exactly; its control differs from
// the nominal limit by at most the boundary band.
BangBangPlan SingleArcPlan(const ZoneBoundary& b, ProfileKind kind) {
  BangBangPlan plan;
  plan.boundary = b;
  plan.profile = kind;
  plan.t_e = 2.0 * (b.p_e - b.p_s) / (b.v_s + b.v_e);
  const double u = (b.v_e - b.v_s) / plan.t_e;
  plan.phases.push_back(MakePhase(0.0, plan.t_e, u, 0.0, b.p_s, b.v_s));
  if (kind == ProfileKind::kPureAccel) {
    plan.t_c = plan.t_e;
    plan.p_c = b.p_e;
    plan.v_c = b.v_e;
  } else {
    plan.t_c = 0.0;
    plan.p_c = b.p_s;
    plan.v_c = b.v_s;
  }
  return plan;
}

BangBangPlan SaturatedPlan(const ZoneBoundary& b, const Limits& limits) {
  BangBangPlan plan;
  plan.boundary = b;
  plan.profile = ProfileKind::kAccelCruiseDecel;
  plan.saturated = true;
  const double v_top = limits.v_max;
  const double t_accel = (v_top - b.v_s) / limits.u_max;
  const double d_accel = (v_top * v_top - b.v_s * b.v_s) / (2.0 * limits.u_max);
  const double t_decel = (b.v_e - v_top) / limits.u_min;
  const double d_decel = (b.v_e * b.v_e - v_top * v_top) / (2.0 * limits.u_min);
  const double d_cruise = (b.p_e - b.p_s) - d_accel - d_decel;
  if (d_cruise < 0.0) ThrowInternal("negative cruise length " + Describe(b));
  const double t_cruise = d_cruise / v_top;

  plan.t_c = t_accel + t_cruise;
  plan.t_e = plan.t_c + t_decel;
  plan.p_c = b.p_s + d_accel + d_cruise;
  plan.v_c = v_top;
  if (t_accel > 0.0) {
    plan.phases.push_back(
        MakePhase(0.0, t_accel, limits.u_max, 0.0, b.p_s, b.v_s));
  }
  if (t_cruise > 0.0) {
    plan.phases.push_back(MakePhase(t_accel, plan.t_c, 0.0, t_accel,
                                    b.p_s + d_accel, v_top));
  }
  if (t_decel > 0.0) {
    plan.phases.push_back(MakePhase(plan.t_c, plan.t_e, limits.u_min,
                                    plan.t_e, b.p_e, b.v_e));
  }
  return plan;
}

const Phase& PhaseAt(const BangBangPlan& plan, double t) {
  for (const Phase& ph : plan.phases) {
    if (t < ph.t_end) return ph;
  }
  return plan.phases.back();
}

void CheckLocalTime(const BangBangPlan& plan, double t) {
  const double slack = 1e-12 * std::max(1.0, plan.t_e);
  if (!(t >= -slack && t <= plan.t_e + slack)) {
    ThrowInvalidArgument("time " + std::to_string(t) +
                         " outside plan window [0, " +
                         std::to_string(plan.t_e) + "]");
  }
}

}  // namespace

const char* ToString(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::kAccelThenDecel:
      return "accel_then_decel";
    case ProfileKind::kPureAccel:
      return "pure_accel";
    case ProfileKind::kPureDecel:
      return "pure_decel";
    case ProfileKind::kAccelCruiseDecel:
      return "accel_cruise_decel";
  }
  return "unknown";
}

SpeedBounds FinalSpeedBounds(double p_s, double v_s, double p_e,
                             const Limits& limits) {
  if (!(p_e > p_s)) ThrowInvalidArgument("speed bounds require p_e > p_s");
  const Reach reach = ComputeReach(p_e - p_s, v_s, limits);
  return {std::max(limits.v_min, reach.lo_raw),
          std::min(limits.v_max, reach.hi_raw)};
}

SwitchingState ComputeSwitchingState(const ZoneBoundary& b,
                                     const Limits& limits) {
  CheckBoundary(b, limits);
  const Reach reach = ComputeReach(b.p_e - b.p_s, b.v_s, limits);
  if (OnBound(b.v_e, reach.hi_raw) || OnBound(b.v_e, reach.lo_raw)) {
    ThrowInvalidArgument("exit speed on a reachability bound, no switching "
                         "point " + Describe(b));
  }
  SwitchingState s;
  s.p_c = (b.v_e * b.v_e - b.v_s * b.v_s +
           2.0 * (limits.u_max * b.p_s - limits.u_min * b.p_e)) /
          (2.0 * (limits.u_max - limits.u_min));
  const double radicand = b.v_s * b.v_s + 2.0 * limits.u_max * (s.p_c - b.p_s);
  if (radicand < 0.0 || s.p_c < b.p_s || s.p_c > b.p_e) {
    ThrowInfeasible("switching point outside the zone " + Describe(b));
  }
  s.v_c = std::sqrt(radicand);
  return s;
}

BangBangPlan PlanMinTime(const ZoneBoundary& b, const Limits& limits) {
  CheckBoundary(b, limits);
  const Reach reach = ComputeReach(b.p_e - b.p_s, b.v_s, limits);
  if (OnBound(b.v_e, reach.hi_raw)) {
    return SingleArcPlan(b, ProfileKind::kPureAccel);
  }
  if (OnBound(b.v_e, reach.lo_raw)) {
    return SingleArcPlan(b, ProfileKind::kPureDecel);
  }

  const SwitchingState sw = ComputeSwitchingState(b, limits);
  if (sw.v_c > limits.v_max) return SaturatedPlan(b, limits);

  BangBangPlan plan;
  plan.boundary = b;
  plan.profile = ProfileKind::kAccelThenDecel;
  plan.p_c = sw.p_c;
  plan.v_c = sw.v_c;
  plan.t_c = (sw.v_c - b.v_s) / limits.u_max;
  plan.t_e = plan.t_c + (b.v_e - sw.v_c) / limits.u_min;
  plan.phases.push_back(
      MakePhase(0.0, plan.t_c, limits.u_max, 0.0, b.p_s, b.v_s));
  plan.phases.push_back(MakePhase(plan.t_c, plan.t_e, limits.u_min, plan.t_e,
                                  b.p_e, b.v_e));
  return plan;
}

double ProcessTime(const Zone& zone, const ZoneBoundary& b,
                   const Limits& limits, double merging_speed_mps) {
  if (b.p_e == b.p_s) return 0.0;
  if (zone.kind == ZoneKind::kMerging) {
    if (!(merging_speed_mps > 0.0)) {
      ThrowInvalidArgument("merging speed must be positive");
    }
    if (b.v_s != merging_speed_mps || b.v_e != merging_speed_mps) {
      ThrowInvalidArgument("merging zone " + std::to_string(Value(zone.id)) +
                           " must be entered and left at the merging speed");
    }
    return (b.p_e - b.p_s) / merging_speed_mps;
  }
  return PlanMinTime(b, limits).t_e;
}

double FeedbackControl(const BangBangPlan& plan, double t, double t_entry) {
  const double local = t - t_entry;
  CheckLocalTime(plan, local);
  return PhaseAt(plan, local).u;
}

VehicleState EvalTrajectory(const BangBangPlan& plan, double t) {
  CheckLocalTime(plan, t);
  const Phase& ph = PhaseAt(plan, t);
  return {0.5 * ph.u * t * t + ph.b * t + ph.c, ph.u * t + ph.b};
}

}  // namespace cavcoord

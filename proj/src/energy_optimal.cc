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

#include "cavcoord/energy_optimal.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "cavcoord/dense_solve.h"
#include "cavcoord/error.h"

namespace cavcoord {

CubicCoeffs SolveEnergy(const TimedBoundary& tb) {
  return SolveEnergy(tb, tb.t_entry);
}

CubicCoeffs SolveEnergy(const TimedBoundary& tb, double t_origin) {
  if (!(tb.t_exit > tb.t_entry)) {
    ThrowInvalidArgument("degenerate horizon: t_exit " +
                         std::to_string(tb.t_exit) + " <= t_entry " +
                         std::to_string(tb.t_entry));
  }
  // Solve in time measured from the horizon start, where the system is well
  // scaled even for short horizons, then re-expand about t_origin.
  const double s1 = tb.t_exit - tb.t_entry;
  const DenseMatrix<4> m = {{
      {0.0, 0.0, 0.0, 1.0},
      {0.0, 0.0, 1.0, 0.0},
      {s1 * s1 * s1 / 6.0, s1 * s1 / 2.0, s1, 1.0},
      {s1 * s1 / 2.0, s1, 1.0, 0.0},
  }};
  const DenseVector<4> q = {tb.boundary.p_s, tb.boundary.v_s, tb.boundary.p_e,
                            tb.boundary.v_e};
  const auto x = SolveDense<4>(m, q);
  if (!x) ThrowInvalidArgument("degenerate horizon: singular boundary system");
  const auto [a, b, cc, d] = *x;
  const double dt = tb.t_entry - t_origin;
  CubicCoeffs c;
  c.a = a;
  c.b = b - a * dt;
  c.c = cc - b * dt + a * dt * dt / 2.0;
  c.d = d - cc * dt + b * dt * dt / 2.0 - a * dt * dt * dt / 6.0;
  c.t_origin = t_origin;
  c.t_begin = tb.t_entry;
  c.t_end = tb.t_exit;
  return c;
}

EnergySample EvalEnergy(const CubicCoeffs& c, double t) {
  const double s = t - c.t_origin;
  EnergySample out;
  out.u = c.a * s + c.b;
  out.state.v = (0.5 * c.a * s + c.b) * s + c.c;
  out.state.p = ((c.a * s / 6.0 + 0.5 * c.b) * s + c.c) * s + c.d;
  out.extrapolated = t < c.t_begin || t > c.t_end;
  return out;
}

std::vector<ConstraintViolation> CheckInactiveConstraints(
    const CubicCoeffs& c, const TimedBoundary& tb, const Limits& limits) {
  std::vector<ConstraintViolation> out;
  auto check_u = [&](double t) {
    const double u = EvalEnergy(c, t).u;
    if (u < limits.u_min || u > limits.u_max) {
      out.push_back({LimitKind::kControl, t, u, limits.u_min, limits.u_max});
    }
  };
  auto check_v = [&](double t) {
    const double v = EvalEnergy(c, t).state.v;
    if (v < limits.v_min || v > limits.v_max) {
      out.push_back({LimitKind::kSpeed, t, v, limits.v_min, limits.v_max});
    }
  };
  check_u(tb.t_entry);
  check_u(tb.t_exit);
  check_v(tb.t_entry);
  check_v(tb.t_exit);
  if (c.a != 0.0) {
    const double t_vertex = c.t_origin - c.b / c.a;
    if (t_vertex > tb.t_entry && t_vertex < tb.t_exit) check_v(t_vertex);
  }
  return out;
}

CubicCoeffs ReplanFrom(const CubicCoeffs& c, double t_now,
                       const TimedBoundary& tb) {
  return ReplanFrom(c, t_now, EvalEnergy(c, t_now).state, tb);
}

CubicCoeffs ReplanFrom(const CubicCoeffs& c, double t_now,
                       const VehicleState& measured, const TimedBoundary& tb) {
  if (!(t_now >= tb.t_entry && t_now < tb.t_exit)) {
    ThrowInvalidArgument("replan time " + std::to_string(t_now) +
                         " outside [t_entry, t_exit)");
  }
  const VehicleState exit = EvalEnergy(c, tb.t_exit).state;
  const double tol = 1e-6 * (1.0 + std::abs(tb.boundary.p_e));
  if (std::abs(exit.p - tb.boundary.p_e) > tol ||
      std::abs(exit.v - tb.boundary.v_e) > tol) {
    ThrowInvalidArgument("replan: trajectory does not end at the exit state");
  }
  // The plan already meets the exit, so only the measured deviation has to
  // be carried to zero there. Re-solving from the evaluated state instead
  // would amplify its rounding by the cube of the remaining horizon.
  const VehicleState planned = EvalEnergy(c, t_now).state;
  CubicCoeffs out = c;
  out.t_begin = t_now;
  if (measured.p == planned.p && measured.v == planned.v) return out;
  const TimedBoundary deviation{
      {measured.p - planned.p, 0.0, measured.v - planned.v, 0.0},
      t_now,
      tb.t_exit};
  const CubicCoeffs fix = SolveEnergy(deviation, c.t_origin);
  out.a += fix.a;
  out.b += fix.b;
  out.c += fix.c;
  out.d += fix.d;
  return out;
}

double ControlEffort(const CubicCoeffs& c) {
  // Expanded integral of (a s + b)^2 over [s0, s1].
  const double s0 = c.t_begin - c.t_origin;
  const double s1 = c.t_end - c.t_origin;
  const double integral =
      c.a * c.a * (s1 * s1 * s1 - s0 * s0 * s0) / 3.0 +
      c.a * c.b * (s1 * s1 - s0 * s0) + c.b * c.b * (s1 - s0);
  return 0.5 * integral;
}

namespace {

// One arc of a speed-capped traversal, closing a speed gap g with the control
// min(bound, slope * s), s measured from the cruise junction.
struct RampArc {
  double gap = 0.0;
  double bound = 0.0;
  double slope = 0.0;

  // Time at which the ramp hits the bound.
  double SaturatesAt() const { return bound / slope; }

  double Duration() const {
    if (gap == 0.0) return 0.0;
    const double ramp = std::sqrt(2.0 * gap / slope);
    if (slope * ramp <= bound) return ramp;
    return gap / bound + 0.5 * SaturatesAt();
  }

  // Speed gained by time s.
  double Gap(double s) const {
    const double s_sat = SaturatesAt();
    if (s <= s_sat) return 0.5 * slope * s * s;
    return bound * (s - 0.5 * s_sat);
  }

  // Distance lost against cruising, integrated up to time s.
  double Deficit(double s) const {
    const double s_sat = SaturatesAt();
    if (s <= s_sat) return slope * s * s * s / 6.0;
    const double shifted = s - 0.5 * s_sat;
    return slope * s_sat * s_sat * s_sat / 6.0 +
           0.5 * bound * (shifted * shifted - 0.25 * s_sat * s_sat);
  }

  double Control(double s) const { return std::min(bound, slope * s); }

  double Effort() const {
    const double d = Duration();
    const double s_sat = std::min(d, SaturatesAt());
    return slope * slope * s_sat * s_sat * s_sat / 3.0 +
           bound * bound * (d - s_sat);
  }
};

RampArc EntryArc(const SpeedCappedArc& arc) {
  return {std::abs(arc.v_cap - arc.timed.boundary.v_s), arc.u_bound_in,
          arc.slope};
}

RampArc ExitArc(const SpeedCappedArc& arc) {
  return {std::abs(arc.v_cap - arc.timed.boundary.v_e), arc.u_bound_out,
          arc.slope};
}

}  // namespace

std::optional<SpeedCappedArc> SolveSpeedCapped(const TimedBoundary& tb,
                                               double v_cap,
                                               const Limits& limits) {
  const double tau = tb.t_exit - tb.t_entry;
  if (!(tau > 0.0) || !(v_cap > 0.0)) return std::nullopt;
  const ZoneBoundary& b = tb.boundary;
  // Distance the two arcs must give up (cap above) or gain (cap below)
  // against cruising at v_cap for the whole horizon.
  const double excess = v_cap * tau - (b.p_e - b.p_s);
  const double dir = excess > 0.0 ? 1.0 : -1.0;
  const double gap_in = v_cap - b.v_s;
  const double gap_out = v_cap - b.v_e;
  if (gap_in * dir < 0.0 || gap_out * dir < 0.0) return std::nullopt;

  SpeedCappedArc arc{tb, v_cap, dir > 0.0, tb.t_entry, tb.t_exit,
                     0.0, 0.0, 0.0};
  arc.u_bound_in = dir > 0.0 ? limits.u_max : -limits.u_min;
  arc.u_bound_out = dir > 0.0 ? -limits.u_min : limits.u_max;
  if (gap_in == 0.0 && gap_out == 0.0) {
    if (excess != 0.0) return std::nullopt;
    return arc;
  }

  const double target = std::abs(excess);
  auto deficit = [&](double slope) {
    arc.slope = slope;
    const RampArc in = EntryArc(arc);
    const RampArc out = ExitArc(arc);
    return in.Deficit(in.Duration()) + out.Deficit(out.Duration());
  };
  // The deficit falls with the slope towards the bang-bang value.
  const double floor = gap_in * gap_in / (2.0 * arc.u_bound_in) +
                       gap_out * gap_out / (2.0 * arc.u_bound_out);
  if (!(target > floor)) return std::nullopt;
  double lo = 1.0;
  double hi = 1.0;
  while (deficit(lo) < target) lo *= 0.5;
  while (deficit(hi) > target) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (deficit(mid) > target ? lo : hi) = mid;
  }
  arc.slope = hi;
  const double d_in = EntryArc(arc).Duration();
  const double d_out = ExitArc(arc).Duration();
  if (d_in + d_out > tau) return std::nullopt;
  arc.t_join = tb.t_entry + d_in;
  arc.t_leave = tb.t_exit - d_out;
  return arc;
}

EnergySample EvalSpeedCapped(const SpeedCappedArc& arc, double t) {
  const ZoneBoundary& b = arc.timed.boundary;
  const double dir = arc.cap_above ? 1.0 : -1.0;
  EnergySample out;
  out.extrapolated = t < arc.timed.t_entry || t > arc.timed.t_exit;
  if (t < arc.t_join) {
    const RampArc in = EntryArc(arc);
    const double d = arc.t_join - arc.timed.t_entry;
    const double s = arc.t_join - t;
    out.u = dir * in.Control(s);
    out.state.v = arc.v_cap - dir * in.Gap(s);
    // Entry position plus the distance covered so far.
    const double to_join = arc.v_cap * d - dir * in.Deficit(d);
    const double rest = arc.v_cap * s - dir * in.Deficit(s);
    out.state.p = b.p_s + (to_join - rest);
  } else if (t <= arc.t_leave) {
    const RampArc in = EntryArc(arc);
    const double d = arc.t_join - arc.timed.t_entry;
    out.u = 0.0;
    out.state.v = arc.v_cap;
    out.state.p = b.p_s + arc.v_cap * d - dir * in.Deficit(d) +
                  arc.v_cap * (t - arc.t_join);
  } else {
    // Measured back from the exit so the end state is reproduced exactly.
    const RampArc out_arc = ExitArc(arc);
    const double d = arc.timed.t_exit - arc.t_leave;
    const double s = t - arc.t_leave;
    out.u = -dir * out_arc.Control(s);
    out.state.v = arc.v_cap - dir * out_arc.Gap(s);
    const double whole = arc.v_cap * d - dir * out_arc.Deficit(d);
    const double done = arc.v_cap * s - dir * out_arc.Deficit(s);
    out.state.p = b.p_e - (whole - done);
  }
  return out;
}

double ControlEffort(const SpeedCappedArc& arc) {
  if (arc.slope == 0.0) return 0.0;
  return 0.5 * (EntryArc(arc).Effort() + ExitArc(arc).Effort());
}

}  // namespace cavcoord

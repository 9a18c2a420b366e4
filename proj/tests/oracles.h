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

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the planners it is used to check.

#ifndef CAVCOORD_TESTS_ORACLES_H_
#define CAVCOORD_TESTS_ORACLES_H_

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "cavcoord/dynamics.h"
#include "cavcoord/energy_optimal.h"
#include "cavcoord/time_optimal.h"

namespace cavcoord::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double Uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  int Int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

inline constexpr Limits kDefaultLimits{-3.0, 3.0, 1.0, 25.0};

// Exit speed after a constant-control arc of length d, or a negative value
// when the speed would reach zero first.
double ArcExitSpeed(double v0, double u, double d);

// Reachable exit speeds found by stepping pure braking and pure acceleration
// forward in time, holding the speed once it reaches a limit. The last step
// is bisected onto the zone end.
struct IntegratedBounds {
  double lo = 0.0;
  double hi = 0.0;
};
IntegratedBounds IntegrateBounds(double length, double v_s,
                                 const Limits& limits, double step_s = 1e-3);

// Random boundary in the interior of the reachable band whose unconstrained
// accelerate-then-decelerate switch speed stays below v_max.
ZoneBoundary RandomFeasibleBoundary(Rng& rng, const Limits& limits,
                                    double min_length = 10.0,
                                    double max_length = 400.0);

// Shortest traversal found over a family of admissible profiles:
//  - one switch: an extreme arc (u_max or u_min) up to a grid position, then
//    a constant arc fitted to reach (p_e, v_e);
//  - two switches: extreme arc, then an arc at u_max, 0 or u_min, then the
//    fitted arc, at `double_samples` random switch pairs.
// Profiles leaving [v_min, v_max] or [u_min, u_max] are discarded.
double BruteForceMinTime(const ZoneBoundary& b, const Limits& limits,
                         double grid_m, int double_samples, Rng& rng);

// Forward integration of the feedback law with exact constant-control steps.
// A change of control inside a step is located by bisection on time, so
// only the law itself is queried.
VehicleState IntegrateFeedback(const BangBangPlan& plan, double step_s);

// Decelerate-first traversal time for symmetric limits |u| = a. Returns a
// negative value when that profile does not exist.
double DecelerateFirstTime(const ZoneBoundary& b, double a);

// Exhaustive search over {R} and {t + h} for the earliest entry that keeps
// the headway to every occupied time and meets the deadline. Returns NaN if
// none does.
double CandidateEarliestEntry(double release_s, double deadline_s,
                              std::span<const double> occupied_s,
                              double headway_s);

// Composite Simpson rule with at most `max_step` spacing.
template <typename F>
double Simpson(F&& f, double a, double b, double max_step) {
  int n = static_cast<int>(std::ceil((b - a) / max_step));
  if (n % 2 == 1) ++n;
  if (n < 2) n = 2;
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
  return sum * h / 3.0;
}

// Result of adding the perturbation eps * sin(k pi s / tau) to the control of
// a solved cubic, after projecting out the components that would move the
// boundary states.
struct PerturbationOutcome {
  double base_cost = 0.0;       // integral of u^2
  double perturbed_cost = 0.0;  // integral of (u + w)^2
  double exit_p_error = 0.0;    // displacement of the perturbed end state
  double exit_v_error = 0.0;
};
PerturbationOutcome PerturbCubic(const CubicCoeffs& c, int k, double eps,
                                 double max_step);

}  // namespace cavcoord::testing

#endif  // CAVCOORD_TESTS_ORACLES_H_

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

#ifndef CAVCOORD_DYNAMICS_H_
#define CAVCOORD_DYNAMICS_H_

#include <vector>

namespace cavcoord {

// Double-integrator state. `p` is arclength along the vehicle's path measured
// from control-zone entry.
struct VehicleState {
  double p = 0.0;  // m
  double v = 0.0;  // m/s
};

// Uniform control and speed limits shared by every vehicle.
struct Limits {
  double u_min = 0.0;  // m/s^2, < 0
  double u_max = 0.0;  // m/s^2, > 0
  double v_min = 0.0;  // m/s, > 0
  double v_max = 0.0;  // m/s, >= v_min

  // Throws kInvalidArgument unless u_min < 0 < u_max and 0 < v_min <= v_max.
  void Validate() const;
};

enum class LimitKind { kControl, kSpeed };

struct LimitViolation {
  LimitKind kind = LimitKind::kControl;
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

// Exact constant-acceleration step. Throws kInvalidArgument for dt < 0.
VehicleState IntegrateConstAccel(const VehicleState& s, double u, double dt);

// Empty iff u is in [u_min, u_max] and v is in [v_min, v_max].
std::vector<LimitViolation> CheckLimits(double u, double v,
                                        const Limits& limits);

}  // namespace cavcoord

#endif  // CAVCOORD_DYNAMICS_H_

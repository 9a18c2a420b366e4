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

#include "cavcoord/dynamics.h"

#include <string>

#include "cavcoord/error.h"

namespace cavcoord {

void Limits::Validate() const {
  if (!(u_min < 0.0 && u_max > 0.0)) {
    ThrowInvalidArgument("limits: require u_min < 0 < u_max");
  }
  if (!(v_min > 0.0 && v_min <= v_max)) {
    ThrowInvalidArgument("limits: require 0 < v_min <= v_max");
  }
}

VehicleState IntegrateConstAccel(const VehicleState& s, double u, double dt) {
  if (dt < 0.0) {
    ThrowInvalidArgument("integrate: negative dt " + std::to_string(dt));
  }
  return {s.p + s.v * dt + 0.5 * u * dt * dt, s.v + u * dt};
}

std::vector<LimitViolation> CheckLimits(double u, double v,
                                        const Limits& limits) {
  std::vector<LimitViolation> out;
  if (u < limits.u_min || u > limits.u_max) {
    out.push_back({LimitKind::kControl, u, limits.u_min, limits.u_max});
  }
  if (v < limits.v_min || v > limits.v_max) {
    out.push_back({LimitKind::kSpeed, v, limits.v_min, limits.v_max});
  }
  return out;
}

}  // namespace cavcoord

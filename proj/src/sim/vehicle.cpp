// Copyright 2026 The Roadshake Authors
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


#include <algorithm>
#include <cmath>

#include "roadshake/sim.hpp"

namespace roadshake {

VehicleState step_bicycle(const VehicleState& s, double steering, double throttle, double dt,
                          const VehicleParams& params) {
  VehicleState n = s;
  n.steering = std::clamp(steering, -params.max_steering, params.max_steering);
  n.throttle = std::clamp(throttle, 0.0, 1.0);
  n.heading = s.heading + (s.speed / params.wheelbase) * std::tan(n.steering) * dt;
  n.x = s.x - s.speed * std::sin(n.heading) * dt;
  n.y = s.y + s.speed * std::cos(n.heading) * dt;
  n.speed = std::clamp(s.speed + (n.throttle * params.max_accel - params.drag * s.speed) * dt, 0.0,
                       params.max_speed);
  return n;
}

}  // namespace roadshake

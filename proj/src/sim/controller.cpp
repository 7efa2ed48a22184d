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
#include <cstdlib>

#include "roadshake/sim.hpp"

namespace roadshake {

bool is_road_pixel(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const int hi = std::max({r, g, b});
  const int lo = std::min({r, g, b});
  const int mean = (r + g + b) / 3;
  if (hi - lo <= 24 && mean >= 55 && mean <= 135) return true;
  // Centerline dash.
  return r >= 190 && g >= 170 && b <= 140 && std::abs(r - g) <= 50;
}

namespace {

struct Band {
  double sum = 0.0;
  long long count = 0;
};

Band scan(const Frame& f, int y0, int y1) {
  Band b;
  const int ch = f.channels();
  for (int y = y0; y < y1; ++y) {
    const std::uint8_t* row = f.row(y);
    for (int x = 0; x < f.width(); ++x) {
      const std::uint8_t* p = row + x * ch;
      if (is_road_pixel(p[0], p[1], p[2])) {
        b.sum += x + 0.5;
        ++b.count;
      }
    }
  }
  return b;
}

}  // namespace

ControlAction ReferenceController::operator()(const Frame& frame) const {
  const int h = frame.height();
  const int w = frame.width();
  const Band far = scan(frame, h / 2, (3 * h) / 4);
  const Band near = scan(frame, (3 * h) / 4, h);
  if (far.count == 0 && near.count == 0) return {0.0, 0.0, true};
  const double half = w * 0.5;
  auto offset = [&](const Band& b) { return (b.sum / static_cast<double>(b.count) - half) / half; };
  const double o_far = far.count > 0 ? offset(far) : offset(near);
  const double o_near = near.count > 0 ? offset(near) : o_far;
  ControlAction a;
  a.steering = std::clamp(-(params_.near_gain * o_near + params_.far_gain * o_far), -0.5, 0.5);
  a.throttle = params_.cruise_throttle * (1.0 - params_.slowdown * std::min(1.0, std::fabs(o_far)));
  return a;
}

}  // namespace roadshake

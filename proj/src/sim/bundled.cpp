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


#include <cmath>
#include <numbers>

#include "roadshake/sim.hpp"

namespace roadshake {

std::vector<RoadScenario> bundled_roads() {
  static const RoadAngles kAngles[] = {
      {0, 10, -10, 20, 0, -20, 15, 0},   {0, 25, 0, -25, 0, 30, 0, -30},
      {5, -15, 20, -10, 0, 35, -20, 0},  {0, 0, 35, 0, 0, -35, 0, 0},
      {10, 10, 10, 10, -10, -10, -10, -10}, {0, -20, -20, 0, 20, 20, 0, 0},
      {0, 30, -30, 30, -30, 0, 0, 0},    {0, 15, 15, 15, -35, 0, 20, -10},
      {0, -35, 0, 35, 0, -35, 0, 35},    {0, 5, -5, 10, -10, 15, -15, 0},
  };
  std::vector<RoadScenario> roads;
  int i = 0;
  for (const auto& a : kAngles) {
    roads.push_back(build_road(a, kDefaultLaneWidth, "road_0" + std::to_string(i)));
    ++i;
  }
  return roads;
}

std::vector<Frame> bundled_corpus(const CameraConfig& camera) {
  const auto roads = bundled_roads();
  std::vector<Frame> corpus;
  for (int k = 0; k < 20; ++k) {
    const RoadScenario& road = roads[static_cast<std::size_t>(k % 10)];
    const std::size_t idx = static_cast<std::size_t>(12 + 9 * k);
    const Vec2 p = road.centerline()[idx];
    const int seg = std::min(kRoadSegments - 1, static_cast<int>(idx / 25));
    const double h = road.segment_heading(seg);
    const double lateral = ((k % 3) - 1) * 0.5;
    VehicleState s;
    s.x = p.x - lateral * std::cos(h);
    s.y = p.y - lateral * std::sin(h);
    s.heading = h + ((k % 5) - 2) * 2.5 * std::numbers::pi / 180.0;
    corpus.push_back(render_camera(road, s, camera));
  }
  return corpus;
}

}  // namespace roadshake

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


#include <gtest/gtest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "roadshake/errors.hpp"
#include "roadshake/road.hpp"
#include "roadshake/rng.hpp"
#include "roadshake/sim.hpp"

namespace roadshake {
namespace {

RoadAngles random_angles(SeededRng& rng) {
  RoadAngles a{};
  for (int& v : a) v = static_cast<int>(rng.below(2 * kMaxRoadAngle + 1)) - kMaxRoadAngle;
  return a;
}

TEST(Road, StraightRoadEndsTwoHundredMetresAhead) {
  const RoadScenario r = build_road(RoadAngles{}, 4.0, "straight");
  ASSERT_EQ(r.waypoints().size(), 9u);
  EXPECT_DOUBLE_EQ(r.waypoints().back().x, 0.0);
  EXPECT_DOUBLE_EQ(r.waypoints().back().y, 200.0);
  EXPECT_DOUBLE_EQ(r.length(), 200.0);
  EXPECT_EQ(r.id(), "straight");
}

TEST(Road, PositiveAngleTurnsLeft) {
  const RoadScenario r = make_road({90 / 3, 0, 0, 0, 0, 0, 0, 0});
  EXPECT_LT(r.waypoints()[1].x, 0.0);
  EXPECT_NEAR(r.waypoints()[1].x, -25.0 * std::sin(std::numbers::pi / 6), 1e-12);
  EXPECT_NEAR(r.segment_heading(3), std::numbers::pi / 6, 1e-12);
}

TEST(Road, CenterlineArcLengthIsTwoHundredForAnyAngles) {
  SeededRng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const RoadScenario r = make_road(random_angles(rng));
    const auto& pts = r.centerline();
    ASSERT_EQ(pts.size(), r.arcs().size());
    double len = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const double step = std::hypot(pts[i].x - pts[i - 1].x, pts[i].y - pts[i - 1].y);
      ASSERT_NEAR(step, kCenterlineSpacing, 1e-9);
      ASSERT_NEAR(r.arcs()[i] - r.arcs()[i - 1], step, 1e-9);
      len += step;
    }
    ASSERT_NEAR(len, 200.0, 1e-9);
    ASSERT_DOUBLE_EQ(r.arcs().back(), 200.0);
  }
}

// Eight equal segments with turns of at most 35 degrees accumulate less
// total curvature than a self-crossing needs.
TEST(Road, EqualSegmentRoadsWithinRangeAreSimple) {
  SeededRng rng(11);
  for (int trial = 0; trial < 2000; ++trial) ASSERT_TRUE(make_road(random_angles(rng)).simple());
  RoadAngles extreme{};
  extreme.fill(kMaxRoadAngle);
  EXPECT_TRUE(make_road(extreme).simple());
}

TEST(Road, AngleRangeIsChecked) {
  EXPECT_THROW(make_road({36, 0, 0, 0, 0, 0, 0, 0}), AngleOutOfRange);
  EXPECT_THROW(make_road({0, 0, 0, 0, 0, 0, 0, -36}), AngleOutOfRange);
  const std::array<int, 7> short_list{};
  EXPECT_THROW(to_road_angles(short_list), Error);
  EXPECT_THROW(make_road(RoadAngles{}, 0.0), InvalidRoad);
}

TEST(SegmentsIntersect, Oracles) {
  EXPECT_TRUE(segments_intersect({0, 0}, {2, 2}, {0, 2}, {2, 0}));
  EXPECT_FALSE(segments_intersect({0, 0}, {1, 1}, {2, 2}, {3, 0}));
  EXPECT_TRUE(segments_intersect({0, 0}, {2, 0}, {2, 0}, {3, 5}));  // shared endpoint
  EXPECT_TRUE(segments_intersect({0, 0}, {4, 0}, {2, 0}, {6, 0}));  // collinear overlap
  EXPECT_FALSE(segments_intersect({0, 0}, {1, 0}, {2, 0}, {3, 0}));  // collinear, disjoint
  EXPECT_FALSE(segments_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}));  // parallel
}

TEST(SegmentsIntersect, SymmetricUnderSwaps) {
  SeededRng rng(5);
  for (int i = 0; i < 5000; ++i) {
    auto p = [&] { return Vec2{static_cast<double>(rng.below(5)), static_cast<double>(rng.below(5))}; };
    const Vec2 a = p(), b = p(), c = p(), d = p();
    const bool r = segments_intersect(a, b, c, d);
    ASSERT_EQ(r, segments_intersect(c, d, a, b));
    ASSERT_EQ(r, segments_intersect(b, a, d, c));
  }
}

TEST(RoadStats, CountsTurnsAtThreshold) {
  const RoadStats s = angle_stats({0, 10, -10, 20, 0, -20, 15, 0});
  EXPECT_EQ(s.num_turns, 3);
  EXPECT_DOUBLE_EQ(s.avg_curvature, 75.0 / 8.0);
  EXPECT_EQ(s.max_angle, 20);
  EXPECT_EQ(angle_stats({14, -14, 0, 0, 0, 0, 0, 0}).num_turns, 0);
  EXPECT_EQ(angle_stats({14, -14, 0, 0, 0, 0, 0, 0}, 14.0).num_turns, 2);
}

TEST(Projection, OffsetSignAndArc) {
  const RoadScenario r = make_road(RoadAngles{});
  const auto left = nearest_centerline(r, {-1.5, 42.25});
  EXPECT_NEAR(left.offset, 1.5, 1e-12);
  EXPECT_NEAR(left.arc, 42.25, 1e-12);
  EXPECT_NEAR(nearest_centerline(r, {2.0, 10.0}).offset, -2.0, 1e-12);
  EXPECT_NEAR(nearest_centerline(r, {0.0, 100.0}).offset, 0.0, 1e-12);
}

TEST(RoadJson, RoundTripAndSchemaCheck) {
  SeededRng rng(8);
  for (int i = 0; i < 20; ++i) {
    const RoadScenario r = make_road(random_angles(rng), 3.5, kDefaultSegmentLength, "r" + std::to_string(i));
    const nlohmann::json j = road_to_json(r);
    EXPECT_EQ(j.at("schema"), kRoadSchema);
    const RoadScenario back = road_from_json(j);
    EXPECT_EQ(back.angles(), r.angles());
    EXPECT_EQ(back.id(), r.id());
    EXPECT_DOUBLE_EQ(back.lane_width(), 3.5);
    EXPECT_EQ(road_to_json(back), j);
  }
  nlohmann::json bad = road_to_json(make_road(RoadAngles{}));
  bad["schema"] = "roadshake.road/0";
  EXPECT_THROW(road_from_json(bad), ConfigError);
  EXPECT_THROW(road_from_json(nlohmann::json::parse(R"({"angles": [1, 2]})")), Error);
  EXPECT_THROW(road_from_json(nlohmann::json::parse(R"({"angles": [0,0,0,0,0,0,0,40]})")),
               AngleOutOfRange);
}

TEST(BundledRoads, TenSimpleDrivableRoads) {
  const auto roads = bundled_roads();
  ASSERT_EQ(roads.size(), 10u);
  const ReferenceController controller;
  for (std::size_t i = 0; i < roads.size(); ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "road_%02zu", i);
    EXPECT_EQ(roads[i].id(), id);
    EXPECT_TRUE(roads[i].simple());
    EXPECT_TRUE(verify_drivable(roads[i], controller)) << id;
  }
}

}  // namespace
}  // namespace roadshake

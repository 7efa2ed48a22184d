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


// Piecewise-straight roads built from eight relative heading changes.
//
// World frame: x to the right of the start, y forward. Headings are measured
// counter-clockwise from +y, so a positive angle turns the road to the left
// and the unit direction for heading h is (-sin h, cos h).

#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace roadshake {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline constexpr int kRoadSegments = 8;
inline constexpr int kMaxRoadAngle = 35;
inline constexpr double kDefaultSegmentLength = 25.0;
inline constexpr double kDefaultLaneWidth = 4.0;
inline constexpr double kDefaultTurnThreshold = 15.0;
/// Spacing of the densified centerline.
inline constexpr double kCenterlineSpacing = 1.0;

using RoadAngles = std::array<int, kRoadSegments>;

class RoadScenario {
 public:
  const std::string& id() const { return id_; }
  const RoadAngles& angles() const { return angles_; }
  double segment_length() const { return segment_length_; }
  double lane_width() const { return lane_width_; }
  double length() const { return segment_length_ * kRoadSegments; }

  /// Segment endpoints, kRoadSegments + 1 of them.
  const std::vector<Vec2>& waypoints() const { return waypoints_; }
  /// Centerline at kCenterlineSpacing; vertex k sits at arc position arcs()[k].
  const std::vector<Vec2>& centerline() const { return centerline_; }
  const std::vector<double>& arcs() const { return arcs_; }
  /// Heading (radians) of segment i.
  double segment_heading(int i) const { return headings_[static_cast<std::size_t>(i)]; }
  double start_heading() const { return headings_.front(); }

  /// False when the centerline crosses itself.
  bool simple() const { return simple_; }

 private:
  friend RoadScenario make_road(const RoadAngles&, double, double, std::string);

  std::string id_;
  RoadAngles angles_{};
  double segment_length_ = kDefaultSegmentLength;
  double lane_width_ = kDefaultLaneWidth;
  std::vector<Vec2> waypoints_;
  std::vector<Vec2> centerline_;
  std::vector<double> arcs_;
  std::vector<double> headings_;
  bool simple_ = true;
};

/// Builds the geometry without rejecting self-intersections; check simple().
/// Throws AngleOutOfRange.
RoadScenario make_road(const RoadAngles& angles, double lane_width = kDefaultLaneWidth,
                       double segment_length = kDefaultSegmentLength, std::string id = {});

/// Like make_road but throws InvalidRoad for self-intersecting centerlines.
RoadScenario build_road(const RoadAngles& angles, double lane_width = kDefaultLaneWidth,
                        std::string id = {});

/// Checks the range of each angle. Throws AngleOutOfRange.
RoadAngles to_road_angles(std::span<const int> angles);

/// True when two closed segments share at least one point. Exact orientation
/// predicates on doubles, collinear overlaps included.
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

struct RoadStats {
  int num_turns = 0;
  double avg_curvature = 0.0;
  int max_angle = 0;
};

RoadStats road_stats(const RoadScenario& road, double turn_threshold = kDefaultTurnThreshold);
RoadStats angle_stats(const RoadAngles& angles, double turn_threshold = kDefaultTurnThreshold);

struct CenterlineProjection {
  Vec2 point;
  /// Positive to the left of the direction of travel.
  double offset = 0.0;
  double arc = 0.0;
};

CenterlineProjection nearest_centerline(const RoadScenario& road, Vec2 p);

inline constexpr std::string_view kRoadSchema = "roadshake.road/1";

nlohmann::json road_to_json(const RoadScenario& road);
/// Throws ConfigError on malformed documents, AngleOutOfRange, InvalidRoad.
RoadScenario road_from_json(const nlohmann::json& j);

}  // namespace roadshake

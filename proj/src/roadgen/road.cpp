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


#include "roadshake/road.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <nlohmann/json.hpp>

#include "roadshake/errors.hpp"

namespace roadshake {

namespace {

double cross(Vec2 o, Vec2 a, Vec2 b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

}  // namespace

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const int d1 = sign(cross(c, d, a));
  const int d2 = sign(cross(c, d, b));
  const int d3 = sign(cross(a, b, c));
  const int d4 = sign(cross(a, b, d));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && on_segment(c, d, a)) return true;
  if (d2 == 0 && on_segment(c, d, b)) return true;
  if (d3 == 0 && on_segment(a, b, c)) return true;
  if (d4 == 0 && on_segment(a, b, d)) return true;
  return false;
}

RoadAngles to_road_angles(std::span<const int> angles) {
  if (angles.size() != kRoadSegments) {
    throw AngleOutOfRange("a road needs exactly 8 angles, got " + std::to_string(angles.size()));
  }
  RoadAngles out{};
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (std::abs(angles[i]) > kMaxRoadAngle) {
      throw AngleOutOfRange("angle " + std::to_string(i) + " is " + std::to_string(angles[i]) +
                            ", outside [-35, 35]");
    }
    out[i] = angles[i];
  }
  return out;
}

RoadScenario make_road(const RoadAngles& angles, double lane_width, double segment_length,
                       std::string id) {
  to_road_angles(angles);
  if (!(lane_width > 0.0) || !(segment_length > 0.0)) {
    throw InvalidRoad("lane width and segment length must be positive");
  }
  RoadScenario r;
  r.id_ = std::move(id);
  r.angles_ = angles;
  r.lane_width_ = lane_width;
  r.segment_length_ = segment_length;

  // Angle i turns the heading at the start of segment i.
  int heading_deg = 0;
  r.waypoints_.push_back({0.0, 0.0});
  for (int i = 0; i < kRoadSegments; ++i) {
    heading_deg += angles[static_cast<std::size_t>(i)];
    const double h = heading_deg * std::numbers::pi / 180.0;
    r.headings_.push_back(h);
    const Vec2 a = r.waypoints_.back();
    r.waypoints_.push_back({a.x - segment_length * std::sin(h), a.y + segment_length * std::cos(h)});
  }

  const int per_segment = static_cast<int>(std::lround(segment_length / kCenterlineSpacing));
  for (int i = 0; i < kRoadSegments; ++i) {
    const Vec2 a = r.waypoints_[static_cast<std::size_t>(i)];
    const Vec2 b = r.waypoints_[static_cast<std::size_t>(i) + 1];
    for (int k = 0; k < per_segment; ++k) {
      const double t = static_cast<double>(k) / per_segment;
      r.centerline_.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
      r.arcs_.push_back(i * segment_length + t * segment_length);
    }
  }
  r.centerline_.push_back(r.waypoints_.back());
  r.arcs_.push_back(kRoadSegments * segment_length);

  for (int i = 0; i < kRoadSegments && r.simple_; ++i) {
    for (int j = i + 2; j < kRoadSegments; ++j) {
      if (segments_intersect(r.waypoints_[i], r.waypoints_[i + 1], r.waypoints_[j],
                             r.waypoints_[j + 1])) {
        r.simple_ = false;
        break;
      }
    }
  }
  return r;
}

RoadScenario build_road(const RoadAngles& angles, double lane_width, std::string id) {
  RoadScenario r = make_road(angles, lane_width, kDefaultSegmentLength, std::move(id));
  if (!r.simple()) throw InvalidRoad("road centerline intersects itself");
  return r;
}

RoadStats angle_stats(const RoadAngles& angles, double turn_threshold) {
  RoadStats s;
  int total = 0;
  for (int a : angles) {
    const int m = std::abs(a);
    if (m >= turn_threshold) ++s.num_turns;
    total += m;
    s.max_angle = std::max(s.max_angle, m);
  }
  s.avg_curvature = static_cast<double>(total) / kRoadSegments;
  return s;
}

RoadStats road_stats(const RoadScenario& road, double turn_threshold) {
  return angle_stats(road.angles(), turn_threshold);
}

CenterlineProjection nearest_centerline(const RoadScenario& road, Vec2 p) {
  const auto& pts = road.centerline();
  const auto& arcs = road.arcs();
  CenterlineProjection best;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Vec2 a = pts[i];
    const Vec2 b = pts[i + 1];
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / (dx * dx + dy * dy);
    Vec2 q;
    double tc;
    // Endpoints are returned exactly so vertex queries give zero offsets.
    if (t <= 0.0) {
      q = a;
      tc = 0.0;
    } else if (t >= 1.0) {
      q = b;
      tc = 1.0;
    } else {
      q = {a.x + t * dx, a.y + t * dy};
      tc = t;
    }
    const double ex = p.x - q.x;
    const double ey = p.y - q.y;
    const double d2 = ex * ex + ey * ey;
    if (d2 < best_d2) {
      best_d2 = d2;
      const double side = dx * ey - dy * ex;
      const double d = std::sqrt(d2);
      best.point = q;
      best.offset = side > 0.0 ? d : (side < 0.0 ? -d : 0.0);
      best.arc = tc == 1.0 ? arcs[i + 1] : arcs[i] + tc * (arcs[i + 1] - arcs[i]);
    }
  }
  return best;
}

nlohmann::json road_to_json(const RoadScenario& road) {
  return {{"schema", kRoadSchema},
          {"id", road.id()},
          {"angles", road.angles()},
          {"segment_length", road.segment_length()},
          {"lane_width", road.lane_width()}};
}

RoadScenario road_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("road", "expected an object");
  if (j.contains("schema") && j["schema"] != kRoadSchema) {
    throw ConfigError("road.schema", "expected " + std::string(kRoadSchema));
  }
  if (!j.contains("angles") || !j["angles"].is_array()) {
    throw ConfigError("road.angles", "missing or not an array");
  }
  std::vector<int> angles;
  for (const auto& a : j["angles"]) {
    if (!a.is_number_integer()) throw ConfigError("road.angles", "angles must be integers");
    angles.push_back(a.get<int>());
  }
  const double lane = j.value("lane_width", kDefaultLaneWidth);
  const double seg = j.value("segment_length", kDefaultSegmentLength);
  RoadScenario r = make_road(to_road_angles(angles), lane, seg, j.value("id", std::string{}));
  if (!r.simple()) throw InvalidRoad("road '" + r.id() + "' intersects itself");
  return r;
}

}  // namespace roadshake

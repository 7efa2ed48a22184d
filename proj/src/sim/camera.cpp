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


// Pinhole ground-plane renderer. The optical axis is horizontal and the
// principal point sits on the horizon row, so a ground point at forward
// distance z and lateral offset x (right positive) lands at
// u = cx + f*x/z, v = horizon + f*mount_height/z.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "roadshake/rng.hpp"
#include "roadshake/sim.hpp"

namespace roadshake {

namespace {

struct CamPoint {
  double x;  // right of the optical axis
  double z;  // forward
};

struct ScreenPoint {
  double u;
  double v;
};

class Projector {
 public:
  Projector(const CameraConfig& cam, const VehicleState& s)
      : cam_(cam),
        f_(cam.width * 0.5 / std::tan(cam.hfov_deg * std::numbers::pi / 360.0)),
        cx_(cam.width * 0.5),
        horizon_(cam.height * cam.horizon),
        pos_{s.x, s.y},
        fwd_{-std::sin(s.heading), std::cos(s.heading)},
        right_{std::cos(s.heading), std::sin(s.heading)} {}

  CamPoint to_camera(Vec2 p) const {
    const double dx = p.x - pos_.x;
    const double dy = p.y - pos_.y;
    return {dx * right_.x + dy * right_.y, dx * fwd_.x + dy * fwd_.y};
  }

  ScreenPoint project(CamPoint c) const {
    return {cx_ + f_ * c.x / c.z, horizon_ + f_ * cam_.mount_height / c.z};
  }

  double near() const { return cam_.near_plane; }
  double horizon() const { return horizon_; }

 private:
  CameraConfig cam_;
  double f_;
  double cx_;
  double horizon_;
  Vec2 pos_;
  Vec2 fwd_;
  Vec2 right_;
};

// Texture jitter in [-amp, amp], a fixed function of the pixel.
int jitter(int x, int y, int amp) {
  const std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(y)) << 32) |
                            static_cast<std::uint32_t>(x);
  return static_cast<int>(splitmix64(key) % static_cast<std::uint64_t>(2 * amp + 1)) - amp;
}

void put(Frame& f, int x, int y, const std::uint8_t* rgb, int amp) {
  const int j = amp > 0 ? jitter(x, y, amp) : 0;
  std::uint8_t* p = f.row(y) + x * 3;
  for (int c = 0; c < 3; ++c) p[c] = saturate_u8(rgb[c] + j);
}

// Keeps the part of a convex ground polygon in front of the near plane.
std::vector<CamPoint> clip_near(const std::vector<CamPoint>& poly, double zn) {
  std::vector<CamPoint> out;
  out.reserve(poly.size() + 2);
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const CamPoint a = poly[i];
    const CamPoint b = poly[(i + 1) % poly.size()];
    const bool ina = a.z >= zn;
    const bool inb = b.z >= zn;
    if (ina) out.push_back(a);
    if (ina != inb) {
      const double t = (zn - a.z) / (b.z - a.z);
      out.push_back({a.x + t * (b.x - a.x), zn});
    }
  }
  return out;
}

// Fills pixels whose centres lie inside a convex screen polygon.
void fill_convex(Frame& f, const std::vector<ScreenPoint>& poly, const std::uint8_t* rgb, int amp) {
  if (poly.size() < 3) return;
  double vmin = poly[0].v;
  double vmax = poly[0].v;
  for (const auto& p : poly) {
    vmin = std::min(vmin, p.v);
    vmax = std::max(vmax, p.v);
  }
  const int y0 = std::max(0, static_cast<int>(std::ceil(vmin - 0.5)));
  const int y1 = std::min(f.height() - 1, static_cast<int>(std::floor(vmax - 0.5)));
  for (int y = y0; y <= y1; ++y) {
    const double yc = y + 0.5;
    double xl = 1e300;
    double xr = -1e300;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const ScreenPoint a = poly[i];
      const ScreenPoint b = poly[(i + 1) % poly.size()];
      if ((a.v <= yc && yc < b.v) || (b.v <= yc && yc < a.v)) {
        const double x = a.u + (yc - a.v) * (b.u - a.u) / (b.v - a.v);
        xl = std::min(xl, x);
        xr = std::max(xr, x);
      }
    }
    if (xl > xr) continue;
    const int x0 = std::max(0, static_cast<int>(std::ceil(std::max(xl, -1.0) - 0.5)));
    const int x1 = std::min(f.width(), static_cast<int>(std::ceil(std::min(xr, 1e6) - 0.5)));
    for (int x = x0; x < x1; ++x) put(f, x, y, rgb, amp);
  }
}

void draw_ground_polygon(Frame& f, const Projector& proj, const std::vector<Vec2>& world,
                         const std::uint8_t* rgb, int amp) {
  std::vector<CamPoint> cam;
  cam.reserve(world.size());
  bool any_front = false;
  for (const auto& p : world) {
    cam.push_back(proj.to_camera(p));
    any_front = any_front || cam.back().z >= proj.near();
  }
  if (!any_front) return;
  const auto clipped = clip_near(cam, proj.near());
  std::vector<ScreenPoint> screen;
  screen.reserve(clipped.size());
  for (const auto& c : clipped) screen.push_back(proj.project(c));
  fill_convex(f, screen, rgb, amp);
}

std::vector<Vec2> quad(Vec2 a, Vec2 b, double half_width) {
  const double len = std::hypot(b.x - a.x, b.y - a.y);
  const double nx = -(b.y - a.y) / len * half_width;
  const double ny = (b.x - a.x) / len * half_width;
  return {{a.x + nx, a.y + ny}, {b.x + nx, b.y + ny}, {b.x - nx, b.y - ny}, {a.x - nx, a.y - ny}};
}

}  // namespace

Frame render_camera(const RoadScenario& road, const VehicleState& state, const CameraConfig& camera) {
  Frame f(camera.width, camera.height, 3);
  const Projector proj(camera, state);

  for (int y = 0; y < f.height(); ++y) {
    const double yc = y + 0.5;
    if (yc < proj.horizon()) {
      const double t = std::clamp(yc / proj.horizon(), 0.0, 1.0);
      std::uint8_t sky[3];
      for (int c = 0; c < 3; ++c) {
        sky[c] = saturate_u8(palette::kSkyTop[c] + t * (palette::kSkyHorizon[c] - palette::kSkyTop[c]));
      }
      for (int x = 0; x < f.width(); ++x) put(f, x, y, sky, 0);
    } else {
      for (int x = 0; x < f.width(); ++x) put(f, x, y, palette::kGrass, 10);
    }
  }

  const double half = road.lane_width() * 0.5;
  const auto& wp = road.waypoints();
  for (std::size_t i = 0; i + 1 < wp.size(); ++i) {
    draw_ground_polygon(f, proj, quad(wp[i], wp[i + 1], half), palette::kRoad, 4);
  }
  // Round joints close the wedge left on the outside of each kink.
  constexpr int kJointSides = 16;
  for (std::size_t i = 1; i + 1 < wp.size(); ++i) {
    std::vector<Vec2> disc;
    for (int k = 0; k < kJointSides; ++k) {
      const double a = 2.0 * std::numbers::pi * k / kJointSides;
      disc.push_back({wp[i].x + half * std::cos(a), wp[i].y + half * std::sin(a)});
    }
    draw_ground_polygon(f, proj, disc, palette::kRoad, 4);
  }

  constexpr double kDashLength = 1.5;
  constexpr double kDashPeriod = 4.0;
  constexpr double kDashHalfWidth = 0.075;
  constexpr double kDashRange = 60.0;
  for (std::size_t i = 0; i + 1 < wp.size(); ++i) {
    const Vec2 a = wp[i];
    const Vec2 b = wp[i + 1];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    for (double s = 0.5; s + kDashLength <= len; s += kDashPeriod) {
      const Vec2 p{a.x + (b.x - a.x) * s / len, a.y + (b.y - a.y) * s / len};
      const double e = s + kDashLength;
      const Vec2 q{a.x + (b.x - a.x) * e / len, a.y + (b.y - a.y) * e / len};
      const double zp = proj.to_camera(p).z;
      const double zq = proj.to_camera(q).z;
      if (std::max(zp, zq) < proj.near() || std::min(zp, zq) > kDashRange) continue;
      draw_ground_polygon(f, proj, quad(p, q, kDashHalfWidth), palette::kDash, 0);
    }
  }
  return f;
}

}  // namespace roadshake

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

// Category F. Each drawn element consumes a fixed number of random draws, so
// level k draws exactly the first n(k) elements of the same sequence.

#include <cmath>
#include <numbers>

#include "ops.hpp"

namespace roadshake::ops {

namespace {

constexpr std::array<Rgb, 5> kPalette{{{255, 40, 40}, {250, 220, 30}, {40, 200, 255},
                                       {255, 255, 255}, {20, 20, 20}}};

int count_param(const ParamRow& p, const char* key) {
  return static_cast<int>(std::lround(param(p, key)));
}

}  // namespace

Frame splatter(const Frame& f, const ParamRow& p, SeededRng& rng) {
  const int blobs = count_param(p, "blobs");
  const double scale = f.width() / 320.0;
  Frame out = f;
  for (int i = 0; i < blobs; ++i) {
    const double cx = rng.uniform() * f.width();
    const double cy = rng.uniform() * f.height();
    const double r = (4.0 + 8.0 * rng.uniform()) * scale;
    fill_disc(out, cx, cy, r, {70, 52, 35}, 0.9);
    for (int k = 0; k < 4; ++k) {
      const double ang = rng.uniform() * 2.0 * std::numbers::pi;
      const double dist = r * (0.8 + 0.8 * rng.uniform());
      const double rr = r * (0.2 + 0.3 * rng.uniform());
      fill_disc(out, cx + dist * std::cos(ang), cy + dist * std::sin(ang), rr, {70, 52, 35}, 0.9);
    }
  }
  return out;
}

Frame dotted_lines(const Frame& f, const ParamRow& p, SeededRng& rng) {
  const int lines = count_param(p, "lines");
  const double scale = f.width() / 320.0;
  Frame out = f;
  for (int i = 0; i < lines; ++i) {
    const double x0 = rng.uniform() * f.width();
    const double y0 = rng.uniform() * f.height();
    const double ang = rng.uniform() * 2.0 * std::numbers::pi;
    const double len = (0.3 + 0.5 * rng.uniform()) * f.width();
    const Rgb color = (rng.next_u64() >> 63) != 0 ? Rgb{245, 245, 245} : Rgb{15, 15, 15};
    const double step = 6.0 * scale;
    for (double t = 0.0; t <= len; t += step) {
      fill_disc(out, x0 + t * std::cos(ang), y0 + t * std::sin(ang), 1.6 * scale, color, 1.0);
    }
  }
  return out;
}

Frame zigzag(const Frame& f, const ParamRow& p, SeededRng& rng) {
  const int lines = count_param(p, "lines");
  const double scale = f.width() / 320.0;
  Frame out = f;
  for (int i = 0; i < lines; ++i) {
    const double x0 = rng.uniform() * f.width();
    const double y0 = rng.uniform() * f.height();
    const double ang = rng.uniform() * 2.0 * std::numbers::pi;
    const double amp = (5.0 + 7.0 * rng.uniform()) * scale;
    const double half_period = (5.0 + 5.0 * rng.uniform()) * scale;
    const double len = (0.3 + 0.3 * rng.uniform()) * f.width();
    const Rgb color = kPalette[rng.below(kPalette.size())];
    const double ux = std::cos(ang);
    const double uy = std::sin(ang);
    double px = x0;
    double py = y0;
    int k = 0;
    for (double t = half_period; t <= len; t += half_period, ++k) {
      const double side = (k % 2 == 0) ? amp : -amp;
      const double nx = x0 + t * ux - side * uy;
      const double ny = y0 + t * uy + side * ux;
      draw_line(out, px, py, nx, ny, 2.0 * scale, color, 1.0);
      px = nx;
      py = ny;
    }
  }
  return out;
}

Frame edge_map(const Frame& f, const ParamRow& p, SeededRng&) {
  const double weight = param(p, "weight");
  const int w = f.width();
  const int h = f.height();
  std::vector<int> L(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) L[static_cast<std::size_t>(y) * w + x] = luma(f.at(x, y, 0), f.at(x, y, 1), f.at(x, y, 2));
  }
  auto at = [&](int x, int y) {
    return L[static_cast<std::size_t>(std::clamp(y, 0, h - 1)) * w + std::clamp(x, 0, w - 1)];
  };
  Frame edges(w, h, 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int gx = at(x + 1, y - 1) + 2 * at(x + 1, y) + at(x + 1, y + 1) - at(x - 1, y - 1) -
                     2 * at(x - 1, y) - at(x - 1, y + 1);
      const int gy = at(x - 1, y + 1) + 2 * at(x, y + 1) + at(x + 1, y + 1) - at(x - 1, y - 1) -
                     2 * at(x, y - 1) - at(x + 1, y - 1);
      const std::uint8_t m = saturate_u8(std::sqrt(static_cast<double>(gx * gx + gy * gy)) * 0.5);
      edges.at(x, y, 0) = edges.at(x, y, 1) = edges.at(x, y, 2) = m;
    }
  }
  return clamp_blend(f, edges, weight);
}

Frame cutout(const Frame& f, const ParamRow& p, SeededRng& rng) {
  const int holes = static_cast<int>(std::lround(param(p, "holes")));
  const double size = std::clamp(param(p, "size"), 0.0, 1.0);
  const int rw = static_cast<int>(std::lround(size * f.width()));
  const int rh = static_cast<int>(std::lround(size * f.height()));
  Frame out = f;
  for (int i = 0; i < holes; ++i) {
    const int x0 = static_cast<int>(std::floor(rng.uniform() * (f.width() - rw + 1)));
    const int y0 = static_cast<int>(std::floor(rng.uniform() * (f.height() - rh + 1)));
    fill_rect(out, x0, y0, x0 + rw, y0 + rh, {0, 0, 0});
  }
  return out;
}

}  // namespace roadshake::ops

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

#include "ops.hpp"

namespace roadshake::ops {

void blend_pixel(Frame& f, int x, int y, const Rgb& color, double opacity) {
  if (x < 0 || y < 0 || x >= f.width() || y >= f.height()) return;
  for (int c = 0; c < 3; ++c) {
    const double v = f.at(x, y, c);
    f.at(x, y, c) = saturate_u8(opacity * color[c] + (1.0 - opacity) * v);
  }
}

void fill_disc(Frame& f, double cx, double cy, double r, const Rgb& color, double opacity) {
  const int x0 = std::max(0, static_cast<int>(std::floor(cx - r)));
  const int x1 = std::min(f.width() - 1, static_cast<int>(std::ceil(cx + r)));
  const int y0 = std::max(0, static_cast<int>(std::floor(cy - r)));
  const int y1 = std::min(f.height() - 1, static_cast<int>(std::ceil(cy + r)));
  const double r2 = r * r;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double dx = x + 0.5 - cx;
      const double dy = y + 0.5 - cy;
      if (dx * dx + dy * dy <= r2) blend_pixel(f, x, y, color, opacity);
    }
  }
}

void fill_rect(Frame& f, int x0, int y0, int x1, int y1, const Rgb& color) {
  x0 = std::max(x0, 0);
  y0 = std::max(y0, 0);
  x1 = std::min(x1, f.width());
  y1 = std::min(y1, f.height());
  for (int y = y0; y < y1; ++y) {
    std::uint8_t* row = f.row(y);
    for (int x = x0; x < x1; ++x) {
      row[x * 3 + 0] = color[0];
      row[x * 3 + 1] = color[1];
      row[x * 3 + 2] = color[2];
    }
  }
}

void draw_line(Frame& f, double x0, double y0, double x1, double y1, double thickness,
               const Rgb& color, double opacity) {
  const double half = std::max(0.5, thickness * 0.5);
  const int bx0 = std::max(0, static_cast<int>(std::floor(std::min(x0, x1) - half)));
  const int bx1 = std::min(f.width() - 1, static_cast<int>(std::ceil(std::max(x0, x1) + half)));
  const int by0 = std::max(0, static_cast<int>(std::floor(std::min(y0, y1) - half)));
  const int by1 = std::min(f.height() - 1, static_cast<int>(std::ceil(std::max(y0, y1) + half)));
  const double dx = x1 - x0;
  const double dy = y1 - y0;
  const double len2 = dx * dx + dy * dy;
  for (int y = by0; y <= by1; ++y) {
    for (int x = bx0; x <= bx1; ++x) {
      const double px = x + 0.5 - x0;
      const double py = y + 0.5 - y0;
      const double t = len2 > 0.0 ? std::clamp((px * dx + py * dy) / len2, 0.0, 1.0) : 0.0;
      const double ex = px - t * dx;
      const double ey = py - t * dy;
      if (ex * ex + ey * ey <= half * half) blend_pixel(f, x, y, color, opacity);
    }
  }
}

}  // namespace roadshake::ops

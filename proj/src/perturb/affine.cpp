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

// Category E. Pixels revealed by a transform are filled by replicating the
// nearest edge pixel.

#include <cmath>
#include <numbers>

#include "ops.hpp"
#include "roadshake/filters.hpp"

namespace roadshake {

Frame translate(const Frame& src, int dx, int dy) {
  Frame out(src.width(), src.height(), src.channels());
  const int ch = src.channels();
  for (int y = 0; y < src.height(); ++y) {
    const int sy = std::clamp(y - dy, 0, src.height() - 1);
    const std::uint8_t* in = src.row(sy);
    std::uint8_t* dst = out.row(y);
    for (int x = 0; x < src.width(); ++x) {
      const int sx = std::clamp(x - dx, 0, src.width() - 1);
      for (int c = 0; c < ch; ++c) dst[x * ch + c] = in[sx * ch + c];
    }
  }
  return out;
}

Frame rotate(const Frame& src, double degrees) {
  const double a = degrees * std::numbers::pi / 180.0;
  const double c = std::cos(a);
  const double s = std::sin(a);
  const double cx = (src.width() - 1) * 0.5;
  const double cy = (src.height() - 1) * 0.5;
  return remap(src, [&](int x, int y) {
    const double rx = x - cx;
    const double ry = y - cy;
    return std::pair{cx + c * rx + s * ry, cy - s * rx + c * ry};
  });
}

namespace ops {

namespace {
double random_sign(SeededRng& rng) { return (rng.next_u64() >> 63) != 0 ? 1.0 : -1.0; }
}  // namespace

Frame shear(const Frame& f, const ParamRow& p, SeededRng& rng) {
  const double k = param(p, "factor") * random_sign(rng);
  const double cy = (f.height() - 1) * 0.5;
  return remap(f, [&](int x, int y) { return std::pair{x + k * (y - cy), static_cast<double>(y)}; });
}

Frame scaling(const Frame& f, const ParamRow& p, SeededRng&) {
  const double zoom = param(p, "zoom");
  const double cx = (f.width() - 1) * 0.5;
  const double cy = (f.height() - 1) * 0.5;
  return remap(f, [&](int x, int y) { return std::pair{cx + (x - cx) / zoom, cy + (y - cy) / zoom}; });
}

Frame translation(const Frame& f, const ParamRow& p, SeededRng& rng) {
  const double frac = param(p, "fraction");
  const double sx = random_sign(rng);
  const double sy = random_sign(rng);
  const int dx = static_cast<int>(std::lround(sx * frac * f.width()));
  const int dy = static_cast<int>(std::lround(sy * frac * 0.5 * f.height()));
  return translate(f, dx, dy);
}

Frame rotation(const Frame& f, const ParamRow& p, SeededRng& rng) {
  return rotate(f, param(p, "degrees") * random_sign(rng));
}

// Mirror about the horizontal axis, composited at the level's opacity.
Frame reflection(const Frame& f, const ParamRow& p, SeededRng&) {
  const double opacity = param(p, "opacity");
  Frame flipped(f.width(), f.height(), 3);
  for (int y = 0; y < f.height(); ++y) {
    std::copy(f.row(f.height() - 1 - y), f.row(f.height() - 1 - y) + f.width() * 3, flipped.row(y));
  }
  return clamp_blend(f, flipped, opacity);
}

}  // namespace ops
}  // namespace roadshake

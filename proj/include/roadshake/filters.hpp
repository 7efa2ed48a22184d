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

// Spatial filters shared by the perturbations and the saliency proxies.
// All of them replicate edge pixels outside the frame.

#pragma once

#include <algorithm>
#include <cmath>

#include "roadshake/image.hpp"

namespace roadshake {

/// Mean over a (2rx+1) x (2ry+1) window.
Frame box_blur(const Frame& src, int rx, int ry);
ScalarMap box_blur(const ScalarMap& src, int rx, int ry);

Frame gaussian_blur(const Frame& src, double sigma);
ScalarMap gaussian_blur(const ScalarMap& src, double sigma);

/// Mean over a disc of the given radius.
Frame disc_blur(const Frame& src, int radius);

/// Bilinear sample of channel c at real coordinates (x, y).
inline double sample_bilinear(const Frame& f, double x, double y, int c) {
  x = std::clamp(x, 0.0, static_cast<double>(f.width() - 1));
  y = std::clamp(y, 0.0, static_cast<double>(f.height() - 1));
  const int x0 = static_cast<int>(x);
  const int y0 = static_cast<int>(y);
  const int x1 = std::min(x0 + 1, f.width() - 1);
  const int y1 = std::min(y0 + 1, f.height() - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = f.at(x0, y0, c) * (1.0 - fx) + f.at(x1, y0, c) * fx;
  const double bot = f.at(x0, y1, c) * (1.0 - fx) + f.at(x1, y1, c) * fx;
  return top * (1.0 - fy) + bot * fy;
}

/// Inverse-mapped warp: out(x, y) = src(map(x, y)).
template <class MapFn>
Frame remap(const Frame& src, MapFn&& map) {
  Frame out(src.width(), src.height(), src.channels());
  const int ch = src.channels();
  for (int y = 0; y < src.height(); ++y) {
    std::uint8_t* dst = out.row(y);
    for (int x = 0; x < src.width(); ++x) {
      const auto [sx, sy] = map(x, y);
      for (int c = 0; c < ch; ++c) dst[x * ch + c] = saturate_u8(sample_bilinear(src, sx, sy, c));
    }
  }
  return out;
}

}  // namespace roadshake

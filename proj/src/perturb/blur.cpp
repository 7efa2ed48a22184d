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
#include <vector>

#include "ops.hpp"
#include "roadshake/filters.hpp"

namespace roadshake::ops {

Frame defocus_blur(const Frame& f, const ParamRow& p, SeededRng&) {
  return disc_blur(f, static_cast<int>(param(p, "radius")));
}

Frame motion_blur(const Frame& f, const ParamRow& p, SeededRng&) {
  const int length = static_cast<int>(param(p, "length"));
  return box_blur(f, length / 2, 0);
}

Frame zoom_blur(const Frame& f, const ParamRow& p, SeededRng&) {
  const double zoom = param(p, "zoom");
  constexpr int kCopies = 6;
  const double cx = (f.width() - 1) * 0.5;
  const double cy = (f.height() - 1) * 0.5;
  std::vector<float> acc(f.data().size(), 0.0f);
  for (int k = 0; k < kCopies; ++k) {
    const double z = 1.0 + (zoom - 1.0) * k / (kCopies - 1);
    const Frame zf = k == 0 ? f : remap(f, [&](int x, int y) {
      return std::pair{cx + (x - cx) / z, cy + (y - cy) / z};
    });
    const auto d = zf.data();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += d[i];
  }
  Frame out(f.width(), f.height(), f.channels());
  auto d = out.data();
  for (std::size_t i = 0; i < acc.size(); ++i) d[i] = saturate_u8(static_cast<double>(acc[i]) / kCopies);
  return out;
}

Frame gaussian_blur_op(const Frame& f, const ParamRow& p, SeededRng&) {
  return gaussian_blur(f, param(p, "sigma"));
}

// Area-style downsample followed by bilinear upsample.
Frame lowpass_blur(const Frame& f, const ParamRow& p, SeededRng&) {
  const double factor = param(p, "factor");
  const int r = static_cast<int>(std::floor(factor / 2.0));
  const Frame smooth = box_blur(f, r, r);
  const int w = std::max(1, static_cast<int>(std::lround(f.width() / factor)));
  const int h = std::max(1, static_cast<int>(std::lround(f.height() / factor)));
  return resize_bilinear(resize_bilinear(smooth, w, h), f.width(), f.height());
}

}  // namespace roadshake::ops

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

#include "roadshake/attention.hpp"
#include "roadshake/errors.hpp"
#include "roadshake/filters.hpp"
#include "roadshake/image_io.hpp"

namespace roadshake {

SaliencyProvider SaliencyProvider::file(std::filesystem::path path) {
  SaliencyProvider p;
  p.kind_ = SaliencyKind::File;
  p.path_ = std::move(path);
  return p;
}

SaliencyProvider SaliencyProvider::gradient_proxy() { return SaliencyProvider{}; }

SaliencyProvider SaliencyProvider::center_prior() {
  SaliencyProvider p;
  p.kind_ = SaliencyKind::CenterPrior;
  return p;
}

ScalarMap SaliencyProvider::raw(const Frame& frame) const {
  const int w = frame.width();
  const int h = frame.height();
  switch (kind_) {
    case SaliencyKind::File:
      return load_scalar_map(path_);
    case SaliencyKind::CenterPrior: {
      ScalarMap m(w, h);
      const double sx = 0.3 * w;
      const double sy = 0.3 * h;
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const double dx = (x + 0.5 - w * 0.5) / sx;
          const double dy = (y + 0.5 - h * 0.5) / sy;
          m.at(x, y) = static_cast<float>(std::exp(-0.5 * (dx * dx + dy * dy)));
        }
      }
      return m;
    }
    case SaliencyKind::GradientProxy:
      break;
  }
  const int ch = frame.channels();
  std::vector<float> lum(frame.pixel_count());
  for (std::size_t i = 0; i < lum.size(); ++i) {
    const auto d = frame.data();
    lum[i] = luma(d[i * ch], d[i * ch + 1], d[i * ch + 2]);
  }
  auto L = [&](int x, int y) {
    return lum[static_cast<std::size_t>(std::clamp(y, 0, h - 1)) * w + std::clamp(x, 0, w - 1)];
  };
  ScalarMap g(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float gx = (L(x + 1, y) - L(x - 1, y)) * 0.5f;
      const float gy = (L(x, y + 1) - L(x, y - 1)) * 0.5f;
      g.at(x, y) = std::sqrt(gx * gx + gy * gy);
    }
  }
  return box_blur(g, 1, 1);
}

SaliencyMap normalize_minmax(const ScalarMap& m) {
  SaliencyMap out(m.width(), m.height());
  if (m.empty()) return out;
  const float lo = m.min_value();
  const float hi = m.max_value();
  if (!(hi > lo)) return out;
  const auto src = m.values();
  auto dst = out.values();
  const double range = static_cast<double>(hi) - lo;
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = static_cast<float>(std::clamp((src[i] - static_cast<double>(lo)) / range, 0.0, 1.0));
  }
  return out;
}

SaliencyMap get_saliency(const SaliencyProvider& provider, const Frame& frame) {
  if (frame.empty()) throw DimensionError("saliency requested for an empty frame");
  ScalarMap m = provider.raw(frame);
  if (!m.same_shape(frame)) m = resize_bilinear(m, frame.width(), frame.height());
  return normalize_minmax(m);
}

}  // namespace roadshake

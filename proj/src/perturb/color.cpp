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
#include <numeric>
#include <vector>

#include "ops.hpp"

namespace roadshake::ops {

namespace {

// Jet-style ramp over luma.
Rgb jet(std::uint8_t l) {
  const double t = l / 255.0;
  auto ch = [](double v) { return saturate_u8(std::clamp(v, 0.0, 1.0) * 255.0); };
  return {ch(1.5 - std::fabs(4.0 * t - 3.0)), ch(1.5 - std::fabs(4.0 * t - 2.0)),
          ch(1.5 - std::fabs(4.0 * t - 1.0))};
}

struct Rect {
  int x0, y0, w, h;
};

Rect tile_rect(int i, int k, int width, int height) {
  const int tx = i % k;
  const int ty = i / k;
  const int x0 = tx * width / k;
  const int x1 = (tx + 1) * width / k;
  const int y0 = ty * height / k;
  const int y1 = (ty + 1) * height / k;
  return {x0, y0, x1 - x0, y1 - y0};
}

}  // namespace

Frame false_color(const Frame& f, const ParamRow& p, SeededRng&) {
  const double weight = param(p, "weight");
  Frame mapped(f.width(), f.height(), 3);
  for (int y = 0; y < f.height(); ++y) {
    for (int x = 0; x < f.width(); ++x) {
      const Rgb c = jet(luma(f.at(x, y, 0), f.at(x, y, 1), f.at(x, y, 2)));
      for (int k = 0; k < 3; ++k) mapped.at(x, y, k) = c[k];
    }
  }
  return clamp_blend(f, mapped, weight);
}

// The first `fraction` of a seeded tile order is permuted cyclically, so no
// chosen tile stays put. The order does not depend on the fraction, which
// makes every level's moved set a superset of the level below.
Frame scramble(const Frame& f, const ParamRow& p, SeededRng& rng) {
  const int k = std::max(1, static_cast<int>(param(p, "grid")));
  const int n = k * k;
  const double fraction = std::clamp(param(p, "fraction"), 0.0, 1.0);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order.begin(), order.end());
  const int moved = std::min(n, std::max(2, static_cast<int>(std::lround(fraction * n))));
  std::vector<int> source(static_cast<std::size_t>(n));
  std::iota(source.begin(), source.end(), 0);
  if (n >= 2) {
    for (int i = 0; i < moved; ++i) source[order[i]] = order[(i + 1) % moved];
  }
  Frame out = f;
  for (int i = 0; i < n; ++i) {
    if (source[i] == i) continue;
    const Rect dst = tile_rect(i, k, f.width(), f.height());
    const Rect src = tile_rect(source[i], k, f.width(), f.height());
    for (int v = 0; v < dst.h; ++v) {
      const int sy = src.y0 + v * src.h / dst.h;
      for (int u = 0; u < dst.w; ++u) {
        const int sx = src.x0 + u * src.w / dst.w;
        for (int c = 0; c < 3; ++c) out.at(dst.x0 + u, dst.y0 + v, c) = f.at(sx, sy, c);
      }
    }
  }
  return out;
}

Frame histogram_equalization(const Frame& f, const ParamRow& p, SeededRng&) {
  const double weight = param(p, "weight");
  Frame eq = f;
  const std::size_t n = f.pixel_count();
  for (int c = 0; c < 3; ++c) {
    std::array<std::size_t, 256> hist{};
    for (std::size_t i = 0; i < n; ++i) ++hist[f.data()[i * 3 + c]];
    std::array<std::size_t, 256> cdf{};
    std::size_t run = 0;
    for (int v = 0; v < 256; ++v) cdf[v] = run += hist[v];
    std::size_t cdf_min = 0;
    for (int v = 0; v < 256; ++v) {
      if (hist[v] != 0) {
        cdf_min = cdf[v];
        break;
      }
    }
    std::array<std::uint8_t, 256> lut{};
    for (int v = 0; v < 256; ++v) {
      lut[v] = n == cdf_min ? static_cast<std::uint8_t>(v)
                            : saturate_u8(static_cast<double>(cdf[v] - std::min(cdf[v], cdf_min)) /
                                          static_cast<double>(n - cdf_min) * 255.0);
    }
    for (std::size_t i = 0; i < n; ++i) eq.data()[i * 3 + c] = lut[f.data()[i * 3 + c]];
  }
  return clamp_blend(f, eq, weight);
}

Frame white_balance(const Frame& f, const ParamRow& p, SeededRng&) {
  const double shift = param(p, "shift");
  Frame out = f;
  for (std::size_t i = 0; i < f.pixel_count(); ++i) {
    auto d = out.data();
    d[i * 3 + 0] = saturate_u8(d[i * 3 + 0] * (1.0 + shift));
    d[i * 3 + 2] = saturate_u8(d[i * 3 + 2] * (1.0 - shift));
  }
  return out;
}

Frame greyscale(const Frame& f, const ParamRow& p, SeededRng&) {
  const double weight = param(p, "weight");
  Frame grey(f.width(), f.height(), 3);
  for (std::size_t i = 0; i < f.pixel_count(); ++i) {
    const auto s = f.data();
    const std::uint8_t l = luma(s[i * 3], s[i * 3 + 1], s[i * 3 + 2]);
    grey.data()[i * 3] = grey.data()[i * 3 + 1] = grey.data()[i * 3 + 2] = l;
  }
  return clamp_blend(f, grey, weight);
}

Frame saturation(const Frame& f, const ParamRow& p, SeededRng&) {
  const double factor = param(p, "factor");
  Frame out = f;
  for (std::size_t i = 0; i < f.pixel_count(); ++i) {
    auto d = out.data();
    const double l = luma(d[i * 3], d[i * 3 + 1], d[i * 3 + 2]);
    for (int c = 0; c < 3; ++c) d[i * 3 + c] = saturate_u8(l + (d[i * 3 + c] - l) * factor);
  }
  return out;
}

Frame posterize(const Frame& f, const ParamRow& p, SeededRng&) {
  const int bits = std::clamp(static_cast<int>(param(p, "bits")), 1, 8);
  const auto keep = static_cast<std::uint8_t>(0xFF << (8 - bits));
  Frame out = f;
  for (auto& v : out.data()) v &= keep;
  return out;
}

}  // namespace roadshake::ops

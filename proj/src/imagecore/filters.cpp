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

#include "roadshake/filters.hpp"

#include <vector>

namespace roadshake {

namespace {

// Running-sum mean along one axis of an interleaved float buffer.
void box_pass(const std::vector<float>& in, std::vector<float>& out, int w, int h, int ch,
              int r, bool horizontal) {
  const int len = horizontal ? w : h;
  const int lines = horizontal ? h : w;
  const float inv = 1.0f / static_cast<float>(2 * r + 1);
  std::vector<double> acc(ch);
  for (int l = 0; l < lines; ++l) {
    auto idx = [&](int i) {
      i = std::clamp(i, 0, len - 1);
      const std::size_t px = horizontal ? static_cast<std::size_t>(l) * w + i
                                        : static_cast<std::size_t>(i) * w + l;
      return px * ch;
    };
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int i = -r; i <= r; ++i) {
      const std::size_t k = idx(i);
      for (int c = 0; c < ch; ++c) acc[c] += in[k + c];
    }
    for (int i = 0; i < len; ++i) {
      const std::size_t o = idx(i);
      for (int c = 0; c < ch; ++c) out[o + c] = static_cast<float>(acc[c]) * inv;
      const std::size_t add = idx(i + r + 1);
      const std::size_t sub = idx(i - r);
      for (int c = 0; c < ch; ++c) acc[c] += in[add + c] - in[sub + c];
    }
  }
}

void kernel_pass(const std::vector<float>& in, std::vector<float>& out, int w, int h, int ch,
                 const std::vector<float>& k, bool horizontal) {
  const int r = static_cast<int>(k.size() / 2);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        float s = 0.0f;
        for (int t = -r; t <= r; ++t) {
          const int sx = horizontal ? std::clamp(x + t, 0, w - 1) : x;
          const int sy = horizontal ? y : std::clamp(y + t, 0, h - 1);
          s += k[t + r] * in[(static_cast<std::size_t>(sy) * w + sx) * ch + c];
        }
        out[(static_cast<std::size_t>(y) * w + x) * ch + c] = s;
      }
    }
  }
}

std::vector<float> gaussian_kernel(double sigma) {
  const int r = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<float> k(2 * r + 1);
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    const double v = std::exp(-0.5 * i * i / (sigma * sigma));
    k[i + r] = static_cast<float>(v);
    sum += v;
  }
  for (auto& v : k) v = static_cast<float>(v / sum);
  return k;
}

std::vector<float> to_float(const Frame& f) {
  const auto d = f.data();
  return {d.begin(), d.end()};
}

Frame from_float(const std::vector<float>& v, const Frame& like) {
  Frame out(like.width(), like.height(), like.channels());
  auto d = out.data();
  for (std::size_t i = 0; i < v.size(); ++i) d[i] = saturate_u8(static_cast<double>(v[i]));
  return out;
}

}  // namespace

Frame box_blur(const Frame& src, int rx, int ry) {
  if (rx <= 0 && ry <= 0) return src;
  auto a = to_float(src);
  std::vector<float> b(a.size());
  if (rx > 0) {
    box_pass(a, b, src.width(), src.height(), src.channels(), rx, true);
    a.swap(b);
  }
  if (ry > 0) {
    box_pass(a, b, src.width(), src.height(), src.channels(), ry, false);
    a.swap(b);
  }
  return from_float(a, src);
}

ScalarMap box_blur(const ScalarMap& src, int rx, int ry) {
  const auto v = src.values();
  std::vector<float> a(v.begin(), v.end());
  std::vector<float> b(a.size());
  if (rx > 0) {
    box_pass(a, b, src.width(), src.height(), 1, rx, true);
    a.swap(b);
  }
  if (ry > 0) {
    box_pass(a, b, src.width(), src.height(), 1, ry, false);
    a.swap(b);
  }
  return ScalarMap(src.width(), src.height(), std::move(a));
}

Frame gaussian_blur(const Frame& src, double sigma) {
  if (sigma <= 0.0) return src;
  const auto k = gaussian_kernel(sigma);
  auto a = to_float(src);
  std::vector<float> b(a.size());
  kernel_pass(a, b, src.width(), src.height(), src.channels(), k, true);
  kernel_pass(b, a, src.width(), src.height(), src.channels(), k, false);
  return from_float(a, src);
}

ScalarMap gaussian_blur(const ScalarMap& src, double sigma) {
  if (sigma <= 0.0) return src;
  const auto k = gaussian_kernel(sigma);
  const auto v = src.values();
  std::vector<float> a(v.begin(), v.end());
  std::vector<float> b(a.size());
  kernel_pass(a, b, src.width(), src.height(), 1, k, true);
  kernel_pass(b, a, src.width(), src.height(), 1, k, false);
  return ScalarMap(src.width(), src.height(), std::move(a));
}

Frame disc_blur(const Frame& src, int radius) {
  if (radius <= 0) return src;
  const int w = src.width();
  const int h = src.height();
  const int ch = src.channels();
  // Row prefix sums over an edge-replicated, horizontally padded copy.
  const int pw = w + 2 * radius;
  std::vector<std::uint32_t> prefix(static_cast<std::size_t>(h) * (pw + 1) * ch, 0);
  for (int y = 0; y < h; ++y) {
    std::uint32_t* pr = &prefix[static_cast<std::size_t>(y) * (pw + 1) * ch];
    for (int i = 0; i < pw; ++i) {
      const int sx = std::clamp(i - radius, 0, w - 1);
      for (int c = 0; c < ch; ++c) pr[(i + 1) * ch + c] = pr[i * ch + c] + src.at(sx, y, c);
    }
  }
  std::vector<int> half(2 * radius + 1);
  int taps = 0;
  for (int dy = -radius; dy <= radius; ++dy) {
    half[dy + radius] = static_cast<int>(std::floor(std::sqrt(static_cast<double>(radius * radius - dy * dy))));
    taps += 2 * half[dy + radius] + 1;
  }
  Frame out(w, h, ch);
  for (int y = 0; y < h; ++y) {
    std::uint8_t* dst = out.row(y);
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        std::uint32_t s = 0;
        for (int dy = -radius; dy <= radius; ++dy) {
          const int sy = std::clamp(y + dy, 0, h - 1);
          const int hw = half[dy + radius];
          const std::uint32_t* pr = &prefix[static_cast<std::size_t>(sy) * (pw + 1) * ch];
          // padded index of x is x + radius
          s += pr[(x + radius + hw + 1) * ch + c] - pr[(x + radius - hw) * ch + c];
        }
        dst[x * ch + c] = static_cast<std::uint8_t>((s + taps / 2) / taps);
      }
    }
  }
  return out;
}

}  // namespace roadshake

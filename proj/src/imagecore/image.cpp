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

#include "roadshake/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "roadshake/errors.hpp"

namespace roadshake {

namespace {

void check_dims(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw DimensionError("dimensions must be positive, got " + std::to_string(width) +
                         "x" + std::to_string(height));
  }
}

std::string shape_str(int w, int h) { return std::to_string(w) + "x" + std::to_string(h); }

// Source coordinate and weights for one destination index.
struct Tap {
  int i0;
  int i1;
  double w1;
};

std::vector<Tap> bilinear_taps(int src_len, int dst_len) {
  std::vector<Tap> taps(dst_len);
  const double scale = static_cast<double>(src_len) / dst_len;
  for (int d = 0; d < dst_len; ++d) {
    double s = (d + 0.5) * scale - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(src_len - 1));
    const int i0 = static_cast<int>(std::floor(s));
    const int i1 = std::min(i0 + 1, src_len - 1);
    taps[d] = {i0, i1, s - i0};
  }
  return taps;
}

}  // namespace

Frame::Frame(int width, int height, int channels, std::uint8_t fill)
    : width_(width), height_(height), channels_(channels) {
  check_dims(width, height);
  if (channels != 3 && channels != 4) {
    throw DimensionError("frames carry 3 or 4 channels, got " + std::to_string(channels));
  }
  data_.assign(pixel_count() * channels, fill);
}

Frame::Frame(int width, int height, int channels, std::vector<std::uint8_t> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  check_dims(width, height);
  if (channels != 3 && channels != 4) {
    throw DimensionError("frames carry 3 or 4 channels, got " + std::to_string(channels));
  }
  if (data_.size() != pixel_count() * channels) {
    throw DimensionError("frame buffer holds " + std::to_string(data_.size()) +
                         " samples, expected " + std::to_string(pixel_count() * channels));
  }
}

ScalarMap::ScalarMap(int width, int height, float fill) : width_(width), height_(height) {
  check_dims(width, height);
  values_.assign(static_cast<std::size_t>(width) * height, fill);
}

ScalarMap::ScalarMap(int width, int height, std::vector<float> values)
    : width_(width), height_(height), values_(std::move(values)) {
  check_dims(width, height);
  if (values_.size() != static_cast<std::size_t>(width) * height) {
    throw DimensionError("map holds " + std::to_string(values_.size()) + " values, expected " +
                         std::to_string(static_cast<std::size_t>(width) * height));
  }
}

float ScalarMap::min_value() const {
  return values_.empty() ? 0.0f : *std::min_element(values_.begin(), values_.end());
}

float ScalarMap::max_value() const {
  return values_.empty() ? 0.0f : *std::max_element(values_.begin(), values_.end());
}

bool Mask::is_hard() const {
  const auto v = values();
  return std::all_of(v.begin(), v.end(), [](float a) { return a == 0.0f || a == 1.0f; });
}

std::size_t Mask::count_selected() const {
  const auto v = values();
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](float a) { return a > 0.0f; }));
}

Frame clamp_blend(const Frame& base, const Frame& over, const ScalarMap& alpha) {
  if (base.width() != over.width() || base.height() != over.height()) {
    throw DimensionError("blend operands differ: " + shape_str(base.width(), base.height()) +
                         " vs " + shape_str(over.width(), over.height()));
  }
  if (!alpha.same_shape(base)) {
    throw DimensionError("alpha map " + shape_str(alpha.width(), alpha.height()) +
                         " does not match frame " + shape_str(base.width(), base.height()));
  }
  if (over.channels() < 3 || (base.channels() == 4 && over.channels() != 4)) {
    throw DimensionError("blend operands have incompatible channel counts");
  }
  Frame out = base;
  const int bc = base.channels();
  const int oc = over.channels();
  const auto a = alpha.values();
  const auto src = over.data();
  auto dst = out.data();
  const std::size_t n = base.pixel_count();
  for (std::size_t p = 0; p < n; ++p) {
    const double w = std::clamp(static_cast<double>(a[p]), 0.0, 1.0);
    if (w == 0.0) continue;
    for (int c = 0; c < bc; ++c) {
      const double b = dst[p * bc + c];
      const double o = src[p * oc + c];
      dst[p * bc + c] = saturate_u8(w * o + (1.0 - w) * b);
    }
  }
  return out;
}

Frame clamp_blend(const Frame& base, const Frame& over, double alpha) {
  return clamp_blend(base, over,
                     ScalarMap(base.width(), base.height(), static_cast<float>(alpha)));
}

Frame resize_bilinear(const Frame& src, int width, int height) {
  check_dims(width, height);
  if (src.empty()) throw DimensionError("cannot resize an empty frame");
  if (width == src.width() && height == src.height()) return src;
  const auto tx = bilinear_taps(src.width(), width);
  const auto ty = bilinear_taps(src.height(), height);
  const int ch = src.channels();
  Frame out(width, height, ch);
  for (int y = 0; y < height; ++y) {
    const auto& t = ty[y];
    const std::uint8_t* r0 = src.row(t.i0);
    const std::uint8_t* r1 = src.row(t.i1);
    std::uint8_t* dst = out.row(y);
    for (int x = 0; x < width; ++x) {
      const auto& s = tx[x];
      for (int c = 0; c < ch; ++c) {
        const double top = r0[s.i0 * ch + c] * (1.0 - s.w1) + r0[s.i1 * ch + c] * s.w1;
        const double bot = r1[s.i0 * ch + c] * (1.0 - s.w1) + r1[s.i1 * ch + c] * s.w1;
        dst[x * ch + c] = saturate_u8(top * (1.0 - t.w1) + bot * t.w1);
      }
    }
  }
  return out;
}

ScalarMap resize_bilinear(const ScalarMap& src, int width, int height) {
  check_dims(width, height);
  if (src.empty()) throw DimensionError("cannot resize an empty map");
  if (width == src.width() && height == src.height()) return src;
  const auto tx = bilinear_taps(src.width(), width);
  const auto ty = bilinear_taps(src.height(), height);
  ScalarMap out(width, height);
  for (int y = 0; y < height; ++y) {
    const auto& t = ty[y];
    for (int x = 0; x < width; ++x) {
      const auto& s = tx[x];
      const double top = src.at(s.i0, t.i0) * (1.0 - s.w1) + src.at(s.i1, t.i0) * s.w1;
      const double bot = src.at(s.i0, t.i1) * (1.0 - s.w1) + src.at(s.i1, t.i1) * s.w1;
      out.at(x, y) = static_cast<float>(top * (1.0 - t.w1) + bot * t.w1);
    }
  }
  return out;
}

SaliencyMap resize_bilinear(const SaliencyMap& src, int width, int height) {
  return SaliencyMap(resize_bilinear(static_cast<const ScalarMap&>(src), width, height));
}

double mean_abs_diff(const Frame& a, const Frame& b) {
  if (!a.same_shape(b)) {
    throw DimensionError("mean_abs_diff operands differ in shape");
  }
  const auto da = a.data();
  const auto db = b.data();
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < da.size(); ++i) {
    sum += static_cast<std::uint64_t>(std::abs(static_cast<int>(da[i]) - static_cast<int>(db[i])));
  }
  return da.empty() ? 0.0 : static_cast<double>(sum) / static_cast<double>(da.size());
}

Frame to_rgb(const Frame& src) {
  if (src.channels() == 3) return src;
  Frame out(src.width(), src.height(), 3);
  const auto s = src.data();
  auto d = out.data();
  for (std::size_t p = 0; p < src.pixel_count(); ++p) {
    for (int c = 0; c < 3; ++c) d[p * 3 + c] = s[p * 4 + c];
  }
  return out;
}

Frame to_rgba(const Frame& src, std::uint8_t alpha) {
  if (src.channels() == 4) return src;
  Frame out(src.width(), src.height(), 4);
  const auto s = src.data();
  auto d = out.data();
  for (std::size_t p = 0; p < src.pixel_count(); ++p) {
    for (int c = 0; c < 3; ++c) d[p * 4 + c] = s[p * 3 + c];
    d[p * 4 + 3] = alpha;
  }
  return out;
}

Frame hconcat(std::span<const Frame> frames) {
  if (frames.empty()) throw DimensionError("nothing to concatenate");
  const int h = frames.front().height();
  const int ch = frames.front().channels();
  int w = 0;
  for (const auto& f : frames) {
    if (f.height() != h || f.channels() != ch) {
      throw DimensionError("hconcat operands differ in height or channels");
    }
    w += f.width();
  }
  Frame out(w, h, ch);
  int x0 = 0;
  for (const auto& f : frames) {
    for (int y = 0; y < h; ++y) {
      std::copy(f.row(y), f.row(y) + static_cast<std::size_t>(f.width()) * ch,
                out.row(y) + static_cast<std::size_t>(x0) * ch);
    }
    x0 += f.width();
  }
  return out;
}

}  // namespace roadshake

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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace roadshake {

inline constexpr int kDefaultFrameWidth = 320;
inline constexpr int kDefaultFrameHeight = 160;

/// Owned 8-bit raster, row-major, interleaved RGB or RGBA.
class Frame {
 public:
  Frame() = default;
  Frame(int width, int height, int channels, std::uint8_t fill = 0);
  Frame(int width, int height, int channels, std::vector<std::uint8_t> data);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return data_.empty(); }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  std::span<const std::uint8_t> data() const { return data_; }
  std::span<std::uint8_t> data() { return data_; }

  std::uint8_t* row(int y) { return data_.data() + offset(0, y); }
  const std::uint8_t* row(int y) const { return data_.data() + offset(0, y); }

  std::uint8_t& at(int x, int y, int c) { return data_[offset(x, y) + c]; }
  std::uint8_t at(int x, int y, int c) const { return data_[offset(x, y) + c]; }

  bool same_shape(const Frame& other) const {
    return width_ == other.width_ && height_ == other.height_ &&
           channels_ == other.channels_;
  }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::size_t offset(int x, int y) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Single-channel float grid. Base for saliency maps and masks.
class ScalarMap {
 public:
  ScalarMap() = default;
  ScalarMap(int width, int height, float fill = 0.0f);
  ScalarMap(int width, int height, std::vector<float> values);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  std::span<const float> values() const { return values_; }
  std::span<float> values() { return values_; }

  float& at(int x, int y) { return values_[static_cast<std::size_t>(y) * width_ + x]; }
  float at(int x, int y) const { return values_[static_cast<std::size_t>(y) * width_ + x]; }

  float min_value() const;
  float max_value() const;

  bool same_shape(const Frame& f) const {
    return width_ == f.width() && height_ == f.height();
  }
  bool same_shape(const ScalarMap& m) const {
    return width_ == m.width_ && height_ == m.height_;
  }

  friend bool operator==(const ScalarMap&, const ScalarMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> values_;
};

/// Per-pixel importance in [0, 1].
class SaliencyMap : public ScalarMap {
 public:
  using ScalarMap::ScalarMap;
  explicit SaliencyMap(ScalarMap m) : ScalarMap(std::move(m)) {}
};

/// Per-pixel blend weight in [0, 1]; 1 means "perturb here".
class Mask : public ScalarMap {
 public:
  using ScalarMap::ScalarMap;
  explicit Mask(ScalarMap m) : ScalarMap(std::move(m)) {}

  bool is_hard() const;
  std::size_t count_selected() const;
};

/// out = round(alpha * over + (1 - alpha) * base), per channel.
///
/// `over` may carry an alpha channel, which is ignored; only its colour
/// channels matching `base` are used. Throws DimensionError on mismatch.
Frame clamp_blend(const Frame& base, const Frame& over, const ScalarMap& alpha);

/// Same blend with one alpha for every pixel.
Frame clamp_blend(const Frame& base, const Frame& over, double alpha);

/// Bilinear resampling with pixel-centre alignment.
Frame resize_bilinear(const Frame& src, int width, int height);
ScalarMap resize_bilinear(const ScalarMap& src, int width, int height);
SaliencyMap resize_bilinear(const SaliencyMap& src, int width, int height);

/// Mean of |a[i] - b[i]| over every sample.
double mean_abs_diff(const Frame& a, const Frame& b);

/// Drops or synthesises an alpha channel.
Frame to_rgb(const Frame& src);
Frame to_rgba(const Frame& src, std::uint8_t alpha = 255);

/// Integer BT.601 luma, exact on grey pixels.
inline std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return static_cast<std::uint8_t>((77 * r + 150 * g + 29 * b + 128) >> 8);
}

inline std::uint8_t saturate_u8(double v) {
  if (!(v > 0.0)) return 0;
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(v + 0.5);
}

inline std::uint8_t saturate_u8(int v) {
  return static_cast<std::uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
}

/// Places frames side by side (all must share height and channels).
Frame hconcat(std::span<const Frame> frames);

}  // namespace roadshake

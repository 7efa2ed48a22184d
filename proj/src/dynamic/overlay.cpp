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
#include <fstream>

#include <nlohmann/json.hpp>

#include "../perturb/ops.hpp"
#include "roadshake/dynamic_perturb.hpp"
#include "roadshake/errors.hpp"
#include "roadshake/image_io.hpp"
#include "roadshake/static_perturb.hpp"

namespace roadshake {

namespace fs = std::filesystem;

Frame chroma_key(const Frame& rgb, int tolerance) {
  if (rgb.channels() != 3) throw DimensionError("chroma_key expects an RGB frame");
  Frame out(rgb.width(), rgb.height(), 4);
  const auto in = rgb.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < rgb.pixel_count(); ++i) {
    const int r = in[i * 3];
    const int g = in[i * 3 + 1];
    const int b = in[i * 3 + 2];
    dst[i * 4] = in[i * 3];
    dst[i * 4 + 1] = in[i * 3 + 1];
    dst[i * 4 + 2] = in[i * 3 + 2];
    dst[i * 4 + 3] = (g > r + tolerance && g > b + tolerance) ? 0 : 255;
  }
  return out;
}

double level_alpha(int level) {
  if (level < kMinIntensity || level > kMaxIntensity) {
    throw BadIntensity("intensity must be in [1,5], got " + std::to_string(level));
  }
  static constexpr double kAlpha[] = {0.20, 0.40, 0.60, 0.80, 1.00};
  return kAlpha[level - 1];
}

OverlayClip::OverlayClip(std::vector<Frame> frames, std::string source, int fps)
    : frames_(std::move(frames)), source_(std::move(source)), fps_(fps) {
  if (frames_.empty()) throw EmptyClip("overlay clip '" + source_ + "' has no frames");
  for (const auto& f : frames_) {
    if (f.channels() != 4) throw DimensionError("overlay frames must carry an alpha channel");
    if (!f.same_shape(frames_.front())) {
      throw DimensionError("overlay clip '" + source_ + "' mixes frame sizes");
    }
  }
}

OverlayClip OverlayClip::resized(int width, int height) const {
  std::vector<Frame> out;
  out.reserve(frames_.size());
  for (const auto& f : frames_) out.push_back(resize_bilinear(f, width, height));
  return OverlayClip(std::move(out), source_, fps_);
}

namespace {

bool is_image(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

}  // namespace

OverlayClip load_overlay(const fs::path& path, int width, int height, int tolerance) {
  std::vector<fs::path> files;
  std::string source = path.filename().string();
  int fps = 30;
  fs::path manifest;
  if (fs::is_directory(path) && fs::exists(path / "manifest.json")) {
    manifest = path / "manifest.json";
  } else if (fs::is_regular_file(path) && path.extension() == ".json") {
    manifest = path;
  }
  if (!manifest.empty()) {
    std::ifstream in(manifest);
    if (!in) throw IoError("cannot read overlay manifest " + manifest.string());
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw IoError("malformed overlay manifest " + manifest.string() + ": " + e.what());
    }
    fps = j.value("fps", 30);
    source = j.value("source", source);
    for (const auto& f : j.value("frames", nlohmann::json::array())) {
      files.push_back(manifest.parent_path() / f.get<std::string>());
    }
  } else if (fs::is_directory(path)) {
    for (const auto& e : fs::directory_iterator(path)) {
      if (e.is_regular_file() && is_image(e.path())) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
  } else {
    throw IoError("overlay path " + path.string() + " is neither a directory nor a manifest");
  }
  if (files.empty()) throw EmptyClip("no overlay frames under " + path.string());

  std::vector<Frame> frames;
  frames.reserve(files.size());
  for (const auto& f : files) {
    Frame img = load_frame(f);
    frames.push_back(chroma_key(to_rgb(img), tolerance));
    if (!frames.back().same_shape(frames.front())) {
      throw DimensionError("overlay frame " + f.string() + " differs in size from the first");
    }
  }
  OverlayClip clip(std::move(frames), source, fps);
  if (width > 0 && height > 0 && (clip.width() != width || clip.height() != height)) {
    return clip.resized(width, height);
  }
  return clip;
}

CircularBuffer::CircularBuffer(std::shared_ptr<const OverlayClip> clip) : clip_(std::move(clip)) {
  if (!clip_) throw EmptyClip("circular buffer needs a clip");
}

const Frame& CircularBuffer::next() {
  const Frame& f = clip_->frame(peek_index());
  ++cursor_;
  return f;
}

Frame apply_overlay(const Frame& frame, CircularBuffer& buffer, int level) {
  const double alpha = level_alpha(level);
  const Frame& over = buffer.next();
  if (over.width() != frame.width() || over.height() != frame.height()) {
    throw DimensionError("overlay and frame sizes differ");
  }
  ScalarMap weights(frame.width(), frame.height());
  const auto src = over.data();
  auto w = weights.values();
  for (std::size_t i = 0; i < frame.pixel_count(); ++i) {
    w[i] = static_cast<float>(src[i * 4 + 3] / 255.0 * alpha);
  }
  return clamp_blend(frame, over, weights);
}

std::vector<Frame> generate_overlay_frames(OverlayKind kind, int width, int height, int count,
                                           std::uint64_t seed) {
  SeededRng rng(seed);
  const double scale = width / 320.0;
  std::vector<Frame> frames;
  frames.reserve(static_cast<std::size_t>(count));
  struct Drop {
    double x, y, v, s;
  };
  std::vector<Drop> drops;
  const int n = kind == OverlayKind::Rain ? 140 : 90;
  for (int i = 0; i < n; ++i) {
    drops.push_back({rng.uniform() * width, rng.uniform() * height,
                     kind == OverlayKind::Rain ? rng.uniform(6.0, 11.0) : rng.uniform(1.0, 3.0),
                     kind == OverlayKind::Rain ? rng.uniform(1.0, 2.0) : rng.uniform(1.5, 3.5)});
  }
  // Smoke: a drifting field of soft blobs.
  struct Puff {
    double x, y, r, vx;
  };
  std::vector<Puff> puffs;
  for (int i = 0; i < 14; ++i) {
    puffs.push_back({rng.uniform() * width, height * rng.uniform(0.2, 0.9),
                     (14.0 + 22.0 * rng.uniform()) * scale, rng.uniform(0.5, 2.0) * scale});
  }
  for (int t = 0; t < count; ++t) {
    Frame f(width, height, 3);
    for (std::size_t i = 0; i < f.pixel_count(); ++i) f.data()[i * 3 + 1] = 255;
    if (kind == OverlayKind::Smoke) {
      for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
          double density = 0.0;
          for (const auto& p : puffs) {
            const double px = std::fmod(p.x + p.vx * t, width + 2.0 * p.r) - p.r;
            const double d2 = ((x - px) * (x - px) + (y - p.y) * (y - p.y)) / (p.r * p.r);
            density += std::exp(-d2);
          }
          if (density > 0.45) {
            const auto g = saturate_u8(120.0 + 60.0 * std::min(1.0, density - 0.45));
            f.at(x, y, 0) = g;
            f.at(x, y, 1) = g;
            f.at(x, y, 2) = g;
          }
        }
      }
    } else {
      for (auto& d : drops) {
        if (kind == OverlayKind::Rain) {
          ops::draw_line(f, d.x, d.y - 3.0 * d.v * scale, d.x, d.y, d.s * scale, {210, 215, 225}, 1.0);
        } else {
          ops::fill_disc(f, d.x, d.y, d.s * scale, {245, 245, 250}, 1.0);
        }
        d.y += d.v * scale;
        d.x += kind == OverlayKind::Snow ? rng.normal(0.0, 0.8) * scale : 0.0;
        if (d.y > height + 30.0 * scale) d.y -= height + 40.0 * scale;
      }
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

void write_overlay_clip(const fs::path& dir, const std::vector<Frame>& frames,
                        const std::string& source, int fps) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  nlohmann::json names = nlohmann::json::array();
  for (std::size_t i = 0; i < frames.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%03zu.png", i);
    save_frame(dir / name, frames[i]);
    names.push_back(name);
  }
  std::ofstream out(dir / "manifest.json");
  if (!out) throw IoError("cannot write manifest in " + dir.string());
  out << nlohmann::json{{"fps", fps}, {"frames", names}, {"source", source}}.dump(2) << '\n';
}

}  // namespace roadshake

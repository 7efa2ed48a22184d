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


// Temporally consistent perturbations: green-screen overlays served through
// a circular buffer, and particle precipitation on the lens.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "roadshake/image.hpp"
#include "roadshake/rng.hpp"

namespace roadshake {

inline constexpr int kDefaultChromaTolerance = 40;

/// RGB -> RGBA with alpha 0 where G > R + tol and G > B + tol, 255 elsewhere.
/// Throws DimensionError unless the input has 3 channels.
Frame chroma_key(const Frame& rgb, int tolerance = kDefaultChromaTolerance);

/// Overlay and particle opacity for an intensity level: 0.20 at level 1 up
/// to 1.00 at level 5. Throws BadIntensity.
double level_alpha(int level);

/// Keyed RGBA frames sharing one size.
class OverlayClip {
 public:
  /// Throws EmptyClip for no frames, DimensionError for mixed sizes or
  /// frames without alpha.
  OverlayClip(std::vector<Frame> frames, std::string source, int fps = 30);

  std::size_t size() const { return frames_.size(); }
  const Frame& frame(std::size_t i) const { return frames_[i]; }
  int width() const { return frames_.front().width(); }
  int height() const { return frames_.front().height(); }
  const std::string& source() const { return source_; }
  int fps() const { return fps_; }

  OverlayClip resized(int width, int height) const;

 private:
  std::vector<Frame> frames_;
  std::string source_;
  int fps_;
};

/// Loads a clip from a directory of PNG/JPEG frames (lexicographic order) or
/// from a manifest {"fps", "frames", "source"}; a directory holding
/// manifest.json uses it. Every frame is chroma-keyed. When a target size is
/// given the clip is resized once here. Throws EmptyClip, DimensionError,
/// IoError.
OverlayClip load_overlay(const std::filesystem::path& path, int width = 0, int height = 0,
                         int tolerance = kDefaultChromaTolerance);

/// Serves clip frames at cursor mod N, advancing the cursor by one per call.
class CircularBuffer {
 public:
  explicit CircularBuffer(std::shared_ptr<const OverlayClip> clip);

  const Frame& next();
  std::uint64_t cursor() const { return cursor_; }
  /// Index the next call will serve.
  std::size_t peek_index() const { return static_cast<std::size_t>(cursor_ % clip_->size()); }
  const OverlayClip& clip() const { return *clip_; }

 private:
  std::shared_ptr<const OverlayClip> clip_;
  std::uint64_t cursor_ = 0;
};

/// Composites the next clip frame with alpha = clip alpha * level_alpha.
/// Throws DimensionError when the clip and frame sizes differ.
Frame apply_overlay(const Frame& frame, CircularBuffer& buffer, int level);

enum class OverlayKind { Rain, Snow, Smoke };

/// Procedural green-screen clip (RGB, pure green background).
std::vector<Frame> generate_overlay_frames(OverlayKind kind, int width, int height, int count,
                                           std::uint64_t seed);

/// Writes `frames` as frame_NNN.png plus manifest.json into `dir`.
void write_overlay_clip(const std::filesystem::path& dir, const std::vector<Frame>& frames,
                        const std::string& source, int fps = 30);

enum class ParticleKind { Rain, Snow };

struct Particle {
  ParticleKind kind = ParticleKind::Rain;
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double size = 1.0;
  double opacity = 1.0;
  int age = 0;

  friend bool operator==(const Particle&, const Particle&) = default;
};

struct ParticleParams {
  ParticleKind kind = ParticleKind::Rain;
  /// Mean spawns per frame at 320x160, per level; scaled by frame area.
  std::array<double, 5> spawn_rate{5, 10, 18, 28, 40};
  double size_min = 1.0;
  double size_max = 3.0;
  double vy_min = 4.0;
  double vy_max = 9.0;
  double drift_sigma = 0.5;
  double size_jitter = 0.05;
  double opacity_min = 0.35;
  double opacity_max = 0.6;
  /// Rain streak length as a multiple of vy.
  double streak_factor = 3.0;
  /// Rain particles closer than this merge; 0 disables merging.
  double merge_distance = 1.5;
  double margin = 12.0;
  std::size_t cap = 2000;

  static ParticleParams rain();
  static ParticleParams snow();
};

class ParticleSystem {
 public:
  ParticleSystem(ParticleParams params, int width, int height, int level, std::uint64_t seed);

  /// Spawn positions become proportional to `map` (resized if needed). An
  /// all-zero map keeps the uniform emitter and logs a warning.
  void attach_saliency_emitter(const SaliencyMap& map);
  bool saliency_emitter() const { return !cdf_.empty(); }

  /// Spawn, move, cull, merge, then composite onto `frame`. Throws
  /// DimensionError when the frame size differs from the system's.
  Frame step(const Frame& frame);

  /// The state update of step() without rendering.
  void advance();
  Frame render(const Frame& frame) const;

  /// One emitter draw; exposed for statistical tests.
  std::pair<double, double> sample_spawn();

  const std::vector<Particle>& particles() const { return particles_; }
  void add_particle(const Particle& p) { particles_.push_back(p); }
  const ParticleParams& params() const { return params_; }
  ParticleParams& mutable_params() { return params_; }
  int level() const { return level_; }
  std::uint64_t frames() const { return frames_; }

 private:
  Particle spawn_one();
  void merge_rain();

  ParticleParams params_;
  int width_;
  int height_;
  int level_;
  SeededRng rng_;
  std::vector<Particle> particles_;
  std::vector<double> cdf_;
  std::uint64_t frames_ = 0;
};

}  // namespace roadshake

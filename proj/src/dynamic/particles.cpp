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
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "../perturb/ops.hpp"
#include "roadshake/dynamic_perturb.hpp"
#include "roadshake/errors.hpp"

namespace roadshake {

ParticleParams ParticleParams::rain() { return ParticleParams{}; }

ParticleParams ParticleParams::snow() {
  ParticleParams p;
  p.kind = ParticleKind::Snow;
  p.size_min = 2.0;
  p.size_max = 5.0;
  p.vy_min = 1.0;
  p.vy_max = 3.0;
  p.drift_sigma = 2.0;
  p.size_jitter = 0.1;
  p.opacity_min = 0.6;
  p.opacity_max = 0.9;
  p.merge_distance = 0.0;
  return p;
}

ParticleSystem::ParticleSystem(ParticleParams params, int width, int height, int level,
                               std::uint64_t seed)
    : params_(params), width_(width), height_(height), level_(level), rng_(seed) {
  if (width <= 0 || height <= 0) throw DimensionError("particle system needs a positive size");
  level_alpha(level);
}

void ParticleSystem::attach_saliency_emitter(const SaliencyMap& map) {
  const SaliencyMap m = (map.width() == width_ && map.height() == height_)
                            ? map
                            : resize_bilinear(map, width_, height_);
  std::vector<double> cdf;
  cdf.reserve(m.size());
  double total = 0.0;
  for (float v : m.values()) {
    total += std::max(0.0f, v);
    cdf.push_back(total);
  }
  if (!(total > 0.0)) {
    spdlog::warn("saliency map is all zero; particle emitter stays uniform");
    cdf_.clear();
    return;
  }
  cdf_ = std::move(cdf);
}

std::pair<double, double> ParticleSystem::sample_spawn() {
  const double ux = rng_.uniform();
  const double uy = rng_.uniform();
  if (cdf_.empty()) return {ux * width_, uy * height_};
  const double target = rng_.uniform() * cdf_.back();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
  if (it == cdf_.end()) --it;
  // upper_bound never lands on a zero-weight pixel.
  const auto idx = static_cast<std::size_t>(it - cdf_.begin());
  const int px = static_cast<int>(idx % static_cast<std::size_t>(width_));
  const int py = static_cast<int>(idx / static_cast<std::size_t>(width_));
  return {px + ux, py + uy};
}

Particle ParticleSystem::spawn_one() {
  const auto [x, y] = sample_spawn();
  Particle p;
  p.kind = params_.kind;
  p.x = x;
  p.y = y;
  p.vy = rng_.uniform(params_.vy_min, params_.vy_max);
  p.vx = params_.kind == ParticleKind::Snow ? rng_.uniform(-0.5, 0.5) : 0.0;
  p.size = rng_.uniform(params_.size_min, params_.size_max);
  p.opacity = rng_.uniform(params_.opacity_min, params_.opacity_max);
  return p;
}

void ParticleSystem::merge_rain() {
  const double d = params_.merge_distance;
  if (params_.kind != ParticleKind::Rain || !(d > 0.0) || particles_.size() < 2) return;
  auto key = [](std::int64_t cx, std::int64_t cy) {
    return (static_cast<std::uint64_t>(cx) << 32) ^ static_cast<std::uint64_t>(cy & 0xffffffff);
  };
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid;
  std::vector<Particle> kept;
  kept.reserve(particles_.size());
  for (const Particle& p : particles_) {
    const auto cx = static_cast<std::int64_t>(std::floor(p.x / d));
    const auto cy = static_cast<std::int64_t>(std::floor(p.y / d));
    std::size_t target = kept.size();
    for (std::int64_t oy = -1; oy <= 1 && target == kept.size(); ++oy) {
      for (std::int64_t ox = -1; ox <= 1 && target == kept.size(); ++ox) {
        const auto it = grid.find(key(cx + ox, cy + oy));
        if (it == grid.end()) continue;
        for (std::size_t k : it->second) {
          if (std::hypot(kept[k].x - p.x, kept[k].y - p.y) < d) {
            target = k;
            break;
          }
        }
      }
    }
    if (target == kept.size()) {
      grid[key(cx, cy)].push_back(kept.size());
      kept.push_back(p);
      continue;
    }
    // Area-preserving merge into the earlier particle.
    Particle& q = kept[target];
    const double a = q.size * q.size;
    const double b = p.size * p.size;
    q.x = (q.x * a + p.x * b) / (a + b);
    q.y = (q.y * a + p.y * b) / (a + b);
    q.vy = std::max(q.vy, p.vy);
    q.size = std::sqrt(a + b);
    q.opacity = std::max(q.opacity, p.opacity);
  }
  particles_ = std::move(kept);
}

void ParticleSystem::advance() {
  const double area = static_cast<double>(width_) * height_ / (320.0 * 160.0);
  const double rate = params_.spawn_rate[static_cast<std::size_t>(level_ - 1)] * area;
  if (rate > 0.0) {
    const std::uint64_t n = rng_.poisson(rate);
    for (std::uint64_t i = 0; i < n && particles_.size() < params_.cap; ++i) {
      particles_.push_back(spawn_one());
    }
  }
  for (Particle& p : particles_) {
    const double drift = params_.drift_sigma > 0.0 ? rng_.normal(0.0, params_.drift_sigma) : 0.0;
    p.x += p.vx + drift;
    p.y += p.vy;
    if (params_.size_jitter > 0.0) {
      p.size = std::clamp(p.size + rng_.normal(0.0, params_.size_jitter), 0.5, 3.0 * params_.size_max);
    }
    ++p.age;
  }
  const double m = params_.margin;
  std::erase_if(particles_, [&](const Particle& p) {
    return p.x < -m || p.x > width_ + m || p.y < -m || p.y > height_ + m;
  });
  merge_rain();
  ++frames_;
}

Frame ParticleSystem::render(const Frame& frame) const {
  if (frame.width() != width_ || frame.height() != height_) {
    throw DimensionError("frame size differs from the particle system's");
  }
  Frame rgb = to_rgb(frame);
  const double alpha = level_alpha(level_);
  for (const Particle& p : particles_) {
    const double o = std::clamp(p.opacity * alpha, 0.0, 1.0);
    if (p.kind == ParticleKind::Rain) {
      ops::draw_line(rgb, p.x, p.y - params_.streak_factor * p.vy, p.x, p.y, p.size, {200, 210, 225}, o);
    } else {
      ops::fill_disc(rgb, p.x, p.y, p.size, {250, 250, 252}, o * 0.6);
      ops::fill_disc(rgb, p.x, p.y, p.size * 0.6, {250, 250, 252}, o);
    }
  }
  if (frame.channels() == 3) return rgb;
  Frame out = frame;
  for (std::size_t i = 0; i < frame.pixel_count(); ++i) {
    for (int c = 0; c < 3; ++c) out.data()[i * 4 + c] = rgb.data()[i * 3 + c];
  }
  return out;
}

Frame ParticleSystem::step(const Frame& frame) {
  if (frame.width() != width_ || frame.height() != height_) {
    throw DimensionError("frame size differs from the particle system's");
  }
  advance();
  return render(frame);
}

}  // namespace roadshake

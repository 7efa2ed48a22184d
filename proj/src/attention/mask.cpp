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
#include <numeric>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "roadshake/attention.hpp"
#include "roadshake/errors.hpp"

namespace roadshake {

std::vector<Vec2> MaskSpec::default_road_polygon() {
  return {{0.0, 1.0}, {1.0, 1.0}, {0.6, 0.45}, {0.4, 0.45}};
}

void MaskSpec::validate() const {
  switch (mode) {
    case SelectionMode::Threshold:
      if (!(value >= 0.0 && value <= 1.0)) throw ConfigError("mask.value", "threshold must be in [0,1]");
      break;
    default:
      if (value == 0.0) throw EmptyMaskError("percentage selection with n = 0 selects nothing");
      if (!(value > 0.0 && value <= 100.0)) {
        throw ConfigError("mask.value", "percentage must be in (0,100]");
      }
  }
  if (min_region_area < 0) throw ConfigError("mask.min_region_area", "must be >= 0");
  if (closing_radius < 0) throw ConfigError("mask.closing_radius", "must be >= 0");
  if (!(soft_edge_radius >= 0.0)) throw ConfigError("mask.soft_edge_radius", "must be >= 0");
  if (road_focus && road_polygon.size() < 3) {
    throw ConfigError("mask.road_polygon", "needs at least three vertices");
  }
}

namespace {

constexpr std::pair<SelectionMode, const char*> kModeNames[] = {
    {SelectionMode::Threshold, "threshold"},
    {SelectionMode::TopPercent, "top_percent"},
    {SelectionMode::BottomPercent, "bottom_percent"},
    {SelectionMode::Random, "random"},
};

}  // namespace

nlohmann::json mask_spec_to_json(const MaskSpec& spec) {
  std::string mode;
  for (const auto& [m, name] : kModeNames) {
    if (m == spec.mode) mode = name;
  }
  nlohmann::json poly = nlohmann::json::array();
  for (const auto& p : spec.road_polygon) poly.push_back({p.x, p.y});
  return {{"mode", mode},
          {"value", spec.value},
          {"min_region_area", spec.min_region_area},
          {"closing_radius", spec.closing_radius},
          {"soft_edge_radius", spec.soft_edge_radius},
          {"road_focus", spec.road_focus},
          {"road_polygon", poly}};
}

MaskSpec mask_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("mask", "expected an object");
  if (!j.contains("mode")) throw ConfigError("mask.mode", "required");
  if (!j.contains("value") || !j["value"].is_number()) {
    throw ConfigError("mask.value", "required numeric selection parameter");
  }
  MaskSpec s;
  const std::string mode = j["mode"].get<std::string>();
  bool found = false;
  for (const auto& [m, name] : kModeNames) {
    if (mode == name) {
      s.mode = m;
      found = true;
    }
  }
  if (!found) throw ConfigError("mask.mode", "unknown selection mode '" + mode + "'");
  s.value = j["value"].get<double>();
  s.min_region_area = j.value("min_region_area", s.min_region_area);
  s.closing_radius = j.value("closing_radius", s.closing_radius);
  s.soft_edge_radius = j.value("soft_edge_radius", s.soft_edge_radius);
  s.road_focus = j.value("road_focus", s.road_focus);
  if (j.contains("road_polygon")) {
    s.road_polygon.clear();
    for (const auto& p : j["road_polygon"]) {
      if (!p.is_array() || p.size() != 2) throw ConfigError("mask.road_polygon", "points are [x, y]");
      s.road_polygon.push_back({p[0].get<double>(), p[1].get<double>()});
    }
  }
  s.validate();
  return s;
}

Mask select_pixels(const SaliencyMap& map, const MaskSpec& spec, SeededRng& rng) {
  spec.validate();
  const std::size_t n = map.size();
  Mask out(map.width(), map.height());
  auto dst = out.values();
  const auto v = map.values();
  if (spec.mode == SelectionMode::Threshold) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = v[i] > spec.value ? 1.0f : 0.0f;
    return out;
  }
  const auto count = std::min(
      n, static_cast<std::size_t>(std::floor(spec.value * static_cast<double>(n) / 100.0 + 1e-9)));
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (spec.mode == SelectionMode::Random) {
    // Partial Fisher-Yates: the first `count` slots are a uniform sample.
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
      std::swap(idx[i], idx[j]);
    }
  } else {
    const bool top = spec.mode == SelectionMode::TopPercent;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return top ? v[a] > v[b] : v[a] < v[b];
    });
  }
  for (std::size_t i = 0; i < count; ++i) dst[idx[i]] = 1.0f;
  return out;
}

Mask remove_small_regions(const Mask& mask, int min_area) {
  Mask out = mask;
  if (min_area <= 1) return out;
  const int w = mask.width();
  const int h = mask.height();
  std::vector<char> seen(mask.size(), 0);
  std::vector<std::size_t> component;
  std::vector<std::size_t> stack;
  const auto v = mask.values();
  for (std::size_t start = 0; start < v.size(); ++start) {
    if (seen[start] || v[start] <= 0.0f) continue;
    component.clear();
    stack.assign(1, start);
    seen[start] = 1;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      component.push_back(i);
      const int x = static_cast<int>(i % w);
      const int y = static_cast<int>(i / w);
      const int nx[4] = {x - 1, x + 1, x, x};
      const int ny[4] = {y, y, y - 1, y + 1};
      for (int k = 0; k < 4; ++k) {
        if (nx[k] < 0 || ny[k] < 0 || nx[k] >= w || ny[k] >= h) continue;
        const std::size_t j = static_cast<std::size_t>(ny[k]) * w + nx[k];
        if (!seen[j] && v[j] > 0.0f) {
          seen[j] = 1;
          stack.push_back(j);
        }
      }
    }
    if (component.size() < static_cast<std::size_t>(min_area)) {
      for (std::size_t i : component) out.values()[i] = 0.0f;
    }
  }
  return out;
}

namespace {

std::vector<std::pair<int, int>> disc_offsets(int r) {
  std::vector<std::pair<int, int>> offs;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      if (dx * dx + dy * dy <= r * r) offs.emplace_back(dx, dy);
    }
  }
  return offs;
}

Mask morph(const Mask& in, const std::vector<std::pair<int, int>>& offs, bool dilate) {
  const int w = in.width();
  const int h = in.height();
  Mask out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool hit = !dilate;
      for (const auto& [dx, dy] : offs) {
        const int sx = x + dx;
        const int sy = y + dy;
        const bool inside = sx >= 0 && sy >= 0 && sx < w && sy < h;
        const bool set = inside ? in.at(sx, sy) > 0.0f : !dilate;
        if (dilate && set) {
          hit = true;
          break;
        }
        if (!dilate && !set) {
          hit = false;
          break;
        }
      }
      out.at(x, y) = hit ? 1.0f : 0.0f;
    }
  }
  return out;
}

}  // namespace

Mask close_mask(const Mask& mask, int radius) {
  if (radius <= 0) return mask;
  const auto offs = disc_offsets(radius);
  return morph(morph(mask, offs, true), offs, false);
}

Mask feather_mask(const Mask& mask, double radius) {
  if (!(radius > 0.0)) return mask;
  const int w = mask.width();
  const int h = mask.height();
  const int r = static_cast<int>(std::ceil(radius));
  Mask out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (mask.at(x, y) <= 0.0f) continue;
      double best = radius;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          const int sx = x + dx;
          const int sy = y + dy;
          if (sx < 0 || sy < 0 || sx >= w || sy >= h || mask.at(sx, sy) > 0.0f) continue;
          best = std::min(best, std::sqrt(static_cast<double>(dx * dx + dy * dy)));
        }
      }
      out.at(x, y) = static_cast<float>(std::min(1.0, best / radius));
    }
  }
  return out;
}

Mask polygon_mask(int width, int height, const std::vector<Vec2>& polygon) {
  Mask out(width, height);
  const std::size_t n = polygon.size();
  for (int y = 0; y < height; ++y) {
    const double py = (y + 0.5) / height;
    for (int x = 0; x < width; ++x) {
      const double px = (x + 0.5) / width;
      bool inside = false;
      for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2 a = polygon[i];
        const Vec2 b = polygon[j];
        if ((a.y > py) != (b.y > py) && px < (b.x - a.x) * (py - a.y) / (b.y - a.y) + a.x) {
          inside = !inside;
        }
      }
      out.at(x, y) = inside ? 1.0f : 0.0f;
    }
  }
  return out;
}

Mask build_mask(const SaliencyMap& map, const MaskSpec& spec, SeededRng& rng) {
  Mask m = select_pixels(map, spec, rng);
  m = remove_small_regions(m, spec.min_region_area);
  m = close_mask(m, spec.closing_radius);
  m = feather_mask(m, spec.soft_edge_radius);
  if (spec.road_focus) {
    const Mask road = polygon_mask(map.width(), map.height(), spec.road_polygon);
    auto v = m.values();
    const auto r = road.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= r[i];
  }
  return m;
}

Frame apply_masked(const PerturbationRegistry& registry, const PerturbationSpec& spec,
                   const Mask& mask, const Frame& frame) {
  if (!mask.same_shape(frame)) throw DimensionError("mask and frame sizes differ");
  return clamp_blend(frame, registry.apply(spec, frame), mask);
}

Frame apply_masked(const PerturbationSpec& spec, const Mask& mask, const Frame& frame) {
  return apply_masked(PerturbationRegistry::builtin(), spec, mask, frame);
}

MaskScheduler::MaskScheduler(SaliencyProvider provider, MaskSpec spec, int horizon,
                             std::uint64_t seed)
    : provider_(std::move(provider)), spec_(std::move(spec)), horizon_(horizon), seed_(seed) {
  if (horizon_ < 1) throw ConfigError("mask.horizon", "must be >= 1");
  spec_.validate();
}

const Mask& MaskScheduler::mask_for(const Frame& frame, std::uint64_t index) {
  const bool stale = cached_ && !cached_->same_shape(frame);
  if (!cached_ || stale || index % static_cast<std::uint64_t>(horizon_) == 0) {
    SeededRng rng = SeededRng::substream(seed_, index);
    cached_ = build_mask(get_saliency(provider_, frame), spec_, rng);
    recomputations_.push_back(index);
    spdlog::debug("mask recomputed at frame {}", index);
  }
  return *cached_;
}

}  // namespace roadshake

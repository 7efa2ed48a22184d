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
#include <initializer_list>

#include <nlohmann/json.hpp>

#include "ops.hpp"

namespace roadshake {

namespace {

using Levels = std::array<ParamRow, kLevelCount>;

// One parameter varying with the level.
Levels ramp(const char* key, std::initializer_list<double> values) {
  Levels out;
  std::size_t i = 0;
  for (double v : values) out[i++] = ParamRow{{key, v}};
  return out;
}

// Adds a constant parameter to every level.
Levels with(Levels levels, const char* key, double value) {
  for (auto& row : levels) row[key] = value;
  return levels;
}

// Two parameters varying together.
Levels ramp2(const char* k1, std::initializer_list<double> v1, const char* k2,
             std::initializer_list<double> v2) {
  Levels out = ramp(k1, v1);
  std::size_t i = 0;
  for (double v : v2) out[i++][k2] = v;
  return out;
}

std::vector<RegistryEntry> builtin_entries() {
  using C = Category;
  const auto weights = ramp("weight", {0.2, 0.4, 0.6, 0.8, 1.0});
  std::vector<RegistryEntry> e{
      // A: noise
      {"gaussian_noise", C::Noise, false, ramp("sigma", {8, 16, 24, 32, 40}), ops::gaussian_noise},
      {"poisson_noise", C::Noise, false, ramp("photons", {80, 40, 20, 10, 5}), ops::poisson_noise},
      {"impulse_noise", C::Noise, false, ramp("amount", {0.01, 0.02, 0.04, 0.06, 0.09}),
       ops::impulse_noise},
      {"jpeg_compression", C::Noise, false, ramp("quality", {80, 60, 40, 25, 12}),
       ops::jpeg_compression},
      {"speckle_noise", C::Noise, false, ramp("sigma", {0.06, 0.1, 0.15, 0.2, 0.28}),
       ops::speckle_noise},
      // B: blur
      {"defocus_blur", C::Blur, false, ramp("radius", {1, 2, 3, 4, 6}), ops::defocus_blur},
      {"motion_blur", C::Blur, false, ramp("length", {3, 5, 9, 13, 19}), ops::motion_blur},
      {"zoom_blur", C::Blur, false, ramp("zoom", {1.03, 1.06, 1.09, 1.12, 1.16}), ops::zoom_blur},
      {"gaussian_blur", C::Blur, false, ramp("sigma", {0.7, 1.0, 1.5, 2.0, 2.8}),
       ops::gaussian_blur_op},
      {"lowpass_blur", C::Blur, false, ramp("factor", {1.5, 2, 3, 4, 5}), ops::lowpass_blur},
      // C: weather
      {"frosted_glass", C::Weather, false,
       ramp2("sigma", {0.5, 0.6, 0.7, 0.8, 1.0}, "displacement", {1, 2, 3, 4, 5}),
       ops::frosted_glass},
      {"snow", C::Weather, false,
       ramp2("flakes", {150, 300, 500, 750, 1000}, "whiten", {0.05, 0.1, 0.15, 0.2, 0.25}),
       ops::snow},
      {"fog", C::Weather, false, ramp("blend", {0.15, 0.3, 0.45, 0.6, 0.75}), ops::fog},
      {"brightness", C::Weather, false, ramp("delta", {20, 40, 60, 80, 100}), ops::brightness},
      {"contrast", C::Weather, false, ramp("factor", {0.8, 0.65, 0.5, 0.35, 0.2}), ops::contrast},
      // D: distortion
      {"elastic_deformation", C::Distortion, false,
       with(ramp("amplitude", {1.5, 3, 4.5, 6, 8}), "cell", 24), ops::elastic_deformation},
      {"pixelation", C::Distortion, false, ramp("block", {2, 4, 8, 12, 16}), ops::pixelation},
      {"region_blending", C::Distortion, false, ramp("area", {0.05, 0.1, 0.2, 0.3, 0.45}),
       ops::region_blending},
      {"sharpening", C::Distortion, false, ramp("amount", {0.6, 1.2, 1.8, 2.4, 3.0}),
       ops::sharpening},
      // E: affine
      {"shear", C::Affine, false, ramp("factor", {0.04, 0.08, 0.12, 0.17, 0.22}), ops::shear},
      {"scaling", C::Affine, false, ramp("zoom", {1.05, 1.1, 1.15, 1.2, 1.3}), ops::scaling},
      {"translation", C::Affine, false, ramp("fraction", {0.03, 0.06, 0.09, 0.12, 0.16}),
       ops::translation},
      {"rotation", C::Affine, false, ramp("degrees", {2, 4, 7, 11, 15}), ops::rotation},
      {"reflection", C::Affine, true, ramp("opacity", {0.2, 0.4, 0.6, 0.8, 1.0}), ops::reflection},
      // F: pattern
      {"splatter", C::Pattern, false, ramp("blobs", {3, 6, 10, 15, 22}), ops::splatter},
      {"dotted_lines", C::Pattern, false, ramp("lines", {2, 4, 6, 9, 12}), ops::dotted_lines},
      {"zigzag", C::Pattern, false, ramp("lines", {1, 2, 4, 6, 8}), ops::zigzag},
      {"edge_map", C::Pattern, false, weights, ops::edge_map},
      {"cutout", C::Pattern, false, with(ramp("holes", {1, 2, 3, 4, 5}), "size", 0.15),
       ops::cutout},
      // G: colour
      {"false_color", C::Color, false, weights, ops::false_color},
      {"scramble", C::Color, false,
       with(ramp("fraction", {0.1, 0.25, 0.45, 0.7, 1.0}), "grid", 6), ops::scramble},
      {"histogram_equalization", C::Color, false, weights, ops::histogram_equalization},
      {"white_balance", C::Color, false, ramp("shift", {0.06, 0.12, 0.18, 0.24, 0.3}),
       ops::white_balance},
      {"greyscale", C::Color, false, weights, ops::greyscale},
      {"saturation", C::Color, false, ramp("factor", {1.3, 1.6, 2.0, 2.5, 3.0}), ops::saturation},
      {"posterize", C::Color, false, ramp("bits", {6, 5, 4, 3, 2}), ops::posterize},
  };
  return e;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    prev.swap(cur);
  }
  return prev[b.size()];
}

void check_intensity(int level) {
  if (level < kMinIntensity || level > kMaxIntensity) {
    throw BadIntensity("intensity must be in [1,5], got " + std::to_string(level));
  }
}

}  // namespace

char category_letter(Category c) { return static_cast<char>('A' + static_cast<int>(c)); }

std::string_view category_name(Category c) {
  switch (c) {
    case Category::Noise: return "noise";
    case Category::Blur: return "blur";
    case Category::Weather: return "weather";
    case Category::Distortion: return "distortion";
    case Category::Affine: return "affine";
    case Category::Pattern: return "pattern";
    case Category::Color: return "color";
  }
  return "unknown";
}

void to_json(nlohmann::json& j, const PerturbationSpec& s) {
  j = nlohmann::json{{"name", s.name}, {"intensity", s.intensity}, {"seed", s.seed}};
}

void from_json(const nlohmann::json& j, PerturbationSpec& s) {
  j.at("name").get_to(s.name);
  j.at("intensity").get_to(s.intensity);
  s.seed = j.value("seed", std::uint64_t{0});
}

PerturbationRegistry::PerturbationRegistry(std::vector<RegistryEntry> entries)
    : entries_(std::move(entries)) {
  std::stable_sort(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) {
    if (a.category != b.category) return a.category < b.category;
    return a.name < b.name;
  });
}

const PerturbationRegistry& PerturbationRegistry::builtin() {
  static const PerturbationRegistry registry(builtin_entries());
  return registry;
}

const RegistryEntry* PerturbationRegistry::find(std::string_view name) const {
  const auto it = std::find_if(entries_.begin(), entries_.end(),
                               [&](const RegistryEntry& e) { return e.name == name; });
  return it == entries_.end() ? nullptr : &*it;
}

const RegistryEntry& PerturbationRegistry::at(std::string_view name) const {
  const RegistryEntry* e = find(name);
  if (e == nullptr) throw UnknownPerturbation(std::string(name));
  return *e;
}

std::vector<std::pair<std::string, Category>> PerturbationRegistry::list(ListFilter filter) const {
  std::vector<std::pair<std::string, Category>> out;
  for (const auto& e : entries_) {
    const bool keep = filter == ListFilter::All || (filter == ListFilter::Default && !e.extended) ||
                      (filter == ListFilter::Extended && e.extended);
    if (keep) out.emplace_back(e.name, e.category);
  }
  return out;
}

Frame PerturbationRegistry::apply(const PerturbationSpec& spec, const Frame& frame) const {
  const RegistryEntry& e = at(spec.name);
  check_intensity(spec.intensity);
  if (frame.empty()) throw DimensionError("cannot perturb an empty frame");
  SeededRng rng(spec.seed);
  const ParamRow& row = e.levels[static_cast<std::size_t>(spec.intensity - 1)];
  if (frame.channels() == 3) return e.fn(frame, row, rng);
  Frame rgb = e.fn(to_rgb(frame), row, rng);
  Frame out = frame;
  for (std::size_t p = 0; p < frame.pixel_count(); ++p) {
    for (int c = 0; c < 3; ++c) out.data()[p * 4 + c] = rgb.data()[p * 3 + c];
  }
  return out;
}

PerturbationRegistry PerturbationRegistry::with_overrides(const nlohmann::json& ramps) const {
  std::vector<RegistryEntry> copy = entries_;
  if (ramps.is_null()) return PerturbationRegistry(std::move(copy));
  if (!ramps.is_object()) throw BadIntensity("ramp overrides must be a JSON object");
  for (const auto& [name, rows] : ramps.items()) {
    auto it = std::find_if(copy.begin(), copy.end(), [&](const auto& e) { return e.name == name; });
    if (it == copy.end()) throw UnknownPerturbation(name);
    if (!rows.is_array() || rows.size() != kLevelCount) {
      throw BadIntensity("ramp override for '" + name + "' needs exactly 5 rows");
    }
    for (std::size_t i = 0; i < kLevelCount; ++i) {
      if (!rows[i].is_object()) throw BadIntensity("ramp rows must be objects");
      for (const auto& [key, value] : rows[i].items()) {
        if (!value.is_number()) throw BadIntensity("ramp value '" + key + "' must be numeric");
        it->levels[i][key] = value.get<double>();
      }
    }
  }
  return PerturbationRegistry(std::move(copy));
}

nlohmann::json PerturbationRegistry::param_table_json() const {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : entries_) {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& row : e.levels) {
      nlohmann::json r = nlohmann::json::object();
      for (const auto& [k, v] : row) r[k] = v;
      levels.push_back(r);
    }
    entries.push_back({{"name", e.name},
                       {"category", std::string(1, category_letter(e.category))},
                       {"family", category_name(e.category)},
                       {"extended", e.extended},
                       {"levels", levels}});
  }
  return {{"schema", kParamTableSchema}, {"entries", entries}};
}

std::vector<std::string> PerturbationRegistry::nearest_names(std::string_view name,
                                                             std::size_t count) const {
  std::vector<std::pair<std::size_t, std::string>> scored;
  for (const auto& e : entries_) scored.emplace_back(edit_distance(name, e.name), e.name);
  std::sort(scored.begin(), scored.end());
  std::vector<std::string> out;
  for (std::size_t i = 0; i < std::min(count, scored.size()); ++i) out.push_back(scored[i].second);
  return out;
}

Frame apply_static(const PerturbationSpec& spec, const Frame& frame) {
  return PerturbationRegistry::builtin().apply(spec, frame);
}

double effect_strength(const PerturbationRegistry& registry, const PerturbationSpec& spec,
                       std::span<const Frame> corpus) {
  if (corpus.empty()) throw EmptyCorpus("effect_strength needs at least one frame");
  double sum = 0.0;
  for (const auto& f : corpus) sum += mean_abs_diff(f, registry.apply(spec, f));
  return sum / static_cast<double>(corpus.size());
}

double effect_strength(const PerturbationSpec& spec, std::span<const Frame> corpus) {
  return effect_strength(PerturbationRegistry::builtin(), spec, corpus);
}

std::vector<std::pair<std::string, Category>> list_perturbations(ListFilter filter) {
  return PerturbationRegistry::builtin().list(filter);
}

}  // namespace roadshake

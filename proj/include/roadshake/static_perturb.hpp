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

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "roadshake/image.hpp"
#include "roadshake/rng.hpp"

namespace roadshake {

inline constexpr int kMinIntensity = 1;
inline constexpr int kMaxIntensity = 5;
inline constexpr int kLevelCount = 5;

/// Perturbation families, A through G.
enum class Category { Noise, Blur, Weather, Distortion, Affine, Pattern, Color };

char category_letter(Category c);
std::string_view category_name(Category c);

/// (name, intensity level, seed): the unit recorded in every log.
struct PerturbationSpec {
  std::string name;
  int intensity = 1;
  std::uint64_t seed = 0;

  friend bool operator==(const PerturbationSpec&, const PerturbationSpec&) = default;
};

void to_json(nlohmann::json& j, const PerturbationSpec& s);
void from_json(const nlohmann::json& j, PerturbationSpec& s);

/// Named numeric parameters for one intensity level.
using ParamRow = std::map<std::string, double, std::less<>>;

using StaticFn = Frame (*)(const Frame& rgb, const ParamRow& params, SeededRng& rng);

struct RegistryEntry {
  std::string name;
  Category category;
  /// Semantics-breaking entries are kept out of default suites.
  bool extended = false;
  std::array<ParamRow, kLevelCount> levels;
  StaticFn fn = nullptr;
};

enum class ListFilter { Default, Extended, All };

/// Immutable table of static perturbations, ordered by category then name.
class PerturbationRegistry {
 public:
  static const PerturbationRegistry& builtin();

  const RegistryEntry* find(std::string_view name) const;
  /// Throws UnknownPerturbation.
  const RegistryEntry& at(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  std::span<const RegistryEntry> entries() const { return entries_; }
  std::vector<std::pair<std::string, Category>> list(ListFilter filter) const;

  /// Throws UnknownPerturbation or BadIntensity.
  Frame apply(const PerturbationSpec& spec, const Frame& frame) const;

  /// Copy whose parameter ramps are replaced by `ramps`, a JSON object
  /// name -> array of 5 parameter objects. Missing keys keep the shipped
  /// values.
  PerturbationRegistry with_overrides(const nlohmann::json& ramps) const;

  /// The versioned parameter document ("schema", "entries").
  nlohmann::json param_table_json() const;

  /// Registry names closest to `name` by edit distance.
  std::vector<std::string> nearest_names(std::string_view name, std::size_t count) const;

 private:
  explicit PerturbationRegistry(std::vector<RegistryEntry> entries);
  std::vector<RegistryEntry> entries_;
};

inline constexpr std::string_view kParamTableSchema = "roadshake.params/1";

/// Applies a registry perturbation. Output has the input's shape; the alpha
/// channel of RGBA input passes through untouched.
Frame apply_static(const PerturbationSpec& spec, const Frame& frame);

/// Mean over the corpus of mean_abs_diff(frame, apply_static(spec, frame)).
/// Throws EmptyCorpus.
double effect_strength(const PerturbationSpec& spec, std::span<const Frame> corpus);
double effect_strength(const PerturbationRegistry& registry, const PerturbationSpec& spec,
                       std::span<const Frame> corpus);

std::vector<std::pair<std::string, Category>> list_perturbations(ListFilter filter);

/// Geometric primitives exposed for direct use and testing.
Frame translate(const Frame& src, int dx, int dy);
Frame rotate(const Frame& src, double degrees);

}  // namespace roadshake

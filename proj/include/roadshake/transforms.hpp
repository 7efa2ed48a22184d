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


// Builds the per-episode frame transform for an online perturbation.
//
// Online vocabulary: every static registry name, "blackout" (a cutout
// covering the whole frame), and the dynamic names below. A static name with
// a mask becomes an attention-masked perturbation.

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "roadshake/attention.hpp"
#include "roadshake/sim.hpp"
#include "roadshake/static_perturb.hpp"

namespace roadshake {

inline constexpr std::string_view kBlackout = "blackout";
inline constexpr std::string_view kNoPerturbation = "none";

/// Names accepted online beyond the static registry.
const std::vector<std::string>& dynamic_perturbation_names();

struct EpisodePerturbation {
  /// kNoPerturbation (or empty) runs the episode unperturbed.
  PerturbationSpec spec{std::string(kNoPerturbation), 1, 0};
  std::optional<MaskSpec> mask;
  SaliencyKind saliency = SaliencyKind::GradientProxy;
  std::filesystem::path saliency_path;
  int mask_horizon = 1;

  bool identity() const { return spec.name.empty() || spec.name == kNoPerturbation; }
  /// Stable label, e.g. "fog@3" or "fog@3+mask".
  std::string label() const;
};

nlohmann::json perturbation_to_json(const EpisodePerturbation& p);
/// Throws ConfigError.
EpisodePerturbation perturbation_from_json(const nlohmann::json& j);

struct TransformContext {
  int width = kDefaultFrameWidth;
  int height = kDefaultFrameHeight;
  /// Directory with rain/, snow/, smoke/ clips; procedural clips when empty.
  std::filesystem::path overlay_dir;
  const PerturbationRegistry* registry = nullptr;
};

/// True when `name` is a registry name, "blackout", a dynamic name or none.
bool is_online_perturbation(std::string_view name, const PerturbationRegistry& registry);

/// Null for the identity. Throws UnknownPerturbation, BadIntensity,
/// ConfigError. Every random draw is keyed to spec.seed and the frame index.
std::unique_ptr<FrameTransform> make_transform(const EpisodePerturbation& p,
                                               const TransformContext& context = {});

}  // namespace roadshake

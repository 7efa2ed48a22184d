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


// Saliency acquisition, mask construction and masked perturbation.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "roadshake/image.hpp"
#include "roadshake/rng.hpp"
#include "roadshake/road.hpp"
#include "roadshake/static_perturb.hpp"

namespace roadshake {

enum class SaliencyKind { File, GradientProxy, CenterPrior };

class SaliencyProvider {
 public:
  static SaliencyProvider file(std::filesystem::path path);
  /// Central-difference gradient magnitude of luma, 3x3 box smoothed.
  static SaliencyProvider gradient_proxy();
  /// Gaussian bump centred on the frame.
  static SaliencyProvider center_prior();

  SaliencyKind kind() const { return kind_; }
  const std::filesystem::path& path() const { return path_; }

  /// Un-normalised scores at the provider's native resolution.
  ScalarMap raw(const Frame& frame) const;

 private:
  SaliencyKind kind_ = SaliencyKind::GradientProxy;
  std::filesystem::path path_;
};

/// Min-max normalisation into [0,1]; a constant map becomes all zeros.
SaliencyMap normalize_minmax(const ScalarMap& m);

/// Provider output resized to the frame and normalised. Throws
/// SaliencyLoadError for unreadable files, DimensionError for empty frames.
SaliencyMap get_saliency(const SaliencyProvider& provider, const Frame& frame);

enum class SelectionMode { Threshold, TopPercent, BottomPercent, Random };

struct MaskSpec {
  SelectionMode mode = SelectionMode::TopPercent;
  /// Threshold epsilon in [0,1], or n in (0,100] for the percentage modes.
  double value = 0.0;
  int min_region_area = 16;
  int closing_radius = 0;
  double soft_edge_radius = 0.0;
  bool road_focus = false;
  /// Road region in normalised image coordinates, x right and y down.
  std::vector<Vec2> road_polygon = default_road_polygon();

  static std::vector<Vec2> default_road_polygon();

  /// Throws ConfigError naming the offending field, EmptyMaskError for n=0.
  void validate() const;
};

nlohmann::json mask_spec_to_json(const MaskSpec& spec);
/// Requires "mode" and "value"; everything else defaults. Throws ConfigError.
MaskSpec mask_spec_from_json(const nlohmann::json& j);

/// Pixels selected by the MaskSpec mode before any cleanup. Percentage modes
/// take floor(n * W * H / 100) pixels; ties go to the lower row-major index.
Mask select_pixels(const SaliencyMap& map, const MaskSpec& spec, SeededRng& rng);

/// Drops 4-connected components smaller than `min_area`.
Mask remove_small_regions(const Mask& mask, int min_area);

/// Binary closing with a disc of the given radius. Outside the frame counts
/// as background for the dilation and foreground for the erosion, so the
/// result always contains the input.
Mask close_mask(const Mask& mask, int radius);

/// alpha = min(1, d / radius) where d is the distance to the nearest
/// unselected pixel; unselected pixels stay 0.
Mask feather_mask(const Mask& mask, double radius);

/// Pixels whose centres fall inside the normalised polygon.
Mask polygon_mask(int width, int height, const std::vector<Vec2>& polygon);

/// Selection, small-region removal, closing, feathering, road focus.
Mask build_mask(const SaliencyMap& map, const MaskSpec& spec, SeededRng& rng);

/// clamp_blend(frame, apply_static(spec, frame), mask). Throws DimensionError.
Frame apply_masked(const PerturbationSpec& spec, const Mask& mask, const Frame& frame);
Frame apply_masked(const PerturbationRegistry& registry, const PerturbationSpec& spec,
                   const Mask& mask, const Frame& frame);

/// Recomputes the mask on frames where index mod horizon == 0 and reuses it
/// otherwise. Random-mode draws come from a substream of (seed, index).
class MaskScheduler {
 public:
  MaskScheduler(SaliencyProvider provider, MaskSpec spec, int horizon, std::uint64_t seed);

  const Mask& mask_for(const Frame& frame, std::uint64_t index);
  /// Frame indices at which the mask was rebuilt.
  const std::vector<std::uint64_t>& recomputations() const { return recomputations_; }
  int horizon() const { return horizon_; }

 private:
  SaliencyProvider provider_;
  MaskSpec spec_;
  int horizon_;
  std::uint64_t seed_;
  std::optional<Mask> cached_;
  std::vector<std::uint64_t> recomputations_;
};

}  // namespace roadshake

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


// Desk-scale closed-loop simulation: kinematic bicycle, pinhole camera
// renderer, reference lane-keeping controller and the episode loop.
//
// Sign convention: heading is counter-clockwise from +y, positive steering
// turns left, positive cross-track error means the vehicle is left of the
// centerline.

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "roadshake/errors.hpp"
#include "roadshake/image.hpp"
#include "roadshake/road.hpp"

namespace roadshake {

struct VehicleParams {
  double wheelbase = 2.5;
  double max_speed = 10.0;
  double max_steering = 0.5;
  /// Acceleration at full throttle, m/s^2.
  double max_accel = 8.0;
  /// Linear drag, 1/s. Terminal speed is throttle * max_accel / drag.
  double drag = 0.4;
};

struct VehicleState {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double speed = 0.0;
  double steering = 0.0;
  double throttle = 0.0;

  friend bool operator==(const VehicleState&, const VehicleState&) = default;
};

/// One explicit step. Steering is clamped to +-max_steering, throttle to
/// [0, 1], speed to [0, max_speed].
VehicleState step_bicycle(const VehicleState& s, double steering, double throttle, double dt,
                          const VehicleParams& params = {});

struct CameraConfig {
  int width = kDefaultFrameWidth;
  int height = kDefaultFrameHeight;
  double hfov_deg = 90.0;
  double mount_height = 1.5;
  /// Horizon row as a fraction of the image height.
  double horizon = 0.35;
  double near_plane = 0.3;
};

namespace palette {
inline constexpr std::uint8_t kRoad[3] = {90, 90, 90};
inline constexpr std::uint8_t kGrass[3] = {60, 120, 50};
inline constexpr std::uint8_t kDash[3] = {240, 220, 80};
inline constexpr std::uint8_t kSkyTop[3] = {110, 160, 230};
inline constexpr std::uint8_t kSkyHorizon[3] = {175, 205, 240};
}  // namespace palette

/// Deterministic render of the road seen from `state`.
Frame render_camera(const RoadScenario& road, const VehicleState& state,
                    const CameraConfig& camera = {});

struct ControlAction {
  double steering = 0.0;
  double throttle = 0.0;
  /// No road pixels were visible.
  bool blind = false;
};

using Controller = std::function<ControlAction(const Frame&)>;

/// True for the asphalt grey and the centerline yellow of the renderer,
/// with a tolerance for texture.
bool is_road_pixel(std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// Column-centroid lane keeper over the lower half of the frame. A far band
/// supplies look-ahead, a near band the lateral correction.
class ReferenceController {
 public:
  struct Params {
    double near_gain = 0.45;
    double far_gain = 0.55;
    double cruise_throttle = 0.5;
    /// Throttle is scaled by 1 - slowdown * |far offset|.
    double slowdown = 0.5;
  };

  ReferenceController() = default;
  explicit ReferenceController(Params p) : params_(p) {}

  ControlAction operator()(const Frame& frame) const;
  const Params& params() const { return params_; }

 private:
  Params params_;
};

/// Contract every simulator backend implements. Calls alternate
/// observe -> act -> advance within one control step.
class SimulatorAdapter {
 public:
  virtual ~SimulatorAdapter() = default;
  /// Places the vehicle at the road start; no state survives from before.
  virtual void reset(const RoadScenario& road) = 0;
  virtual Frame observe() = 0;
  virtual void act(double steering, double throttle) = 0;
  virtual void advance(double dt) = 0;
  virtual VehicleState state() const = 0;
  /// Vehicle has reached the end of the road.
  virtual bool done() const = 0;
};

struct SimConfig {
  VehicleParams vehicle;
  CameraConfig camera;
};

class BuiltinSimulator final : public SimulatorAdapter {
 public:
  explicit BuiltinSimulator(SimConfig config = {}) : config_(config) {}

  void reset(const RoadScenario& road) override;
  Frame observe() override;
  void act(double steering, double throttle) override;
  void advance(double dt) override;
  VehicleState state() const override { return state_; }
  bool done() const override;

 private:
  SimConfig config_;
  std::optional<RoadScenario> road_;
  VehicleState state_;
  double command_steering_ = 0.0;
  double command_throttle_ = 0.0;
};

using AdapterFactory = std::function<std::unique_ptr<SimulatorAdapter>()>;

/// Stateful per-episode frame transform, fed frames in control order.
class FrameTransform {
 public:
  virtual ~FrameTransform() = default;
  virtual Frame apply(const Frame& frame, std::uint64_t frame_index) = 0;
};

struct EpisodeConfig {
  double duration = 30.0;
  double sample_dt = 0.25;
  int control_hz = 30;
  int physics_hz = 120;
  double failure_threshold = 2.0;
};

enum class Outcome { Completed, Failed, Timeout };

std::string_view outcome_name(Outcome o);
Outcome outcome_from_name(std::string_view name);

struct TelemetrySample {
  double t = 0.0;
  VehicleState state;
  double xte = 0.0;
  /// Index of the last control frame before the sample, -1 before the first.
  long long frame_id = -1;
  bool blind = false;

  friend bool operator==(const TelemetrySample&, const TelemetrySample&) = default;
};

struct Telemetry {
  double sample_dt = 0.25;
  std::vector<TelemetrySample> samples;

  friend bool operator==(const Telemetry&, const Telemetry&) = default;
};

struct EpisodeResult {
  Telemetry telemetry;
  Outcome outcome = Outcome::Timeout;
  /// Set only for Outcome::Failed.
  std::optional<double> failure_time;
  double duration = 30.0;
  double final_arc = 0.0;
  long long frames = 0;
  long long blind_frames = 0;
};

/// Raised when the adapter, transform or controller throws mid-episode.
class EpisodeError : public Error {
 public:
  EpisodeError(const std::string& what, Telemetry partial)
      : Error(what), partial_(std::move(partial)) {}
  const Telemetry& partial() const { return partial_; }

 private:
  Telemetry partial_;
};

/// Fixed-step loop: physics at physics_hz, control at control_hz, telemetry
/// every sample_dt. Ends on completion, on |xte| above the threshold at a
/// sample instant, or at `duration`. Throws ConfigError for rates that do not
/// divide evenly, EpisodeError for faults during the run.
EpisodeResult run_episode(SimulatorAdapter& adapter, const RoadScenario& road,
                          const Controller& controller, FrameTransform* transform,
                          const EpisodeConfig& config = {});

/// True iff an unperturbed episode completes with max |xte| below the
/// threshold. Self-intersecting roads are rejected without simulating. The
/// check runs for at least the default duration.
bool verify_drivable(const RoadScenario& road, const Controller& controller,
                     const SimConfig& sim = {}, const EpisodeConfig& config = {});

inline constexpr std::string_view kTelemetrySchema = "roadshake.telemetry/1";

nlohmann::json sample_to_json(const TelemetrySample& s);
TelemetrySample sample_from_json(const nlohmann::json& j);
/// One JSON object per line, each terminated by '\n'.
std::string telemetry_to_jsonl(const Telemetry& t);
Telemetry telemetry_from_jsonl(std::string_view text, double sample_dt);

/// Ten drivable roads shipped with the tool.
std::vector<RoadScenario> bundled_roads();

/// Twenty rendered road frames used for calibration and tests.
std::vector<Frame> bundled_corpus(const CameraConfig& camera = {});

}  // namespace roadshake

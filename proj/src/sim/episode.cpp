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
#include <sstream>

#include <nlohmann/json.hpp>

#include "roadshake/sim.hpp"

namespace roadshake {

void BuiltinSimulator::reset(const RoadScenario& road) {
  road_ = road;
  state_ = VehicleState{};
  state_.heading = road.start_heading();
  command_steering_ = 0.0;
  command_throttle_ = 0.0;
}

Frame BuiltinSimulator::observe() {
  if (!road_) throw Error("simulator observed before reset");
  return render_camera(*road_, state_, config_.camera);
}

void BuiltinSimulator::act(double steering, double throttle) {
  const auto& v = config_.vehicle;
  command_steering_ = std::clamp(steering, -v.max_steering, v.max_steering);
  command_throttle_ = std::clamp(throttle, 0.0, 1.0);
  state_.steering = command_steering_;
  state_.throttle = command_throttle_;
}

void BuiltinSimulator::advance(double dt) {
  if (!road_) throw Error("simulator advanced before reset");
  state_ = step_bicycle(state_, command_steering_, command_throttle_, dt, config_.vehicle);
}

bool BuiltinSimulator::done() const {
  if (!road_) return false;
  return nearest_centerline(*road_, {state_.x, state_.y}).arc >= road_->length();
}

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Completed: return "completed";
    case Outcome::Failed: return "failed";
    case Outcome::Timeout: return "timeout";
  }
  return "timeout";
}

Outcome outcome_from_name(std::string_view name) {
  if (name == "completed") return Outcome::Completed;
  if (name == "failed") return Outcome::Failed;
  if (name == "timeout") return Outcome::Timeout;
  throw ConfigError("outcome", "unknown outcome '" + std::string(name) + "'");
}

namespace {

long long whole_ticks(double seconds, int hz, const char* field) {
  const double ticks = seconds * hz;
  const double r = std::round(ticks);
  if (!(seconds > 0.0) || std::fabs(ticks - r) > 1e-9 * std::max(1.0, r)) {
    throw ConfigError(field, "must be a positive multiple of the physics step");
  }
  return static_cast<long long>(r);
}

}  // namespace

EpisodeResult run_episode(SimulatorAdapter& adapter, const RoadScenario& road,
                          const Controller& controller, FrameTransform* transform,
                          const EpisodeConfig& config) {
  if (config.control_hz <= 0 || config.physics_hz <= 0 ||
      config.physics_hz % config.control_hz != 0) {
    throw ConfigError("control_hz", "physics rate must be a multiple of the control rate");
  }
  const long long per_control = config.physics_hz / config.control_hz;
  const long long per_sample = whole_ticks(config.sample_dt, config.physics_hz, "sample_dt");
  const long long total = whole_ticks(config.duration, config.physics_hz, "duration");
  const double dt = 1.0 / config.physics_hz;

  EpisodeResult result;
  result.duration = config.duration;
  result.telemetry.sample_dt = config.sample_dt;
  auto& samples = result.telemetry.samples;
  samples.reserve(static_cast<std::size_t>(total / per_sample + 1));

  long long frame_id = -1;
  bool blind = false;
  try {
    adapter.reset(road);
    for (long long tick = 0;; ++tick) {
      if (tick % per_control == 0) {
        if (adapter.done()) {
          result.outcome = Outcome::Completed;
          break;
        }
        ++frame_id;
        Frame frame = adapter.observe();
        if (transform != nullptr) frame = transform->apply(frame, static_cast<std::uint64_t>(frame_id));
        const ControlAction a = controller(frame);
        blind = a.blind;
        if (blind) ++result.blind_frames;
        adapter.act(a.steering, a.throttle);
      }
      if (tick % per_sample == 0) {
        TelemetrySample s;
        s.t = static_cast<double>(tick / per_sample) * config.sample_dt;
        s.state = adapter.state();
        s.xte = nearest_centerline(road, {s.state.x, s.state.y}).offset;
        s.frame_id = frame_id;
        s.blind = blind;
        samples.push_back(s);
        if (std::fabs(s.xte) > config.failure_threshold) {
          result.outcome = Outcome::Failed;
          result.failure_time = s.t;
          break;
        }
      }
      if (tick == total) {
        result.outcome = Outcome::Timeout;
        break;
      }
      adapter.advance(dt);
    }
  } catch (const std::exception& e) {
    throw EpisodeError(std::string("episode aborted: ") + e.what(), result.telemetry);
  }
  const VehicleState end = adapter.state();
  result.final_arc = nearest_centerline(road, {end.x, end.y}).arc;
  result.frames = frame_id + 1;
  return result;
}

bool verify_drivable(const RoadScenario& road, const Controller& controller, const SimConfig& sim,
                     const EpisodeConfig& config) {
  if (!road.simple()) return false;
  // Drivability means reaching the end, so a short experiment duration never
  // shortens the check.
  EpisodeConfig full = config;
  full.duration = std::max(config.duration, EpisodeConfig{}.duration);
  BuiltinSimulator adapter(sim);
  const EpisodeResult r = run_episode(adapter, road, controller, nullptr, full);
  if (r.outcome != Outcome::Completed) return false;
  for (const auto& s : r.telemetry.samples) {
    if (std::fabs(s.xte) >= config.failure_threshold) return false;
  }
  return true;
}

nlohmann::json sample_to_json(const TelemetrySample& s) {
  return {{"t", s.t},
          {"x", s.state.x},
          {"y", s.state.y},
          {"heading", s.state.heading},
          {"speed", s.state.speed},
          {"steering", s.state.steering},
          {"throttle", s.state.throttle},
          {"xte", s.xte},
          {"frame_id", s.frame_id},
          {"blind", s.blind}};
}

TelemetrySample sample_from_json(const nlohmann::json& j) {
  TelemetrySample s;
  s.t = j.at("t").get<double>();
  s.state.x = j.at("x").get<double>();
  s.state.y = j.at("y").get<double>();
  s.state.heading = j.at("heading").get<double>();
  s.state.speed = j.at("speed").get<double>();
  s.state.steering = j.at("steering").get<double>();
  s.state.throttle = j.at("throttle").get<double>();
  s.xte = j.at("xte").get<double>();
  s.frame_id = j.at("frame_id").get<long long>();
  s.blind = j.value("blind", false);
  return s;
}

std::string telemetry_to_jsonl(const Telemetry& t) {
  std::string out;
  for (const auto& s : t.samples) {
    out += sample_to_json(s).dump();
    out += '\n';
  }
  return out;
}

Telemetry telemetry_from_jsonl(std::string_view text, double sample_dt) {
  Telemetry t;
  t.sample_dt = sample_dt;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    t.samples.push_back(sample_from_json(nlohmann::json::parse(line)));
  }
  return t;
}

}  // namespace roadshake

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

#include <spdlog/spdlog.h>

#include "roadshake/bench.hpp"
#include "roadshake/parallel.hpp"
#include "roadshake/rng.hpp"

namespace roadshake {

using nlohmann::json;

json objectives_to_json(const ObjectiveVector& o) {
  return {{"avg_abs_xte", o.avg_abs_xte},
          {"time_to_failure", o.time_to_failure},
          {"criticality", o.criticality},
          {"max_xte", o.max_xte}};
}

ObjectiveVector objectives_from_json(const json& j) {
  ObjectiveVector o;
  o.avg_abs_xte = j.at("avg_abs_xte").get<double>();
  o.time_to_failure = j.at("time_to_failure").get<double>();
  o.criticality = j.at("criticality").get<int>();
  o.max_xte = j.at("max_xte").get<double>();
  return o;
}

ObjectiveVector compute_objectives(const Telemetry& telemetry, Outcome outcome,
                                   std::optional<double> failure_time, double duration) {
  if (telemetry.samples.empty()) throw MetricsError("telemetry has no samples");
  ObjectiveVector o;
  double sum = 0.0;
  for (const auto& s : telemetry.samples) {
    const double a = std::fabs(s.xte);
    sum += a;
    o.max_xte = std::max(o.max_xte, a);
  }
  o.avg_abs_xte = sum / static_cast<double>(telemetry.samples.size());
  switch (outcome) {
    case Outcome::Completed: o.criticality = kCriticalityCompleted; break;
    case Outcome::Timeout: o.criticality = kCriticalityTimeout; break;
    case Outcome::Failed: o.criticality = kCriticalityDeparture; break;
  }
  o.time_to_failure = outcome == Outcome::Failed && failure_time ? *failure_time : duration;
  return o;
}

ObjectiveVector compute_objectives(const EpisodeResult& result) {
  return compute_objectives(result.telemetry, result.outcome, result.failure_time, result.duration);
}

// ---- environment ----------------------------------------------------------

std::shared_ptr<const PerturbationRegistry> registry_for(const EpisodeEnvironment& env) {
  if (env.param_overrides.is_null() || env.param_overrides.empty()) {
    return std::shared_ptr<const PerturbationRegistry>(&PerturbationRegistry::builtin(),
                                                       [](const PerturbationRegistry*) {});
  }
  return std::make_shared<const PerturbationRegistry>(
      PerturbationRegistry::builtin().with_overrides(env.param_overrides));
}

json environment_to_json(const EpisodeEnvironment& env) {
  const auto& v = env.sim.vehicle;
  const auto& c = env.sim.camera;
  const auto& k = env.controller;
  return {{"vehicle",
           {{"wheelbase", v.wheelbase},
            {"max_speed", v.max_speed},
            {"max_steering", v.max_steering},
            {"max_accel", v.max_accel},
            {"drag", v.drag}}},
          {"camera",
           {{"width", c.width},
            {"height", c.height},
            {"hfov_deg", c.hfov_deg},
            {"mount_height", c.mount_height},
            {"horizon", c.horizon},
            {"near_plane", c.near_plane}}},
          {"controller",
           {{"near_gain", k.near_gain},
            {"far_gain", k.far_gain},
            {"cruise_throttle", k.cruise_throttle},
            {"slowdown", k.slowdown}}},
          {"overlay_dir", env.overlay_dir.string()},
          {"param_overrides", env.param_overrides}};
}

namespace {

template <class T>
void read_field(const json& obj, const char* section, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(section) + "." + key, "wrong type");
  }
}

}  // namespace

EpisodeEnvironment environment_from_json(const json& j) {
  EpisodeEnvironment env;
  if (!j.is_object()) throw ConfigError("environment", "expected an object");
  if (j.contains("vehicle")) {
    const json& v = j.at("vehicle");
    auto& p = env.sim.vehicle;
    read_field(v, "vehicle", "wheelbase", p.wheelbase);
    read_field(v, "vehicle", "max_speed", p.max_speed);
    read_field(v, "vehicle", "max_steering", p.max_steering);
    read_field(v, "vehicle", "max_accel", p.max_accel);
    read_field(v, "vehicle", "drag", p.drag);
  }
  if (j.contains("camera")) {
    const json& c = j.at("camera");
    auto& p = env.sim.camera;
    read_field(c, "camera", "width", p.width);
    read_field(c, "camera", "height", p.height);
    read_field(c, "camera", "hfov_deg", p.hfov_deg);
    read_field(c, "camera", "mount_height", p.mount_height);
    read_field(c, "camera", "horizon", p.horizon);
    read_field(c, "camera", "near_plane", p.near_plane);
    if (p.width < 16 || p.height < 16) throw ConfigError("camera", "frame must be at least 16x16");
  }
  if (j.contains("controller")) {
    const json& k = j.at("controller");
    auto& p = env.controller;
    read_field(k, "controller", "near_gain", p.near_gain);
    read_field(k, "controller", "far_gain", p.far_gain);
    read_field(k, "controller", "cruise_throttle", p.cruise_throttle);
    read_field(k, "controller", "slowdown", p.slowdown);
  }
  if (j.contains("overlay_dir")) {
    std::string dir;
    read_field(j, "environment", "overlay_dir", dir);
    env.overlay_dir = dir;
  }
  if (j.contains("param_overrides") && !j.at("param_overrides").is_null()) {
    if (!j.at("param_overrides").is_object()) {
      throw ConfigError("param_overrides", "expected an object");
    }
    env.param_overrides = j.at("param_overrides");
  }
  return env;
}

json episode_config_to_json(const EpisodeConfig& c) {
  return {{"duration", c.duration},
          {"sample_dt", c.sample_dt},
          {"control_hz", c.control_hz},
          {"physics_hz", c.physics_hz},
          {"failure_threshold", c.failure_threshold}};
}

EpisodeConfig episode_config_from_json(const json& j) {
  EpisodeConfig c;
  if (!j.is_object()) throw ConfigError("episode", "expected an object");
  read_field(j, "episode", "duration", c.duration);
  read_field(j, "episode", "sample_dt", c.sample_dt);
  read_field(j, "episode", "control_hz", c.control_hz);
  read_field(j, "episode", "physics_hz", c.physics_hz);
  read_field(j, "episode", "failure_threshold", c.failure_threshold);
  if (!(c.duration > 0.0)) throw ConfigError("episode.duration", "must be positive");
  if (!(c.sample_dt > 0.0)) throw ConfigError("episode.sample_dt", "must be positive");
  if (!(c.failure_threshold > 0.0)) {
    throw ConfigError("episode.failure_threshold", "must be positive");
  }
  if (c.control_hz <= 0 || c.physics_hz <= 0 || c.physics_hz % c.control_hz != 0) {
    throw ConfigError("episode.control_hz", "physics rate must be a multiple of the control rate");
  }
  return c;
}

// ---- execution ------------------------------------------------------------

EpisodeRecord run_task(const EpisodeTask& task, SimulatorAdapter& adapter,
                       const Controller& controller, const TransformContext& context) {
  EpisodeRecord record{task, {}, {}, std::nullopt};
  std::unique_ptr<FrameTransform> transform = make_transform(task.perturbation, context);
  try {
    record.result = run_episode(adapter, task.road, controller, transform.get(), task.episode);
    record.objectives = compute_objectives(record.result);
  } catch (const EpisodeError& e) {
    spdlog::warn("episode {} aborted: {}", task.id, e.what());
    record.error = e.what();
    record.result.telemetry = e.partial();
    record.result.outcome = Outcome::Failed;
    record.result.duration = task.episode.duration;
    record.result.frames = 0;
    // An aborted episode counts as the most critical outcome.
    if (!e.partial().samples.empty()) {
      record.result.failure_time = e.partial().samples.back().t;
      record.objectives = compute_objectives(record.result);
    } else {
      record.result.failure_time = 0.0;
      record.objectives = {0.0, 0.0, kCriticalityDeparture, 0.0};
    }
  }
  return record;
}

EpisodeRunner make_builtin_runner(const EpisodeEnvironment& env) {
  auto registry = registry_for(env);
  return [env, registry](const EpisodeTask& task) {
    BuiltinSimulator adapter(env.sim);
    const ReferenceController controller(env.controller);
    TransformContext context;
    context.width = env.sim.camera.width;
    context.height = env.sim.camera.height;
    context.overlay_dir = env.overlay_dir;
    context.registry = registry.get();
    return run_task(task, adapter, controller, context);
  };
}

std::vector<EpisodeRecord> run_tasks(const std::vector<EpisodeTask>& tasks,
                                     const EpisodeRunner& runner, int jobs) {
  std::vector<std::optional<EpisodeRecord>> slots(tasks.size());
  parallel_for(tasks.size(), jobs, [&](std::size_t i) { slots[i] = runner(tasks[i]); });
  std::vector<EpisodeRecord> out;
  out.reserve(tasks.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::uint64_t episode_seed(std::uint64_t run_seed, std::string_view road_id,
                           std::string_view label) {
  return mix_seed(mix_seed(run_seed, hash_string(road_id)), hash_string(label));
}

}  // namespace roadshake

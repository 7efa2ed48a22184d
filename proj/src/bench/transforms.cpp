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


#include "roadshake/transforms.hpp"

#include <map>
#include <mutex>

#include <nlohmann/json.hpp>

#include "../perturb/ops.hpp"
#include "roadshake/dynamic_perturb.hpp"
#include "roadshake/errors.hpp"

namespace roadshake {

const std::vector<std::string>& dynamic_perturbation_names() {
  static const std::vector<std::string> names{"overlay_rain",   "overlay_smoke",  "overlay_snow",
                                              "rain_attention", "rain_particles", "snow_particles"};
  return names;
}

std::string EpisodePerturbation::label() const {
  if (identity()) return std::string(kNoPerturbation);
  std::string s = spec.name + "@" + std::to_string(spec.intensity);
  if (mask) s += "+mask";
  return s;
}

namespace {

std::string saliency_name(SaliencyKind k) {
  switch (k) {
    case SaliencyKind::File: return "file";
    case SaliencyKind::CenterPrior: return "center_prior";
    case SaliencyKind::GradientProxy: return "gradient_proxy";
  }
  return "gradient_proxy";
}

}  // namespace

nlohmann::json perturbation_to_json(const EpisodePerturbation& p) {
  nlohmann::json j = p.spec;
  if (p.mask) {
    j["mask"] = mask_spec_to_json(*p.mask);
    j["saliency"] = saliency_name(p.saliency);
    if (p.saliency == SaliencyKind::File) j["saliency_path"] = p.saliency_path.string();
    j["mask_horizon"] = p.mask_horizon;
  }
  return j;
}

EpisodePerturbation perturbation_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("perturbation", "expected an object");
  if (!j.contains("name") || !j["name"].is_string()) throw ConfigError("perturbation.name", "required");
  EpisodePerturbation p;
  p.spec.name = j["name"].get<std::string>();
  p.spec.intensity = j.value("intensity", 1);
  p.spec.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("mask")) {
    p.mask = mask_spec_from_json(j["mask"]);
    const std::string s = j.value("saliency", std::string("gradient_proxy"));
    if (s == "file") {
      p.saliency = SaliencyKind::File;
      if (!j.contains("saliency_path")) throw ConfigError("perturbation.saliency_path", "required for file saliency");
      p.saliency_path = j["saliency_path"].get<std::string>();
    } else if (s == "center_prior") {
      p.saliency = SaliencyKind::CenterPrior;
    } else if (s == "gradient_proxy") {
      p.saliency = SaliencyKind::GradientProxy;
    } else {
      throw ConfigError("perturbation.saliency", "unknown provider '" + s + "'");
    }
    p.mask_horizon = j.value("mask_horizon", 1);
  }
  return p;
}

bool is_online_perturbation(std::string_view name, const PerturbationRegistry& registry) {
  if (name.empty() || name == kNoPerturbation || name == kBlackout) return true;
  if (registry.contains(name)) return true;
  const auto& dyn = dynamic_perturbation_names();
  return std::find(dyn.begin(), dyn.end(), name) != dyn.end();
}

namespace {

class StaticTransform final : public FrameTransform {
 public:
  StaticTransform(const PerturbationRegistry& registry, PerturbationSpec spec)
      : registry_(registry), spec_(std::move(spec)) {}

  Frame apply(const Frame& frame, std::uint64_t index) override {
    PerturbationSpec s = spec_;
    s.seed = mix_seed(spec_.seed, index);
    return registry_.apply(s, frame);
  }

 private:
  const PerturbationRegistry& registry_;
  PerturbationSpec spec_;
};

class BlackoutTransform final : public FrameTransform {
 public:
  Frame apply(const Frame& frame, std::uint64_t index) override {
    SeededRng rng = SeededRng::substream(0, index);
    return ops::cutout(to_rgb(frame), ops_params_, rng);
  }

 private:
  ParamRow ops_params_{{"holes", 1.0}, {"size", 1.0}};
};

class MaskedTransform final : public FrameTransform {
 public:
  MaskedTransform(const PerturbationRegistry& registry, const EpisodePerturbation& p)
      : registry_(registry),
        spec_(p.spec),
        scheduler_(p.saliency == SaliencyKind::File ? SaliencyProvider::file(p.saliency_path)
                   : p.saliency == SaliencyKind::CenterPrior ? SaliencyProvider::center_prior()
                                                             : SaliencyProvider::gradient_proxy(),
                   *p.mask, p.mask_horizon, p.spec.seed) {}

  Frame apply(const Frame& frame, std::uint64_t index) override {
    PerturbationSpec s = spec_;
    s.seed = mix_seed(spec_.seed, index);
    return apply_masked(registry_, s, scheduler_.mask_for(frame, index), frame);
  }

 private:
  const PerturbationRegistry& registry_;
  PerturbationSpec spec_;
  MaskScheduler scheduler_;
};

class ParticleTransform final : public FrameTransform {
 public:
  ParticleTransform(ParticleParams params, int w, int h, int level, std::uint64_t seed, bool guided)
      : system_(params, w, h, level, seed), guided_(guided) {}

  Frame apply(const Frame& frame, std::uint64_t) override {
    if (guided_) system_.attach_saliency_emitter(get_saliency(SaliencyProvider::gradient_proxy(), frame));
    return system_.step(frame);
  }

 private:
  ParticleSystem system_;
  bool guided_;
};

class OverlayTransform final : public FrameTransform {
 public:
  OverlayTransform(std::shared_ptr<const OverlayClip> clip, int level)
      : buffer_(std::move(clip)), level_(level) {
    level_alpha(level);
  }

  Frame apply(const Frame& frame, std::uint64_t) override {
    return apply_overlay(frame, buffer_, level_);
  }

 private:
  CircularBuffer buffer_;
  int level_;
};

// Clips are immutable once built, so one copy per (kind, size, source) is
// shared between episodes.
std::shared_ptr<const OverlayClip> shared_clip(const std::string& kind, const TransformContext& ctx) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const OverlayClip>> cache;
  const std::string key = kind + ":" + std::to_string(ctx.width) + "x" + std::to_string(ctx.height) +
                          ":" + ctx.overlay_dir.string();
  std::lock_guard lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::shared_ptr<const OverlayClip> clip;
  if (!ctx.overlay_dir.empty()) {
    clip = std::make_shared<OverlayClip>(load_overlay(ctx.overlay_dir / kind, ctx.width, ctx.height));
  } else {
    const OverlayKind k = kind == "rain" ? OverlayKind::Rain
                          : kind == "snow" ? OverlayKind::Snow
                                           : OverlayKind::Smoke;
    std::vector<Frame> keyed;
    for (const auto& f : generate_overlay_frames(k, ctx.width, ctx.height, 30, hash_string(kind))) {
      keyed.push_back(chroma_key(f));
    }
    clip = std::make_shared<OverlayClip>(std::move(keyed), "procedural-" + kind);
  }
  cache.emplace(key, clip);
  return clip;
}

}  // namespace

std::unique_ptr<FrameTransform> make_transform(const EpisodePerturbation& p,
                                               const TransformContext& ctx) {
  const PerturbationRegistry& registry =
      ctx.registry != nullptr ? *ctx.registry : PerturbationRegistry::builtin();
  if (p.identity()) return nullptr;
  const std::string& name = p.spec.name;
  const int level = p.spec.intensity;
  if (name == kBlackout) return std::make_unique<BlackoutTransform>();
  if (registry.contains(name)) {
    if (level < kMinIntensity || level > kMaxIntensity) {
      throw BadIntensity("intensity must be in [1,5], got " + std::to_string(level));
    }
    if (p.mask) return std::make_unique<MaskedTransform>(registry, p);
    return std::make_unique<StaticTransform>(registry, p.spec);
  }
  if (p.mask) throw ConfigError("perturbation.mask", "masks apply only to static perturbations");
  if (name == "rain_particles" || name == "rain_attention") {
    return std::make_unique<ParticleTransform>(ParticleParams::rain(), ctx.width, ctx.height, level,
                                               p.spec.seed, name == "rain_attention");
  }
  if (name == "snow_particles") {
    return std::make_unique<ParticleTransform>(ParticleParams::snow(), ctx.width, ctx.height, level,
                                               p.spec.seed, false);
  }
  if (name.starts_with("overlay_")) {
    const std::string kind = name.substr(8);
    if (kind == "rain" || kind == "snow" || kind == "smoke") {
      return std::make_unique<OverlayTransform>(shared_clip(kind, ctx), level);
    }
  }
  throw UnknownPerturbation(name);
}

}  // namespace roadshake

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


#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "roadshake/cli.hpp"

namespace fs = std::filesystem;
using namespace roadshake;

namespace {

std::optional<SelectionMode> parse_selection(const std::string& s) {
  if (s == "top") return SelectionMode::TopPercent;
  if (s == "bottom") return SelectionMode::BottomPercent;
  if (s == "random") return SelectionMode::Random;
  if (s == "threshold") return SelectionMode::Threshold;
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"roadshake: perturbation robustness testing for vision-based lane keeping"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  bool verbose = false;
  bool quiet = false;
  app.add_flag("-v,--verbose", verbose, "Log progress");
  app.add_flag("-q,--quiet", quiet, "Log errors only");

  auto* perturb = app.add_subcommand("perturb-image", "Perturb one image");
  fs::path input;
  fs::path output;
  fs::path strip;
  PerturbationSpec spec;
  std::string mask_mode;
  double mask_value = 0.0;
  perturb->add_option("input", input, "Input image")->required();
  perturb->add_option("-n,--name", spec.name, "Perturbation name")->required();
  perturb->add_option("-l,--level", spec.intensity, "Intensity level 1..5")->required();
  perturb->add_option("-s,--seed", spec.seed, "Seed");
  perturb->add_option("-o,--out", output, "Output image (.png or .jpg)")->required();
  perturb->add_option("--strip", strip, "Also write original|perturbed side by side");
  perturb->add_option("--mask-mode", mask_mode, "Attention mask: top, bottom, random, threshold");
  perturb->add_option("--mask-value", mask_value, "Percentage, or threshold in [0,1]");

  auto* catalog = app.add_subcommand("catalog", "Render every perturbation at every level");
  fs::path catalog_dir;
  catalog->add_option("-o,--out", catalog_dir, "Output directory")->required();

  auto* run = app.add_subcommand("run", "Execute a run configuration");
  fs::path config_file;
  cli::RunOverrides overrides;
  std::optional<std::uint64_t> run_seed;
  std::optional<int> run_jobs;
  run->add_option("config", config_file, "Run configuration (JSON)")->required();
  run->add_option("--seed", run_seed, "Override the configured seed");
  run->add_option("-j,--jobs", run_jobs, "Worker threads");
  run->add_option("-o,--out", overrides.output, "Output directory");

  auto* replay = app.add_subcommand("replay", "Re-execute logged episodes");
  fs::path run_dir;
  std::string episode = "all";
  std::optional<std::uint64_t> seed_override;
  int replay_jobs = 1;
  replay->add_option("run_dir", run_dir, "Run directory")->required();
  replay->add_option("-e,--episode", episode, "Episode id, or all");
  replay->add_option("--seed-override", seed_override, "Replay with a different seed");
  replay->add_option("-j,--jobs", replay_jobs, "Worker threads");

  auto* assets = app.add_subcommand("assets", "Write procedural overlay clips");
  fs::path assets_dir;
  int width = kDefaultFrameWidth;
  int height = kDefaultFrameHeight;
  int frames = 30;
  assets->add_option("-o,--out", assets_dir, "Output directory")->required();
  assets->add_option("--width", width);
  assets->add_option("--height", height);
  assets->add_option("--frames", frames);

  auto* params = app.add_subcommand("params", "Print or write the parameter table");
  fs::path params_out;
  params->add_option("-o,--out", params_out, "Output file");

  auto* roads = app.add_subcommand("roads", "Write the bundled roads as JSON");
  fs::path roads_dir;
  roads->add_option("-o,--out", roads_dir, "Output directory")->required();

  auto* list = app.add_subcommand("list", "List perturbation names");
  bool extended = false;
  bool all = false;
  list->add_flag("--extended", extended, "Only the extended set");
  list->add_flag("--all", all, "Default and extended sets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitUsage;
  }

  spdlog::set_level(verbose ? spdlog::level::info
                            : (quiet ? spdlog::level::err : spdlog::level::warn));
  const cli::Streams io{std::cout, std::cerr};

  return cli::guarded(io, [&]() -> int {
    if (*perturb) {
      std::optional<MaskSpec> mask;
      if (!mask_mode.empty()) {
        const auto mode = parse_selection(mask_mode);
        if (!mode) throw ConfigError("--mask-mode", "expected top, bottom, random or threshold");
        mask = MaskSpec{};
        mask->mode = *mode;
        mask->value = mask_value;
      }
      return cli::cmd_perturb_image(io, input, spec, output, strip, mask);
    }
    if (*catalog) return cli::cmd_catalog(io, catalog_dir);
    if (*run) {
      overrides.seed = run_seed;
      overrides.jobs = run_jobs;
      return cli::cmd_run(io, config_file, overrides);
    }
    if (*replay) return cli::cmd_replay(io, run_dir, episode, seed_override, replay_jobs);
    if (*assets) return cli::cmd_assets(io, assets_dir, width, height, frames);
    if (*params) return cli::cmd_params(io, params_out);
    if (*roads) return cli::cmd_roads(io, roads_dir);
    if (*list) {
      return cli::cmd_list(io, all ? ListFilter::All
                                   : (extended ? ListFilter::Extended : ListFilter::Default));
    }
    return cli::kExitUsage;
  });
}

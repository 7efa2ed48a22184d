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


// Run configuration documents and the command implementations behind the
// roadshake executable. Commands print to the given streams and return a
// process exit code.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "roadshake/attention.hpp"
#include "roadshake/bench.hpp"
#include "roadshake/sbt.hpp"

namespace roadshake::cli {

/// Stable exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitIo = 3,
  kExitFailuresFound = 4,
  kExitRuntime = 5,
};

inline constexpr std::string_view kConfigSchema = "roadshake.config/1";
inline constexpr std::string_view kOutputEnvVar = "ROADSHAKE_OUT";

enum class RunMode { Image, Dataset, Greedy, Rank, Sbt, Replay };

std::string_view mode_name(RunMode m);

struct RunConfig {
  RunMode mode = RunMode::Greedy;
  std::uint64_t seed = 0;
  /// Empty means <output root>/<mode>-<seed>.
  std::filesystem::path output;
  int jobs = 1;

  std::vector<RoadScenario> roads;
  EpisodeConfig episode;
  EpisodeEnvironment environment;
  /// Mask settings applied to every online episode.
  EpisodePerturbation style;

  /// image and dataset modes.
  std::vector<PerturbationSpec> specs;
  /// greedy and rank modes.
  std::vector<std::string> names;
  std::vector<int> levels{1, 2, 3, 4, 5};
  double failure_weight = kDefaultFailureWeight;

  std::filesystem::path image;
  std::filesystem::path dataset;

  SearchConfig search;
  OrdinalTable ordinal_table;
  /// sbt mode: evaluate this many random candidates alongside the search.
  int random_baseline = 0;

  std::filesystem::path run_dir;
  /// replay mode; "all" replays every logged episode.
  std::string episode_id = "all";
  std::optional<std::uint64_t> seed_override;

  /// The validated document with paths made absolute.
  nlohmann::json document;
};

/// Validates a config document; relative paths resolve against base_dir.
/// Throws ConfigError naming the field, UnknownPerturbation.
RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);

/// Throws IoError when unreadable, ConfigError on invalid JSON.
RunConfig load_run_config(const std::filesystem::path& file);

/// $ROADSHAKE_OUT, or "runs" when unset.
std::filesystem::path default_output_root();

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::filesystem::path output;
};

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

/// Runs `body`, mapping library exceptions to exit codes with a message on
/// the error stream.
int guarded(const Streams& io, const std::function<int()>& body);

int cmd_perturb_image(const Streams& io, const std::filesystem::path& input,
                      const PerturbationSpec& spec, const std::filesystem::path& output,
                      const std::filesystem::path& strip = {},
                      const std::optional<MaskSpec>& mask = std::nullopt);

/// 36 x 5 strips of perturbed corpus frames plus index.json.
int cmd_catalog(const Streams& io, const std::filesystem::path& dir);

int cmd_run(const Streams& io, const std::filesystem::path& config_file,
            const RunOverrides& overrides = {});
int cmd_run(const Streams& io, const RunConfig& config);

int cmd_replay(const Streams& io, const std::filesystem::path& run_dir,
               const std::string& episode_id, std::optional<std::uint64_t> seed_override,
               int jobs = 1);

/// Procedural rain, snow and smoke clips in the layout overlays expect.
int cmd_assets(const Streams& io, const std::filesystem::path& dir, int width = kDefaultFrameWidth,
               int height = kDefaultFrameHeight, int frames = 30);

/// The parameter table; empty path prints it.
int cmd_params(const Streams& io, const std::filesystem::path& output);

/// Bundled roads as JSON documents, one file per road.
int cmd_roads(const Streams& io, const std::filesystem::path& dir);

int cmd_list(const Streams& io, ListFilter filter);

}  // namespace roadshake::cli

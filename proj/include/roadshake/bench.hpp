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


// Benchmarking: objectives, episode execution, greedy escalation, the
// perturbation ranking study, offline dataset evaluation, run logs and
// replay.

#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "roadshake/road.hpp"
#include "roadshake/sim.hpp"
#include "roadshake/static_perturb.hpp"
#include "roadshake/transforms.hpp"

namespace roadshake {

// ---- objectives -----------------------------------------------------------

/// Criticality codes, ordered by severity.
inline constexpr int kCriticalityCompleted = 0;
inline constexpr int kCriticalityTimeout = 1;
inline constexpr int kCriticalityDeparture = 2;

struct ObjectiveVector {
  double avg_abs_xte = 0.0;
  double time_to_failure = 0.0;
  int criticality = 0;
  double max_xte = 0.0;

  std::array<double, 4> values() const {
    return {avg_abs_xte, time_to_failure, static_cast<double>(criticality), max_xte};
  }
  friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
};

nlohmann::json objectives_to_json(const ObjectiveVector& o);
ObjectiveVector objectives_from_json(const nlohmann::json& j);

/// Throws MetricsError on empty telemetry.
ObjectiveVector compute_objectives(const Telemetry& telemetry, Outcome outcome,
                                   std::optional<double> failure_time, double duration);
ObjectiveVector compute_objectives(const EpisodeResult& result);

// ---- episodes -------------------------------------------------------------

/// Everything besides the task that determines an episode's result.
struct EpisodeEnvironment {
  SimConfig sim;
  ReferenceController::Params controller;
  std::filesystem::path overlay_dir;
  /// Parameter-ramp overrides for the static registry (null for none).
  nlohmann::json param_overrides;
};

/// The builtin registry, or a copy carrying env.param_overrides.
std::shared_ptr<const PerturbationRegistry> registry_for(const EpisodeEnvironment& env);

nlohmann::json environment_to_json(const EpisodeEnvironment& env);
/// Fields missing from `j` keep their defaults.
EpisodeEnvironment environment_from_json(const nlohmann::json& j);
nlohmann::json episode_config_to_json(const EpisodeConfig& c);
EpisodeConfig episode_config_from_json(const nlohmann::json& j);

struct EpisodeTask {
  std::string id;
  RoadScenario road;
  EpisodePerturbation perturbation;
  EpisodeConfig episode;
};

struct EpisodeRecord {
  EpisodeTask task;
  EpisodeResult result;
  ObjectiveVector objectives;
  /// Set when the episode aborted; result holds the partial telemetry.
  std::optional<std::string> error;

  /// Anything other than completing the road.
  bool failed() const { return error.has_value() || result.outcome != Outcome::Completed; }
};

using EpisodeRunner = std::function<EpisodeRecord(const EpisodeTask&)>;

/// Runner for the built-in simulator and reference controller.
EpisodeRunner make_builtin_runner(const EpisodeEnvironment& env);

/// Runs an explicit adapter/controller pair; used by the built-in runner.
EpisodeRecord run_task(const EpisodeTask& task, SimulatorAdapter& adapter,
                       const Controller& controller, const TransformContext& context);

/// Results in task order, whatever the number of workers.
std::vector<EpisodeRecord> run_tasks(const std::vector<EpisodeTask>& tasks,
                                     const EpisodeRunner& runner, int jobs);

/// Seed for a (run seed, road, perturbation label) cell.
std::uint64_t episode_seed(std::uint64_t run_seed, std::string_view road_id, std::string_view label);

// ---- greedy escalation ----------------------------------------------------

struct GreedyEntry {
  std::string name;
  /// Lowest level with a failure on any road; empty when robust.
  std::optional<int> min_failing_level;
  bool error = false;
  std::vector<std::string> episode_ids;

  std::string verdict() const;
};

struct GreedyResult {
  std::vector<GreedyEntry> entries;
  std::vector<EpisodeRecord> episodes;

  bool any_failure() const;
};

/// For each name in order: levels 1..5 on every road, stopping after the
/// first level with a failing episode. An aborted episode marks the name
/// "error" and moves on. `style` supplies the mask settings shared by every
/// episode; its spec is ignored.
GreedyResult greedy_online(const std::vector<RoadScenario>& roads,
                           const std::vector<std::string>& names, std::uint64_t seed,
                           const EpisodeConfig& episode, const EpisodeRunner& runner, int jobs = 1,
                           const EpisodePerturbation& style = {});

// ---- ranking --------------------------------------------------------------

inline constexpr double kDefaultFailureWeight = 10.0;

struct GridCell {
  std::string name;
  int level = 1;
  std::string road_id;
  ObjectiveVector objectives;
};

struct OrdinalRow {
  int ordinal = 0;
  std::string name;
  double score = 0.0;
  double failure_rate = 0.0;
  double mean_xte_increase = 0.0;
};

/// Perturbation names ordered by degradation, strongest first.
struct OrdinalTable {
  std::vector<OrdinalRow> rows;
  double failure_weight = kDefaultFailureWeight;

  std::size_t size() const { return rows.size(); }
  /// Throws RankingError when out of range.
  const std::string& name_at(int ordinal) const;
};

inline constexpr std::string_view kOrdinalSchema = "roadshake.ordinal/1";

nlohmann::json ordinal_table_to_json(const OrdinalTable& t);
/// Throws ConfigError on malformed or non-contiguous tables.
OrdinalTable ordinal_table_from_json(const nlohmann::json& j);

/// score = mean over (level, road) of (avg |xte| - baseline avg |xte|)
///         + failure_weight * failure rate,
/// sorted descending, ties by name. Throws RankingError listing missing
/// cells or baselines.
OrdinalTable rank_perturbations(const std::vector<GridCell>& cells,
                                const std::map<std::string, ObjectiveVector>& baselines,
                                const std::vector<std::string>& names,
                                const std::vector<int>& levels,
                                const std::vector<std::string>& road_ids,
                                double failure_weight = kDefaultFailureWeight);

struct RankStudy {
  std::vector<EpisodeRecord> baselines;
  std::vector<EpisodeRecord> grid;
  OrdinalTable table;
};

/// Baselines per road plus the full names x levels x roads grid.
RankStudy run_rank_study(const std::vector<RoadScenario>& roads,
                         const std::vector<std::string>& names, const std::vector<int>& levels,
                         std::uint64_t seed, const EpisodeConfig& episode,
                         const EpisodeRunner& runner, int jobs = 1,
                         double failure_weight = kDefaultFailureWeight,
                         const EpisodePerturbation& style = {});

// ---- offline evaluation ---------------------------------------------------

struct Prediction {
  double angle = 0.0;
  double throttle = 0.0;
};

using SteeringModel = std::function<Prediction(const Frame&)>;

struct DatasetRecord {
  long long frame = 0;
  std::filesystem::path image;
  Prediction truth;
};

/// Images named <frame>_<text>.(jpg|jpeg|png) with text of two or more
/// characters, each paired with record_<frame>.json holding "user/angle"
/// (flat or nested) and optionally "user/throttle". Sorted by frame, then
/// file name. Throws DatasetFormatError naming the frame, IoError.
std::vector<DatasetRecord> scan_dataset(const std::filesystem::path& dir);

struct EvalEntry {
  long long frame = 0;
  std::string image;
  PerturbationSpec spec;
  Prediction original;
  Prediction perturbed;
  Prediction truth;
};

struct EvalReport {
  std::vector<EvalEntry> entries;
  std::size_t images = 0;
  std::size_t skipped = 0;
  nlohmann::json summary() const;
};

inline constexpr std::string_view kEvalSchema = "roadshake.eval/1";
inline constexpr std::string_view kEvalSummarySchema = "roadshake.eval_summary/1";

/// One entry per readable image and spec. Unreadable images are skipped,
/// logged and counted.
EvalReport eval_offline(const std::filesystem::path& dir, const SteeringModel& model,
                        const std::vector<PerturbationSpec>& specs,
                        const PerturbationRegistry& registry = PerturbationRegistry::builtin());

/// eval_results.json and summary.json.
void write_eval_outputs(const std::filesystem::path& out_dir, const EvalReport& report);

/// The reference controller seen as an offline model.
SteeringModel reference_model(const ReferenceController::Params& params = {});

// ---- run logs and replay --------------------------------------------------

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kRunConfigSchema = "roadshake.run/1";
inline constexpr std::string_view kEpisodeSchema = "roadshake.episode/1";

/// Writes config.json, episodes.jsonl and telemetry/<id>.jsonl.
class RunLogWriter {
 public:
  /// Throws IoError when the directory cannot be created.
  explicit RunLogWriter(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  void write_json(const std::string& file, const nlohmann::json& doc) const;
  void append_episode(const EpisodeRecord& record, const EpisodeEnvironment& env) const;

 private:
  std::filesystem::path dir_;
};

nlohmann::json episode_record_to_json(const EpisodeRecord& record, const EpisodeEnvironment& env);

struct ReplayResult {
  EpisodeRecord record;
  bool telemetry_matches = false;
  bool outcome_matches = false;
  /// The replay ran with a seed different from the logged one.
  bool diverged_config = false;
};

/// Re-executes one logged episode with the built-in simulator. Throws
/// ReplayError for unknown ids or schema mismatches.
ReplayResult replay(const std::filesystem::path& run_dir, const std::string& episode_id,
                    std::optional<std::uint64_t> seed_override = std::nullopt);

/// Ids of every episode in a run directory, in log order.
std::vector<std::string> logged_episode_ids(const std::filesystem::path& run_dir);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace roadshake

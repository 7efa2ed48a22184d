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


// Integer multi-objective search over (turns, curvature, intensity,
// perturbation ordinal) using non-dominated sorting with crowding.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "roadshake/bench.hpp"
#include "roadshake/rng.hpp"

namespace roadshake {

inline constexpr int kGeneCount = 4;
/// Gene order: turns, curvature (degrees), intensity, perturbation ordinal.
using Genes = std::array<int, kGeneCount>;

enum class Direction { Maximize, Minimize };

/// Per objective, in ObjectiveVector::values() order.
using Directions = std::array<Direction, 4>;
inline constexpr Directions kDefaultDirections{Direction::Maximize, Direction::Maximize,
                                               Direction::Minimize, Direction::Maximize};

struct GeneBounds {
  Genes lower{0, 0, 1, 0};
  /// The ordinal upper bound is replaced by table size - 1 at run time.
  Genes upper{kRoadSegments, kMaxRoadAngle, kLevelCount, 0};
};

struct SearchConfig {
  int population = 76;
  int generations = 50;
  double crossover_eta = 15.0;
  double mutation_eta = 20.0;
  double crossover_prob = 0.9;
  /// Per-gene probability.
  double mutation_prob = 0.25;
  std::uint64_t seed = 0;
  Directions directions = kDefaultDirections;
  EpisodeConfig episode;
  double turn_threshold = kDefaultTurnThreshold;
  double lane_width = kDefaultLaneWidth;
  int jobs = 1;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

nlohmann::json search_config_to_json(const SearchConfig& c);
/// Missing fields keep defaults; throws ConfigError.
SearchConfig search_config_from_json(const nlohmann::json& j);

// ---- decoding -------------------------------------------------------------

struct DecodedTest {
  RoadScenario road;
  PerturbationSpec perturbation;
  /// The (turns, curvature) pair was moved to the nearest feasible one.
  bool projected = false;
  int turns = 0;
  /// Mean |angle| actually realised.
  double mean_curvature = 0.0;
};

GeneBounds bounds_for(const OrdinalTable& table);

/// Sum range of |angles| achievable with `turns` turn segments.
std::pair<int, int> feasible_angle_sum(int turns, double turn_threshold);

/// Deterministic in (genes, decode seed). Throws ConfigError for genes out
/// of bounds.
DecodedTest decode(const Genes& genes, const OrdinalTable& table, std::uint64_t decode_seed,
                   double turn_threshold = kDefaultTurnThreshold,
                   double lane_width = kDefaultLaneWidth);

// ---- sorting and crowding -------------------------------------------------

/// True when a is no worse on every objective and better on one.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b, const Directions& d);

/// Fronts of indices, each sorted ascending.
std::vector<std::vector<std::size_t>> non_dominated_sort(const std::vector<ObjectiveVector>& objs,
                                                         const Directions& d);

/// Distances for `front` (indices into objs), in front order. Boundary
/// points are infinite; objectives with zero range contribute nothing.
std::vector<double> crowding_distance(const std::vector<ObjectiveVector>& objs,
                                      const std::vector<std::size_t>& front);

// ---- variation ------------------------------------------------------------

/// Bounded polynomial mutation of one integer gene; result rounded and
/// clamped.
int polynomial_mutation(int value, int lower, int upper, double eta, SeededRng& rng);

/// Bounded simulated binary crossover of one integer gene pair.
std::pair<int, int> sbx_crossover(int a, int b, int lower, int upper, double eta, SeededRng& rng);

/// Offspring from consecutive parent pairs; size equals parents.size().
std::vector<Genes> vary(const std::vector<Genes>& parents, const GeneBounds& bounds,
                        const SearchConfig& config, SeededRng& rng);

// ---- the search -----------------------------------------------------------

struct ArchiveEntry {
  int generation = 0;
  int index = 0;
  Genes genes{};
  DecodedTest decoded;
  EpisodeRecord record;
  /// Aborted episode; objectives are the worst case.
  bool error = false;
  /// Objectives copied from an identical earlier genotype.
  bool cached = false;
};

struct Individual {
  Genes genes{};
  ObjectiveVector objectives;
  /// Index into the archive.
  std::size_t archive_index = 0;
  int rank = 0;
  double crowding = 0.0;
};

struct GenerationSnapshot {
  int generation = 0;
  std::vector<ObjectiveVector> front;
};

struct SearchResult {
  std::vector<ArchiveEntry> archive;
  /// Archive indices on the archive's first front.
  std::vector<std::size_t> pareto;
  std::vector<GenerationSnapshot> history;
  std::vector<Individual> final_population;
  /// Episodes actually simulated (cache hits excluded).
  std::size_t episodes_run = 0;
};

/// Called after each generation's selection; the hook for region learning.
using RegionCallback = std::function<void(int generation, const std::vector<Individual>&)>;

/// Worst value each objective can take under the directions.
ObjectiveVector worst_objectives(const Directions& d);

/// population x (generations + 1) evaluations. All randomness is keyed to
/// (seed, generation), never to evaluation order.
SearchResult run_search(const SearchConfig& config, const OrdinalTable& table,
                        const EpisodeRunner& runner, const RegionCallback& on_generation = {});

/// `count` uniformly random candidates through the same evaluation path.
SearchResult random_search(const SearchConfig& config, const OrdinalTable& table,
                           const EpisodeRunner& runner, int count);

inline constexpr std::string_view kArchiveSchema = "roadshake.archive/1";

/// config.json, archive.jsonl, pareto_front.json, history.json, plus the
/// episode log used by replay.
void write_search_run(const std::filesystem::path& dir, const SearchConfig& config,
                      const OrdinalTable& table, const EpisodeEnvironment& env,
                      const SearchResult& result);

}  // namespace roadshake

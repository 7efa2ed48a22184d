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
#include <set>
#include <tuple>

#include <spdlog/spdlog.h>

#include "roadshake/bench.hpp"

namespace roadshake {

using nlohmann::json;

namespace {

EpisodeTask make_task(const RoadScenario& road, const std::string& name, int level,
                      std::uint64_t seed, const EpisodeConfig& episode,
                      const EpisodePerturbation& style) {
  EpisodeTask t{"", road, style, episode};
  t.perturbation.spec = {name, level, episode_seed(seed, road.id(), name)};
  t.id = t.perturbation.label() + "__" + road.id();
  return t;
}

}  // namespace

// ---- greedy escalation ----------------------------------------------------

std::string GreedyEntry::verdict() const {
  if (error) return "error";
  if (min_failing_level) return "fails@" + std::to_string(*min_failing_level);
  return "robust";
}

bool GreedyResult::any_failure() const {
  return std::any_of(entries.begin(), entries.end(),
                     [](const GreedyEntry& e) { return e.min_failing_level.has_value(); });
}

GreedyResult greedy_online(const std::vector<RoadScenario>& roads,
                           const std::vector<std::string>& names, std::uint64_t seed,
                           const EpisodeConfig& episode, const EpisodeRunner& runner, int jobs,
                           const EpisodePerturbation& style) {
  GreedyResult out;
  for (const auto& name : names) {
    GreedyEntry entry{name, std::nullopt, false, {}};
    for (int level = 1; level <= kLevelCount; ++level) {
      std::vector<EpisodeTask> tasks;
      tasks.reserve(roads.size());
      for (const auto& road : roads) tasks.push_back(make_task(road, name, level, seed, episode, style));
      std::vector<EpisodeRecord> records = run_tasks(tasks, runner, jobs);
      bool failed = false;
      for (auto& r : records) {
        entry.episode_ids.push_back(r.task.id);
        entry.error = entry.error || r.error.has_value();
        failed = failed || r.failed();
        out.episodes.push_back(std::move(r));
      }
      if (entry.error) break;
      if (failed) {
        entry.min_failing_level = level;
        break;
      }
    }
    spdlog::info("{}: {}", name, entry.verdict());
    out.entries.push_back(std::move(entry));
  }
  return out;
}

// ---- ranking --------------------------------------------------------------

const std::string& OrdinalTable::name_at(int ordinal) const {
  if (ordinal < 1 || ordinal > static_cast<int>(rows.size())) {
    throw RankingError("ordinal " + std::to_string(ordinal) + " out of range");
  }
  return rows[static_cast<std::size_t>(ordinal - 1)].name;
}

json ordinal_table_to_json(const OrdinalTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"ordinal", r.ordinal},
                    {"name", r.name},
                    {"score", r.score},
                    {"failure_rate", r.failure_rate},
                    {"mean_xte_increase", r.mean_xte_increase}});
  }
  return {{"schema", kOrdinalSchema},
          {"score_definition",
           "roadshake ranking metric: mean over (level, road) of avg |xte| minus the unperturbed "
           "avg |xte|, plus failure_weight times the failure rate"},
          {"failure_weight", t.failure_weight},
          {"rows", rows}};
}

OrdinalTable ordinal_table_from_json(const json& j) {
  if (!j.is_object() || j.value("schema", "") != kOrdinalSchema) {
    throw ConfigError("schema", "expected " + std::string(kOrdinalSchema));
  }
  OrdinalTable t;
  try {
    t.failure_weight = j.value("failure_weight", kDefaultFailureWeight);
    for (const auto& r : j.at("rows")) {
      t.rows.push_back({r.at("ordinal").get<int>(), r.at("name").get<std::string>(),
                        r.at("score").get<double>(), r.at("failure_rate").get<double>(),
                        r.at("mean_xte_increase").get<double>()});
    }
  } catch (const json::exception& e) {
    throw ConfigError("rows", e.what());
  }
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.rows[i].ordinal != static_cast<int>(i) + 1) {
      throw ConfigError("rows", "ordinals must run 1..N in order");
    }
  }
  return t;
}

OrdinalTable rank_perturbations(const std::vector<GridCell>& cells,
                                const std::map<std::string, ObjectiveVector>& baselines,
                                const std::vector<std::string>& names,
                                const std::vector<int>& levels,
                                const std::vector<std::string>& road_ids, double failure_weight) {
  using Key = std::tuple<std::string, int, std::string>;
  std::map<Key, ObjectiveVector> grid;
  for (const auto& c : cells) {
    if (!grid.emplace(Key{c.name, c.level, c.road_id}, c.objectives).second) {
      throw RankingError("duplicate cell " + c.name + "@" + std::to_string(c.level) + " on " +
                         c.road_id);
    }
  }
  // Sorted copies make the sums independent of the order of the inputs.
  const std::set<int> level_set(levels.begin(), levels.end());
  const std::set<std::string> road_set(road_ids.begin(), road_ids.end());
  const std::set<std::string> name_set(names.begin(), names.end());
  if (name_set.empty() || level_set.empty() || road_set.empty()) {
    throw RankingError("empty grid");
  }

  std::vector<std::string> missing;
  for (const auto& road : road_set) {
    if (!baselines.count(road)) missing.push_back("baseline on " + road);
  }
  for (const auto& name : name_set) {
    for (int level : level_set) {
      for (const auto& road : road_set) {
        if (!grid.count(Key{name, level, road})) {
          missing.push_back(name + "@" + std::to_string(level) + " on " + road);
        }
      }
    }
  }
  if (!missing.empty()) {
    std::string msg = "incomplete grid, missing " + std::to_string(missing.size()) + " cell(s):";
    for (const auto& m : missing) msg += " " + m + ";";
    throw RankingError(msg);
  }

  OrdinalTable table;
  table.failure_weight = failure_weight;
  const double n = static_cast<double>(level_set.size() * road_set.size());
  for (const auto& name : name_set) {
    double delta = 0.0;
    double failures = 0.0;
    for (int level : level_set) {
      for (const auto& road : road_set) {
        const ObjectiveVector& o = grid.at(Key{name, level, road});
        delta += o.avg_abs_xte - baselines.at(road).avg_abs_xte;
        if (o.criticality != kCriticalityCompleted) failures += 1.0;
      }
    }
    OrdinalRow row;
    row.name = name;
    row.mean_xte_increase = delta / n;
    row.failure_rate = failures / n;
    row.score = row.mean_xte_increase + failure_weight * row.failure_rate;
    table.rows.push_back(row);
  }
  std::stable_sort(table.rows.begin(), table.rows.end(), [](const OrdinalRow& a, const OrdinalRow& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.name < b.name;
  });
  for (std::size_t i = 0; i < table.rows.size(); ++i) table.rows[i].ordinal = static_cast<int>(i) + 1;
  return table;
}

RankStudy run_rank_study(const std::vector<RoadScenario>& roads,
                         const std::vector<std::string>& names, const std::vector<int>& levels,
                         std::uint64_t seed, const EpisodeConfig& episode,
                         const EpisodeRunner& runner, int jobs, double failure_weight,
                         const EpisodePerturbation& style) {
  std::vector<EpisodeTask> tasks;
  for (const auto& road : roads) {
    EpisodeTask t{"baseline__" + road.id(), road, {}, episode};
    tasks.push_back(std::move(t));
  }
  for (const auto& name : names) {
    for (int level : levels) {
      for (const auto& road : roads) tasks.push_back(make_task(road, name, level, seed, episode, style));
    }
  }
  std::vector<EpisodeRecord> records = run_tasks(tasks, runner, jobs);

  RankStudy study;
  std::map<std::string, ObjectiveVector> baselines;
  std::vector<GridCell> cells;
  std::vector<std::string> road_ids;
  for (std::size_t i = 0; i < records.size(); ++i) {
    EpisodeRecord& r = records[i];
    if (i < roads.size()) {
      baselines[r.task.road.id()] = r.objectives;
      road_ids.push_back(r.task.road.id());
      study.baselines.push_back(std::move(r));
    } else {
      const auto& spec = r.task.perturbation.spec;
      cells.push_back({spec.name, spec.intensity, r.task.road.id(), r.objectives});
      study.grid.push_back(std::move(r));
    }
  }
  study.table = rank_perturbations(cells, baselines, names, levels, road_ids, failure_weight);
  return study;
}

}  // namespace roadshake

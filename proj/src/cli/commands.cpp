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


#include <fstream>
#include <iostream>
#include <mutex>

#include <spdlog/spdlog.h>

#include "roadshake/cli.hpp"
#include "roadshake/dynamic_perturb.hpp"
#include "roadshake/image_io.hpp"
#include "roadshake/parallel.hpp"
#include "roadshake/rng.hpp"

namespace roadshake::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create directory " + dir.string() + (ec ? ": " + ec.message() : ""));
  }
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i != 0) out += sep;
    out += items[i];
  }
  return out;
}

Frame perturb_with_mask(const PerturbationRegistry& registry, const PerturbationSpec& spec,
                        const Frame& frame, const std::optional<MaskSpec>& mask,
                        const SaliencyProvider& provider) {
  if (!mask) return registry.apply(spec, frame);
  const Frame rgb = to_rgb(frame);
  SeededRng rng(spec.seed);
  const Mask m = build_mask(get_saliency(provider, rgb), *mask, rng);
  return apply_masked(registry, spec, m, rgb);
}

SaliencyProvider provider_for(const EpisodePerturbation& style) {
  switch (style.saliency) {
    case SaliencyKind::File: return SaliencyProvider::file(style.saliency_path);
    case SaliencyKind::CenterPrior: return SaliencyProvider::center_prior();
    case SaliencyKind::GradientProxy: break;
  }
  return SaliencyProvider::gradient_proxy();
}

json run_config_json(const RunConfig& c) {
  return {{"schema", kRunConfigSchema},
          {"tool_version", kToolVersion},
          {"mode", mode_name(c.mode)},
          {"seed", c.seed},
          {"config", c.document},
          {"episode", episode_config_to_json(c.episode)},
          {"environment", environment_to_json(c.environment)}};
}

void write_episodes(const RunLogWriter& writer, const std::vector<EpisodeRecord>& records,
                    const EpisodeEnvironment& env) {
  for (const auto& r : records) writer.append_episode(r, env);
}

bool any_failed(const std::vector<EpisodeRecord>& records) {
  return std::any_of(records.begin(), records.end(),
                     [](const EpisodeRecord& r) { return r.failed(); });
}

int run_image(const Streams& io, const RunConfig& c, const fs::path& dir) {
  const auto registry = registry_for(c.environment);
  const Frame input = load_frame(c.image);
  const SaliencyProvider provider = provider_for(c.style);
  const std::string stem = c.image.stem().string();
  for (const auto& spec : c.specs) {
    const fs::path out =
        dir / (stem + "_" + spec.name + "_L" + std::to_string(spec.intensity) + ".png");
    save_frame(out, perturb_with_mask(*registry, spec, input, c.style.mask, provider));
  }
  RunLogWriter(dir).write_json("config.json", run_config_json(c));
  io.out << "image: " << c.specs.size() << " perturbed image(s) -> " << dir.string() << "\n";
  return kExitOk;
}

int run_dataset(const Streams& io, const RunConfig& c, const fs::path& dir) {
  const auto registry = registry_for(c.environment);
  const EvalReport report =
      eval_offline(c.dataset, reference_model(c.environment.controller), c.specs, *registry);
  RunLogWriter writer(dir);
  write_eval_outputs(dir, report);
  writer.write_json("config.json", run_config_json(c));
  io.out << "dataset: " << report.images << " image(s), " << report.skipped << " skipped, "
         << report.entries.size() << " entries -> " << dir.string() << "\n";
  return kExitOk;
}

int run_greedy(const Streams& io, const RunConfig& c, const fs::path& dir) {
  const ReferenceController controller(c.environment.controller);
  for (const auto& road : c.roads) {
    if (!verify_drivable(road, controller, c.environment.sim, c.episode)) {
      throw ConfigError("roads", "road '" + road.id() + "' is not drivable unperturbed");
    }
  }
  const GreedyResult result = greedy_online(c.roads, c.names, c.seed, c.episode,
                                            make_builtin_runner(c.environment), c.jobs, c.style);
  RunLogWriter writer(dir);
  writer.write_json("config.json", run_config_json(c));
  write_episodes(writer, result.episodes, c.environment);
  json entries = json::array();
  int failing = 0;
  bool errors = false;
  for (const auto& e : result.entries) {
    entries.push_back({{"name", e.name},
                       {"verdict", e.verdict()},
                       {"min_failing_level",
                        e.min_failing_level ? json(*e.min_failing_level) : json(nullptr)},
                       {"error", e.error},
                       {"episodes", e.episode_ids}});
    failing += e.min_failing_level ? 1 : 0;
    errors = errors || e.error;
  }
  writer.write_json("greedy.json", {{"schema", "roadshake.greedy/1"}, {"entries", entries}});
  io.out << "greedy: " << result.entries.size() << " perturbation(s), " << failing
         << " failing, " << result.episodes.size() << " episode(s) -> " << dir.string() << "\n";
  if (failing > 0) return kExitFailuresFound;
  return errors ? kExitRuntime : kExitOk;
}

int run_rank(const Streams& io, const RunConfig& c, const fs::path& dir) {
  const RankStudy study =
      run_rank_study(c.roads, c.names, c.levels, c.seed, c.episode,
                     make_builtin_runner(c.environment), c.jobs, c.failure_weight, c.style);
  RunLogWriter writer(dir);
  writer.write_json("config.json", run_config_json(c));
  write_episodes(writer, study.baselines, c.environment);
  write_episodes(writer, study.grid, c.environment);
  json table = ordinal_table_to_json(study.table);
  table["score"] = "mean avg |xte| increase over baseline + failure_weight * failure rate";
  writer.write_json("ordinal_table.json", table);
  io.out << "rank: " << study.table.size() << " perturbation(s), "
         << study.grid.size() + study.baselines.size() << " episode(s), first '"
         << study.table.name_at(1) << "' -> " << dir.string() << "\n";
  return any_failed(study.grid) ? kExitFailuresFound : kExitOk;
}

int run_sbt(const Streams& io, const RunConfig& c, const fs::path& dir) {
  const EpisodeRunner runner = make_builtin_runner(c.environment);
  const SearchResult result = run_search(c.search, c.ordinal_table, runner);
  write_search_run(dir, c.search, c.ordinal_table, c.environment, result);
  json config = json::parse(read_text_file(dir / "config.json"));
  config["config"] = c.document;
  RunLogWriter writer(dir);
  writer.write_json("config.json", config);

  double best = 0.0;
  for (std::size_t i : result.pareto) {
    best = std::max(best, result.archive[i].record.objectives.avg_abs_xte);
  }
  io.out << "sbt: " << result.archive.size() << " evaluation(s), " << result.episodes_run
         << " episode(s), pareto " << result.pareto.size() << ", best avg |xte| " << best;
  if (c.random_baseline > 0) {
    const SearchResult random = random_search(c.search, c.ordinal_table, runner, c.random_baseline);
    double random_best = 0.0;
    json entries = json::array();
    for (const auto& e : random.archive) {
      random_best = std::max(random_best, e.record.objectives.avg_abs_xte);
      entries.push_back({{"genes", e.genes},
                         {"perturbation", e.decoded.perturbation},
                         {"road_angles", e.decoded.road.angles()},
                         {"objectives", objectives_to_json(e.record.objectives)}});
    }
    writer.write_json("random_baseline.json", {{"schema", "roadshake.baseline/1"},
                                               {"best_avg_abs_xte", random_best},
                                               {"entries", entries}});
    io.out << ", random best " << random_best;
  }
  io.out << " -> " << dir.string() << "\n";
  const bool failures = std::any_of(result.archive.begin(), result.archive.end(),
                                    [](const ArchiveEntry& e) { return e.record.failed(); });
  return failures ? kExitFailuresFound : kExitOk;
}

}  // namespace

int guarded(const Streams& io, const std::function<int()>& body) {
  try {
    return body();
  } catch (const UnknownPerturbation& e) {
    std::vector<std::string> near =
        PerturbationRegistry::builtin().nearest_names(e.name(), 3);
    io.err << "error: " << e.what();
    if (!near.empty()) io.err << "; did you mean: " << join(near, ", ");
    io.err << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    io.err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BadIntensity& e) {
    io.err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const EmptyMaskError& e) {
    io.err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const AngleOutOfRange& e) {
    io.err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidRoad& e) {
    io.err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    io.err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const SaliencyLoadError& e) {
    io.err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const DatasetFormatError& e) {
    io.err << "dataset error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ReplayError& e) {
    io.err << "replay error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int cmd_perturb_image(const Streams& io, const fs::path& input, const PerturbationSpec& spec,
                      const fs::path& output, const fs::path& strip,
                      const std::optional<MaskSpec>& mask) {
  const auto& registry = PerturbationRegistry::builtin();
  registry.at(spec.name);
  if (spec.intensity < 1 || spec.intensity > kLevelCount) {
    throw BadIntensity("intensity " + std::to_string(spec.intensity) + " outside 1..5");
  }
  if (mask) mask->validate();
  const Frame original = load_frame(input);
  const Frame perturbed =
      perturb_with_mask(registry, spec, original, mask, SaliencyProvider::gradient_proxy());
  if (output.has_parent_path()) ensure_dir(output.parent_path());
  save_frame(output, perturbed);
  if (!strip.empty()) {
    if (strip.has_parent_path()) ensure_dir(strip.parent_path());
    const std::vector<Frame> pair{to_rgb(original), to_rgb(perturbed)};
    save_frame(strip, hconcat(pair));
  }
  io.out << spec.name << "@" << spec.intensity << " -> " << output.string() << "\n";
  return kExitOk;
}

int cmd_catalog(const Streams& io, const fs::path& dir) {
  ensure_dir(dir);
  const auto& registry = PerturbationRegistry::builtin();
  const std::vector<Frame> corpus = bundled_corpus();
  const std::vector<std::size_t> picks{0, 5, 10, 15};
  json entries = json::array();
  std::size_t written = 0;
  for (const auto& entry : registry.entries()) {
    for (int level = 1; level <= kLevelCount; ++level) {
      const PerturbationSpec spec{entry.name, level, 0};
      std::vector<Frame> tiles;
      for (std::size_t k : picks) tiles.push_back(registry.apply(spec, corpus[k]));
      const std::string file = entry.name + "_L" + std::to_string(level) + ".png";
      save_frame(dir / file, hconcat(tiles));
      entries.push_back({{"name", entry.name},
                         {"category", std::string(1, category_letter(entry.category))},
                         {"extended", entry.extended},
                         {"level", level},
                         {"file", file}});
      ++written;
    }
  }
  const json index = {{"schema", "roadshake.catalog/1"}, {"corpus_frames", picks}, {"entries", entries}};
  write_text_file(dir / "index.json", index.dump(2) + "\n");
  io.out << "catalog: " << written << " strip(s) -> " << dir.string() << "\n";
  return kExitOk;
}

int cmd_run(const Streams& io, const fs::path& config_file, const RunOverrides& overrides) {
  std::ifstream in(config_file);
  if (!in) throw IoError("cannot read config " + config_file.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("(root)", std::string("invalid JSON: ") + e.what());
  }
  if (doc.is_object()) {
    if (overrides.seed) doc["seed"] = *overrides.seed;
    if (overrides.jobs) doc["jobs"] = *overrides.jobs;
    if (!overrides.output.empty()) doc["output"] = overrides.output.string();
  }
  return cmd_run(io, parse_run_config(doc, fs::absolute(config_file).parent_path()));
}

int cmd_run(const Streams& io, const RunConfig& c) {
  fs::path dir = c.output;
  if (dir.empty()) {
    dir = default_output_root() / (std::string(mode_name(c.mode)) + "-" + std::to_string(c.seed));
  }
  ensure_dir(dir);
  switch (c.mode) {
    case RunMode::Image: return run_image(io, c, dir);
    case RunMode::Dataset: return run_dataset(io, c, dir);
    case RunMode::Greedy: return run_greedy(io, c, dir);
    case RunMode::Rank: return run_rank(io, c, dir);
    case RunMode::Sbt: return run_sbt(io, c, dir);
    case RunMode::Replay: {
      RunLogWriter(dir).write_json("config.json", run_config_json(c));
      return cmd_replay(io, c.run_dir, c.episode_id, c.seed_override, c.jobs);
    }
  }
  return kExitRuntime;
}

int cmd_replay(const Streams& io, const fs::path& run_dir, const std::string& episode_id,
               std::optional<std::uint64_t> seed_override, int jobs) {
  const std::vector<std::string> ids =
      episode_id == "all" ? logged_episode_ids(run_dir) : std::vector<std::string>{episode_id};
  std::vector<std::optional<ReplayResult>> results(ids.size());
  parallel_for(ids.size(), jobs,
               [&](std::size_t i) { results[i] = replay(run_dir, ids[i], seed_override); });
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const ReplayResult& r = *results[i];
    const bool ok = r.telemetry_matches && r.outcome_matches;
    io.out << ids[i] << " " << outcome_name(r.record.result.outcome) << " "
           << (ok ? "match" : "MISMATCH") << (r.diverged_config ? " diverged-config" : "") << "\n";
    if (!ok && !r.diverged_config) ++mismatches;
  }
  io.out << "replay: " << ids.size() << " episode(s), " << mismatches << " mismatch(es)\n";
  return mismatches == 0 ? kExitOk : kExitRuntime;
}

int cmd_assets(const Streams& io, const fs::path& dir, int width, int height, int frames) {
  if (width < 16 || height < 16 || frames < 1) {
    throw ConfigError("assets", "size must be at least 16x16 with one or more frames");
  }
  const std::vector<std::pair<std::string, OverlayKind>> kinds{
      {"rain", OverlayKind::Rain}, {"snow", OverlayKind::Snow}, {"smoke", OverlayKind::Smoke}};
  for (const auto& [name, kind] : kinds) {
    ensure_dir(dir / name);
    write_overlay_clip(dir / name,
                       generate_overlay_frames(kind, width, height, frames, hash_string(name)),
                       "procedural " + name);
  }
  io.out << "assets: rain, snow, smoke (" << frames << " frames each) -> " << dir.string() << "\n";
  return kExitOk;
}

int cmd_params(const Streams& io, const fs::path& output) {
  const std::string text = PerturbationRegistry::builtin().param_table_json().dump(2) + "\n";
  if (output.empty()) {
    io.out << text;
  } else {
    if (output.has_parent_path()) ensure_dir(output.parent_path());
    write_text_file(output, text);
  }
  return kExitOk;
}

int cmd_roads(const Streams& io, const fs::path& dir) {
  ensure_dir(dir);
  const auto roads = bundled_roads();
  for (const auto& road : roads) {
    json doc = road_to_json(road);
    const RoadStats st = road_stats(road);
    doc["stats"] = {{"num_turns", st.num_turns},
                    {"avg_curvature", st.avg_curvature},
                    {"max_angle", st.max_angle}};
    write_text_file(dir / (road.id() + ".json"), doc.dump(2) + "\n");
  }
  io.out << "roads: " << roads.size() << " file(s) -> " << dir.string() << "\n";
  return kExitOk;
}

int cmd_list(const Streams& io, ListFilter filter) {
  for (const auto& [name, category] : PerturbationRegistry::builtin().list(filter)) {
    io.out << category_letter(category) << " " << name << "\n";
  }
  if (filter != ListFilter::Extended) {
    io.out << "online " << kBlackout << "\n";
    for (const auto& name : dynamic_perturbation_names()) io.out << "dynamic " << name << "\n";
  }
  return kExitOk;
}

}  // namespace roadshake::cli

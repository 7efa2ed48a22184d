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


#include <cstdlib>
#include <fstream>
#include <map>
#include <set>

#include "roadshake/cli.hpp"
#include "roadshake/rng.hpp"

namespace roadshake::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view mode_name(RunMode m) {
  switch (m) {
    case RunMode::Image: return "image";
    case RunMode::Dataset: return "dataset";
    case RunMode::Greedy: return "greedy";
    case RunMode::Rank: return "rank";
    case RunMode::Sbt: return "sbt";
    case RunMode::Replay: return "replay";
  }
  return "?";
}

fs::path default_output_root() {
  const char* env = std::getenv(kOutputEnvVar.data());
  return env != nullptr && *env != '\0' ? fs::path(env) : fs::path("runs");
}

namespace {

class Reader {
 public:
  Reader(const json& doc, fs::path base) : doc_(doc), base_(std::move(base)) {}

  bool has(const char* key) const { return doc_.contains(key) && !doc_.at(key).is_null(); }
  const json& at(const char* key) const { return doc_.at(key); }

  template <class T>
  T get(const char* key, const char* expected) const {
    if (!doc_.contains(key)) throw ConfigError(key, "missing required field");
    try {
      return doc_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(key, std::string("expected ") + expected);
    }
  }

  template <class T>
  T get_or(const char* key, T fallback, const char* expected) const {
    return has(key) ? get<T>(key, expected) : fallback;
  }

  fs::path existing_path(const char* key, bool directory) const {
    return resolve(get<std::string>(key, "a path"), key, directory);
  }

  fs::path resolve(const std::string& text, const std::string& field, bool directory) const {
    fs::path p(text);
    if (p.is_relative()) p = base_ / p;
    std::error_code ec;
    if (!fs::exists(p, ec)) throw ConfigError(field, "path does not exist: " + p.string());
    if (directory && !fs::is_directory(p, ec)) {
      throw ConfigError(field, "not a directory: " + p.string());
    }
    return fs::weakly_canonical(p);
  }

 private:
  const json& doc_;
  fs::path base_;
};

RunMode parse_mode(const std::string& s) {
  static const std::map<std::string, RunMode> modes{
      {"image", RunMode::Image}, {"dataset", RunMode::Dataset}, {"greedy", RunMode::Greedy},
      {"rank", RunMode::Rank},   {"sbt", RunMode::Sbt},         {"replay", RunMode::Replay}};
  const auto it = modes.find(s);
  if (it == modes.end()) {
    throw ConfigError("mode", "'" + s + "' is not one of image, dataset, greedy, rank, sbt, replay");
  }
  return it->second;
}

std::vector<RoadScenario> parse_roads(const Reader& r) {
  if (!r.has("roads")) return bundled_roads();
  const json& roads = r.at("roads");
  if (!roads.is_array() || roads.empty()) throw ConfigError("roads", "expected a non-empty array");
  std::map<std::string, RoadScenario> bundled;
  for (auto& road : bundled_roads()) bundled.emplace(road.id(), road);
  std::vector<RoadScenario> out;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < roads.size(); ++i) {
    const std::string field = "roads[" + std::to_string(i) + "]";
    const json& item = roads[i];
    try {
      if (item.is_object()) {
        out.push_back(road_from_json(item));
      } else if (item.is_string()) {
        const std::string s = item.get<std::string>();
        if (bundled.count(s)) {
          out.push_back(bundled.at(s));
        } else if (fs::path(s).extension() == ".json") {
          const fs::path p = r.resolve(s, field, false);
          std::ifstream in(p);
          out.push_back(road_from_json(json::parse(in)));
        } else {
          throw ConfigError(field, "'" + s + "' is neither a bundled road nor a .json file");
        }
      } else {
        throw ConfigError(field, "expected a road id, a path or a road object");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const json::exception& e) {
      throw ConfigError(field, e.what());
    } catch (const Error& e) {
      throw ConfigError(field, e.what());
    }
    if (!ids.insert(out.back().id()).second) {
      throw ConfigError(field, "duplicate road id '" + out.back().id() + "'");
    }
  }
  return out;
}

PerturbationSpec parse_spec(const json& item, const std::string& field, std::uint64_t seed,
                            const PerturbationRegistry& registry) {
  PerturbationSpec spec;
  if (item.is_string()) {
    const std::string s = item.get<std::string>();
    const auto at = s.rfind('@');
    if (at == std::string::npos) throw ConfigError(field, "expected \"name@level\"");
    spec.name = s.substr(0, at);
    try {
      spec.intensity = std::stoi(s.substr(at + 1));
    } catch (const std::exception&) {
      throw ConfigError(field, "bad level in '" + s + "'");
    }
    spec.seed = mix_seed(seed, hash_string(spec.name));
  } else if (item.is_object()) {
    try {
      spec.name = item.at("name").get<std::string>();
      spec.intensity = item.at("intensity").get<int>();
      spec.seed = item.contains("seed") ? item.at("seed").get<std::uint64_t>()
                                        : mix_seed(seed, hash_string(spec.name));
    } catch (const json::exception&) {
      throw ConfigError(field, "expected {\"name\", \"intensity\", optional \"seed\"}");
    }
  } else {
    throw ConfigError(field, "expected \"name@level\" or an object");
  }
  registry.at(spec.name);
  if (spec.intensity < 1 || spec.intensity > kLevelCount) {
    throw ConfigError(field, "intensity must lie in 1..5");
  }
  return spec;
}

std::vector<std::string> parse_names(const Reader& r, const PerturbationRegistry& registry) {
  if (!r.has("perturbations")) throw ConfigError("perturbations", "missing required field");
  const json& arr = r.at("perturbations");
  if (!arr.is_array() || arr.empty()) {
    throw ConfigError("perturbations", "expected a non-empty array of names");
  }
  std::vector<std::string> names;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string field = "perturbations[" + std::to_string(i) + "]";
    if (!arr[i].is_string()) throw ConfigError(field, "expected a name");
    const std::string name = arr[i].get<std::string>();
    if (!is_online_perturbation(name, registry) || name == kNoPerturbation) {
      throw UnknownPerturbation(name);
    }
    if (!seen.insert(name).second) throw ConfigError(field, "duplicate name '" + name + "'");
    names.push_back(name);
  }
  return names;
}

EpisodePerturbation parse_style(const Reader& r) {
  EpisodePerturbation style;
  if (r.has("mask")) {
    style.mask = mask_spec_from_json(r.at("mask"));
    style.mask->validate();
  }
  if (r.has("saliency")) {
    const json& s = r.at("saliency");
    if (s.is_string() && s.get<std::string>() == "gradient") {
      style.saliency = SaliencyKind::GradientProxy;
    } else if (s.is_string() && s.get<std::string>() == "center_prior") {
      style.saliency = SaliencyKind::CenterPrior;
    } else if (s.is_object() && s.contains("file") && s.at("file").is_string()) {
      style.saliency = SaliencyKind::File;
      style.saliency_path = r.resolve(s.at("file").get<std::string>(), "saliency.file", false);
    } else {
      throw ConfigError("saliency", "expected \"gradient\", \"center_prior\" or {\"file\": path}");
    }
  }
  style.mask_horizon = r.get_or<int>("mask_horizon", 1, "an integer");
  if (style.mask_horizon < 1) throw ConfigError("mask_horizon", "must be at least 1");
  return style;
}

}  // namespace

RunConfig parse_run_config(const json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("(root)", "expected a JSON object");
  const Reader r(doc, base_dir);
  const std::string schema = r.get<std::string>("schema", "a string");
  if (schema != kConfigSchema) {
    throw ConfigError("schema", "'" + schema + "' is not " + std::string(kConfigSchema));
  }
  RunConfig c;
  c.document = doc;
  c.mode = parse_mode(r.get<std::string>("mode", "a string"));
  c.seed = r.get<std::uint64_t>("seed", "a non-negative integer");
  if (r.has("output")) c.output = r.get<std::string>("output", "a path");
  c.jobs = r.get_or<int>("jobs", 1, "an integer");
  if (c.jobs < 1) throw ConfigError("jobs", "must be at least 1");
  if (r.has("episode")) c.episode = episode_config_from_json(r.at("episode"));
  if (r.has("environment")) {
    c.environment = environment_from_json(r.at("environment"));
    if (!c.environment.overlay_dir.empty()) {
      c.environment.overlay_dir =
          r.resolve(c.environment.overlay_dir.string(), "environment.overlay_dir", true);
      c.document["environment"]["overlay_dir"] = c.environment.overlay_dir.string();
    }
  }
  const auto registry = registry_for(c.environment);
  c.style = parse_style(r);

  switch (c.mode) {
    case RunMode::Image:
    case RunMode::Dataset: {
      if (c.mode == RunMode::Image) {
        c.image = r.existing_path("image", false);
        c.document["image"] = c.image.string();
      } else {
        c.dataset = r.existing_path("dataset", true);
        c.document["dataset"] = c.dataset.string();
        const std::string model = r.get_or<std::string>("model", "reference", "a string");
        if (model != "reference") throw ConfigError("model", "only \"reference\" is built in");
      }
      if (!r.has("perturbations") || !r.at("perturbations").is_array() ||
          r.at("perturbations").empty()) {
        throw ConfigError("perturbations", "expected a non-empty array of specs");
      }
      const json& arr = r.at("perturbations");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        c.specs.push_back(
            parse_spec(arr[i], "perturbations[" + std::to_string(i) + "]", c.seed, *registry));
      }
      break;
    }
    case RunMode::Greedy:
      c.roads = parse_roads(r);
      c.names = parse_names(r, *registry);
      break;
    case RunMode::Rank: {
      c.roads = parse_roads(r);
      c.names = parse_names(r, *registry);
      c.levels = r.get_or<std::vector<int>>("levels", c.levels, "an array of levels");
      std::set<int> seen;
      for (int l : c.levels) {
        if (l < 1 || l > kLevelCount || !seen.insert(l).second) {
          throw ConfigError("levels", "levels must be distinct values in 1..5");
        }
      }
      if (c.levels.empty()) throw ConfigError("levels", "must not be empty");
      c.failure_weight = r.get_or<double>("failure_weight", kDefaultFailureWeight, "a number");
      if (!(c.failure_weight >= 0.0)) throw ConfigError("failure_weight", "must not be negative");
      break;
    }
    case RunMode::Sbt: {
      json search = r.has("search") ? r.at("search") : json::object();
      if (!search.is_object()) throw ConfigError("search", "expected an object");
      if (!search.contains("seed")) search["seed"] = c.seed;
      if (!search.contains("jobs")) search["jobs"] = c.jobs;
      if (!search.contains("episode") && r.has("episode")) search["episode"] = r.at("episode");
      c.search = search_config_from_json(search);
      if (!r.has("ordinal_table")) throw ConfigError("ordinal_table", "missing required field");
      const json& t = r.at("ordinal_table");
      json table_doc;
      if (t.is_string()) {
        const fs::path p = r.resolve(t.get<std::string>(), "ordinal_table", false);
        std::ifstream in(p);
        try {
          table_doc = json::parse(in);
        } catch (const json::exception& e) {
          throw ConfigError("ordinal_table", e.what());
        }
      } else {
        table_doc = t;
      }
      c.ordinal_table = ordinal_table_from_json(table_doc);
      if (c.ordinal_table.rows.empty()) throw ConfigError("ordinal_table", "table is empty");
      for (const auto& row : c.ordinal_table.rows) {
        if (!is_online_perturbation(row.name, *registry)) throw UnknownPerturbation(row.name);
      }
      c.document["ordinal_table"] = ordinal_table_to_json(c.ordinal_table);
      c.random_baseline = r.get_or<int>("random_baseline", 0, "an integer");
      if (c.random_baseline < 0) throw ConfigError("random_baseline", "must not be negative");
      break;
    }
    case RunMode::Replay:
      c.run_dir = r.existing_path("run", true);
      c.document["run"] = c.run_dir.string();
      c.episode_id = r.get_or<std::string>("episode", "all", "a string");
      if (r.has("seed_override")) {
        c.seed_override = r.get<std::uint64_t>("seed_override", "a non-negative integer");
      }
      break;
  }
  return c;
}

RunConfig load_run_config(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot read config " + file.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("(root)", std::string("invalid JSON: ") + e.what());
  }
  return parse_run_config(doc, fs::absolute(file).parent_path());
}

}  // namespace roadshake::cli

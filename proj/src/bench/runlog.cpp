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
#include <sstream>

#include "roadshake/bench.hpp"

namespace roadshake {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("short write to " + path.string());
}

namespace {

// Episode ids become file names; anything unusual is replaced.
std::string telemetry_file(const std::string& id) {
  std::string out = id;
  for (char& c : out) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
                    c == '.' || c == '@' || c == '+';
    if (!ok) c = '_';
  }
  return "telemetry/" + out + ".jsonl";
}

}  // namespace

RunLogWriter::RunLogWriter(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_ / "telemetry", ec);
  if (ec) throw IoError("cannot create run directory " + dir_.string() + ": " + ec.message());
}

void RunLogWriter::write_json(const std::string& file, const json& doc) const {
  write_text_file(dir_ / file, doc.dump(2) + "\n");
}

json episode_record_to_json(const EpisodeRecord& r, const EpisodeEnvironment& env) {
  const auto& res = r.result;
  return {{"schema", kEpisodeSchema},
          {"episode_id", r.task.id},
          {"road", road_to_json(r.task.road)},
          {"perturbation", perturbation_to_json(r.task.perturbation)},
          {"seed", r.task.perturbation.spec.seed},
          {"episode_config", episode_config_to_json(r.task.episode)},
          {"environment", environment_to_json(env)},
          {"outcome", outcome_name(res.outcome)},
          {"failure_time", res.failure_time ? json(*res.failure_time) : json(nullptr)},
          {"final_arc", res.final_arc},
          {"frames", res.frames},
          {"blind_frames", res.blind_frames},
          {"samples", res.telemetry.samples.size()},
          {"objectives", objectives_to_json(r.objectives)},
          {"error", r.error ? json(*r.error) : json(nullptr)},
          {"telemetry", telemetry_file(r.task.id)}};
}

void RunLogWriter::append_episode(const EpisodeRecord& record, const EpisodeEnvironment& env) const {
  const json line = episode_record_to_json(record, env);
  write_text_file(dir_ / line.at("telemetry").get<std::string>(),
                  telemetry_to_jsonl(record.result.telemetry));
  std::ofstream out(dir_ / "episodes.jsonl", std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot append to " + (dir_ / "episodes.jsonl").string());
  out << line.dump() << '\n';
}

namespace {

std::vector<json> read_episode_lines(const fs::path& run_dir) {
  const fs::path path = run_dir / "episodes.jsonl";
  if (!fs::exists(path)) throw ReplayError("no episodes.jsonl in " + run_dir.string());
  std::istringstream in(read_text_file(path));
  std::vector<json> lines;
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    if (line.empty()) continue;
    try {
      lines.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw ReplayError("episodes.jsonl line " + std::to_string(n) + ": " + e.what());
    }
  }
  return lines;
}

}  // namespace

std::vector<std::string> logged_episode_ids(const fs::path& run_dir) {
  std::vector<std::string> ids;
  for (const auto& j : read_episode_lines(run_dir)) ids.push_back(j.value("episode_id", ""));
  return ids;
}

ReplayResult replay(const fs::path& run_dir, const std::string& episode_id,
                    std::optional<std::uint64_t> seed_override) {
  const std::vector<json> lines = read_episode_lines(run_dir);
  const json* found = nullptr;
  for (const auto& j : lines) {
    if (j.value("episode_id", "") == episode_id) found = &j;
  }
  if (found == nullptr) throw ReplayError("episode '" + episode_id + "' not found in run log");
  const json& j = *found;
  if (j.value("schema", "") != kEpisodeSchema) {
    throw ReplayError("episode log schema '" + j.value("schema", "") + "' is not " +
                      std::string(kEpisodeSchema));
  }

  EpisodeTask task;
  EpisodeEnvironment env;
  std::uint64_t logged_seed = 0;
  try {
    task.id = episode_id;
    task.road = road_from_json(j.at("road"));
    task.perturbation = perturbation_from_json(j.at("perturbation"));
    task.episode = episode_config_from_json(j.at("episode_config"));
    env = environment_from_json(j.at("environment"));
    logged_seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ReplayError(std::string("incomplete episode record: ") + e.what());
  } catch (const ConfigError& e) {
    throw ReplayError(std::string("invalid episode record: ") + e.what());
  }

  ReplayResult out;
  if (seed_override) {
    task.perturbation.spec.seed = *seed_override;
    out.diverged_config = *seed_override != logged_seed;
  }
  out.record = make_builtin_runner(env)(task);

  const std::string logged_outcome = j.value("outcome", "");
  const bool logged_error = j.contains("error") && !j.at("error").is_null();
  out.outcome_matches = logged_outcome == outcome_name(out.record.result.outcome) &&
                        logged_error == out.record.error.has_value();
  const fs::path telemetry_path = run_dir / j.value("telemetry", "");
  if (fs::exists(telemetry_path)) {
    out.telemetry_matches =
        read_text_file(telemetry_path) == telemetry_to_jsonl(out.record.result.telemetry);
  }
  return out;
}

}  // namespace roadshake

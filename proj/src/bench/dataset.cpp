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


#include <cmath>
#include <fstream>
#include <map>
#include <regex>

#include <spdlog/spdlog.h>

#include "roadshake/bench.hpp"
#include "roadshake/image_io.hpp"

namespace roadshake {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::regex& image_name_pattern() {
  static const std::regex re(R"(^(\d+)_(.{2,})\.(jpg|jpeg|png)$)", std::regex::icase);
  return re;
}

// Accepts both the flat "user/angle" key and a nested user.angle object.
std::optional<double> user_field(const json& j, const std::string& key) {
  const std::string flat = "user/" + key;
  const json* v = nullptr;
  if (j.contains(flat)) {
    v = &j.at(flat);
  } else if (j.contains("user") && j.at("user").is_object() && j.at("user").contains(key)) {
    v = &j.at("user").at(key);
  }
  if (v == nullptr) return std::nullopt;
  if (!v->is_number()) throw std::invalid_argument("user/" + key + " is not a number");
  return v->get<double>();
}

Prediction read_record(const fs::path& path, long long frame) {
  std::ifstream in(path);
  if (!in) throw DatasetFormatError(frame, "missing record " + path.filename().string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DatasetFormatError(frame, "malformed record " + path.filename().string() + ": " + e.what());
  }
  if (!j.is_object()) throw DatasetFormatError(frame, "record is not a JSON object");
  try {
    const auto angle = user_field(j, "angle");
    if (!angle) throw DatasetFormatError(frame, "record has no user/angle");
    return {*angle, user_field(j, "throttle").value_or(0.0)};
  } catch (const std::invalid_argument& e) {
    throw DatasetFormatError(frame, e.what());
  }
}

json prediction_json(const Prediction& p) { return {{"angle", p.angle}, {"throttle", p.throttle}}; }

}  // namespace

std::vector<DatasetRecord> scan_dataset(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("not a dataset directory: " + dir.string());
  std::vector<std::pair<DatasetRecord, std::string>> found;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    std::smatch m;
    if (!std::regex_match(name, m, image_name_pattern())) continue;
    const std::string digits = m[1].str();
    long long frame = 0;
    try {
      frame = std::stoll(digits);
    } catch (const std::out_of_range&) {
      throw DatasetFormatError(-1, "frame number out of range in " + name);
    }
    // Records may carry the literal digits or the plain integer.
    fs::path record = dir / ("record_" + digits + ".json");
    if (!fs::exists(record)) record = dir / ("record_" + std::to_string(frame) + ".json");
    found.push_back({{frame, entry.path(), read_record(record, frame)}, name});
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.first.frame != b.first.frame) return a.first.frame < b.first.frame;
    return a.second < b.second;
  });
  std::vector<DatasetRecord> out;
  out.reserve(found.size());
  for (auto& f : found) out.push_back(std::move(f.first));
  return out;
}

EvalReport eval_offline(const fs::path& dir, const SteeringModel& model,
                        const std::vector<PerturbationSpec>& specs,
                        const PerturbationRegistry& registry) {
  for (const auto& s : specs) registry.at(s.name);
  EvalReport report;
  for (const auto& rec : scan_dataset(dir)) {
    Frame image;
    try {
      image = to_rgb(load_frame(rec.image));
    } catch (const Error& e) {
      spdlog::warn("skipping unreadable image {}: {}", rec.image.filename().string(), e.what());
      ++report.skipped;
      continue;
    }
    ++report.images;
    const Prediction original = model(image);
    for (const auto& spec : specs) {
      EvalEntry e;
      e.frame = rec.frame;
      e.image = rec.image.filename().string();
      e.spec = spec;
      e.original = original;
      e.perturbed = model(registry.apply(spec, image));
      e.truth = rec.truth;
      report.entries.push_back(std::move(e));
    }
  }
  return report;
}

json EvalReport::summary() const {
  struct Acc {
    std::size_t n = 0;
    double err_original = 0.0;
    double err_perturbed = 0.0;
    double shift = 0.0;
  };
  std::map<std::pair<std::string, int>, Acc> groups;
  for (const auto& e : entries) {
    Acc& a = groups[{e.spec.name, e.spec.intensity}];
    ++a.n;
    a.err_original += std::fabs(e.original.angle - e.truth.angle);
    a.err_perturbed += std::fabs(e.perturbed.angle - e.truth.angle);
    a.shift += std::fabs(e.perturbed.angle - e.original.angle);
  }
  json rows = json::array();
  for (const auto& [key, a] : groups) {
    const double n = static_cast<double>(a.n);
    rows.push_back({{"name", key.first},
                    {"intensity", key.second},
                    {"count", a.n},
                    {"angle_mae_original", a.err_original / n},
                    {"angle_mae_perturbed", a.err_perturbed / n},
                    {"mean_angle_shift", a.shift / n}});
  }
  return {{"schema", kEvalSummarySchema},
          {"images", images},
          {"skipped", skipped},
          {"entries", entries.size()},
          {"groups", rows}};
}

void write_eval_outputs(const fs::path& out_dir, const EvalReport& report) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  json entries = json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"frame", e.frame},
                       {"image", e.image},
                       {"perturbation", e.spec},
                       {"original", prediction_json(e.original)},
                       {"perturbed", prediction_json(e.perturbed)},
                       {"truth", prediction_json(e.truth)}});
  }
  const json results = {{"schema", kEvalSchema}, {"entries", entries}};
  write_text_file(out_dir / "eval_results.json", results.dump(2) + "\n");
  write_text_file(out_dir / "summary.json", report.summary().dump(2) + "\n");
}

SteeringModel reference_model(const ReferenceController::Params& params) {
  return [controller = ReferenceController(params)](const Frame& frame) {
    const ControlAction a = controller(frame);
    return Prediction{a.steering, a.throttle};
  };
}

}  // namespace roadshake

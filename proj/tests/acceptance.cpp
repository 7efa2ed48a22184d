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


// Runs the desk-scale acceptance criteria and prints one PASS/FAIL line per
// criterion. Exits non-zero when any criterion fails.
//
//   roadshake_acceptance [--report frame_budget.json] [--only N[,M...]]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "roadshake/attention.hpp"
#include "roadshake/bench.hpp"
#include "roadshake/dynamic_perturb.hpp"
#include "roadshake/errors.hpp"
#include "roadshake/sbt.hpp"
#include "roadshake/static_perturb.hpp"
#include "test_util.hpp"

namespace {

using namespace roadshake;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Shared {
  std::filesystem::path report_path;
  std::vector<Frame> corpus;
  std::optional<OrdinalTable> desk_table;
  EpisodeRunner runner = make_builtin_runner(EpisodeEnvironment{});
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---- 1 ---------------------------------------------------------------------

Verdict perturbation_coverage(Shared& s) {
  const auto t0 = Clock::now();
  const auto& reg = PerturbationRegistry::builtin();
  if (reg.entries().size() != 36) return {false, fmt("%zu registry entries", reg.entries().size())};
  std::size_t applied = 0;
  std::vector<std::string> broken;
  for (const auto& e : reg.entries()) {
    for (int level = 1; level <= kLevelCount; ++level) {
      for (std::size_t k = 0; k < s.corpus.size(); ++k) {
        const PerturbationSpec spec{e.name, level, 1000 + k};
        const Frame a = reg.apply(spec, s.corpus[k]);
        const Frame b = reg.apply(spec, s.corpus[k]);
        applied += 2;
        if (!a.same_shape(s.corpus[k]) || a != b) {
          broken.push_back(e.name + "@" + std::to_string(level));
          break;
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  std::string detail = fmt("36 entries, %zu applications on %zu frames in %.1fs", applied,
                           s.corpus.size(), secs);
  for (const auto& b : broken) detail += "; violates shape/determinism: " + b;
  return {broken.empty() && secs < 120.0 && s.corpus.size() == 20, detail};
}

// ---- 2 ---------------------------------------------------------------------

Verdict intensity_monotonicity(Shared& s) {
  std::vector<std::string> bad;
  for (const auto& e : PerturbationRegistry::builtin().entries()) {
    double prev = -std::numeric_limits<double>::infinity();
    for (int level = 1; level <= kLevelCount; ++level) {
      const double v = effect_strength({e.name, level, 0}, s.corpus);
      if (v + 1e-6 < prev) bad.push_back(fmt("%s L%d %.6f < %.6f", e.name.c_str(), level, v, prev));
      prev = std::max(prev, v);
    }
  }
  std::string detail = "effect strength non-decreasing for all 36 entries";
  if (!bad.empty()) {
    detail = std::to_string(bad.size()) + " decrease(s):";
    for (const auto& b : bad) detail += " " + b + ";";
  }
  return {bad.empty(), detail};
}

// ---- 3 ---------------------------------------------------------------------

Verdict dynamic_alpha_contract(Shared&) {
  const double expected[] = {0.20, 0.40, 0.60, 0.80, 1.00};
  for (int l = 1; l <= 5; ++l) {
    if (level_alpha(l) != expected[l - 1]) return {false, fmt("alpha(%d) = %.17g", l, level_alpha(l))};
  }
  constexpr int kClipFrames = 7;
  std::vector<Frame> frames;
  for (const auto& f : generate_overlay_frames(OverlayKind::Rain, 32, 16, kClipFrames, 3)) {
    frames.push_back(chroma_key(f));
  }
  CircularBuffer buffer(std::make_shared<const OverlayClip>(std::move(frames), "rain"));
  for (int i = 0; i < 100; ++i) {
    const std::size_t idx = buffer.peek_index();
    const Frame& served = buffer.next();
    if (idx != static_cast<std::size_t>(i % kClipFrames) || served != buffer.clip().frame(idx)) {
      return {false, fmt("frame %d served clip index %zu", i, idx)};
    }
  }
  return {true, "alpha table exact; 100 overlay frames follow i mod 7"};
}

// ---- 4 ---------------------------------------------------------------------

Verdict frame_budget(Shared& s) {
  constexpr double kBudgetMs = 33.0;
  constexpr int kReps = 9;
  const auto& reg = PerturbationRegistry::builtin();
  json statics = json::array();
  double worst = 0.0;
  std::string worst_name;
  for (const auto& [name, category] : reg.list(ListFilter::Default)) {
    json levels = json::array();
    double name_worst = 0.0;
    for (int level = 1; level <= kLevelCount; ++level) {
      std::vector<double> ms;
      for (int r = 0; r <= kReps; ++r) {
        const Frame& f = s.corpus[static_cast<std::size_t>(r) % s.corpus.size()];
        const auto t0 = Clock::now();
        const Frame out = reg.apply({name, level, static_cast<std::uint64_t>(r)}, f);
        const double elapsed = seconds_since(t0) * 1e3;
        if (r > 0) ms.push_back(elapsed);  // first call warms caches
        if (out.empty()) return {false, "empty output from " + name};
      }
      const double m = median(ms);
      levels.push_back(m);
      name_worst = std::max(name_worst, m);
    }
    statics.push_back({{"name", name}, {"category", std::string(1, category_letter(category))},
                       {"median_ms_by_level", levels}, {"median_ms_max", name_worst}});
    if (name_worst > worst) {
      worst = name_worst;
      worst_name = name;
    }
  }

  json particles = json::array();
  double particle_worst = 0.0;
  for (auto kind : {ParticleKind::Rain, ParticleKind::Snow}) {
    ParticleParams p = kind == ParticleKind::Rain ? ParticleParams::rain() : ParticleParams::snow();
    p.cap = 500;
    p.spawn_rate = {100, 100, 100, 100, 100};
    ParticleSystem sys(p, kDefaultFrameWidth, kDefaultFrameHeight, 5, 17);
    for (int i = 0; i < 120 && sys.particles().size() < 450; ++i) sys.advance();
    std::vector<double> ms;
    std::size_t peak = 0;
    for (int r = 0; r < 31; ++r) {
      const auto t0 = Clock::now();
      const Frame out = sys.step(s.corpus[static_cast<std::size_t>(r) % s.corpus.size()]);
      ms.push_back(seconds_since(t0) * 1e3);
      peak = std::max(peak, sys.particles().size());
    }
    const double m = median(ms);
    particle_worst = std::max(particle_worst, m);
    particles.push_back({{"kind", kind == ParticleKind::Rain ? "rain" : "snow"},
                         {"particles_max", peak},
                         {"median_ms", m}});
  }

  const json report = {{"schema", "roadshake.frame_budget/1"},
                       {"budget_ms", kBudgetMs},
                       {"frame", {{"width", kDefaultFrameWidth}, {"height", kDefaultFrameHeight}}},
                       {"repetitions", kReps},
                       {"static", statics},
                       {"particles", particles}};
  if (!s.report_path.empty()) write_text_file(s.report_path, report.dump(2) + "\n");
  const bool pass = worst <= kBudgetMs && particle_worst <= kBudgetMs;
  return {pass, fmt("slowest static %s %.2f ms, particle step %.2f ms (budget %.0f ms)%s",
                    worst_name.c_str(), worst, particle_worst, kBudgetMs,
                    s.report_path.empty() ? "" : ("; report " + s.report_path.string()).c_str())};
}

// ---- 5 ---------------------------------------------------------------------

Verdict attention_locality(Shared& s) {
  const auto& reg = PerturbationRegistry::builtin();
  const auto entries = reg.entries();
  SeededRng rng(5);
  const SelectionMode modes[] = {SelectionMode::TopPercent, SelectionMode::BottomPercent,
                                 SelectionMode::Random};
  int leaks = 0;
  int cardinality_errors = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Frame& frame = s.corpus[rng.below(s.corpus.size())];
    MaskSpec spec;
    spec.mode = modes[trial % 3];
    spec.value = rng.uniform(0.5, 100.0);
    spec.min_region_area = 0;
    const SaliencyMap sal = get_saliency(SaliencyProvider::gradient_proxy(), frame);
    const Mask mask = build_mask(sal, spec, rng);
    const auto expected =
        static_cast<std::size_t>(std::floor(spec.value * static_cast<double>(sal.size()) / 100.0 + 1e-9));
    if (mask.count_selected() != expected || !mask.is_hard()) ++cardinality_errors;
    const auto& e = entries[rng.below(entries.size())];
    const PerturbationSpec ps{e.name, 1 + static_cast<int>(rng.below(5)), rng.next_u64()};
    const Frame out = apply_masked(reg, ps, mask, frame);
    for (int y = 0; y < frame.height(); ++y) {
      for (int x = 0; x < frame.width(); ++x) {
        if (mask.at(x, y) > 0.0f) continue;
        for (int c = 0; c < 3; ++c) {
          if (out.at(x, y, c) != frame.at(x, y, c)) {
            ++leaks;
            y = frame.height();
            x = frame.width();
            break;
          }
        }
      }
    }
  }
  return {leaks == 0 && cardinality_errors == 0,
          fmt("1000 trials: %d with changes outside the mask, %d cardinality mismatches", leaks,
              cardinality_errors)};
}

// ---- 6 ---------------------------------------------------------------------

Verdict road_geometry(Shared&) {
  const auto roads = bundled_roads();
  std::string problems;
  for (const auto& r : roads) {
    double len = 0.0;
    const auto& pts = r.centerline();
    for (std::size_t i = 1; i < pts.size(); ++i) len += std::hypot(pts[i].x - pts[i - 1].x, pts[i].y - pts[i - 1].y);
    if (std::fabs(len - 200.0) > 0.01) problems += fmt(" %s length %.4f;", r.id().c_str(), len);
    if (!verify_drivable(r, ReferenceController{})) problems += " " + r.id() + " not drivable;";
  }
  const Vec2 end = make_road(RoadAngles{}).waypoints().back();
  if (!(end.x == 0.0 && end.y == 200.0)) problems += fmt(" straight endpoint (%.17g, %.17g);", end.x, end.y);
  if (roads.size() != 10) problems += fmt(" %zu roads;", roads.size());
  return {problems.empty(), problems.empty()
                                ? "10 roads of 200 m (within 1 cm), all drivable; straight road ends at (0, 200)"
                                : "problems:" + problems};
}

// ---- 7 ---------------------------------------------------------------------

Verdict closed_loop_determinism(Shared& s) {
  const auto roads = bundled_roads();
  EpisodeTask task{"rain_particles@3__road_04", roads[4], {}, {}};
  task.perturbation.spec = {"rain_particles", 3, episode_seed(7, "road_04", "rain_particles@3")};
  const std::string a = telemetry_to_jsonl(s.runner(task).result.telemetry);
  const std::string b = telemetry_to_jsonl(s.runner(task).result.telemetry);
  if (a != b) return {false, "two runs of one episode produced different telemetry"};

  testing::TempDir dir("accept_greedy");
  const std::vector<RoadScenario> greedy_roads{roads[0], roads[6]};
  const GreedyResult greedy = greedy_online(greedy_roads, {"fog", "snow_particles", "blackout"}, 7,
                                            EpisodeConfig{}, s.runner);
  const EpisodeEnvironment env;
  RunLogWriter log(dir.path());
  for (const auto& r : greedy.episodes) log.append_episode(r, env);
  int mismatches = 0;
  const auto ids = logged_episode_ids(dir.path());
  for (const auto& id : ids) {
    const ReplayResult r = replay(dir.path(), id);
    if (!r.telemetry_matches || !r.outcome_matches) ++mismatches;
  }
  return {mismatches == 0 && !ids.empty(),
          fmt("telemetry byte-identical (%zu bytes); %zu greedy episodes replayed, %d mismatches",
              a.size(), ids.size(), mismatches)};
}

// ---- 8 ---------------------------------------------------------------------

Verdict nsga_oracle(Shared&) {
  SeededRng rng(8);
  const Directions& d = kDefaultDirections;
  auto oracle_dominates = [&](const ObjectiveVector& a, const ObjectiveVector& b) {
    const auto va = a.values();
    const auto vb = b.values();
    bool better = false;
    for (std::size_t i = 0; i < 4; ++i) {
      const double sign = d[i] == Direction::Maximize ? 1.0 : -1.0;
      if (sign * va[i] < sign * vb[i]) return false;
      if (sign * va[i] > sign * vb[i]) better = true;
    }
    return better;
  };
  int mismatches = 0;
  int crowding_errors = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t n = 1 + rng.below(50);
    std::vector<ObjectiveVector> objs(n);
    for (auto& o : objs) {
      o = {static_cast<double>(rng.below(6)) * 0.25, static_cast<double>(rng.below(6)) * 5.0,
           static_cast<int>(rng.below(3)), static_cast<double>(rng.below(6)) * 0.5};
    }
    // Peeling: each front is the non-dominated subset of what remains.
    std::vector<int> rank(n, -1);
    for (int level = 0, assigned = 0; assigned < static_cast<int>(n); ++level) {
      std::vector<std::size_t> now;
      for (std::size_t i = 0; i < n; ++i) {
        if (rank[i] != -1) continue;
        bool dominated = false;
        for (std::size_t j = 0; j < n && !dominated; ++j) {
          dominated = rank[j] == -1 && j != i && oracle_dominates(objs[j], objs[i]);
        }
        if (!dominated) now.push_back(i);
      }
      for (std::size_t i : now) rank[i] = level;
      assigned += static_cast<int>(now.size());
    }
    const auto fronts = non_dominated_sort(objs, d);
    std::vector<int> got(n, -1);
    for (std::size_t f = 0; f < fronts.size(); ++f) {
      for (std::size_t i : fronts[f]) got[i] = static_cast<int>(f);
    }
    for (std::size_t i = 0; i < n; ++i) mismatches += got[i] != rank[i];
    for (const auto& front : fronts) {
      const auto dist = crowding_distance(objs, front);
      if (front.size() <= 2) {
        for (double v : dist) crowding_errors += !std::isinf(v);
      } else {
        crowding_errors += std::count_if(dist.begin(), dist.end(), [](double v) { return std::isinf(v); }) < 2;
      }
    }
  }
  return {mismatches == 0 && crowding_errors == 0,
          fmt("200 instances: %d rank mismatches, %d crowding boundary errors", mismatches,
              crowding_errors)};
}

// ---- 10 (run before 9, which consumes its table) --------------------------

Verdict ranking_study(Shared& s) {
  const auto t0 = Clock::now();
  auto roads = bundled_roads();
  roads.resize(3);
  const std::vector<std::string> names{"fog", "gaussian_noise", "false_color", "translation", "rotation", "motion_blur"};
  const RankStudy study = run_rank_study(roads, names, {1, 2, 3, 4, 5}, 1, EpisodeConfig{}, s.runner);
  const double secs = seconds_since(t0);

  // Round-trip through the on-disk form, as the search reads it.
  const OrdinalTable table = ordinal_table_from_json(json::parse(ordinal_table_to_json(study.table).dump()));
  std::set<std::string> seen;
  for (int k = 0; k < static_cast<int>(table.size()); ++k) {
    seen.insert(decode({2, 10, 3, k}, table, 1).perturbation.name);
  }
  const bool total_order = table.size() == names.size() && seen.size() == names.size() &&
                           std::set<std::string>(names.begin(), names.end()) == seen;
  s.desk_table = table;
  std::string order;
  for (const auto& r : table.rows) order += (order.empty() ? "" : " > ") + r.name;
  return {total_order && secs < 600.0 && study.grid.size() == 90,
          fmt("%zu grid + %zu baseline episodes in %.0fs; order %s", study.grid.size(),
              study.baselines.size(), secs, order.c_str())};
}

// ---- 9 ---------------------------------------------------------------------

Verdict sbt_effectiveness(Shared& s) {
  if (!s.desk_table) return {false, "ranking table unavailable (criterion 10 did not run)"};
  const auto t0 = Clock::now();
  SearchConfig config;
  config.population = 12;
  config.generations = 8;
  config.seed = 2026;
  const SearchResult sbt = run_search(config, *s.desk_table, s.runner);
  double sbt_best = 0.0;
  for (std::size_t i : sbt.pareto) sbt_best = std::max(sbt_best, sbt.archive[i].record.objectives.avg_abs_xte);
  const double search_secs = seconds_since(t0);

  const SearchResult random = random_search(config, *s.desk_table, s.runner, 108);
  double random_best = 0.0;
  for (const auto& e : random.archive) random_best = std::max(random_best, e.record.objectives.avg_abs_xte);
  const double total = seconds_since(t0);
  return {sbt.archive.size() == 108 && sbt_best >= random_best && search_secs < 600.0,
          fmt("front-0 best avg|xte| %.4f vs random best %.4f; %zu evaluations (%zu simulated) in "
              "%.0fs, random baseline %.0fs",
              sbt_best, random_best, sbt.archive.size(), sbt.episodes_run, search_secs,
              total - search_secs)};
}

// ---- 11 --------------------------------------------------------------------

Verdict offline_format(Shared&) {
  const auto fixture = testing::kDataDir / "datasets" / "fixture";
  const std::vector<PerturbationSpec> specs{{"fog", 3, 1}, {"gaussian_noise", 2, 1}, {"motion_blur", 4, 1},
                                            {"pixelation", 5, 99}};
  const EvalReport report = eval_offline(fixture, reference_model(), specs);
  if (report.skipped != 0 || report.entries.size() != report.images * specs.size() || report.images == 0) {
    return {false, fmt("%zu entries for %zu images x %zu specs (%zu skipped)", report.entries.size(),
                       report.images, specs.size(), report.skipped)};
  }
  testing::TempDir dir("accept_ds");
  std::filesystem::copy(fixture, dir.path(), std::filesystem::copy_options::recursive);
  const auto records = scan_dataset(dir.path());
  const long long victim = records[records.size() / 2].frame;
  write_text_file(dir / ("record_" + std::to_string(victim) + ".json"), R"({"user/throttle": 0.4})");
  try {
    scan_dataset(dir.path());
    return {false, "malformed record accepted"};
  } catch (const DatasetFormatError& e) {
    if (e.frame() != victim) return {false, fmt("error named frame %lld, expected %lld", e.frame(), victim)};
  }
  return {true, fmt("%zu entries = %zu images x %zu specs; malformed record %lld reported", report.entries.size(),
                    report.images, specs.size(), victim)};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Verdict(Shared&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  Shared shared;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--report") == 0 && i + 1 < argc) {
      shared.report_path = argv[++i];
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      std::stringstream list(argv[++i]);
      for (std::string item; std::getline(list, item, ',');) only.insert(std::stoi(item));
    } else {
      std::cerr << "usage: roadshake_acceptance [--report FILE] [--only N[,M...]]\n";
      return 2;
    }
  }
  shared.corpus = bundled_corpus();

  // 10 precedes 9 because the search consumes the ranking table.
  const std::vector<Criterion> criteria{
      {1, "perturbation coverage", perturbation_coverage},
      {2, "intensity monotonicity", intensity_monotonicity},
      {3, "dynamic alpha contract", dynamic_alpha_contract},
      {4, "frame budget", frame_budget},
      {5, "attention locality", attention_locality},
      {6, "road geometry", road_geometry},
      {7, "closed-loop determinism", closed_loop_determinism},
      {8, "NSGA-II oracle equivalence", nsga_oracle},
      {10, "desk-scale ranking study", ranking_study},
      {9, "desk-scale SBT effectiveness", sbt_effectiveness},
      {11, "offline format fidelity", offline_format},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id) && !(c.id == 10 && only.count(9))) continue;
    Verdict v;
    const auto t0 = Clock::now();
    try {
      v = c.run(shared);
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += v.pass ? 0 : 1;
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title << " ("
              << fmt("%.1fs", seconds_since(t0)) << "): " << v.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion(s) failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}

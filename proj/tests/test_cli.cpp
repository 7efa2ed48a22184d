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


#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "roadshake/cli.hpp"
#include "roadshake/errors.hpp"
#include "roadshake/image_io.hpp"
#include "test_util.hpp"

namespace roadshake::cli {
namespace {

using nlohmann::json;
using roadshake::testing::kDataDir;
using roadshake::testing::TempDir;

struct Captured {
  std::ostringstream out;
  std::ostringstream err;
  Streams io{out, err};
};

json greedy_doc() {
  return json::parse(R"({"schema": "roadshake.config/1", "mode": "greedy", "seed": 3,
                         "roads": ["road_00"], "perturbations": ["blackout"],
                         "episode": {"duration": 3.0}})");
}

TEST(RunConfig, MissingSeedNamesTheField) {
  json doc = greedy_doc();
  doc.erase("seed");
  try {
    parse_run_config(doc, kDataDir);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "seed");
  }
}

TEST(RunConfig, RejectsBadDocuments) {
  json doc = greedy_doc();
  doc["schema"] = "roadshake.config/0";
  EXPECT_THROW(parse_run_config(doc, kDataDir), ConfigError);
  doc = greedy_doc();
  doc["mode"] = "fly";
  EXPECT_THROW(parse_run_config(doc, kDataDir), ConfigError);
  doc = greedy_doc();
  doc["perturbations"] = {"fgo"};
  EXPECT_THROW(parse_run_config(doc, kDataDir), UnknownPerturbation);
  doc = greedy_doc();
  doc["roads"] = {"road_99"};
  EXPECT_THROW(parse_run_config(doc, kDataDir), Error);
}

TEST(RunConfig, AcceptsRoadForms) {
  json doc = greedy_doc();
  doc["roads"] = json::array({"road_02", "roads/road_05.json",
                              {{"id", "inline"}, {"angles", {0, 5, -5, 0, 0, 10, 0, 0}}}});
  const RunConfig c = parse_run_config(doc, kDataDir);
  ASSERT_EQ(c.roads.size(), 3u);
  EXPECT_EQ(c.roads[0].id(), "road_02");
  EXPECT_EQ(c.roads[1].id(), "road_05");
  EXPECT_EQ(c.roads[2].id(), "inline");
  EXPECT_EQ(c.mode, RunMode::Greedy);
  EXPECT_EQ(c.seed, 3u);
  EXPECT_DOUBLE_EQ(c.episode.duration, 3.0);
}

TEST(RunConfig, BundledConfigsParse) {
  for (const auto& entry : std::filesystem::directory_iterator(kDataDir / "configs")) {
    EXPECT_NO_THROW(load_run_config(entry.path())) << entry.path();
  }
  const RunConfig sbt = load_run_config(kDataDir / "configs" / "sbt_desk.json");
  EXPECT_EQ(sbt.mode, RunMode::Sbt);
  EXPECT_EQ(sbt.ordinal_table.size(), 6u);
  EXPECT_EQ(sbt.search.seed, 2026u);
  const RunConfig masked = load_run_config(kDataDir / "configs" / "greedy_masked.json");
  ASSERT_TRUE(masked.style.mask);
  EXPECT_EQ(masked.style.mask->mode, SelectionMode::TopPercent);
  EXPECT_THROW(load_run_config(kDataDir / "configs" / "missing.json"), IoError);
}

TEST(Guarded, MapsErrorsToExitCodes) {
  Captured c;
  EXPECT_EQ(guarded(c.io, [] { return kExitOk; }), kExitOk);
  EXPECT_EQ(guarded(c.io, []() -> int { throw UnknownPerturbation("fgo"); }), kExitUsage);
  EXPECT_NE(c.err.str().find("fog"), std::string::npos) << "suggestions expected";
  EXPECT_EQ(guarded(c.io, []() -> int { throw ConfigError("seed", "required"); }), kExitUsage);
  EXPECT_EQ(guarded(c.io, []() -> int { throw BadIntensity("7"); }), kExitUsage);
  EXPECT_EQ(guarded(c.io, []() -> int { throw IoError("gone"); }), kExitIo);
  EXPECT_EQ(guarded(c.io, []() -> int { throw DatasetFormatError(3, "bad"); }), kExitIo);
  EXPECT_EQ(guarded(c.io, []() -> int { throw ReplayError("schema"); }), kExitIo);
  EXPECT_EQ(guarded(c.io, []() -> int { throw std::runtime_error("boom"); }), kExitRuntime);
}

TEST(PerturbImage, DeterministicOutputAndErrorCodes) {
  TempDir dir("img");
  save_frame(dir / "in.png", bundled_corpus()[4]);
  Captured c;
  ASSERT_EQ(cmd_perturb_image(c.io, dir / "in.png", {"splatter", 3, 5}, dir / "a.png", dir / "strip.png"),
            kExitOk);
  ASSERT_EQ(cmd_perturb_image(c.io, dir / "in.png", {"splatter", 3, 5}, dir / "b.png"), kExitOk);
  EXPECT_EQ(read_text_file(dir / "a.png"), read_text_file(dir / "b.png"));
  EXPECT_TRUE(std::filesystem::exists(dir / "strip.png"));
  EXPECT_EQ(load_frame(dir / "a.png"), apply_static({"splatter", 3, 5}, bundled_corpus()[4]));

  MaskSpec mask;
  mask.value = 20;
  EXPECT_EQ(cmd_perturb_image(c.io, dir / "in.png", {"fog", 4, 1}, dir / "m.png", {}, mask), kExitOk);

  auto run = [&](const std::string& in, const PerturbationSpec& spec) {
    return guarded(c.io, [&] { return cmd_perturb_image(c.io, dir / in, spec, dir / "x.png"); });
  };
  EXPECT_EQ(run("none.png", {"fog", 1, 0}), kExitIo);
  EXPECT_EQ(run("in.png", {"fog", 9, 0}), kExitUsage);
  EXPECT_EQ(run("in.png", {"fgo", 1, 0}), kExitUsage);
}

TEST(Catalog, OneStripPerNameAndLevel) {
  TempDir dir("cat");
  Captured c;
  ASSERT_EQ(cmd_catalog(c.io, dir.path()), kExitOk);
  std::size_t pngs = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir.path())) pngs += e.path().extension() == ".png";
  EXPECT_EQ(pngs, 180u);
  EXPECT_TRUE(std::filesystem::exists(dir / "fog_L3.png"));
  EXPECT_TRUE(std::filesystem::exists(dir / "index.json"));
}

TEST(Commands, ParamsAndRoadsMatchShippedData) {
  TempDir dir("data");
  Captured c;
  ASSERT_EQ(cmd_params(c.io, dir / "params.json"), kExitOk);
  EXPECT_EQ(json::parse(read_text_file(dir / "params.json")),
            json::parse(read_text_file(kDataDir / "perturbation_params.json")));
  ASSERT_EQ(cmd_roads(c.io, dir / "roads"), kExitOk);
  for (int i = 0; i < 10; ++i) {
    const std::string f = "road_0" + std::to_string(i) + ".json";
    EXPECT_EQ(json::parse(read_text_file(dir / "roads" / f)), json::parse(read_text_file(kDataDir / "roads" / f)))
        << f;
  }
}

TEST(Commands, ListShowsDefaultRegistryAndOnlineNames) {
  Captured c;
  ASSERT_EQ(cmd_list(c.io, ListFilter::Default), kExitOk);
  const std::string s = c.out.str();
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 35 + 1 + 6);
  EXPECT_EQ(s.find("reflection"), std::string::npos);
  Captured ext;
  cmd_list(ext.io, ListFilter::Extended);
  EXPECT_EQ(ext.out.str(), "E reflection\n");
}

TEST(Commands, GreedyRunFindsBlackoutFailureAndReplays) {
  TempDir dir("run");
  RunConfig config = parse_run_config(greedy_doc(), kDataDir);
  config.output = dir / "greedy";
  Captured c;
  ASSERT_EQ(cmd_run(c.io, config), kExitFailuresFound) << c.err.str();
  const json greedy = json::parse(read_text_file(dir / "greedy" / "greedy.json"));
  EXPECT_NE(greedy.dump().find("fails@1"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir / "greedy" / "config.json"));

  Captured r;
  EXPECT_EQ(cmd_replay(r.io, dir / "greedy", "all", std::nullopt), kExitOk) << r.err.str();
  EXPECT_NE(r.out.str().find("blackout@1__road_00 timeout match"), std::string::npos) << r.out.str();
  Captured missing;
  EXPECT_EQ(guarded(missing.io, [&] { return cmd_replay(missing.io, dir / "nowhere", "all", std::nullopt); }),
            kExitIo);
}

TEST(Commands, DatasetRunWritesEvaluation) {
  TempDir dir("run");
  const auto file = kDataDir / "configs" / "dataset_fixture.json";
  Captured c;
  ASSERT_EQ(cmd_run(c.io, file, {std::nullopt, std::nullopt, dir / "ds"}), kExitOk) << c.err.str();
  const json results = json::parse(read_text_file(dir / "ds" / "eval_results.json"));
  EXPECT_EQ(results.at("entries").size(), 32u);
  EXPECT_TRUE(std::filesystem::exists(dir / "ds" / "summary.json"));
}

TEST(Commands, OutputRootFollowsEnvironment) {
  ::setenv(std::string(kOutputEnvVar).c_str(), "/tmp/roadshake_out_test", 1);
  EXPECT_EQ(default_output_root(), std::filesystem::path("/tmp/roadshake_out_test"));
  ::unsetenv(std::string(kOutputEnvVar).c_str());
  EXPECT_EQ(default_output_root(), std::filesystem::path("runs"));
}

}  // namespace
}  // namespace roadshake::cli

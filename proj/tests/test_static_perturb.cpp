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

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "roadshake/errors.hpp"
#include "roadshake/sim.hpp"
#include "roadshake/static_perturb.hpp"
#include "test_util.hpp"

namespace roadshake {
namespace {

using testing::noise_frame;
using testing::solid;

const std::vector<Frame>& corpus() {
  static const std::vector<Frame> c = bundled_corpus();
  return c;
}

TEST(Registry, ThirtySixEntriesOrderedByCategoryThenName) {
  const auto entries = PerturbationRegistry::builtin().entries();
  ASSERT_EQ(entries.size(), 36u);
  std::set<std::string> names;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    names.insert(entries[i].name);
    if (i == 0) continue;
    const auto& a = entries[i - 1];
    const auto& b = entries[i];
    ASSERT_TRUE(a.category < b.category || (a.category == b.category && a.name < b.name))
        << a.name << " before " << b.name;
  }
  EXPECT_EQ(names.size(), 36u);
  EXPECT_EQ(category_letter(entries.front().category), 'A');
  EXPECT_EQ(category_letter(entries.back().category), 'G');
}

TEST(Registry, ListFilters) {
  const auto& r = PerturbationRegistry::builtin();
  const auto all = r.list(ListFilter::All);
  const auto def = r.list(ListFilter::Default);
  const auto ext = r.list(ListFilter::Extended);
  EXPECT_EQ(all.size(), 36u);
  EXPECT_EQ(def.size() + ext.size(), all.size());
  ASSERT_EQ(ext.size(), 1u);
  EXPECT_EQ(ext.front().first, "reflection");
}

TEST(Registry, EveryEntryPreservesShapeAndIsDeterministic) {
  const auto& r = PerturbationRegistry::builtin();
  for (const auto& e : r.entries()) {
    for (int level = 1; level <= kLevelCount; ++level) {
      const PerturbationSpec spec{e.name, level, 42};
      for (std::size_t k : {0u, 7u}) {
        const Frame out = r.apply(spec, corpus()[k]);
        ASSERT_TRUE(out.same_shape(corpus()[k])) << e.name << "@" << level;
        ASSERT_EQ(out, r.apply(spec, corpus()[k])) << e.name << "@" << level;
      }
    }
  }
}

TEST(Registry, AlphaChannelPassesThrough) {
  const auto& r = PerturbationRegistry::builtin();
  Frame rgba = to_rgba(corpus()[3]);
  for (std::size_t p = 0; p < rgba.pixel_count(); ++p) {
    rgba.data()[p * 4 + 3] = static_cast<std::uint8_t>(p % 251);
  }
  for (const auto& e : r.entries()) {
    const Frame out = r.apply({e.name, 4, 1}, rgba);
    ASSERT_EQ(out.channels(), 4) << e.name;
    for (std::size_t p = 0; p < rgba.pixel_count(); ++p) {
      ASSERT_EQ(out.data()[p * 4 + 3], rgba.data()[p * 4 + 3]) << e.name;
    }
    EXPECT_EQ(to_rgb(out), r.apply({e.name, 4, 1}, to_rgb(rgba))) << e.name;
  }
}

TEST(Registry, SeedChangesStochasticOutput) {
  const Frame& f = corpus()[0];
  EXPECT_NE(apply_static({"gaussian_noise", 3, 1}, f), apply_static({"gaussian_noise", 3, 2}, f));
  EXPECT_EQ(apply_static({"gaussian_blur", 3, 1}, f), apply_static({"gaussian_blur", 3, 2}, f));
}

TEST(Registry, Errors) {
  const Frame f = solid(8, 8, 1, 2, 3);
  EXPECT_THROW(apply_static({"no_such_thing", 1, 0}, f), UnknownPerturbation);
  EXPECT_THROW(apply_static({"fog", 0, 0}, f), BadIntensity);
  EXPECT_THROW(apply_static({"fog", 6, 0}, f), BadIntensity);
  EXPECT_THROW(apply_static({"fog", 1, 0}, Frame{}), DimensionError);
  try {
    apply_static({"fgo", 1, 0}, f);
    FAIL();
  } catch (const UnknownPerturbation& e) {
    EXPECT_EQ(e.name(), "fgo");
  }
}

TEST(Registry, NearestNames) {
  const auto near = PerturbationRegistry::builtin().nearest_names("fgo", 3);
  ASSERT_EQ(near.size(), 3u);
  EXPECT_EQ(near.front(), "fog");
  EXPECT_EQ(PerturbationRegistry::builtin().nearest_names("gausian_blur", 1).front(),
            "gaussian_blur");
}

TEST(StaticOps, GreyscaleOnGreyIsIdentity) {
  const Frame grey = solid(32, 16, 90, 90, 90);
  for (int level = 1; level <= kLevelCount; ++level) {
    EXPECT_EQ(apply_static({"greyscale", level, 0}, grey), grey);
  }
}

TEST(StaticOps, TranslateOracle) {
  const Frame f = noise_frame(9, 7, 3);
  const Frame t = translate(f, 2, -1);
  for (int y = 0; y < 7; ++y) {
    for (int x = 0; x < 9; ++x) {
      const int sx = std::clamp(x - 2, 0, 8);
      const int sy = std::clamp(y + 1, 0, 6);
      for (int c = 0; c < 3; ++c) ASSERT_EQ(t.at(x, y, c), f.at(sx, sy, c));
    }
  }
  EXPECT_EQ(rotate(f, 0.0), f);
}

TEST(StaticOps, PixelationAveragesBlocks) {
  Frame f(2, 2, 3);
  const std::uint8_t v[4] = {10, 20, 30, 41};
  for (int i = 0; i < 4; ++i) {
    for (int c = 0; c < 3; ++c) f.at(i % 2, i / 2, c) = v[i];
  }
  // Level 1 uses 2x2 blocks; (10+20+30+41)/4 = 25.25 rounds to 25.
  const Frame out = apply_static({"pixelation", 1, 0}, f);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(out.at(i % 2, i / 2, 0), 25);
}

TEST(StaticOps, PosterizeKeepsHighBits) {
  const Frame f = noise_frame(16, 16, 4);
  const Frame out = apply_static({"posterize", 5, 0}, f);
  for (std::size_t i = 0; i < f.data().size(); ++i) {
    ASSERT_EQ(out.data()[i], f.data()[i] & 0xC0);
  }
}

TEST(StaticOps, FullCutoutOverrideBlanksFrame) {
  const auto r = PerturbationRegistry::builtin().with_overrides(
      nlohmann::json::parse(R"({"cutout": [{"size": 1.0}, {}, {}, {}, {}]})"));
  const Frame out = r.apply({"cutout", 1, 0}, corpus()[0]);
  EXPECT_EQ(out, Frame(out.width(), out.height(), 3, 0));
}

TEST(Overrides, ReplaceParametersAndValidate) {
  const auto& base = PerturbationRegistry::builtin();
  const auto r = base.with_overrides(
      nlohmann::json::parse(R"({"fog": [{"blend": 0}, {}, {}, {}, {"blend": 0}]})"));
  EXPECT_EQ(r.apply({"fog", 1, 0}, corpus()[0]), corpus()[0]);
  EXPECT_EQ(r.apply({"fog", 3, 0}, corpus()[0]), base.apply({"fog", 3, 0}, corpus()[0]));
  EXPECT_THROW(base.with_overrides(nlohmann::json::parse(R"({"nope": []})")), UnknownPerturbation);
  EXPECT_THROW(base.with_overrides(nlohmann::json::parse(R"({"fog": [{}]})")), BadIntensity);
}

TEST(ParamTable, ShippedFileMatchesBuiltInTable) {
  std::ifstream in(testing::kDataDir / "perturbation_params.json");
  ASSERT_TRUE(in.good());
  const auto shipped = nlohmann::json::parse(in);
  const auto table = PerturbationRegistry::builtin().param_table_json();
  EXPECT_EQ(shipped, table);
  EXPECT_EQ(table.at("schema"), kParamTableSchema);
  EXPECT_EQ(table.at("entries").size(), 36u);
}

TEST(EffectStrength, MonotoneOnSampleEntriesAndZeroForIdentity) {
  const std::span<const Frame> few(corpus().data(), 4);
  for (const char* name : {"fog", "gaussian_blur", "rotation", "scramble"}) {
    double prev = -1.0;
    for (int level = 1; level <= kLevelCount; ++level) {
      const double s = effect_strength({name, level, 0}, few);
      EXPECT_GE(s + 1e-6, prev) << name << "@" << level;
      prev = s;
    }
  }
  EXPECT_THROW(effect_strength({"fog", 1, 0}, std::span<const Frame>{}), EmptyCorpus);
}

}  // namespace
}  // namespace roadshake

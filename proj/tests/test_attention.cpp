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

#include <cmath>

#include <nlohmann/json.hpp>

#include "roadshake/attention.hpp"
#include "roadshake/errors.hpp"
#include "roadshake/image_io.hpp"
#include "test_util.hpp"

namespace roadshake {
namespace {

using testing::noise_frame;

SaliencyMap random_map(int w, int h, std::uint64_t seed) {
  SaliencyMap m(w, h);
  SeededRng rng(seed);
  for (float& v : m.values()) v = static_cast<float>(rng.uniform());
  return m;
}

MaskSpec spec_of(SelectionMode mode, double value) {
  MaskSpec s;
  s.mode = mode;
  s.value = value;
  s.min_region_area = 0;
  return s;
}

TEST(SelectPixels, PercentageCardinality) {
  const SaliencyMap map = random_map(37, 23, 4);
  SeededRng rng(1);
  for (auto mode : {SelectionMode::TopPercent, SelectionMode::BottomPercent, SelectionMode::Random}) {
    for (double n : {0.5, 1.0, 12.5, 33.3, 50.0, 100.0}) {
      const Mask m = select_pixels(map, spec_of(mode, n), rng);
      ASSERT_EQ(m.count_selected(), static_cast<std::size_t>(std::floor(n * 37 * 23 / 100.0 + 1e-9)))
          << n;
      ASSERT_TRUE(m.is_hard());
    }
  }
}

TEST(SelectPixels, TopAndBottomPickExtremes) {
  const SaliencyMap map = random_map(20, 10, 9);
  SeededRng rng(1);
  const Mask top = select_pixels(map, spec_of(SelectionMode::TopPercent, 20), rng);
  const Mask bottom = select_pixels(map, spec_of(SelectionMode::BottomPercent, 20), rng);
  float min_top = 1.0f, max_rest = 0.0f, max_bottom = 0.0f, min_rest = 1.0f;
  for (std::size_t i = 0; i < map.size(); ++i) {
    const float v = map.values()[i];
    if (top.values()[i] > 0) min_top = std::min(min_top, v);
    else max_rest = std::max(max_rest, v);
    if (bottom.values()[i] > 0) max_bottom = std::max(max_bottom, v);
    else min_rest = std::min(min_rest, v);
  }
  EXPECT_GE(min_top, max_rest);
  EXPECT_LE(max_bottom, min_rest);
}

TEST(SelectPixels, TiesGoToLowerIndex) {
  const SaliencyMap flat(10, 1, 0.5f);
  SeededRng rng(1);
  const Mask m = select_pixels(flat, spec_of(SelectionMode::TopPercent, 30), rng);
  for (int x = 0; x < 10; ++x) EXPECT_EQ(m.at(x, 0), x < 3 ? 1.0f : 0.0f);
}

TEST(SelectPixels, ThresholdIsStrict) {
  SaliencyMap m(3, 1);
  m.at(0, 0) = 0.2f;
  m.at(1, 0) = 0.5f;
  m.at(2, 0) = 0.9f;
  SeededRng rng(1);
  const Mask out = select_pixels(m, spec_of(SelectionMode::Threshold, 0.5), rng);
  EXPECT_EQ(out.at(0, 0), 0.0f);
  EXPECT_EQ(out.at(1, 0), 0.0f);
  EXPECT_EQ(out.at(2, 0), 1.0f);
}

TEST(SelectPixels, RandomModeDependsOnSeedOnly) {
  const SaliencyMap map = random_map(16, 16, 2);
  SeededRng a(5), b(5), c(6);
  const auto spec = spec_of(SelectionMode::Random, 25);
  const Mask ma = select_pixels(map, spec, a);
  EXPECT_EQ(ma, select_pixels(map, spec, b));
  EXPECT_NE(ma, select_pixels(map, spec, c));
}

TEST(MaskSpec, ValidationAndJson) {
  EXPECT_THROW(spec_of(SelectionMode::TopPercent, 0).validate(), EmptyMaskError);
  EXPECT_THROW(spec_of(SelectionMode::TopPercent, 101).validate(), ConfigError);
  EXPECT_THROW(spec_of(SelectionMode::Threshold, 1.5).validate(), ConfigError);
  try {
    mask_spec_from_json(nlohmann::json::parse(R"({"mode": "top"})"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "mask.value");
  }
  EXPECT_THROW(mask_spec_from_json(nlohmann::json::parse(R"({"mode": "top", "value": 5})")),
               ConfigError);
  MaskSpec s = spec_of(SelectionMode::BottomPercent, 12);
  s.closing_radius = 2;
  s.soft_edge_radius = 1.5;
  s.road_focus = true;
  const MaskSpec back = mask_spec_from_json(mask_spec_to_json(s));
  EXPECT_EQ(mask_spec_to_json(back), mask_spec_to_json(s));
}

TEST(Cleanup, SmallRegionsDropAndLargeStay) {
  Mask m(10, 10);
  m.at(0, 0) = 1;  // isolated
  for (int x = 4; x < 8; ++x) m.at(x, 5) = 1;  // 4 pixels
  const Mask out = remove_small_regions(m, 3);
  EXPECT_EQ(out.at(0, 0), 0.0f);
  EXPECT_EQ(out.count_selected(), 4u);
  EXPECT_EQ(remove_small_regions(m, 5).count_selected(), 0u);
}

TEST(Cleanup, ClosingContainsInputAndFillsGaps) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SeededRng rng(seed);
    const Mask m = select_pixels(random_map(24, 16, seed), spec_of(SelectionMode::Random, 30), rng);
    for (int r : {1, 2, 3}) {
      const Mask c = close_mask(m, r);
      for (std::size_t i = 0; i < m.size(); ++i) {
        ASSERT_TRUE(m.values()[i] == 0.0f || c.values()[i] == 1.0f) << seed << " r=" << r;
      }
    }
  }
  Mask gap(9, 5);
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 9; ++x) gap.at(x, y) = 1.0f;
  }
  gap.at(4, 2) = 0.0f;
  EXPECT_EQ(close_mask(gap, 1).at(4, 2), 1.0f);
}

TEST(Cleanup, FeatherStaysInsideAndRampsToOne) {
  Mask m(21, 21);
  for (int y = 5; y < 16; ++y) {
    for (int x = 5; x < 16; ++x) m.at(x, y) = 1;
  }
  const Mask f = feather_mask(m, 3.0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.values()[i] == 0.0f) {
      ASSERT_EQ(f.values()[i], 0.0f);
    }
    ASSERT_GE(f.values()[i], 0.0f);
    ASSERT_LE(f.values()[i], 1.0f);
  }
  EXPECT_FLOAT_EQ(f.at(5, 10), 1.0f / 3.0f);
  EXPECT_FLOAT_EQ(f.at(6, 10), 2.0f / 3.0f);
  EXPECT_FLOAT_EQ(f.at(10, 10), 1.0f);
  EXPECT_FALSE(f.is_hard());
}

TEST(Polygon, DefaultRoadTrapezoid) {
  const Mask road = polygon_mask(40, 20, MaskSpec::default_road_polygon());
  EXPECT_EQ(road.at(20, 19), 1.0f);
  EXPECT_EQ(road.at(20, 5), 0.0f);
  EXPECT_EQ(road.at(1, 10), 0.0f);
  const Mask full = polygon_mask(8, 8, {{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  EXPECT_EQ(full.count_selected(), 64u);
}

TEST(BuildMask, RoadFocusRestrictsSelection) {
  MaskSpec s = spec_of(SelectionMode::TopPercent, 60);
  s.road_focus = true;
  SeededRng rng(1);
  const Mask m = build_mask(random_map(40, 20, 3), s, rng);
  const Mask road = polygon_mask(40, 20, s.road_polygon);
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (road.values()[i] == 0.0f) {
      ASSERT_EQ(m.values()[i], 0.0f);
    }
  }
  EXPECT_GT(m.count_selected(), 0u);
}

// Left half black, right half white: gradient saliency peaks on the two
// columns either side of the edge, so the top quarter is exactly those.
TEST(Saliency, EdgeFixtureSelectsEdgeColumns) {
  Frame f(8, 8, 3, 0);
  for (int y = 0; y < 8; ++y) {
    for (int x = 4; x < 8; ++x) {
      for (int c = 0; c < 3; ++c) f.at(x, y, c) = 255;
    }
  }
  const SaliencyMap sal = get_saliency(SaliencyProvider::gradient_proxy(), f);
  EXPECT_FLOAT_EQ(sal.max_value(), 1.0f);
  EXPECT_FLOAT_EQ(sal.min_value(), 0.0f);
  MaskSpec s = spec_of(SelectionMode::TopPercent, 25);
  s.min_region_area = 16;
  SeededRng rng(1);
  const Mask m = build_mask(sal, s, rng);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) EXPECT_EQ(m.at(x, y), (x == 3 || x == 4) ? 1.0f : 0.0f) << x << "," << y;
  }
}

TEST(Saliency, ConstantFrameIsAllZeroAndCenterPriorPeaksInMiddle) {
  const Frame grey = testing::solid(16, 8, 80, 80, 80);
  const SaliencyMap flat = get_saliency(SaliencyProvider::gradient_proxy(), grey);
  EXPECT_EQ(flat.max_value(), 0.0f);
  const SaliencyMap c = get_saliency(SaliencyProvider::center_prior(), grey);
  EXPECT_FLOAT_EQ(c.max_value(), c.at(8, 4));
  EXPECT_EQ(c.min_value(), 0.0f);
  EXPECT_THROW(get_saliency(SaliencyProvider::gradient_proxy(), Frame{}), DimensionError);
}

TEST(Saliency, FileProviderResizesAndReportsMissingFile) {
  testing::TempDir dir("sal");
  ScalarMap m(4, 2);
  m.at(3, 1) = 1.0f;
  save_scalar_map_png(dir / "s.png", m);
  const SaliencyMap s = get_saliency(SaliencyProvider::file(dir / "s.png"), noise_frame(8, 4, 1));
  EXPECT_EQ(s.width(), 8);
  EXPECT_EQ(s.height(), 4);
  EXPECT_FLOAT_EQ(s.max_value(), 1.0f);
  EXPECT_THROW(get_saliency(SaliencyProvider::file(dir / "none.png"), noise_frame(8, 4, 1)),
               SaliencyLoadError);
}

TEST(ApplyMasked, UnselectedPixelsAreUntouched) {
  const Frame f = noise_frame(32, 16, 8);
  Mask m(32, 16);
  for (int x = 0; x < 16; ++x) {
    for (int y = 0; y < 16; ++y) m.at(x, y) = 1;
  }
  const PerturbationSpec spec{"gaussian_noise", 5, 3};
  const Frame out = apply_masked(spec, m, f);
  const Frame full = apply_static(spec, f);
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 32; ++x) {
      for (int c = 0; c < 3; ++c) {
        ASSERT_EQ(out.at(x, y, c), x < 16 ? full.at(x, y, c) : f.at(x, y, c));
      }
    }
  }
  EXPECT_THROW(apply_masked(spec, Mask(4, 4), f), DimensionError);
}

TEST(Scheduler, RecomputesOnHorizonBoundaries) {
  MaskScheduler sched(SaliencyProvider::gradient_proxy(), spec_of(SelectionMode::Random, 10), 4, 9);
  const Frame f = noise_frame(16, 8, 1);
  Mask last;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const Mask& m = sched.mask_for(f, i);
    if (i % 4 != 0) {
      EXPECT_EQ(m, last);
    }
    last = m;
  }
  EXPECT_EQ(sched.recomputations(), (std::vector<std::uint64_t>{0, 4, 8}));
  sched.mask_for(noise_frame(8, 8, 1), 9);
  EXPECT_EQ(sched.recomputations().back(), 9u);
  EXPECT_THROW(MaskScheduler(SaliencyProvider::gradient_proxy(), spec_of(SelectionMode::Random, 10),
                             0, 1),
               ConfigError);
}

}  // namespace
}  // namespace roadshake

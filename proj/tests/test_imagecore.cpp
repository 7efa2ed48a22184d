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

#include <numeric>
#include <random>
#include <set>

#include "roadshake/errors.hpp"
#include "roadshake/filters.hpp"
#include "roadshake/image.hpp"
#include "roadshake/image_io.hpp"
#include "roadshake/rng.hpp"
#include "test_util.hpp"

namespace roadshake {
namespace {

using testing::noise_frame;
using testing::solid;
using testing::TempDir;

TEST(SeededRng, RawStreamIsTheStandardEngine) {
  std::mt19937_64 reference(5489u);
  SeededRng rng(5489u);
  for (int i = 0; i < 9999; ++i) ASSERT_EQ(rng.next_u64(), reference());
  // The 10000th output is fixed by the C++ standard.
  EXPECT_EQ(rng.next_u64(), 9981545732273789042ULL);
}

TEST(SeededRng, UniformInUnitInterval) {
  SeededRng rng(1);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.01);
}

TEST(SeededRng, BelowCoversRangeWithoutBias) {
  SeededRng rng(2);
  std::array<int, 7> counts{};
  for (int i = 0; i < 70000; ++i) ++counts[rng.below(7)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
  for (int i = 0; i < 1000; ++i) {
    const int v = rng.uniform_int(-3, 3);
    ASSERT_GE(v, -3);
    ASSERT_LE(v, 3);
  }
}

TEST(SeededRng, NormalMoments) {
  SeededRng rng(3);
  double sum = 0.0;
  double sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double v = rng.normal();
    sum += v;
    sq += v * v;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.02);
}

TEST(SeededRng, PoissonMeanSmallAndLarge) {
  SeededRng rng(4);
  for (double lambda : {0.5, 3.0, 25.0, 120.0}) {
    double sum = 0.0;
    const int n = 40000;
    for (int i = 0; i < n; ++i) sum += static_cast<double>(rng.poisson(lambda));
    EXPECT_NEAR(sum / n, lambda, 0.03 * lambda + 0.02) << lambda;
  }
  EXPECT_EQ(rng.poisson(0.0), 0u);
}

TEST(SeededRng, ShuffleIsAPermutationAndSeeded) {
  std::vector<int> a(50);
  std::iota(a.begin(), a.end(), 0);
  std::vector<int> b = a;
  SeededRng r1(9);
  SeededRng r2(9);
  r1.shuffle(a.begin(), a.end());
  r2.shuffle(b.begin(), b.end());
  EXPECT_EQ(a, b);
  EXPECT_EQ(std::set<int>(a.begin(), a.end()).size(), 50u);
}

TEST(SeededRng, SubstreamsDifferAndRepeat) {
  EXPECT_EQ(SeededRng::substream(7, 3).next_u64(), SeededRng::substream(7, 3).next_u64());
  EXPECT_NE(SeededRng::substream(7, 3).next_u64(), SeededRng::substream(7, 4).next_u64());
  EXPECT_NE(mix_seed(1, 2), mix_seed(2, 1));
}

TEST(HashString, Fnv1aVectors) {
  EXPECT_EQ(hash_string(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(hash_string("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(hash_string("foobar"), 0x85944171f73967e8ULL);
}

TEST(Frame, LayoutAndAccess) {
  Frame f(4, 3, 3, 7);
  EXPECT_EQ(f.pixel_count(), 12u);
  EXPECT_EQ(f.data().size(), 36u);
  f.at(3, 2, 1) = 99;
  EXPECT_EQ(f.row(2)[3 * 3 + 1], 99);
  EXPECT_THROW(Frame(2, 2, 3, std::vector<std::uint8_t>(5)), DimensionError);
}

TEST(ClampBlend, EndpointsAndRounding) {
  const Frame a = solid(4, 4, 0, 100, 200);
  const Frame b = solid(4, 4, 255, 0, 100);
  EXPECT_EQ(clamp_blend(a, b, 0.0), a);
  EXPECT_EQ(clamp_blend(a, b, 1.0), b);
  const Frame half = clamp_blend(a, b, 0.5);
  EXPECT_EQ(half.at(0, 0, 0), 128);
  EXPECT_EQ(half.at(0, 0, 1), 50);
  EXPECT_EQ(half.at(0, 0, 2), 150);
  EXPECT_THROW(clamp_blend(a, solid(3, 4, 0, 0, 0), 0.5), DimensionError);
}

TEST(ClampBlend, PerPixelAlpha) {
  const Frame a = solid(2, 1, 10, 10, 10);
  const Frame b = solid(2, 1, 210, 210, 210);
  ScalarMap alpha(2, 1);
  alpha.at(1, 0) = 0.25f;
  const Frame out = clamp_blend(a, b, alpha);
  EXPECT_EQ(out.at(0, 0, 0), 10);
  EXPECT_EQ(out.at(1, 0, 0), 60);
}

TEST(ResizeBilinear, TwoToThreeOracle) {
  // Pixel centres of the 3-wide output sit at source x = -1/6, 1/2, 7/6.
  Frame src(2, 1, 3);
  for (int c = 0; c < 3; ++c) {
    src.at(0, 0, c) = 0;
    src.at(1, 0, c) = 90;
  }
  const Frame out = resize_bilinear(src, 3, 1);
  EXPECT_EQ(out.at(0, 0, 0), 0);
  EXPECT_EQ(out.at(1, 0, 0), 45);
  EXPECT_EQ(out.at(2, 0, 0), 90);
}

TEST(ResizeBilinear, IdentityAndConstant) {
  const Frame f = noise_frame(17, 9, 5);
  EXPECT_EQ(resize_bilinear(f, 17, 9), f);
  const Frame c = solid(5, 5, 33, 66, 99);
  EXPECT_EQ(resize_bilinear(c, 13, 2), solid(13, 2, 33, 66, 99));
  EXPECT_THROW(resize_bilinear(Frame{}, 3, 3), DimensionError);
}

TEST(MeanAbsDiff, Basic) {
  EXPECT_DOUBLE_EQ(mean_abs_diff(solid(3, 3, 10, 20, 30), solid(3, 3, 12, 18, 30)), 4.0 / 3.0);
}

TEST(Channels, RgbRgbaRoundTrip) {
  const Frame rgb = noise_frame(6, 4, 8);
  const Frame rgba = to_rgba(rgb, 77);
  EXPECT_EQ(rgba.channels(), 4);
  EXPECT_EQ(rgba.at(2, 1, 3), 77);
  EXPECT_EQ(to_rgb(rgba), rgb);
}

TEST(Luma, ExactOnGrey) {
  for (int v = 0; v < 256; ++v) {
    const auto u = static_cast<std::uint8_t>(v);
    ASSERT_EQ(luma(u, u, u), u);
  }
}

TEST(Filters, ConstantFramesAreFixedPoints) {
  const Frame c = solid(20, 10, 40, 140, 240);
  EXPECT_EQ(box_blur(c, 2, 3), c);
  EXPECT_EQ(gaussian_blur(c, 1.7), c);
  EXPECT_EQ(disc_blur(c, 4), c);
}

TEST(Filters, BoxBlurAveragesWindow) {
  Frame f(3, 1, 3, 0);
  for (int c = 0; c < 3; ++c) f.at(1, 0, c) = 90;
  const Frame out = box_blur(f, 1, 0);
  EXPECT_EQ(out.at(1, 0, 0), 30);
  // Edge replication: the left window is {0, 0, 90}.
  EXPECT_EQ(out.at(0, 0, 0), 30);
}

TEST(ImageIo, PngRoundTripIsLossless) {
  TempDir dir("io");
  for (int ch : {3, 4}) {
    const Frame f = noise_frame(31, 17, 11, ch);
    const auto path = dir / ("f" + std::to_string(ch) + ".png");
    save_frame(path, f);
    EXPECT_EQ(load_frame(path), f);
  }
}

TEST(ImageIo, JpegIsDeterministic) {
  const Frame f = noise_frame(32, 16, 12);
  EXPECT_EQ(encode_jpeg(f, 80), encode_jpeg(f, 80));
  const Frame back = decode_image(encode_jpeg(f, 95));
  EXPECT_TRUE(back.same_shape(f));
}

TEST(ImageIo, Errors) {
  TempDir dir("ioerr");
  EXPECT_THROW(load_frame(dir / "missing.png"), IoError);
  EXPECT_THROW(save_frame(dir / "x.bmpx", solid(2, 2, 0, 0, 0)), IoError);
}

}  // namespace
}  // namespace roadshake

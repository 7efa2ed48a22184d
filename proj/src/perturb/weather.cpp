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
#include <vector>

#include "ops.hpp"
#include "roadshake/filters.hpp"

namespace roadshake::ops {

namespace {

// Smooth random field in [0, 1]: random lattice values, bilinearly upsampled.
ScalarMap value_noise(int w, int h, int cell, SeededRng& rng) {
  const int gw = w / cell + 2;
  const int gh = h / cell + 2;
  std::vector<double> lattice(static_cast<std::size_t>(gw) * gh);
  for (auto& v : lattice) v = rng.uniform();
  ScalarMap out(w, h);
  for (int y = 0; y < h; ++y) {
    const double gy = static_cast<double>(y) / cell;
    const int y0 = static_cast<int>(gy);
    const double fy = gy - y0;
    for (int x = 0; x < w; ++x) {
      const double gx = static_cast<double>(x) / cell;
      const int x0 = static_cast<int>(gx);
      const double fx = gx - x0;
      auto L = [&](int i, int j) { return lattice[static_cast<std::size_t>(j) * gw + i]; };
      const double top = L(x0, y0) * (1 - fx) + L(x0 + 1, y0) * fx;
      const double bot = L(x0, y0 + 1) * (1 - fx) + L(x0 + 1, y0 + 1) * fx;
      out.at(x, y) = static_cast<float>(top * (1 - fy) + bot * fy);
    }
  }
  return out;
}

}  // namespace

Frame frosted_glass(const Frame& f, const ParamRow& p, SeededRng& rng) {
  const double sigma = param(p, "sigma");
  const int disp = static_cast<int>(param(p, "displacement"));
  const Frame blurred = gaussian_blur(f, sigma);
  Frame out(f.width(), f.height(), 3);
  for (int y = 0; y < f.height(); ++y) {
    for (int x = 0; x < f.width(); ++x) {
      const double ux = rng.uniform();
      const double uy = rng.uniform();
      const int sx = std::clamp(x + static_cast<int>(std::floor(ux * (2 * disp + 1))) - disp, 0,
                                f.width() - 1);
      const int sy = std::clamp(y + static_cast<int>(std::floor(uy * (2 * disp + 1))) - disp, 0,
                                f.height() - 1);
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = blurred.at(sx, sy, c);
    }
  }
  return out;
}

Frame snow(const Frame& f, const ParamRow& p, SeededRng& rng) {
  const int flakes = static_cast<int>(param(p, "flakes"));
  const double whiten = param(p, "whiten");
  Frame out = clamp_blend(f, Frame(f.width(), f.height(), 3, 255), whiten);
  const double scale = f.width() / 320.0;
  const double area_scale = static_cast<double>(f.pixel_count()) / (320.0 * 160.0);
  const int n = static_cast<int>(std::lround(flakes * area_scale));
  for (int i = 0; i < n; ++i) {
    const double x = rng.uniform() * f.width();
    const double y = rng.uniform() * f.height();
    const double r = (0.6 + 1.2 * rng.uniform()) * scale;
    const double opacity = 0.6 + 0.4 * rng.uniform();
    fill_disc(out, x, y, r, {250, 250, 255}, opacity);
  }
  return out;
}

Frame fog(const Frame& f, const ParamRow& p, SeededRng& rng) {
  const double blend = param(p, "blend");
  const int cell = std::max(4, f.width() / 8);
  const ScalarMap coarse = value_noise(f.width(), f.height(), cell, rng);
  const ScalarMap fine = value_noise(f.width(), f.height(), std::max(2, cell / 2), rng);
  ScalarMap alpha(f.width(), f.height());
  for (int y = 0; y < f.height(); ++y) {
    for (int x = 0; x < f.width(); ++x) {
      const double density = 0.55 + 0.45 * (0.67 * coarse.at(x, y) + 0.33 * fine.at(x, y));
      alpha.at(x, y) = static_cast<float>(blend * density);
    }
  }
  Frame haze(f.width(), f.height(), 3);
  for (std::size_t i = 0; i < haze.pixel_count(); ++i) {
    haze.data()[i * 3 + 0] = 205;
    haze.data()[i * 3 + 1] = 210;
    haze.data()[i * 3 + 2] = 215;
  }
  return clamp_blend(f, haze, alpha);
}

Frame brightness(const Frame& f, const ParamRow& p, SeededRng&) {
  const double delta = param(p, "delta");
  Frame out = f;
  for (auto& v : out.data()) v = saturate_u8(v + delta);
  return out;
}

Frame contrast(const Frame& f, const ParamRow& p, SeededRng&) {
  const double factor = param(p, "factor");
  double mean = 0.0;
  for (auto v : f.data()) mean += v;
  mean /= static_cast<double>(f.data().size());
  Frame out = f;
  for (auto& v : out.data()) v = saturate_u8((v - mean) * factor + mean);
  return out;
}

}  // namespace roadshake::ops

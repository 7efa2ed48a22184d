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
#include <numeric>
#include <vector>

#include "ops.hpp"
#include "roadshake/filters.hpp"

namespace roadshake::ops {

Frame elastic_deformation(const Frame& f, const ParamRow& p, SeededRng& rng) {
  const double amplitude = param(p, "amplitude") * f.width() / 320.0;
  const int cell = std::max(4, static_cast<int>(param(p, "cell") * f.width() / 320.0));
  const int gw = f.width() / cell + 2;
  const int gh = f.height() / cell + 2;
  std::vector<double> gx(static_cast<std::size_t>(gw) * gh);
  std::vector<double> gy(gx.size());
  for (std::size_t i = 0; i < gx.size(); ++i) {
    gx[i] = rng.uniform(-1.0, 1.0);
    gy[i] = rng.uniform(-1.0, 1.0);
  }
  auto field = [&](const std::vector<double>& g, int x, int y) {
    const double u = static_cast<double>(x) / cell;
    const double v = static_cast<double>(y) / cell;
    const int i = static_cast<int>(u);
    const int j = static_cast<int>(v);
    const double fu = u - i;
    const double fv = v - j;
    // Smoothstep weights keep the field C1 across cells.
    const double su = fu * fu * (3 - 2 * fu);
    const double sv = fv * fv * (3 - 2 * fv);
    auto G = [&](int a, int b) { return g[static_cast<std::size_t>(b) * gw + a]; };
    const double top = G(i, j) * (1 - su) + G(i + 1, j) * su;
    const double bot = G(i, j + 1) * (1 - su) + G(i + 1, j + 1) * su;
    return top * (1 - sv) + bot * sv;
  };
  return remap(f, [&](int x, int y) {
    return std::pair{x + amplitude * field(gx, x, y), y + amplitude * field(gy, x, y)};
  });
}

Frame pixelation(const Frame& f, const ParamRow& p, SeededRng&) {
  const int block = std::max(1, static_cast<int>(param(p, "block")));
  Frame out(f.width(), f.height(), 3);
  for (int by = 0; by < f.height(); by += block) {
    for (int bx = 0; bx < f.width(); bx += block) {
      const int ex = std::min(bx + block, f.width());
      const int ey = std::min(by + block, f.height());
      std::array<unsigned, 3> sum{};
      for (int y = by; y < ey; ++y) {
        for (int x = bx; x < ex; ++x) {
          for (int c = 0; c < 3; ++c) sum[c] += f.at(x, y, c);
        }
      }
      const unsigned n = static_cast<unsigned>((ex - bx) * (ey - by));
      for (int y = by; y < ey; ++y) {
        for (int x = bx; x < ex; ++x) {
          for (int c = 0; c < 3; ++c) out.at(x, y, c) = static_cast<std::uint8_t>((sum[c] + n / 2) / n);
        }
      }
    }
  }
  return out;
}

// A rectangle covering `area` of the frame is blended at 0.5 with a
// pixel-shuffled copy of itself.
Frame region_blending(const Frame& f, const ParamRow& p, SeededRng& rng) {
  const double area = std::clamp(param(p, "area"), 0.0, 1.0);
  const double side = std::sqrt(area);
  const int rw = std::max(1, static_cast<int>(std::lround(side * f.width())));
  const int rh = std::max(1, static_cast<int>(std::lround(side * f.height())));
  const double u = rng.uniform();
  const double v = rng.uniform();
  const int x0 = static_cast<int>(std::floor(u * (f.width() - rw + 1)));
  const int y0 = static_cast<int>(std::floor(v * (f.height() - rh + 1)));
  std::vector<std::size_t> perm(static_cast<std::size_t>(rw) * rh);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  rng.shuffle(perm.begin(), perm.end());
  Frame out = f;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    const int x = x0 + static_cast<int>(i % rw);
    const int y = y0 + static_cast<int>(i / rw);
    const int sx = x0 + static_cast<int>(perm[i] % rw);
    const int sy = y0 + static_cast<int>(perm[i] / rw);
    for (int c = 0; c < 3; ++c) {
      out.at(x, y, c) = saturate_u8(0.5 * f.at(x, y, c) + 0.5 * f.at(sx, sy, c));
    }
  }
  return out;
}

Frame sharpening(const Frame& f, const ParamRow& p, SeededRng&) {
  const double amount = param(p, "amount");
  const Frame blurred = gaussian_blur(f, 1.0);
  Frame out = f;
  auto d = out.data();
  const auto s = f.data();
  const auto b = blurred.data();
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = saturate_u8(s[i] + amount * (static_cast<double>(s[i]) - b[i]));
  }
  return out;
}

}  // namespace roadshake::ops

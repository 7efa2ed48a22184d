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

// Category A. Kernels draw their random numbers in a level-independent
// order so the same seed yields nested, growing effects across levels.

#include <cmath>

#include "ops.hpp"
#include "roadshake/image_io.hpp"

namespace roadshake::ops {

Frame gaussian_noise(const Frame& f, const ParamRow& p, SeededRng& rng) {
  const double sigma = param(p, "sigma");
  Frame out = f;
  for (auto& v : out.data()) v = saturate_u8(v + sigma * rng.normal());
  return out;
}

Frame poisson_noise(const Frame& f, const ParamRow& p, SeededRng& rng) {
  const double photons = param(p, "photons");
  Frame out = f;
  for (auto& v : out.data()) {
    const double lambda = v / 255.0 * photons;
    v = saturate_u8(static_cast<double>(rng.poisson(lambda)) / photons * 255.0);
  }
  return out;
}

Frame impulse_noise(const Frame& f, const ParamRow& p, SeededRng& rng) {
  const double amount = param(p, "amount");
  Frame out = f;
  const std::size_t n = f.pixel_count();
  auto d = out.data();
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    const bool salt = (rng.next_u64() >> 63) != 0;
    if (u < amount) {
      const std::uint8_t v = salt ? 255 : 0;
      d[i * 3 + 0] = d[i * 3 + 1] = d[i * 3 + 2] = v;
    }
  }
  return out;
}

Frame jpeg_compression(const Frame& f, const ParamRow& p, SeededRng&) {
  const int quality = static_cast<int>(param(p, "quality"));
  return to_rgb(decode_image(encode_jpeg(f, quality)));
}

Frame speckle_noise(const Frame& f, const ParamRow& p, SeededRng& rng) {
  const double sigma = param(p, "sigma");
  Frame out = f;
  for (auto& v : out.data()) v = saturate_u8(v * (1.0 + sigma * rng.normal()));
  return out;
}

}  // namespace roadshake::ops

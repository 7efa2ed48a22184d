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

// Internal declarations for the static perturbation kernels. Every kernel
// receives an RGB frame and returns an RGB frame of the same size.

#pragma once

#include <array>
#include <string>

#include "roadshake/errors.hpp"
#include "roadshake/static_perturb.hpp"

namespace roadshake::ops {

inline double param(const ParamRow& row, const char* key) {
  const auto it = row.find(key);
  if (it == row.end()) throw BadIntensity(std::string("missing parameter '") + key + "'");
  return it->second;
}

using Rgb = std::array<std::uint8_t, 3>;

// Drawing into RGB frames, alpha-composited with the given opacity.
void blend_pixel(Frame& f, int x, int y, const Rgb& color, double opacity);
void fill_disc(Frame& f, double cx, double cy, double r, const Rgb& color, double opacity);
void fill_rect(Frame& f, int x0, int y0, int x1, int y1, const Rgb& color);
void draw_line(Frame& f, double x0, double y0, double x1, double y1, double thickness,
               const Rgb& color, double opacity);

// A: noise
Frame gaussian_noise(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame poisson_noise(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame impulse_noise(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame jpeg_compression(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame speckle_noise(const Frame& f, const ParamRow& p, SeededRng& rng);

// B: blur
Frame defocus_blur(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame motion_blur(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame zoom_blur(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame gaussian_blur_op(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame lowpass_blur(const Frame& f, const ParamRow& p, SeededRng& rng);

// C: weather
Frame frosted_glass(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame snow(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame fog(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame brightness(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame contrast(const Frame& f, const ParamRow& p, SeededRng& rng);

// D: distortion
Frame elastic_deformation(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame pixelation(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame region_blending(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame sharpening(const Frame& f, const ParamRow& p, SeededRng& rng);

// E: affine
Frame shear(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame scaling(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame translation(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame rotation(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame reflection(const Frame& f, const ParamRow& p, SeededRng& rng);

// F: pattern
Frame splatter(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame dotted_lines(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame zigzag(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame edge_map(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame cutout(const Frame& f, const ParamRow& p, SeededRng& rng);

// G: colour
Frame false_color(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame scramble(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame histogram_equalization(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame white_balance(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame greyscale(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame saturation(const Frame& f, const ParamRow& p, SeededRng& rng);
Frame posterize(const Frame& f, const ParamRow& p, SeededRng& rng);

}  // namespace roadshake::ops

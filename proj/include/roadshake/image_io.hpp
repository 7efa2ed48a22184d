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

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "roadshake/image.hpp"

namespace roadshake {

/// Reads a PNG or JPEG. Colour images come back RGB, images with an alpha
/// channel RGBA, greyscale images are expanded to RGB. Throws IoError.
Frame load_frame(const std::filesystem::path& path);

/// Writes PNG or JPEG depending on the extension. Throws IoError.
void save_frame(const std::filesystem::path& path, const Frame& frame);

std::vector<std::uint8_t> encode_png(const Frame& frame);
std::vector<std::uint8_t> encode_jpeg(const Frame& frame, int quality);
Frame decode_image(const std::vector<std::uint8_t>& bytes);

/// Raw (un-normalised) scalar grid from an 8-bit greyscale PNG (value/255)
/// or a JSON 2-D array of numbers. Throws SaliencyLoadError.
ScalarMap load_scalar_map(const std::filesystem::path& path);

/// Writes a map as 8-bit greyscale PNG, values clamped to [0,1].
void save_scalar_map_png(const std::filesystem::path& path, const ScalarMap& map);

}  // namespace roadshake

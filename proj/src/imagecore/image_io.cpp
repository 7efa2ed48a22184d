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

#include "roadshake/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "roadshake/errors.hpp"

namespace roadshake {

namespace {

// OpenCV stores BGR(A); frames are RGB(A).
Frame from_mat(const cv::Mat& m) {
  if (m.empty()) throw IoError("empty image");
  if (m.depth() != CV_8U) throw IoError("only 8-bit images are supported");
  const int ch = m.channels();
  const int out_ch = ch == 4 ? 4 : 3;
  Frame f(m.cols, m.rows, out_ch);
  for (int y = 0; y < m.rows; ++y) {
    const std::uint8_t* src = m.ptr<std::uint8_t>(y);
    std::uint8_t* dst = f.row(y);
    for (int x = 0; x < m.cols; ++x) {
      if (ch == 1) {
        dst[x * 3 + 0] = dst[x * 3 + 1] = dst[x * 3 + 2] = src[x];
      } else {
        dst[x * out_ch + 0] = src[x * ch + 2];
        dst[x * out_ch + 1] = src[x * ch + 1];
        dst[x * out_ch + 2] = src[x * ch + 0];
        if (out_ch == 4) dst[x * 4 + 3] = src[x * 4 + 3];
      }
    }
  }
  return f;
}

cv::Mat to_mat(const Frame& f) {
  const int ch = f.channels();
  cv::Mat m(f.height(), f.width(), ch == 4 ? CV_8UC4 : CV_8UC3);
  for (int y = 0; y < f.height(); ++y) {
    const std::uint8_t* src = f.row(y);
    std::uint8_t* dst = m.ptr<std::uint8_t>(y);
    for (int x = 0; x < f.width(); ++x) {
      dst[x * ch + 0] = src[x * ch + 2];
      dst[x * ch + 1] = src[x * ch + 1];
      dst[x * ch + 2] = src[x * ch + 0];
      if (ch == 4) dst[x * 4 + 3] = src[x * 4 + 3];
    }
  }
  return m;
}

std::string lower_ext(const std::filesystem::path& p) {
  std::string e = p.extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
  return e;
}

}  // namespace

Frame load_frame(const std::filesystem::path& path) {
  cv::Mat m = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (m.empty()) throw IoError("cannot read image " + path.string());
  return from_mat(m);
}

void save_frame(const std::filesystem::path& path, const Frame& frame) {
  const std::string ext = lower_ext(path);
  std::vector<std::uint8_t> bytes;
  if (ext == ".png") {
    bytes = encode_png(frame);
  } else if (ext == ".jpg" || ext == ".jpeg") {
    bytes = encode_jpeg(frame, 95);
  } else {
    throw IoError("unsupported image extension '" + ext + "' for " + path.string());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<std::uint8_t> encode_png(const Frame& frame) {
  std::vector<std::uint8_t> buf;
  if (!cv::imencode(".png", to_mat(frame), buf)) throw IoError("PNG encoding failed");
  return buf;
}

std::vector<std::uint8_t> encode_jpeg(const Frame& frame, int quality) {
  std::vector<std::uint8_t> buf;
  const std::vector<int> params{cv::IMWRITE_JPEG_QUALITY, std::clamp(quality, 1, 100)};
  if (!cv::imencode(".jpg", to_mat(to_rgb(frame)), buf, params)) {
    throw IoError("JPEG encoding failed");
  }
  return buf;
}

Frame decode_image(const std::vector<std::uint8_t>& bytes) {
  cv::Mat m = cv::imdecode(bytes, cv::IMREAD_UNCHANGED);
  if (m.empty()) throw IoError("cannot decode image buffer");
  return from_mat(m);
}

ScalarMap load_scalar_map(const std::filesystem::path& path) {
  const std::string ext = lower_ext(path);
  if (ext == ".json") {
    std::ifstream in(path);
    if (!in) throw SaliencyLoadError("cannot open saliency file " + path.string());
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw SaliencyLoadError("malformed saliency JSON " + path.string() + ": " + e.what());
    }
    if (!j.is_array() || j.empty() || !j.front().is_array() || j.front().empty()) {
      throw SaliencyLoadError("saliency JSON must be a non-empty 2-D array: " + path.string());
    }
    const int h = static_cast<int>(j.size());
    const int w = static_cast<int>(j.front().size());
    ScalarMap m(w, h);
    for (int y = 0; y < h; ++y) {
      const auto& row = j[y];
      if (!row.is_array() || static_cast<int>(row.size()) != w) {
        throw SaliencyLoadError("ragged saliency JSON rows in " + path.string());
      }
      for (int x = 0; x < w; ++x) {
        if (!row[x].is_number()) throw SaliencyLoadError("non-numeric saliency value in " + path.string());
        m.at(x, y) = row[x].get<float>();
      }
    }
    return m;
  }
  cv::Mat g = cv::imread(path.string(), cv::IMREAD_GRAYSCALE);
  if (g.empty() || g.depth() != CV_8U) {
    throw SaliencyLoadError("cannot read saliency image " + path.string());
  }
  ScalarMap m(g.cols, g.rows);
  for (int y = 0; y < g.rows; ++y) {
    const std::uint8_t* src = g.ptr<std::uint8_t>(y);
    for (int x = 0; x < g.cols; ++x) m.at(x, y) = static_cast<float>(src[x]) / 255.0f;
  }
  return m;
}

void save_scalar_map_png(const std::filesystem::path& path, const ScalarMap& map) {
  cv::Mat g(map.height(), map.width(), CV_8UC1);
  for (int y = 0; y < map.height(); ++y) {
    std::uint8_t* dst = g.ptr<std::uint8_t>(y);
    for (int x = 0; x < map.width(); ++x) {
      dst[x] = saturate_u8(static_cast<double>(std::clamp(map.at(x, y), 0.0f, 1.0f)) * 255.0);
    }
  }
  if (!cv::imwrite(path.string(), g)) throw IoError("cannot write " + path.string());
}

}  // namespace roadshake

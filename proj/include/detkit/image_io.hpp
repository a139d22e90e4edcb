// Copyright 2026 The detkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "detkit/errors.hpp"
#include "detkit/raster.hpp"
#include "detkit/records.hpp"

namespace detkit {

// Codec boundary. Rasters are RGB (or gray) row-major; OpenCV's BGR
// ordering is converted at this boundary only.
inline ImageRaster decode_image(const std::vector<std::uint8_t>& bytes,
                                const std::string& origin = "<memory>") {
  const cv::Mat raw(1, static_cast<int>(bytes.size()), CV_8UC1,
                    const_cast<std::uint8_t*>(bytes.data()));
  cv::Mat mat = cv::imdecode(raw, cv::IMREAD_UNCHANGED);
  if (mat.empty()) throw BadImage(origin);
  if (mat.channels() == 4) cv::cvtColor(mat, mat, cv::COLOR_BGRA2BGR);
  if (mat.channels() == 3) cv::cvtColor(mat, mat, cv::COLOR_BGR2RGB);
  if (mat.depth() != CV_8U) mat.convertTo(mat, CV_8U);

  ImageRaster img;
  img.width = mat.cols;
  img.height = mat.rows;
  img.channels = mat.channels();
  img.pixels.resize(static_cast<std::size_t>(mat.cols) * mat.rows *
                    mat.channels());
  for (int y = 0; y < mat.rows; ++y) {
    const std::uint8_t* row = mat.ptr<std::uint8_t>(y);
    std::copy(row, row + static_cast<std::size_t>(mat.cols) * mat.channels(),
              img.pixels.begin() +
                  static_cast<std::size_t>(y) * mat.cols * mat.channels());
  }
  return img;
}

inline std::vector<std::uint8_t> encode_image(const ImageRaster& img,
                                              ImageEncoding encoding) {
  cv::Mat mat(img.height, img.width,
              img.channels == 1 ? CV_8UC1 : CV_8UC3,
              const_cast<std::uint8_t*>(img.pixels.data()));
  cv::Mat out = mat.clone();
  if (img.channels == 3) cv::cvtColor(out, out, cv::COLOR_RGB2BGR);
  std::vector<std::uint8_t> bytes;
  const char* ext = encoding == ImageEncoding::png ? ".png" : ".jpg";
  if (!cv::imencode(ext, out, bytes)) throw BadImage("<encode>");
  return bytes;
}

}  // namespace detkit

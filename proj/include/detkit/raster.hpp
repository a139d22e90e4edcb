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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "detkit/geometry.hpp"

namespace detkit {

// 8-bit row-major raster, 1 (gray) or 3 (RGB) channels.
struct ImageRaster {
  int width = 0;
  int height = 0;
  int channels = 3;
  std::vector<std::uint8_t> pixels;

  static ImageRaster blank(int w, int h, int c) {
    ImageRaster img;
    img.width = w;
    img.height = h;
    img.channels = c;
    img.pixels.assign(static_cast<std::size_t>(w) * h * c, 0);
    return img;
  }

  std::uint8_t& at(int x, int y, int c) {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t at(int x, int y, int c) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  friend bool operator==(const ImageRaster&, const ImageRaster&) = default;
};

namespace raster_detail {

template <typename MapFn>
ImageRaster remap(const ImageRaster& src, int out_w, int out_h, MapFn map) {
  ImageRaster dst = ImageRaster::blank(out_w, out_h, src.channels);
  for (int y = 0; y < out_h; ++y)
    for (int x = 0; x < out_w; ++x) {
      const auto [sx, sy] = map(x, y);
      for (int c = 0; c < src.channels; ++c) dst.at(x, y, c) = src.at(sx, sy, c);
    }
  return dst;
}

}  // namespace raster_detail

inline ImageRaster hflip(const ImageRaster& img) {
  return raster_detail::remap(img, img.width, img.height, [&](int x, int y) {
    return std::pair{img.width - 1 - x, y};
  });
}

inline ImageRaster vflip(const ImageRaster& img) {
  return raster_detail::remap(img, img.width, img.height, [&](int x, int y) {
    return std::pair{x, img.height - 1 - y};
  });
}

// Clockwise quarter turn; output is height x width.
inline ImageRaster rot90(const ImageRaster& img) {
  return raster_detail::remap(img, img.height, img.width, [&](int x, int y) {
    return std::pair{y, img.height - 1 - x};
  });
}

inline ImageRaster rot180(const ImageRaster& img) {
  return raster_detail::remap(img, img.width, img.height, [&](int x, int y) {
    return std::pair{img.width - 1 - x, img.height - 1 - y};
  });
}

inline ImageRaster rot270(const ImageRaster& img) {
  return raster_detail::remap(img, img.height, img.width, [&](int x, int y) {
    return std::pair{img.width - 1 - y, x};
  });
}

inline ImageRaster crop(const ImageRaster& img, const BoundingBox& region) {
  return raster_detail::remap(
      img, region.xmax - region.xmin + 1, region.ymax - region.ymin + 1,
      [&](int x, int y) { return std::pair{region.xmin + x, region.ymin + y}; });
}

// Pixel-center-aligned bilinear resample.
inline ImageRaster resize_bilinear(const ImageRaster& src, int out_w, int out_h) {
  ImageRaster dst = ImageRaster::blank(out_w, out_h, src.channels);
  const double fx = static_cast<double>(src.width) / out_w;
  const double fy = static_cast<double>(src.height) / out_h;
  for (int y = 0; y < out_h; ++y) {
    const double sy = std::clamp((y + 0.5) * fy - 0.5, 0.0,
                                 static_cast<double>(src.height - 1));
    const int y0 = static_cast<int>(sy);
    const int y1 = std::min(y0 + 1, src.height - 1);
    const double wy = sy - y0;
    for (int x = 0; x < out_w; ++x) {
      const double sx = std::clamp((x + 0.5) * fx - 0.5, 0.0,
                                   static_cast<double>(src.width - 1));
      const int x0 = static_cast<int>(sx);
      const int x1 = std::min(x0 + 1, src.width - 1);
      const double wx = sx - x0;
      for (int c = 0; c < src.channels; ++c) {
        const double top = src.at(x0, y0, c) * (1 - wx) + src.at(x1, y0, c) * wx;
        const double bot = src.at(x0, y1, c) * (1 - wx) + src.at(x1, y1, c) * wx;
        const double v = top * (1 - wy) + bot * wy;
        dst.at(x, y, c) = static_cast<std::uint8_t>(
            std::clamp(std::lround(v), 0L, 255L));
      }
    }
  }
  return dst;
}

// delta in [-255, 255]; adds then clamps.
inline ImageRaster adjust_brightness(ImageRaster img, int delta) {
  for (auto& s : img.pixels)
    s = static_cast<std::uint8_t>(std::clamp(static_cast<int>(s) + delta, 0, 255));
  return img;
}

// scale in (0, 4]; s -> clamp(128 + scale * (s - 128)).
inline ImageRaster adjust_contrast(ImageRaster img, double scale) {
  for (auto& s : img.pixels) {
    const long v = std::lround(128.0 + scale * (static_cast<int>(s) - 128));
    s = static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
  }
  return img;
}

// Geometric counterpart of transform_box on the pixels themselves.
inline ImageRaster apply_geometric(const ImageRaster& img,
                                   const BoxTransform& t) {
  using Kind = BoxTransform::Kind;
  switch (t.kind) {
    case Kind::hflip: return hflip(img);
    case Kind::vflip: return vflip(img);
    case Kind::rot90: return rot90(img);
    case Kind::rot180: return rot180(img);
    case Kind::rot270: return rot270(img);
    case Kind::scale:
      return resize_bilinear(img, scaled_extent(img.width, t.sx),
                             scaled_extent(img.height, t.sy));
    case Kind::crop: return crop(img, t.region);
  }
  return img;
}

}  // namespace detkit

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
#include <optional>
#include <tuple>

namespace detkit {

// Axis-aligned pixel rectangle. Coordinates are inclusive pixel indices:
// a 1-pixel box has xmin == xmax. All geometry below uses the inclusive
// (+1) area convention of the Pascal VOC devkit.
struct BoundingBox {
  int xmin = 0;
  int ymin = 0;
  int xmax = 0;
  int ymax = 0;

  bool valid() const {
    return xmin >= 0 && ymin >= 0 && xmin <= xmax && ymin <= ymax;
  }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
  friend auto operator<=>(const BoundingBox& a, const BoundingBox& b) {
    return std::tie(a.xmin, a.ymin, a.xmax, a.ymax) <=>
           std::tie(b.xmin, b.ymin, b.xmax, b.ymax);
  }
};

inline std::int64_t area(const BoundingBox& b) {
  return static_cast<std::int64_t>(b.xmax - b.xmin + 1) *
         static_cast<std::int64_t>(b.ymax - b.ymin + 1);
}

// 0 when the boxes are disjoint.
inline std::int64_t intersection_area(const BoundingBox& a,
                                      const BoundingBox& b) {
  const std::int64_t w = std::min(a.xmax, b.xmax) - std::max(a.xmin, b.xmin) + 1;
  const std::int64_t h = std::min(a.ymax, b.ymax) - std::max(a.ymin, b.ymin) + 1;
  if (w <= 0 || h <= 0) return 0;
  return w * h;
}

// Intersection and union in exact integer arithmetic; only the final
// ratio is floating point.
inline double iou(const BoundingBox& a, const BoundingBox& b) {
  const std::int64_t inter = intersection_area(a, b);
  if (inter == 0) return 0.0;
  const std::int64_t uni = area(a) + area(b) - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

struct BoxTransform {
  enum class Kind { hflip, vflip, rot90, rot180, rot270, scale, crop };

  Kind kind = Kind::hflip;
  double sx = 1.0;  // scale only; must be > 0
  double sy = 1.0;
  BoundingBox region;  // crop only

  static BoxTransform hflip() { return {Kind::hflip}; }
  static BoxTransform vflip() { return {Kind::vflip}; }
  static BoxTransform rot90() { return {Kind::rot90}; }
  static BoxTransform rot180() { return {Kind::rot180}; }
  static BoxTransform rot270() { return {Kind::rot270}; }
  static BoxTransform scale(double sx, double sy) {
    BoxTransform t{Kind::scale};
    t.sx = sx;
    t.sy = sy;
    return t;
  }
  static BoxTransform crop(BoundingBox region) {
    BoxTransform t{Kind::crop};
    t.region = region;
    return t;
  }
};

inline int scaled_extent(int extent, double s) {
  return std::max(1, static_cast<int>(std::lround(extent * s)));
}

// Tight axis-aligned enclosure of the transformed pixel set. Crop clips
// to the region, re-expresses the box in crop coordinates, and drops the
// box when less than `min_visibility` of its original area survives.
// Absence is a value, not an error.
inline std::optional<BoundingBox> transform_box(const BoundingBox& b,
                                                const BoxTransform& t,
                                                int image_width,
                                                int image_height,
                                                double min_visibility = 0.25) {
  using Kind = BoxTransform::Kind;
  switch (t.kind) {
    case Kind::hflip:
      return BoundingBox{image_width - 1 - b.xmax, b.ymin,
                         image_width - 1 - b.xmin, b.ymax};
    case Kind::vflip:
      return BoundingBox{b.xmin, image_height - 1 - b.ymax, b.xmax,
                         image_height - 1 - b.ymin};
    case Kind::rot90:  // clockwise; (x,y) -> (H-1-y, x)
      return BoundingBox{image_height - 1 - b.ymax, b.xmin,
                         image_height - 1 - b.ymin, b.xmax};
    case Kind::rot180:
      return BoundingBox{image_width - 1 - b.xmax, image_height - 1 - b.ymax,
                         image_width - 1 - b.xmin, image_height - 1 - b.ymin};
    case Kind::rot270:  // (x,y) -> (y, W-1-x)
      return BoundingBox{b.ymin, image_width - 1 - b.xmax, b.ymax,
                         image_width - 1 - b.xmin};
    case Kind::scale: {
      const int out_w = scaled_extent(image_width, t.sx);
      const int out_h = scaled_extent(image_height, t.sy);
      // Pixel p covers [p, p+1); the enclosure of the scaled span is
      // [floor(min*s), ceil((max+1)*s) - 1].
      BoundingBox r;
      r.xmin = std::clamp(static_cast<int>(std::floor(b.xmin * t.sx)), 0, out_w - 1);
      r.ymin = std::clamp(static_cast<int>(std::floor(b.ymin * t.sy)), 0, out_h - 1);
      r.xmax = std::clamp(static_cast<int>(std::ceil((b.xmax + 1) * t.sx)) - 1, 0, out_w - 1);
      r.ymax = std::clamp(static_cast<int>(std::ceil((b.ymax + 1) * t.sy)) - 1, 0, out_h - 1);
      if (r.xmin > r.xmax || r.ymin > r.ymax) return std::nullopt;
      return r;
    }
    case Kind::crop: {
      BoundingBox clipped{std::max(b.xmin, t.region.xmin),
                          std::max(b.ymin, t.region.ymin),
                          std::min(b.xmax, t.region.xmax),
                          std::min(b.ymax, t.region.ymax)};
      if (clipped.xmin > clipped.xmax || clipped.ymin > clipped.ymax)
        return std::nullopt;
      const double retained =
          static_cast<double>(area(clipped)) / static_cast<double>(area(b));
      if (retained < min_visibility) return std::nullopt;
      return BoundingBox{clipped.xmin - t.region.xmin,
                         clipped.ymin - t.region.ymin,
                         clipped.xmax - t.region.xmin,
                         clipped.ymax - t.region.ymin};
    }
  }
  return std::nullopt;
}

}  // namespace detkit

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
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "detkit/annotations.hpp"
#include "detkit/errors.hpp"
#include "detkit/geometry.hpp"
#include "detkit/image_io.hpp"
#include "detkit/io.hpp"
#include "detkit/labelmap.hpp"
#include "detkit/raster.hpp"
#include "detkit/records.hpp"
#include "detkit/rng.hpp"

namespace detkit {

// ---------------------------------------------------------------------------
// Splitting

struct SplitSpec {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
  std::uint64_t seed = 0;

  void validate() const {
    if (train < 0 || val < 0 || test < 0 ||
        std::abs(train + val + test - 1.0) > 1e-9)
      throw Error("split ratios must be nonnegative and sum to 1");
  }
};

struct Splits {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
};

// Deterministic seeded shuffle, then largest-remainder apportionment of
// the three ratios. Partition: disjoint, exhaustive, size-exact.
inline Splits split_dataset(std::vector<std::string> ids,
                            const SplitSpec& spec) {
  spec.validate();
  if (ids.empty()) throw Error("cannot split an empty id list");
  seeded_shuffle(ids, spec.seed);

  const double n = static_cast<double>(ids.size());
  const double quotas[3] = {spec.train * n, spec.val * n, spec.test * n};
  std::size_t sizes[3];
  double remainders[3];
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    sizes[i] = static_cast<std::size_t>(std::floor(quotas[i]));
    remainders[i] = quotas[i] - static_cast<double>(sizes[i]);
    assigned += sizes[i];
  }
  std::size_t leftover = ids.size() - assigned;
  int order[3] = {0, 1, 2};
  std::stable_sort(order, order + 3,
                   [&](int a, int b) { return remainders[a] > remainders[b]; });
  for (std::size_t k = 0; k < leftover; ++k) ++sizes[order[k % 3]];

  Splits out;
  auto it = ids.begin();
  out.train.assign(it, it + static_cast<std::ptrdiff_t>(sizes[0]));
  it += static_cast<std::ptrdiff_t>(sizes[0]);
  out.val.assign(it, it + static_cast<std::ptrdiff_t>(sizes[1]));
  it += static_cast<std::ptrdiff_t>(sizes[1]);
  out.test.assign(it, ids.end());
  return out;
}

// ---------------------------------------------------------------------------
// Resize

struct ResizeResult {
  ImageRaster image;
  ImageAnnotation annotation;
  int dropped_boxes = 0;  // collapsed to nothing by rounding
};

inline int round_half_up(double v) {
  return static_cast<int>(std::floor(v + 0.5));
}

// Bilinear resample to target x target; boxes scaled per axis, rounded
// half-up and clamped into the target raster.
inline ResizeResult resize_with_boxes(const ImageRaster& img,
                                      const ImageAnnotation& ann, int target) {
  ResizeResult out;
  out.image = (img.width == target && img.height == target)
                  ? img
                  : resize_bilinear(img, target, target);
  out.annotation.image_id = ann.image_id;
  out.annotation.width = target;
  out.annotation.height = target;
  out.annotation.depth = ann.depth;
  const double sx = static_cast<double>(target) / ann.width;
  const double sy = static_cast<double>(target) / ann.height;
  for (const auto& obj : ann.objects) {
    BoundingBox b{std::clamp(round_half_up(obj.box.xmin * sx), 0, target - 1),
                  std::clamp(round_half_up(obj.box.ymin * sy), 0, target - 1),
                  std::clamp(round_half_up(obj.box.xmax * sx), 0, target - 1),
                  std::clamp(round_half_up(obj.box.ymax * sy), 0, target - 1)};
    if (!b.valid()) {
      ++out.dropped_boxes;
      continue;
    }
    out.annotation.objects.push_back({obj.class_id, b, obj.difficult});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Augmentation

struct AugmentOp {
  enum class Kind {
    hflip, vflip, rot90, rot180, rot270,
    scale,       // factor drawn per axis from [lo, hi]
    crop,        // kept side fraction drawn from [lo, 1]
    brightness,  // delta drawn from [lo, hi], integer
    contrast     // scale drawn from [lo, hi]
  };
  Kind kind = Kind::hflip;
  double lo = 0.0;
  double hi = 0.0;
};

struct AugmentPlan {
  std::vector<AugmentOp> ops;
  int variants_per_image = 1;
  std::uint64_t seed = 0;
  double min_visibility = 0.25;
};

struct AugmentVariant {
  ImageRaster image;
  ImageAnnotation annotation;
  int variant_id = 0;
  bool boxes_vanished = false;  // source had boxes, variant has none
};

// Every op in the plan is applied to every variant, in order; only the
// drawn parameters differ between variants. The parameter stream is
// keyed by (seed, image_id, variant) so one image's variants never
// depend on what other images exist.
inline std::vector<AugmentVariant> augment(const ImageRaster& img,
                                           const ImageAnnotation& ann,
                                           const AugmentPlan& plan) {
  if (plan.variants_per_image < 1)
    throw Error("variants_per_image must be >= 1");
  std::vector<AugmentVariant> variants;
  for (int v = 0; v < plan.variants_per_image; ++v) {
    SplitMix64 rng = keyed_stream(plan.seed, ann.image_id,
                                  static_cast<std::uint64_t>(v));
    ImageRaster cur = img;
    std::vector<GroundTruthObject> objects = ann.objects;
    for (const auto& op : plan.ops) {
      BoxTransform t;
      bool photometric = false;
      switch (op.kind) {
        case AugmentOp::Kind::hflip: t = BoxTransform::hflip(); break;
        case AugmentOp::Kind::vflip: t = BoxTransform::vflip(); break;
        case AugmentOp::Kind::rot90: t = BoxTransform::rot90(); break;
        case AugmentOp::Kind::rot180: t = BoxTransform::rot180(); break;
        case AugmentOp::Kind::rot270: t = BoxTransform::rot270(); break;
        case AugmentOp::Kind::scale:
          t = BoxTransform::scale(rng.next_in(op.lo, op.hi),
                                  rng.next_in(op.lo, op.hi));
          break;
        case AugmentOp::Kind::crop: {
          const double f = rng.next_in(op.lo, 1.0);
          const int cw = std::max(1, round_half_up(cur.width * f));
          const int ch = std::max(1, round_half_up(cur.height * f));
          const int x0 = static_cast<int>(rng.next_int(0, cur.width - cw));
          const int y0 = static_cast<int>(rng.next_int(0, cur.height - ch));
          t = BoxTransform::crop({x0, y0, x0 + cw - 1, y0 + ch - 1});
          break;
        }
        case AugmentOp::Kind::brightness:
          cur = adjust_brightness(std::move(cur),
                                  static_cast<int>(rng.next_int(
                                      static_cast<std::int64_t>(op.lo),
                                      static_cast<std::int64_t>(op.hi))));
          photometric = true;
          break;
        case AugmentOp::Kind::contrast:
          cur = adjust_contrast(std::move(cur), rng.next_in(op.lo, op.hi));
          photometric = true;
          break;
      }
      if (photometric) continue;  // boxes untouched

      std::vector<GroundTruthObject> moved;
      for (const auto& obj : objects) {
        auto b = transform_box(obj.box, t, cur.width, cur.height,
                               plan.min_visibility);
        if (b) moved.push_back({obj.class_id, *b, obj.difficult});
      }
      cur = apply_geometric(cur, t);
      objects = std::move(moved);
    }

    AugmentVariant out;
    out.variant_id = v;
    out.boxes_vanished = objects.empty() && !ann.objects.empty();
    out.annotation.image_id = ann.image_id + "_v" + std::to_string(v);
    out.annotation.width = cur.width;
    out.annotation.height = cur.height;
    out.annotation.depth = ann.depth;
    out.annotation.objects = std::move(objects);
    out.image = std::move(cur);
    variants.push_back(std::move(out));
  }
  return variants;
}

// ---------------------------------------------------------------------------
// Record packing

inline ImageEncoding sniff_encoding(const std::vector<std::uint8_t>& bytes,
                                    const std::string& origin) {
  static constexpr std::uint8_t png_sig[4] = {0x89, 'P', 'N', 'G'};
  if (bytes.size() >= 4 && std::equal(png_sig, png_sig + 4, bytes.begin()))
    return ImageEncoding::png;
  if (bytes.size() >= 2 && bytes[0] == 0xff && bytes[1] == 0xd8)
    return ImageEncoding::jpeg;
  throw BadImage(origin);
}

// Entries ordered by image_id ascending; dimensions are verified against
// the decoded image.
inline RecordFile pack_records(
    const std::vector<std::pair<std::filesystem::path, ImageAnnotation>>& pairs) {
  RecordFile records;
  for (const auto& [image_path, ann] : pairs) {
    RecordEntry e;
    e.annotation = ann;
    e.image_bytes = read_binary_file(image_path);
    e.encoding = sniff_encoding(e.image_bytes, image_path.string());
    const ImageRaster decoded = decode_image(e.image_bytes, image_path.string());
    if (decoded.width != ann.width || decoded.height != ann.height)
      throw DimensionMismatch("image " + image_path.string() + " is " +
                              std::to_string(decoded.width) + "x" +
                              std::to_string(decoded.height) +
                              " but annotation says " +
                              std::to_string(ann.width) + "x" +
                              std::to_string(ann.height));
    records.entries.push_back(std::move(e));
  }
  std::sort(records.entries.begin(), records.entries.end(),
            [](const RecordEntry& a, const RecordEntry& b) {
              return a.annotation.image_id < b.annotation.image_id;
            });
  return records;
}

inline void validate_records(const RecordFile& records) {
  for (const auto& e : records.entries) {
    const ImageRaster decoded = decode_image(e.image_bytes, e.annotation.image_id);
    if (decoded.width != e.annotation.width ||
        decoded.height != e.annotation.height)
      throw DimensionMismatch("record " + e.annotation.image_id +
                              " dimensions do not match its image");
  }
}

// ---------------------------------------------------------------------------
// Label-map generation

// Distinct class names across all annotations. When every name starts
// with an integer token the order is numeric ascending (10 Naira before
// 1000 Naira), otherwise lexicographic.
inline LabelMap generate_labelmap(const std::filesystem::path& annotations_dir) {
  std::set<std::string> names;
  for (const auto& file : list_files(annotations_dir, {".xml"})) {
    const auto raw = voc_detail::parse_raw(read_text_file(file));
    for (const auto& obj : raw.objects) names.insert(obj.name);
  }
  if (names.empty()) throw EmptyLabelMap();

  std::vector<std::string> ordered(names.begin(), names.end());
  bool all_numeric = true;
  std::vector<long long> prefix(ordered.size(), 0);
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    try {
      std::size_t pos = 0;
      prefix[i] = std::stoll(ordered[i], &pos);
      if (pos == 0) all_numeric = false;
    } catch (const std::exception&) {
      all_numeric = false;
    }
  }
  if (all_numeric) {
    std::vector<std::size_t> idx(ordered.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (prefix[a] != prefix[b]) return prefix[a] < prefix[b];
      return ordered[a] < ordered[b];
    });
    std::vector<std::string> sorted;
    for (std::size_t i : idx) sorted.push_back(ordered[i]);
    ordered = std::move(sorted);
  }
  return LabelMap(std::move(ordered));
}

// ---------------------------------------------------------------------------
// Validation

struct Finding {
  enum class Kind { MissingImage, MissingAnnotation, InvalidAnnotation };
  Kind kind;
  std::string subject;
  std::string detail;
};

struct ValidationReport {
  std::vector<Finding> findings;
  int images_seen = 0;
  int annotations_seen = 0;

  bool clean() const { return findings.empty(); }
};

inline ValidationReport validate_dataset(
    const std::filesystem::path& images_dir,
    const std::filesystem::path& annotations_dir, const LabelMap& labels) {
  namespace fs = std::filesystem;
  ValidationReport report;

  std::map<std::string, fs::path> images;
  for (const auto& f : list_files(images_dir, {".png", ".jpg", ".jpeg"}))
    images.emplace(f.stem().string(), f);
  std::map<std::string, fs::path> annotations;
  for (const auto& f : list_files(annotations_dir, {".xml"}))
    annotations.emplace(f.stem().string(), f);
  report.images_seen = static_cast<int>(images.size());
  report.annotations_seen = static_cast<int>(annotations.size());

  for (const auto& [stem, path] : images)
    if (!annotations.count(stem))
      report.findings.push_back({Finding::Kind::MissingAnnotation, stem,
                                 "image has no annotation file"});
  for (const auto& [stem, path] : annotations) {
    if (!images.count(stem))
      report.findings.push_back(
          {Finding::Kind::MissingImage, stem, "annotation has no image file"});
    try {
      parse_voc_annotation(read_text_file(path), labels);
    } catch (const Error& e) {
      report.findings.push_back(
          {Finding::Kind::InvalidAnnotation, stem, e.what()});
    }
  }
  return report;
}

}  // namespace detkit

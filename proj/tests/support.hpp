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
//
// Test-only oracles: direct-definition reimplementations kept
// deliberately independent of the library's computation paths.
#pragma once

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "detkit/annotations.hpp"
#include "detkit/geometry.hpp"
#include "detkit/rng.hpp"

namespace oracle {

// Pixel-count IoU on the inclusive-coordinate grid.
inline double raster_iou(const detkit::BoundingBox& a,
                         const detkit::BoundingBox& b) {
  auto contains = [](const detkit::BoundingBox& box, int x, int y) {
    return x >= box.xmin && x <= box.xmax && y >= box.ymin && y <= box.ymax;
  };
  const int xmax = std::max(a.xmax, b.xmax);
  const int ymax = std::max(a.ymax, b.ymax);
  long long inter = 0, uni = 0;
  for (int y = 0; y <= ymax; ++y)
    for (int x = 0; x <= xmax; ++x) {
      const bool in_a = contains(a, x, y);
      const bool in_b = contains(b, x, y);
      if (in_a && in_b) ++inter;
      if (in_a || in_b) ++uni;
    }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

inline long long raster_area(const detkit::BoundingBox& b) {
  long long n = 0;
  for (int y = b.ymin; y <= b.ymax; ++y)
    for (int x = b.xmin; x <= b.xmax; ++x) ++n;
  return n;
}

// O(n^2) direct-definition AP: at each rank where recall increases, take
// the maximum precision over that rank's suffix.
inline double direct_ap(const std::vector<bool>& tp_flags, int n_gt) {
  if (n_gt == 0 || tp_flags.empty()) return 0.0;
  const std::size_t n = tp_flags.size();
  std::vector<double> recall(n), precision(n);
  int tp = 0, fp = 0;
  for (std::size_t k = 0; k < n; ++k) {
    tp_flags[k] ? ++tp : ++fp;
    recall[k] = static_cast<double>(tp) / n_gt;
    precision[k] = static_cast<double>(tp) / (tp + fp);
  }
  double ap = 0.0, prev = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (recall[k] <= prev) continue;
    double best = 0.0;
    for (std::size_t j = k; j < n; ++j) best = std::max(best, precision[j]);
    ap += (recall[k] - prev) * best;
    prev = recall[k];
  }
  return ap;
}

// Straight-line reimplementation of the greedy confidence-ordered
// matcher, returning TP flags in processing order.
inline std::vector<bool> greedy_match(
    std::vector<detkit::Detection> dets,
    const std::map<std::string, std::vector<detkit::GroundTruthObject>>& gts,
    double threshold) {
  std::sort(dets.begin(), dets.end(),
            [](const detkit::Detection& a, const detkit::Detection& b) {
              if (a.confidence != b.confidence) return a.confidence > b.confidence;
              if (a.image_id != b.image_id) return a.image_id < b.image_id;
              return std::tie(a.box.xmin, a.box.ymin, a.box.xmax, a.box.ymax) <
                     std::tie(b.box.xmin, b.box.ymin, b.box.xmax, b.box.ymax);
            });
  std::map<std::string, std::vector<bool>> used;
  std::vector<bool> flags;
  for (const auto& d : dets) {
    bool tp = false;
    auto it = gts.find(d.image_id);
    if (it != gts.end()) {
      int best = -1;
      double best_iou = 0.0;
      for (std::size_t i = 0; i < it->second.size(); ++i) {
        // Integer-arithmetic IoU, written out longhand.
        const auto& g = it->second[i].box;
        const long long iw =
            std::min<long long>(d.box.xmax, g.xmax) - std::max(d.box.xmin, g.xmin) + 1;
        const long long ih =
            std::min<long long>(d.box.ymax, g.ymax) - std::max(d.box.ymin, g.ymin) + 1;
        if (iw <= 0 || ih <= 0) continue;
        const long long inter = iw * ih;
        const long long area_d = static_cast<long long>(d.box.xmax - d.box.xmin + 1) *
                                 (d.box.ymax - d.box.ymin + 1);
        const long long area_g = static_cast<long long>(g.xmax - g.xmin + 1) *
                                 (g.ymax - g.ymin + 1);
        const double v = static_cast<double>(inter) / (area_d + area_g - inter);
        if (v > best_iou) {
          best_iou = v;
          best = static_cast<int>(i);
        }
      }
      if (best >= 0 && best_iou >= threshold) {
        auto& flags_for_image = used[d.image_id];
        if (flags_for_image.empty()) flags_for_image.assign(it->second.size(), false);
        if (!flags_for_image[static_cast<std::size_t>(best)]) {
          flags_for_image[static_cast<std::size_t>(best)] = true;
          tp = true;
        }
      }
    }
    flags.push_back(tp);
  }
  return flags;
}

// Full reference evaluation: per-class greedy match + direct AP, mAP over
// classes that have ground truth.
inline double reference_map(
    const std::vector<detkit::Detection>& dets,
    const std::map<std::string, std::vector<detkit::GroundTruthObject>>& gts,
    int n_classes, double threshold) {
  double sum = 0.0;
  int counted = 0;
  for (int c = 0; c < n_classes; ++c) {
    std::vector<detkit::Detection> class_dets;
    for (const auto& d : dets)
      if (d.class_id == c) class_dets.push_back(d);
    std::map<std::string, std::vector<detkit::GroundTruthObject>> class_gts;
    int n_gt = 0;
    for (const auto& [id, objs] : gts)
      for (const auto& o : objs)
        if (o.class_id == c) {
          class_gts[id].push_back(o);
          ++n_gt;
        }
    if (n_gt == 0) continue;
    sum += direct_ap(greedy_match(class_dets, class_gts, threshold), n_gt);
    ++counted;
  }
  return counted ? sum / counted : 0.0;
}

// LAMR recomputed straight from its definition at the 9 reference points.
inline double direct_lamr(const std::vector<bool>& tp_flags, int n_gt,
                          int n_images) {
  double product = 1.0;
  for (int i = 0; i < 9; ++i) {
    const double t = std::pow(10.0, -2.0 + 0.25 * i);
    // walk ranks; remember miss rate at the last rank with fppi <= t
    double mr_at = 1.0;  // sentinel
    int tp = 0, fp = 0;
    for (std::size_t k = 0; k < tp_flags.size(); ++k) {
      tp_flags[k] ? ++tp : ++fp;
      if (static_cast<double>(fp) / n_images <= t)
        mr_at = 1.0 - static_cast<double>(tp) / n_gt;
    }
    product *= std::max(mr_at, 1e-10);
  }
  return std::pow(product, 1.0 / 9.0);
}

// Sliding-window dispatch oracle: an event passes when no emitted command
// of the same class lies within the cooldown window before it.
struct OracleCommand {
  std::int64_t t_ms;
  std::string label;
};

inline std::vector<OracleCommand> window_dispatch(
    const std::vector<std::tuple<std::int64_t, std::string, double>>& events,
    double min_conf, std::int64_t cooldown) {
  std::vector<OracleCommand> emitted;
  for (const auto& [t, label, conf] : events) {
    if (conf < min_conf) continue;
    bool blocked = false;
    for (const auto& c : emitted)
      if (c.label == label && t - c.t_ms < cooldown) blocked = true;
    if (!blocked) emitted.push_back({t, label});
  }
  return emitted;
}

}  // namespace oracle

namespace testutil {

inline detkit::BoundingBox random_box(detkit::SplitMix64& rng, int max_coord) {
  const int x1 = static_cast<int>(rng.next_int(0, max_coord));
  const int x2 = static_cast<int>(rng.next_int(0, max_coord));
  const int y1 = static_cast<int>(rng.next_int(0, max_coord));
  const int y2 = static_cast<int>(rng.next_int(0, max_coord));
  return {std::min(x1, x2), std::min(y1, y2), std::max(x1, x2), std::max(y1, y2)};
}

// Confidence that survives the %.6f text round trip exactly.
inline double random_conf(detkit::SplitMix64& rng) {
  return static_cast<double>(rng.next_int(0, 1000000)) / 1e6;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("detkit_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil

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
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "detkit/annotations.hpp"
#include "detkit/errors.hpp"
#include "detkit/geometry.hpp"

namespace detkit {

// Identity of a matched ground-truth object: image plus its index within
// that image's per-class list.
struct GtKey {
  std::string image_id;
  int index = 0;

  friend bool operator==(const GtKey&, const GtKey&) = default;
};

struct MatchOutcome {
  Detection detection;
  bool tp = false;
  std::optional<GtKey> matched_gt;
  std::optional<double> iou_at_match;
};

struct MatchConfig {
  double iou_threshold = 0.5;
  bool exclude_difficult = false;
};

// Per-class ground truth, keyed by image id. std::map so that iteration
// order (and thus n_gt accounting) is deterministic.
using GtByImage = std::map<std::string, std::vector<GroundTruthObject>>;

inline int count_gt(const GtByImage& gts, bool exclude_difficult) {
  int n = 0;
  for (const auto& [id, objs] : gts)
    for (const auto& o : objs)
      if (!(exclude_difficult && o.difficult)) ++n;
  return n;
}

// Greedy confidence-descending assignment. Ties are broken by a
// content-derived key (image id, then box coordinates) so the result is
// independent of input order. For each detection the candidate is the
// max-IoU ground truth among ALL same-image objects; an already-used
// candidate yields FP without reassignment.
inline std::vector<MatchOutcome> match_class(std::vector<Detection> dets,
                                             const GtByImage& gts,
                                             const MatchConfig& cfg) {
  if (!dets.empty()) {
    const int cls = dets.front().class_id;
    for (const auto& d : dets)
      if (d.class_id != cls) throw ClassMixture();
  }
  std::stable_sort(dets.begin(), dets.end(),
                   [](const Detection& a, const Detection& b) {
                     return std::tie(b.confidence, a.image_id, a.box) <
                            std::tie(a.confidence, b.image_id, b.box);
                   });

  std::map<std::string, std::vector<bool>> used;
  for (const auto& [id, objs] : gts) used[id].assign(objs.size(), false);

  std::vector<MatchOutcome> outcomes;
  outcomes.reserve(dets.size());
  for (const auto& det : dets) {
    MatchOutcome out;
    out.detection = det;

    const auto it = gts.find(det.image_id);
    int best = -1;
    double best_iou = 0.0;
    if (it != gts.end()) {
      const auto& objs = it->second;
      for (int i = 0; i < static_cast<int>(objs.size()); ++i) {
        const double v = iou(det.box, objs[i].box);
        if (v > best_iou) {
          best_iou = v;
          best = i;
        }
      }
    }

    if (best >= 0 && best_iou >= cfg.iou_threshold) {
      const auto& candidate = it->second[static_cast<std::size_t>(best)];
      if (cfg.exclude_difficult && candidate.difficult) continue;  // dropped
      auto& flags = used[det.image_id];
      if (!flags[static_cast<std::size_t>(best)]) {
        flags[static_cast<std::size_t>(best)] = true;
        out.tp = true;
        out.matched_gt = GtKey{det.image_id, best};
        out.iou_at_match = best_iou;
      }
    }
    outcomes.push_back(std::move(out));
  }
  return outcomes;
}

}  // namespace detkit

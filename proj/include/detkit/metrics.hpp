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

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "detkit/errors.hpp"
#include "detkit/labelmap.hpp"
#include "detkit/matching.hpp"

namespace detkit {

constexpr double kLamrFloor = 1e-10;

struct PRPoint {
  double recall = 0.0;
  double precision = 0.0;
  int cumulative_tp = 0;
  int cumulative_fp = 0;
};

struct PRCurve {
  std::vector<PRPoint> points;  // rank order
  int n_gt = 0;
};

// Cumulative TP/FP scan over outcomes already in match (rank) order.
// n_gt == 0 with nonempty outcomes is legal; recall stays 0.
inline PRCurve pr_curve(const std::vector<MatchOutcome>& outcomes, int n_gt) {
  PRCurve curve;
  curve.n_gt = n_gt;
  curve.points.reserve(outcomes.size());
  int tp = 0, fp = 0;
  for (const auto& o : outcomes) {
    o.tp ? ++tp : ++fp;
    PRPoint p;
    p.cumulative_tp = tp;
    p.cumulative_fp = fp;
    p.recall = n_gt > 0 ? static_cast<double>(tp) / n_gt : 0.0;
    p.precision = static_cast<double>(tp) / (tp + fp);
    curve.points.push_back(p);
  }
  return curve;
}

// Precision at each rank replaced by the running maximum scanned from
// the tail; the result is non-increasing in recall.
inline PRCurve interpolate_envelope(PRCurve curve) {
  double running = 0.0;
  for (auto it = curve.points.rbegin(); it != curve.points.rend(); ++it) {
    running = std::max(running, it->precision);
    it->precision = running;
  }
  return curve;
}

// Exact area under the enveloped piecewise-constant curve, summed over
// ranks where recall increases, with an implicit (r=0) sentinel.
inline double average_precision(const PRCurve& curve) {
  if (curve.points.empty() || curve.n_gt == 0) return 0.0;
  const PRCurve env = interpolate_envelope(curve);
  double ap = 0.0;
  double prev_recall = 0.0;
  for (const auto& p : env.points) {
    if (p.recall > prev_recall) {
      ap += (p.recall - prev_recall) * p.precision;
      prev_recall = p.recall;
    }
  }
  return ap;
}

struct ClassEval {
  int class_id = 0;
  std::string name;
  std::optional<double> ap;  // absent when n_gt == 0 (excluded from mAP)
  int tp = 0;
  int fp = 0;
  int n_gt = 0;
  std::optional<double> lamr;  // absent when n_gt == 0
};

// Unweighted mean of per-class AP; classes without ground truth do not
// participate.
inline double mean_average_precision(const std::vector<ClassEval>& evals) {
  if (evals.empty()) throw NoClasses();
  double sum = 0.0;
  int n = 0;
  bool uniform = true;
  double first = 0.0;
  for (const auto& e : evals) {
    if (e.ap) {
      if (n == 0) first = *e.ap;
      if (*e.ap != first) uniform = false;
      sum += *e.ap;
      ++n;
    }
  }
  if (n == 0) throw NoClasses();
  if (uniform) return first;  // exact for identical per-class APs
  return sum / n;
}

inline std::pair<int, int> tp_fp_counts(const std::vector<MatchOutcome>& outcomes) {
  int tp = 0, fp = 0;
  for (const auto& o : outcomes) o.tp ? ++tp : ++fp;
  return {tp, fp};
}

// Geometric mean of the miss rate sampled at 9 log-spaced FPPI reference
// points in [1e-2, 1], with a (fppi=-1, mr=1) sentinel and a 1e-10 clamp.
inline std::optional<double> log_average_miss_rate(
    const std::vector<MatchOutcome>& outcomes, int n_gt, int n_images) {
  if (n_gt == 0) return std::nullopt;
  std::vector<double> fppi{-1.0};
  std::vector<double> mr{1.0};
  int tp = 0, fp = 0;
  for (const auto& o : outcomes) {
    o.tp ? ++tp : ++fp;
    fppi.push_back(static_cast<double>(fp) / n_images);
    mr.push_back(1.0 - static_cast<double>(tp) / n_gt);
  }
  double log_sum = 0.0;
  bool all_floored = true;
  for (int i = 0; i < 9; ++i) {
    const double t = std::pow(10.0, -2.0 + 2.0 * i / 8.0);
    // Miss rate at the greatest rank whose FPPI does not exceed t.
    std::size_t pick = 0;
    for (std::size_t k = 0; k < fppi.size(); ++k)
      if (fppi[k] <= t) pick = k;
    const double sampled = std::max(mr[pick], kLamrFloor);
    if (sampled > kLamrFloor) all_floored = false;
    log_sum += std::log(sampled);
  }
  if (all_floored) return kLamrFloor;  // exact clamp, no exp/log round-trip
  return std::min(std::exp(log_sum / 9.0), 1.0);
}

struct SweepRow {
  double threshold = 0.0;
  double map = 0.0;
};

struct EvalReport {
  double iou_threshold = 0.5;       // primary threshold
  std::vector<ClassEval> classes;   // at the primary threshold
  double map = 0.0;
  std::vector<SweepRow> sweep;      // may be empty
};

namespace metrics_detail {

// Split per-image, all-class ground truth into per-class GtByImage maps.
inline std::vector<GtByImage> split_by_class(const GtByImage& gts,
                                             int n_classes) {
  std::vector<GtByImage> per_class(static_cast<std::size_t>(n_classes));
  for (const auto& [image_id, objs] : gts)
    for (const auto& o : objs)
      per_class[static_cast<std::size_t>(o.class_id)][image_id].push_back(o);
  return per_class;
}

inline std::vector<std::vector<Detection>> split_dets_by_class(
    const std::vector<Detection>& dets, int n_classes) {
  std::vector<std::vector<Detection>> per_class(
      static_cast<std::size_t>(n_classes));
  for (const auto& d : dets)
    per_class[static_cast<std::size_t>(d.class_id)].push_back(d);
  return per_class;
}

}  // namespace metrics_detail

inline std::vector<ClassEval> evaluate_at_threshold(
    const std::vector<std::vector<Detection>>& dets_per_class,
    const std::vector<GtByImage>& gts_per_class, const LabelMap& labels,
    double threshold, bool exclude_difficult, int n_images) {
  std::vector<ClassEval> evals;
  for (int c = 0; c < labels.size(); ++c) {
    MatchConfig cfg{threshold, exclude_difficult};
    const auto outcomes =
        match_class(dets_per_class[static_cast<std::size_t>(c)],
                    gts_per_class[static_cast<std::size_t>(c)], cfg);
    const int n_gt =
        count_gt(gts_per_class[static_cast<std::size_t>(c)], exclude_difficult);
    ClassEval e;
    e.class_id = c;
    e.name = labels.name(c);
    e.n_gt = n_gt;
    std::tie(e.tp, e.fp) = tp_fp_counts(outcomes);
    if (n_gt > 0) e.ap = average_precision(pr_curve(outcomes, n_gt));
    e.lamr = log_average_miss_rate(outcomes, n_gt, n_images);
    evals.push_back(std::move(e));
  }
  return evals;
}

// Full match+AP pipeline at the primary threshold plus one mAP figure
// per sweep threshold.
inline EvalReport iou_sweep(const std::vector<Detection>& dets,
                            const GtByImage& gts, const LabelMap& labels,
                            double primary_threshold,
                            const std::vector<double>& sweep_thresholds,
                            bool exclude_difficult, int n_images) {
  for (std::size_t i = 1; i < sweep_thresholds.size(); ++i)
    if (!(sweep_thresholds[i] > sweep_thresholds[i - 1]))
      throw Error("sweep thresholds must be strictly increasing");
  const auto gts_pc = metrics_detail::split_by_class(gts, labels.size());
  const auto dets_pc = metrics_detail::split_dets_by_class(dets, labels.size());

  EvalReport report;
  report.iou_threshold = primary_threshold;
  report.classes = evaluate_at_threshold(dets_pc, gts_pc, labels,
                                         primary_threshold, exclude_difficult,
                                         n_images);
  report.map = mean_average_precision(report.classes);
  for (double t : sweep_thresholds) {
    const auto evals = evaluate_at_threshold(dets_pc, gts_pc, labels, t,
                                             exclude_difficult, n_images);
    report.sweep.push_back({t, mean_average_precision(evals)});
  }
  return report;
}

}  // namespace detkit

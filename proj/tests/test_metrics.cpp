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
#include <catch2/catch_amalgamated.hpp>

#include "detkit/metrics.hpp"
#include "support.hpp"

using namespace detkit;

namespace {

// Synthesizes outcomes with the given TP pattern; boxes are irrelevant
// to the curve math.
std::vector<MatchOutcome> outcomes_from(const std::vector<bool>& flags) {
  std::vector<MatchOutcome> outcomes;
  int gt_index = 0;
  for (bool tp : flags) {
    MatchOutcome o;
    o.tp = tp;
    if (tp) o.matched_gt = GtKey{"im", gt_index++};
    outcomes.push_back(o);
  }
  return outcomes;
}

std::vector<bool> random_flags(SplitMix64& rng, int max_dets) {
  std::vector<bool> flags;
  const int n = static_cast<int>(rng.next_int(0, max_dets));
  for (int i = 0; i < n; ++i) flags.push_back(rng.next_double() < 0.5);
  return flags;
}

}  // namespace

TEST_CASE("pr_curve cumulative scan") {
  SECTION("perfect single detection") {
    const auto curve = pr_curve(outcomes_from({true}), 1);
    REQUIRE(curve.points.size() == 1);
    CHECK(curve.points[0].recall == 1.0);
    CHECK(curve.points[0].precision == 1.0);
  }
  SECTION("hand-checked scan") {
    const auto curve = pr_curve(outcomes_from({true, false, true}), 2);
    REQUIRE(curve.points.size() == 3);
    CHECK(curve.points[0].recall == 0.5);
    CHECK(curve.points[0].precision == 1.0);
    CHECK(curve.points[1].recall == 0.5);
    CHECK(curve.points[1].precision == 0.5);
    CHECK(curve.points[2].recall == 1.0);
    CHECK(curve.points[2].precision == Catch::Approx(2.0 / 3.0));
    // rank invariant: cum_tp + cum_fp == k+1
    for (std::size_t k = 0; k < curve.points.size(); ++k)
      CHECK(curve.points[k].cumulative_tp + curve.points[k].cumulative_fp ==
            static_cast<int>(k) + 1);
  }
  SECTION("empty outcomes") {
    CHECK(pr_curve({}, 5).points.empty());
  }
  SECTION("n_gt zero keeps recall at zero") {
    const auto curve = pr_curve(outcomes_from({false, false}), 0);
    for (const auto& p : curve.points) CHECK(p.recall == 0.0);
  }
}

TEST_CASE("envelope replaces precision with the suffix maximum") {
  auto curve = pr_curve(outcomes_from({true, false, true}), 2);
  const auto env = interpolate_envelope(curve);
  CHECK(env.points[0].precision == 1.0);
  CHECK(env.points[1].precision == Catch::Approx(2.0 / 3.0));
  CHECK(env.points[2].precision == Catch::Approx(2.0 / 3.0));

  SECTION("non-increasing curves are fixed points") {
    const auto again = interpolate_envelope(env);
    for (std::size_t i = 0; i < env.points.size(); ++i)
      CHECK(again.points[i].precision == env.points[i].precision);
  }
  SECTION("single point unchanged") {
    const auto single = interpolate_envelope(pr_curve(outcomes_from({true}), 1));
    CHECK(single.points[0].precision == 1.0);
  }
  SECTION("envelope is non-increasing on random curves") {
    SplitMix64 rng(3);
    for (int t = 0; t < 50; ++t) {
      const auto flags = random_flags(rng, 30);
      const auto e = interpolate_envelope(pr_curve(outcomes_from(flags), 10));
      for (std::size_t i = 1; i < e.points.size(); ++i) {
        CHECK(e.points[i].precision <= e.points[i - 1].precision);
        CHECK(e.points[i].recall >= e.points[i - 1].recall);
      }
    }
  }
}

TEST_CASE("average precision") {
  CHECK(average_precision(pr_curve(outcomes_from({true}), 1)) == 1.0);
  CHECK(average_precision(pr_curve(outcomes_from({true, false, true}), 2)) ==
        Catch::Approx(5.0 / 6.0).epsilon(1e-12));
  CHECK(average_precision(pr_curve(outcomes_from({false, false}), 3)) == 0.0);
  CHECK(average_precision(PRCurve{}) == 0.0);
  CHECK(average_precision(pr_curve(outcomes_from({false, true}), 0)) == 0.0);
}

TEST_CASE("streaming AP equals the O(n^2) direct-definition oracle") {
  SplitMix64 rng(17);
  for (int t = 0; t < 300; ++t) {
    const auto flags = random_flags(rng, 50);
    int tp = 0;
    for (bool f : flags) tp += f;
    const int n_gt = tp + static_cast<int>(rng.next_int(0, 20));
    if (n_gt == 0) continue;
    const double got = average_precision(pr_curve(outcomes_from(flags), n_gt));
    const double want = oracle::direct_ap(flags, n_gt);
    CHECK(got == Catch::Approx(want).margin(1e-12));
    CHECK(got >= 0.0);
    CHECK(got <= 1.0);
  }
}

TEST_CASE("mean average precision") {
  auto make = [](std::optional<double> ap, int n_gt) {
    ClassEval e;
    e.ap = ap;
    e.n_gt = n_gt;
    return e;
  };
  CHECK(mean_average_precision({make(1.0, 3), make(0.5, 3)}) == 0.75);
  CHECK(mean_average_precision({make(0.9711, 5)}) == 0.9711);
  CHECK_THROWS_AS(mean_average_precision({}), NoClasses);

  SECTION("classes without ground truth are excluded") {
    CHECK(mean_average_precision(
              {make(1.0, 3), make(std::nullopt, 0), make(0.5, 2)}) == 0.75);
  }
  SECTION("identical APs average to themselves exactly") {
    CHECK(mean_average_precision({make(0.7, 1), make(0.7, 1), make(0.7, 1)}) ==
          0.7);
  }
}

TEST_CASE("tp/fp tallies") {
  auto [tp, fp] = tp_fp_counts(outcomes_from({true, false, true}));
  CHECK(tp == 2);
  CHECK(fp == 1);
  auto [tp0, fp0] = tp_fp_counts({});
  CHECK(tp0 == 0);
  CHECK(fp0 == 0);
}

TEST_CASE("log-average miss rate") {
  SECTION("all ground truth found, zero false positives") {
    const auto v = log_average_miss_rate(outcomes_from({true, true}), 2, 4);
    REQUIRE(v.has_value());
    CHECK(*v == kLamrFloor);
  }
  SECTION("no true positive pins the miss rate at 1") {
    const auto v = log_average_miss_rate(outcomes_from({false, false}), 3, 4);
    REQUIRE(v.has_value());
    CHECK(*v == 1.0);
  }
  SECTION("undefined without ground truth") {
    CHECK_FALSE(log_average_miss_rate(outcomes_from({false}), 0, 4).has_value());
  }
  SECTION("mixed fixtures match the direct recomputation") {
    SplitMix64 rng(29);
    for (int t = 0; t < 200; ++t) {
      const auto flags = random_flags(rng, 40);
      int tp = 0;
      for (bool f : flags) tp += f;
      const int n_gt = tp + static_cast<int>(rng.next_int(0, 10));
      if (n_gt == 0) continue;
      const int n_images = static_cast<int>(rng.next_int(1, 20));
      const auto got =
          log_average_miss_rate(outcomes_from(flags), n_gt, n_images);
      REQUIRE(got.has_value());
      CHECK(*got == Catch::Approx(oracle::direct_lamr(flags, n_gt, n_images))
                        .margin(1e-9));
      CHECK(*got >= kLamrFloor);
      CHECK(*got <= 1.0);
    }
  }
}

TEST_CASE("iou_sweep report shape and oracle agreement") {
  const LabelMap labels = parse_labelmap("a\nb\nc\n");
  SplitMix64 rng(404);

  GtByImage gts;
  std::vector<Detection> dets;
  for (int i = 0; i < 6; ++i) {
    const std::string id = "im" + std::to_string(i);
    const int n = static_cast<int>(rng.next_int(1, 4));
    for (int g = 0; g < n; ++g) {
      const int cls = static_cast<int>(rng.next_int(0, 2));
      const BoundingBox box = testutil::random_box(rng, 40);
      gts[id].push_back({cls, box, false});
      if (rng.next_double() < 0.8) {
        BoundingBox jit = box;
        jit.xmax += static_cast<int>(rng.next_int(0, 6));
        dets.push_back({id, cls, testutil::random_conf(rng), jit});
      }
      if (rng.next_double() < 0.3)
        dets.push_back({id, cls, testutil::random_conf(rng),
                        testutil::random_box(rng, 40)});
    }
  }

  std::vector<double> thresholds;
  for (int k = 0; k < 9; ++k) thresholds.push_back(0.55 + 0.05 * k);
  const auto report = iou_sweep(dets, gts, labels, 0.5, thresholds, false, 6);

  CHECK(report.sweep.size() == 9);  // Table-shaped: 0.55 .. 0.95
  CHECK(report.classes.size() == 3);
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(report.sweep[i].threshold == Catch::Approx(0.55 + 0.05 * i));
    const double want =
        oracle::reference_map(dets, gts, labels.size(), report.sweep[i].threshold);
    CHECK(report.sweep[i].map == Catch::Approx(want).margin(1e-9));
  }
  CHECK(report.map ==
        Catch::Approx(oracle::reference_map(dets, gts, labels.size(), 0.5))
            .margin(1e-9));

  SECTION("non-increasing thresholds are rejected") {
    CHECK_THROWS_AS(iou_sweep(dets, gts, labels, 0.5, {0.6, 0.6}, false, 6),
                    Error);
  }
  SECTION("perfect detections give mAP 1 everywhere") {
    std::vector<Detection> perfect;
    for (const auto& [id, objs] : gts)
      for (const auto& o : objs)
        perfect.push_back({id, o.class_id, 1.0, o.box});
    const auto r = iou_sweep(perfect, gts, labels, 0.5, thresholds, false, 6);
    CHECK(r.map == 1.0);
    for (const auto& row : r.sweep) CHECK(row.map == 1.0);
  }
}

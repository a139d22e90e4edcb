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
#include <cstdio>
#include <string>
#include <vector>

#include "detkit/metrics.hpp"

namespace detkit {

namespace chart_detail {

constexpr int kBarWidth = 46;
constexpr int kGroupGap = 28;
constexpr int kPlotHeight = 240;
constexpr int kMarginLeft = 56;
constexpr int kMarginTop = 48;
constexpr int kMarginBottom = 64;

inline std::string fmt(double v, const char* spec = "%.2f") {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

inline std::string xml_text(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Bar {
  double value = 0.0;      // already scaled to [0, 1] of the y axis
  std::string value_text;  // printed above the bar
  std::string color = "#4878cf";
};

struct Group {
  std::string label;  // printed below the group
  std::vector<Bar> bars;
};

// One fixed-layout grouped bar chart; everything is emitted in a fixed
// order with fixed formatting so identical reports give identical bytes.
inline std::string bar_chart(const std::string& title,
                             const std::vector<Group>& groups) {
  int bars_per_group = 1;
  for (const auto& g : groups)
    bars_per_group = std::max(bars_per_group, static_cast<int>(g.bars.size()));
  const int group_width = bars_per_group * kBarWidth + kGroupGap;
  const int width =
      kMarginLeft + std::max(1, static_cast<int>(groups.size())) * group_width + 24;
  const int height = kMarginTop + kPlotHeight + kMarginBottom;
  const int baseline = kMarginTop + kPlotHeight;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + std::to_string(width / 2) +
         "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
         xml_text(title) + "</text>\n";
  // y axis with 0/0.5/1 gridlines
  for (int tick = 0; tick <= 2; ++tick) {
    const int y = baseline - tick * kPlotHeight / 2;
    svg += "<line x1=\"" + std::to_string(kMarginLeft) + "\" y1=\"" +
           std::to_string(y) + "\" x2=\"" + std::to_string(width - 16) +
           "\" y2=\"" + std::to_string(y) + "\" stroke=\"#cccccc\"/>\n";
  }
  svg += "<line x1=\"" + std::to_string(kMarginLeft) + "\" y1=\"" +
         std::to_string(kMarginTop) + "\" x2=\"" + std::to_string(kMarginLeft) +
         "\" y2=\"" + std::to_string(baseline) + "\" stroke=\"black\"/>\n";

  for (std::size_t g = 0; g < groups.size(); ++g) {
    const int gx = kMarginLeft + static_cast<int>(g) * group_width + kGroupGap / 2;
    for (std::size_t b = 0; b < groups[g].bars.size(); ++b) {
      const Bar& bar = groups[g].bars[b];
      const double clamped = std::clamp(bar.value, 0.0, 1.0);
      const int h = static_cast<int>(clamped * kPlotHeight + 0.5);
      const int x = gx + static_cast<int>(b) * kBarWidth;
      svg += "<rect x=\"" + std::to_string(x) + "\" y=\"" +
             std::to_string(baseline - h) + "\" width=\"" +
             std::to_string(kBarWidth - 8) + "\" height=\"" + std::to_string(h) +
             "\" fill=\"" + bar.color + "\"/>\n";
      svg += "<text x=\"" + std::to_string(x + (kBarWidth - 8) / 2) +
             "\" y=\"" + std::to_string(baseline - h - 6) +
             "\" text-anchor=\"middle\">" + xml_text(bar.value_text) +
             "</text>\n";
    }
    const int center = gx + static_cast<int>(groups[g].bars.size()) * kBarWidth / 2 - 4;
    svg += "<text x=\"" + std::to_string(center) + "\" y=\"" +
           std::to_string(baseline + 18) + "\" text-anchor=\"middle\">" +
           xml_text(groups[g].label) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace chart_detail

// Per-class AP bars, percent labels.
inline std::string chart_class_ap(const EvalReport& report) {
  std::vector<chart_detail::Group> groups;
  for (const auto& c : report.classes) {
    chart_detail::Bar bar;
    bar.value = c.ap.value_or(0.0);
    bar.value_text = c.ap ? chart_detail::fmt(*c.ap * 100.0) + "%" : "n/a";
    groups.push_back({c.name, {bar}});
  }
  return chart_detail::bar_chart("Average precision per class", groups);
}

// Grouped TP/FP counts per class.
inline std::string chart_tp_fp(const EvalReport& report) {
  int peak = 1;
  for (const auto& c : report.classes) peak = std::max({peak, c.tp, c.fp});
  std::vector<chart_detail::Group> groups;
  for (const auto& c : report.classes) {
    chart_detail::Bar tp{static_cast<double>(c.tp) / peak,
                         std::to_string(c.tp), "#3f9b55"};
    chart_detail::Bar fp{static_cast<double>(c.fp) / peak,
                         std::to_string(c.fp), "#c44e52"};
    groups.push_back({c.name, {tp, fp}});
  }
  return chart_detail::bar_chart("True and false positives per class", groups);
}

// Per-class log-average miss rate; floor-clamped values show as 0.00.
inline std::string chart_lamr(const EvalReport& report) {
  std::vector<chart_detail::Group> groups;
  for (const auto& c : report.classes) {
    chart_detail::Bar bar;
    bar.color = "#c44e52";
    bar.value = c.lamr.value_or(0.0);
    bar.value_text = c.lamr ? chart_detail::fmt(*c.lamr) : "n/a";
    groups.push_back({c.name, {bar}});
  }
  return chart_detail::bar_chart("Log-average miss rate per class", groups);
}

}  // namespace detkit

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

#include <cstdio>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "detkit/errors.hpp"
#include "detkit/metrics.hpp"

namespace detkit {

namespace report_detail {

inline std::string ratio6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline std::string opt_ratio6(const std::optional<double>& v) {
  return v ? ratio6(*v) : std::string("null");
}

inline std::string json_string(const std::string& s) {
  return nlohmann::json(s).dump();
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace report_detail

// Hand-emitted so that key order and number formatting are fixed; equal
// reports always serialize to identical bytes. Ratios carry 6 fractional
// digits. A null "ap"/"lamr" marks a class with no ground truth, which
// is excluded from "map".
inline std::string write_report(const EvalReport& report) {
  using namespace report_detail;
  std::string out = "{\n";
  out += "  \"iou_threshold\": " + ratio6(report.iou_threshold) + ",\n";
  out += "  \"classes\": [\n";
  for (std::size_t i = 0; i < report.classes.size(); ++i) {
    const auto& c = report.classes[i];
    out += "    { \"name\": " + json_string(c.name) +
           ", \"ap\": " + opt_ratio6(c.ap) + ", \"tp\": " + std::to_string(c.tp) +
           ", \"fp\": " + std::to_string(c.fp) +
           ", \"n_gt\": " + std::to_string(c.n_gt) +
           ", \"lamr\": " + opt_ratio6(c.lamr) + " }";
    out += i + 1 < report.classes.size() ? ",\n" : "\n";
  }
  out += "  ],\n";
  out += "  \"map\": " + ratio6(report.map) + ",\n";
  out += "  \"sweep\": [\n";
  for (std::size_t i = 0; i < report.sweep.size(); ++i) {
    out += "    { \"threshold\": " + ratio6(report.sweep[i].threshold) +
           ", \"map\": " + ratio6(report.sweep[i].map) + " }";
    out += i + 1 < report.sweep.size() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

inline EvalReport parse_report(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("bad report JSON: ") + e.what());
  }
  try {
    EvalReport report;
    report.iou_threshold = doc.at("iou_threshold").get<double>();
    report.map = doc.at("map").get<double>();
    int class_id = 0;
    for (const auto& c : doc.at("classes")) {
      ClassEval e;
      e.class_id = class_id++;
      e.name = c.at("name").get<std::string>();
      if (!c.at("ap").is_null()) e.ap = c.at("ap").get<double>();
      e.tp = c.at("tp").get<int>();
      e.fp = c.at("fp").get<int>();
      e.n_gt = c.at("n_gt").get<int>();
      if (!c.at("lamr").is_null()) e.lamr = c.at("lamr").get<double>();
      report.classes.push_back(std::move(e));
    }
    for (const auto& s : doc.at("sweep"))
      report.sweep.push_back(
          {s.at("threshold").get<double>(), s.at("map").get<double>()});
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad report JSON: ") + e.what());
  }
}

// One row per class, then one row per sweep threshold. Sweep thresholds
// are printed with two decimals.
inline std::string report_to_csv(const EvalReport& report) {
  using namespace report_detail;
  std::string out = "class,ap,tp,fp,n_gt,lamr\n";
  for (const auto& c : report.classes) {
    out += csv_field(c.name) + ',' + (c.ap ? ratio6(*c.ap) : std::string()) +
           ',' + std::to_string(c.tp) + ',' + std::to_string(c.fp) + ',' +
           std::to_string(c.n_gt) + ',' +
           (c.lamr ? ratio6(*c.lamr) : std::string()) + '\n';
  }
  out += "threshold,map\n";
  char thr[32];
  for (const auto& s : report.sweep) {
    std::snprintf(thr, sizeof thr, "%.2f", s.threshold);
    out += std::string(thr) + ',' + ratio6(s.map) + '\n';
  }
  return out;
}

}  // namespace detkit

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

#include <charconv>
#include <sstream>
#include <string>
#include <vector>

#include "detkit/annotations.hpp"
#include "detkit/errors.hpp"
#include "detkit/labelmap.hpp"

namespace detkit {

namespace detfile_detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

inline int parse_coord(const std::string& tok, std::size_t line_no) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("non-integer coordinate '" + tok + "'", line_no);
  return value;
}

inline double parse_conf(const std::string& tok, std::size_t line_no) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("non-numeric confidence '" + tok + "'", line_no);
  if (value < 0.0 || value > 1.0)
    throw ParseError("confidence out of [0,1]: " + tok, line_no);
  return value;
}

inline BoundingBox parse_box_tail(const std::vector<std::string>& tokens,
                                  std::size_t first, std::size_t line_no) {
  BoundingBox b{parse_coord(tokens[first], line_no),
                parse_coord(tokens[first + 1], line_no),
                parse_coord(tokens[first + 2], line_no),
                parse_coord(tokens[first + 3], line_no)};
  if (!b.valid()) throw ParseError("invalid box coordinates", line_no);
  return b;
}

inline std::string join_name(const std::vector<std::string>& tokens,
                             std::size_t count, std::size_t line_no) {
  if (count == 0) throw ParseError("missing class name", line_no);
  std::string name = tokens[0];
  for (std::size_t i = 1; i < count; ++i) {
    name += ' ';
    name += tokens[i];
  }
  return name;
}

}  // namespace detfile_detail

// Ground-truth line: <class name> <xmin> <ymin> <xmax> <ymax> [difficult]
// The numeric tail (plus the optional literal "difficult") is consumed
// right to left; the remaining tokens form the class name, which may
// contain spaces ("10 Naira").
inline std::vector<GroundTruthObject> parse_gt_file(const std::string& text,
                                                    const std::string& image_id,
                                                    const LabelMap& labels) {
  (void)image_id;
  using namespace detfile_detail;
  std::vector<GroundTruthObject> objects;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    bool difficult = false;
    if (tokens.back() == "difficult") {
      difficult = true;
      tokens.pop_back();
    }
    if (tokens.size() < 5)
      throw ParseError("expected <class> <xmin> <ymin> <xmax> <ymax>", line_no);
    const std::size_t first_coord = tokens.size() - 4;
    const BoundingBox box = parse_box_tail(tokens, first_coord, line_no);
    const std::string name = join_name(tokens, first_coord, line_no);
    const auto id = labels.find(name);
    if (!id) throw ParseError("unknown class '" + name + "'", line_no);
    objects.push_back({*id, box, difficult});
  }
  return objects;
}

// Detection line: <class name> <confidence> <xmin> <ymin> <xmax> <ymax>
inline std::vector<Detection> parse_det_file(const std::string& text,
                                             const std::string& image_id,
                                             const LabelMap& labels) {
  using namespace detfile_detail;
  std::vector<Detection> dets;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() < 6)
      throw ParseError("expected <class> <conf> <xmin> <ymin> <xmax> <ymax>",
                       line_no);
    const std::size_t first_coord = tokens.size() - 4;
    const BoundingBox box = parse_box_tail(tokens, first_coord, line_no);
    const double conf = parse_conf(tokens[first_coord - 1], line_no);
    const std::string name = join_name(tokens, first_coord - 1, line_no);
    const auto id = labels.find(name);
    if (!id) throw ParseError("unknown class '" + name + "'", line_no);
    dets.push_back({image_id, *id, conf, box});
  }
  return dets;
}

inline std::string write_gt_file(const std::vector<GroundTruthObject>& objects,
                                 const LabelMap& labels) {
  std::string out;
  for (const auto& o : objects) {
    out += labels.name(o.class_id);
    out += ' ' + std::to_string(o.box.xmin) + ' ' + std::to_string(o.box.ymin) +
           ' ' + std::to_string(o.box.xmax) + ' ' + std::to_string(o.box.ymax);
    if (o.difficult) out += " difficult";
    out += '\n';
  }
  return out;
}

inline std::string write_det_file(const std::vector<Detection>& dets,
                                  const LabelMap& labels) {
  std::string out;
  char conf[32];
  for (const auto& d : dets) {
    std::snprintf(conf, sizeof conf, "%.6f", d.confidence);
    out += labels.name(d.class_id);
    out += ' ';
    out += conf;
    out += ' ' + std::to_string(d.box.xmin) + ' ' + std::to_string(d.box.ymin) +
           ' ' + std::to_string(d.box.xmax) + ' ' + std::to_string(d.box.ymax);
    out += '\n';
  }
  return out;
}

}  // namespace detkit

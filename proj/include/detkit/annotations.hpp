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

#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "detkit/errors.hpp"
#include "detkit/geometry.hpp"
#include "detkit/labelmap.hpp"

namespace detkit {

struct GroundTruthObject {
  int class_id = 0;
  BoundingBox box;
  bool difficult = false;

  friend bool operator==(const GroundTruthObject&,
                         const GroundTruthObject&) = default;
};

struct ImageAnnotation {
  std::string image_id;  // filename stem
  int width = 0;
  int height = 0;
  int depth = 3;
  std::vector<GroundTruthObject> objects;

  friend bool operator==(const ImageAnnotation&,
                         const ImageAnnotation&) = default;
};

struct Detection {
  std::string image_id;
  int class_id = 0;
  double confidence = 0.0;
  BoundingBox box;

  friend bool operator==(const Detection&, const Detection&) = default;
};

namespace voc_detail {

struct RawObject {
  std::string name;
  BoundingBox box;
  bool difficult = false;
};

struct RawAnnotation {
  std::string image_id;
  int width = 0;
  int height = 0;
  int depth = 3;
  std::vector<RawObject> objects;
};

inline std::string stem_of(const std::string& filename) {
  const auto slash = filename.find_last_of("/\\");
  const std::string base =
      slash == std::string::npos ? filename : filename.substr(slash + 1);
  const auto dot = base.find_last_of('.');
  return dot == std::string::npos || dot == 0 ? base : base.substr(0, dot);
}

inline int get_int(const boost::property_tree::ptree& pt,
                   const std::string& path) {
  auto v = pt.get_optional<std::string>(path);
  if (!v) throw ParseError("missing element <" + path + ">");
  try {
    std::size_t pos = 0;
    const int n = std::stoi(trim(*v), &pos);
    if (pos != trim(*v).size()) throw std::invalid_argument(*v);
    return n;
  } catch (const std::exception&) {
    throw ParseError("non-integer value in <" + path + ">: " + *v);
  }
}

inline RawAnnotation parse_raw(const std::string& xml) {
  namespace pt = boost::property_tree;
  pt::ptree doc;
  std::istringstream in(xml);
  try {
    pt::read_xml(in, doc);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError(e.message(), e.line());
  }
  auto root = doc.get_child_optional("annotation");
  if (!root) throw ParseError("missing <annotation> root element");

  RawAnnotation ann;
  ann.image_id = stem_of(trim(root->get<std::string>("filename", "")));
  if (ann.image_id.empty()) throw ParseError("missing or empty <filename>");
  ann.width = get_int(*root, "size.width");
  ann.height = get_int(*root, "size.height");
  ann.depth = get_int(*root, "size.depth");
  if (ann.width < 1 || ann.height < 1)
    throw ParseError("non-positive image dimensions");

  for (const auto& [key, node] : *root) {
    if (key != "object") continue;
    RawObject obj;
    obj.name = trim(node.get<std::string>("name", ""));
    if (obj.name.empty()) throw ParseError("object with missing <name>");
    obj.difficult = node.get<int>("difficult", 0) != 0;
    obj.box.xmin = get_int(node, "bndbox.xmin");
    obj.box.ymin = get_int(node, "bndbox.ymin");
    obj.box.xmax = get_int(node, "bndbox.xmax");
    obj.box.ymax = get_int(node, "bndbox.ymax");
    if (!obj.box.valid() || obj.box.xmax >= ann.width ||
        obj.box.ymax >= ann.height)
      throw InvalidBox("box (" + std::to_string(obj.box.xmin) + "," +
                       std::to_string(obj.box.ymin) + "," +
                       std::to_string(obj.box.xmax) + "," +
                       std::to_string(obj.box.ymax) +
                       ") invalid for image " + ann.image_id);
    ann.objects.push_back(std::move(obj));
  }
  return ann;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace voc_detail

inline ImageAnnotation parse_voc_annotation(const std::string& xml,
                                            const LabelMap& labels) {
  const auto raw = voc_detail::parse_raw(xml);
  ImageAnnotation ann;
  ann.image_id = raw.image_id;
  ann.width = raw.width;
  ann.height = raw.height;
  ann.depth = raw.depth;
  for (const auto& obj : raw.objects) {
    ann.objects.push_back(
        {labels.require(obj.name), obj.box, obj.difficult});
  }
  return ann;
}

// Canonical emission: parse(write(a)) reproduces `a` field for field.
inline std::string write_voc_annotation(const ImageAnnotation& a,
                                        const LabelMap& labels) {
  using voc_detail::xml_escape;
  std::ostringstream out;
  out << "<annotation>\n"
      << "  <filename>" << xml_escape(a.image_id) << ".jpg</filename>\n"
      << "  <size>\n"
      << "    <width>" << a.width << "</width>\n"
      << "    <height>" << a.height << "</height>\n"
      << "    <depth>" << a.depth << "</depth>\n"
      << "  </size>\n";
  for (const auto& obj : a.objects) {
    out << "  <object>\n"
        << "    <name>" << xml_escape(labels.name(obj.class_id)) << "</name>\n"
        << "    <difficult>" << (obj.difficult ? 1 : 0) << "</difficult>\n"
        << "    <bndbox>\n"
        << "      <xmin>" << obj.box.xmin << "</xmin>\n"
        << "      <ymin>" << obj.box.ymin << "</ymin>\n"
        << "      <xmax>" << obj.box.xmax << "</xmax>\n"
        << "      <ymax>" << obj.box.ymax << "</ymax>\n"
        << "    </bndbox>\n"
        << "  </object>\n";
  }
  out << "</annotation>\n";
  return out.str();
}

}  // namespace detkit

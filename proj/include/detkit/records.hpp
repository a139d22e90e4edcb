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

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "detkit/annotations.hpp"
#include "detkit/errors.hpp"

namespace detkit {

enum class ImageEncoding { png, jpeg };

inline const char* to_string(ImageEncoding e) {
  return e == ImageEncoding::png ? "png" : "jpeg";
}

struct RecordEntry {
  ImageAnnotation annotation;
  std::vector<std::uint8_t> image_bytes;  // encoded, not raw pixels
  ImageEncoding encoding = ImageEncoding::png;

  friend bool operator==(const RecordEntry&, const RecordEntry&) = default;
};

struct RecordFile {
  std::vector<RecordEntry> entries;

  friend bool operator==(const RecordFile&, const RecordFile&) = default;
};

// DREC container:
//   bytes 0-3  ASCII "DREC"
//   byte  4    version 0x01
//   then zero or more records:
//     u32le meta_len, meta JSON, u32le img_len, encoded image bytes
// EOF must land exactly on a record boundary.
namespace drec_detail {

constexpr char kMagic[4] = {'D', 'R', 'E', 'C'};
constexpr std::uint8_t kVersion = 0x01;

inline void put_u32le(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xff),
                     static_cast<char>((v >> 8) & 0xff),
                     static_cast<char>((v >> 16) & 0xff),
                     static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

inline bool get_u32le(std::istream& in, std::uint32_t& v) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (in.gcount() != 4) return false;
  v = static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
      (static_cast<std::uint32_t>(b[2]) << 16) |
      (static_cast<std::uint32_t>(b[3]) << 24);
  return true;
}

inline nlohmann::json meta_json(const RecordEntry& e) {
  nlohmann::json objects = nlohmann::json::array();
  for (const auto& o : e.annotation.objects) {
    objects.push_back({{"class_id", o.class_id},
                       {"xmin", o.box.xmin},
                       {"ymin", o.box.ymin},
                       {"xmax", o.box.xmax},
                       {"ymax", o.box.ymax},
                       {"difficult", o.difficult}});
  }
  return {{"image_id", e.annotation.image_id},
          {"width", e.annotation.width},
          {"height", e.annotation.height},
          {"depth", e.annotation.depth},
          {"encoding", to_string(e.encoding)},
          {"objects", objects}};
}

inline RecordEntry entry_from_meta(const nlohmann::json& meta,
                                   std::vector<std::uint8_t> image_bytes,
                                   std::uint64_t offset) {
  try {
    RecordEntry e;
    e.annotation.image_id = meta.at("image_id").get<std::string>();
    e.annotation.width = meta.at("width").get<int>();
    e.annotation.height = meta.at("height").get<int>();
    e.annotation.depth = meta.at("depth").get<int>();
    const auto enc = meta.at("encoding").get<std::string>();
    if (enc == "png")
      e.encoding = ImageEncoding::png;
    else if (enc == "jpeg")
      e.encoding = ImageEncoding::jpeg;
    else
      throw ParseError("unknown encoding tag: " + enc);
    for (const auto& o : meta.at("objects")) {
      e.annotation.objects.push_back(
          {o.at("class_id").get<int>(),
           {o.at("xmin").get<int>(), o.at("ymin").get<int>(),
            o.at("xmax").get<int>(), o.at("ymax").get<int>()},
           o.at("difficult").get<bool>()});
    }
    e.image_bytes = std::move(image_bytes);
    return e;
  } catch (const nlohmann::json::exception& err) {
    throw ParseError("bad record metadata at offset " + std::to_string(offset) +
                     ": " + err.what());
  }
}

}  // namespace drec_detail

inline void write_records(const RecordFile& records, std::ostream& out) {
  using namespace drec_detail;
  out.write(kMagic, 4);
  out.put(static_cast<char>(kVersion));
  for (const auto& e : records.entries) {
    // nlohmann keeps object keys sorted, so the bytes are deterministic.
    const std::string meta = meta_json(e).dump();
    put_u32le(out, static_cast<std::uint32_t>(meta.size()));
    out.write(meta.data(), static_cast<std::streamsize>(meta.size()));
    put_u32le(out, static_cast<std::uint32_t>(e.image_bytes.size()));
    out.write(reinterpret_cast<const char*>(e.image_bytes.data()),
              static_cast<std::streamsize>(e.image_bytes.size()));
  }
}

inline RecordFile read_records(std::istream& in) {
  using namespace drec_detail;
  char magic[4];
  in.read(magic, 4);
  char version = 0;
  in.get(version);
  if (in.gcount() != 1 || !std::equal(magic, magic + 4, kMagic) ||
      static_cast<std::uint8_t>(version) != kVersion)
    throw NotARecordFile("bad DREC header");

  RecordFile records;
  std::uint64_t offset = 5;
  for (;;) {
    std::uint32_t meta_len = 0;
    if (!get_u32le(in, meta_len)) {
      if (in.gcount() == 0 && in.eof()) break;  // clean boundary
      throw TruncatedRecord(offset);
    }
    std::string meta(meta_len, '\0');
    in.read(meta.data(), meta_len);
    if (in.gcount() != static_cast<std::streamsize>(meta_len))
      throw TruncatedRecord(offset);
    std::uint32_t img_len = 0;
    if (!get_u32le(in, img_len)) throw TruncatedRecord(offset);
    std::vector<std::uint8_t> image_bytes(img_len);
    in.read(reinterpret_cast<char*>(image_bytes.data()), img_len);
    if (in.gcount() != static_cast<std::streamsize>(img_len))
      throw TruncatedRecord(offset);

    nlohmann::json meta_doc;
    try {
      meta_doc = nlohmann::json::parse(meta);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("bad record metadata at offset " +
                       std::to_string(offset) + ": " + e.what());
    }
    records.entries.push_back(
        entry_from_meta(meta_doc, std::move(image_bytes), offset));
    offset += 8 + meta_len + img_len;
  }
  return records;
}

}  // namespace detkit

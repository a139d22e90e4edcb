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
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "detkit/errors.hpp"
#include "detkit/labelmap.hpp"

namespace detkit {

// Class label -> audio file. Complete by construction: one entry per
// label-map class.
struct AudioManifest {
  std::map<std::string, std::filesystem::path> entries;

  const std::filesystem::path& path_for(const std::string& label) const {
    auto it = entries.find(label);
    if (it == entries.end()) throw UnknownClass(label);
    return it->second;
  }
};

inline std::string audio_filename(const std::string& label) {
  std::string name = label;
  for (auto& c : name)
    if (c == ' ') c = '_';
  return name + ".mp3";
}

// Resolves "<class name, spaces underscored>.mp3" for every class and
// requires every file to exist.
inline AudioManifest load_manifest(const std::filesystem::path& dir,
                                   const LabelMap& labels) {
  namespace fs = std::filesystem;
  AudioManifest manifest;
  std::string missing;
  for (const auto& label : labels.classes()) {
    const fs::path file = dir / audio_filename(label);
    if (!fs::is_regular_file(file)) {
      if (!missing.empty()) missing += ", ";
      missing += label;
      continue;
    }
    manifest.entries.emplace(label, file);
  }
  if (!missing.empty()) throw IncompleteManifest(missing);
  return manifest;
}

struct DetectionEvent {
  std::int64_t t_ms = 0;
  std::string label;
  double confidence = 0.0;
};

struct DispatchPolicy {
  double min_confidence = 0.5;
  std::int64_t cooldown_ms = 2000;  // per class
};

struct PlaybackCommand {
  std::int64_t t_ms = 0;
  std::string label;
  std::filesystem::path path;

  friend bool operator==(const PlaybackCommand&,
                         const PlaybackCommand&) = default;
};

// An event emits a command iff its confidence clears the floor and no
// command for the same class was emitted within the preceding cooldown
// window. Per-class windows are independent.
inline std::vector<PlaybackCommand> dispatch(
    const std::vector<DetectionEvent>& events, const AudioManifest& manifest,
    const DispatchPolicy& policy) {
  std::vector<PlaybackCommand> commands;
  std::map<std::string, std::int64_t> last_emit;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (i > 0 && e.t_ms < events[i - 1].t_ms) throw NotMonotonic(i);
    if (e.confidence < policy.min_confidence) continue;
    const auto it = last_emit.find(e.label);
    if (it != last_emit.end() && e.t_ms - it->second < policy.cooldown_ms)
      continue;
    commands.push_back({e.t_ms, e.label, manifest.path_for(e.label)});
    last_emit[e.label] = e.t_ms;
  }
  return commands;
}

// JSON-lines event input: {"t_ms": int, "label": str, "conf": num}
inline std::vector<DetectionEvent> parse_events_jsonl(const std::string& text) {
  std::vector<DetectionEvent> events;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto doc = nlohmann::json::parse(line);
      DetectionEvent e;
      e.t_ms = doc.at("t_ms").get<std::int64_t>();
      e.label = doc.at("label").get<std::string>();
      e.confidence = doc.at("conf").get<double>();
      if (e.confidence < 0.0 || e.confidence > 1.0)
        throw ParseError("confidence out of [0,1]", line_no);
      events.push_back(std::move(e));
    } catch (const nlohmann::json::exception& err) {
      throw ParseError(std::string("bad event: ") + err.what(), line_no);
    }
  }
  return events;
}

inline std::string write_commands_jsonl(
    const std::vector<PlaybackCommand>& commands) {
  std::string out;
  for (const auto& c : commands) {
    nlohmann::json doc{{"t_ms", c.t_ms},
                       {"label", c.label},
                       {"path", c.path.string()}};
    out += doc.dump();
    out += '\n';
  }
  return out;
}

}  // namespace detkit

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

#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "detkit/errors.hpp"

namespace detkit {

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Ordered class-name list; a class id is its 0-based position.
class LabelMap {
 public:
  LabelMap() = default;
  explicit LabelMap(std::vector<std::string> classes)
      : classes_(std::move(classes)) {
    for (std::size_t i = 0; i < classes_.size(); ++i) {
      if (trim(classes_[i]).empty()) throw EmptyLabelMap();
      if (!index_.emplace(classes_[i], static_cast<int>(i)).second)
        throw DuplicateClass(classes_[i]);
    }
    if (classes_.empty()) throw EmptyLabelMap();
  }

  int size() const { return static_cast<int>(classes_.size()); }
  const std::string& name(int id) const { return classes_.at(id); }
  const std::vector<std::string>& classes() const { return classes_; }

  std::optional<int> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  int require(const std::string& name) const {
    auto id = find(name);
    if (!id) throw UnknownClass(name);
    return *id;
  }

  friend bool operator==(const LabelMap& a, const LabelMap& b) {
    return a.classes_ == b.classes_;
  }

 private:
  std::vector<std::string> classes_;
  std::unordered_map<std::string, int> index_;
};

// One class per non-blank line, trimmed; line order defines the ids.
inline LabelMap parse_labelmap(const std::string& text) {
  std::vector<std::string> classes;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::string name = trim(line);
    if (!name.empty()) classes.push_back(std::move(name));
  }
  return LabelMap(std::move(classes));  // throws on duplicates / empty
}

inline std::string write_labelmap(const LabelMap& labels) {
  std::string out;
  for (const auto& c : labels.classes()) {
    out += c;
    out += '\n';
  }
  return out;
}

}  // namespace detkit

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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace detkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Text/XML input that cannot be understood; carries a 1-based line number
// when one is known (0 otherwise).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DuplicateClass : public Error {
 public:
  explicit DuplicateClass(const std::string& name)
      : Error("duplicate class name: " + name), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class EmptyLabelMap : public Error {
 public:
  EmptyLabelMap() : Error("label map contains no classes") {}
};

class UnknownClass : public Error {
 public:
  explicit UnknownClass(const std::string& name)
      : Error("unknown class name: " + name), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class InvalidBox : public Error {
 public:
  using Error::Error;
};

class NotARecordFile : public Error {
 public:
  using Error::Error;
};

class TruncatedRecord : public Error {
 public:
  explicit TruncatedRecord(std::uint64_t offset)
      : Error("truncated record at offset " + std::to_string(offset)),
        offset_(offset) {}
  std::uint64_t offset() const { return offset_; }

 private:
  std::uint64_t offset_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ClassMixture : public Error {
 public:
  ClassMixture() : Error("detections of mixed classes passed to match_class") {}
};

class NoClasses : public Error {
 public:
  NoClasses() : Error("mean over an empty class list") {}
};

class IncompleteManifest : public Error {
 public:
  explicit IncompleteManifest(const std::string& listing)
      : Error("audio manifest incomplete; missing: " + listing) {}
};

class NotMonotonic : public Error {
 public:
  explicit NotMonotonic(std::size_t index)
      : Error("event stream timestamp decreases at index " +
              std::to_string(index)),
        index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class IoFailure : public Error {
 public:
  using Error::Error;
};

class BadImage : public Error {
 public:
  explicit BadImage(const std::string& file)
      : Error("cannot decode image: " + file) {}
};

}  // namespace detkit

// Copyright 2026 The unitgrade Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace unitgrade {

/// Base of every error raised by the engine. `kind()` is a stable tag used in
/// API error bodies and CLI diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// A configuration document violates the task schema. `path()` addresses the
/// offending node, e.g. "test.predefined[0].data".
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& what)
      : Error("SchemaError", path.empty() ? what : path + ": " + what),
        path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class DslError : public Error {
 public:
  explicit DslError(const std::string& what) : Error("DslError", what) {}
};

class TupleError : public Error {
 public:
  explicit TupleError(const std::string& what) : Error("TupleError", what) {}
};

class UnsupportedLanguage : public Error {
 public:
  explicit UnsupportedLanguage(const std::string& language)
      : Error("UnsupportedLanguage", "unsupported language '" + language + "'") {}
};

class UnsupportedType : public Error {
 public:
  explicit UnsupportedType(const std::string& type)
      : Error("UnsupportedType", "unsupported task type '" + type + "'") {}
};

class MissingField : public Error {
 public:
  explicit MissingField(std::string field)
      : Error("MissingField", "missing field '" + field + "'"), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Sandbox could not be prepared or the child could not be spawned. Child
/// failures are reported through SandboxOutcome, never through this.
class SetupError : public Error {
 public:
  explicit SetupError(const std::string& what) : Error("SetupError", what) {}
};

/// The task itself is broken: teacher code failed while producing answers.
class TaskError : public Error {
 public:
  explicit TaskError(const std::string& what) : Error("TaskError", what) {}
};

class ResultFormatError : public Error {
 public:
  explicit ResultFormatError(const std::string& what) : Error("ResultFormatError", what) {}
};

class DuplicateId : public Error {
 public:
  explicit DuplicateId(const std::string& id)
      : Error("DuplicateId", "task '" + id + "' already exists") {}
};

class NotFound : public Error {
 public:
  explicit NotFound(const std::string& id) : Error("NotFound", "task '" + id + "' not found") {}
};

class CorruptPackage : public Error {
 public:
  explicit CorruptPackage(const std::string& what) : Error("CorruptPackage", what) {}
};

class SolutionLoadError : public Error {
 public:
  explicit SolutionLoadError(const std::string& what) : Error("SolutionLoadError", what) {}
};

}  // namespace unitgrade

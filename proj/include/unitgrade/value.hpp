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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace unitgrade {

/// Closed set of argument/return types a task signature may use.
enum class SemType { Int, Float, Bool, Str };

std::string_view to_string(SemType type) noexcept;
std::optional<SemType> sem_type_from_string(std::string_view tag) noexcept;

/// One concrete argument or answer. Canonical text form is produced by
/// render_value() and read back by parse_value().
class Value {
 public:
  using Storage = std::variant<std::int64_t, double, bool, std::string>;

  Value() : data_(std::int64_t{0}) {}
  static Value of_int(std::int64_t v) { return Value(Storage(std::in_place_index<0>, v)); }
  static Value of_float(double v) { return Value(Storage(std::in_place_index<1>, v)); }
  static Value of_bool(bool v) { return Value(Storage(std::in_place_index<2>, v)); }
  static Value of_str(std::string v) { return Value(Storage(std::in_place_index<3>, std::move(v))); }

  SemType type() const noexcept { return static_cast<SemType>(data_.index()); }

  std::int64_t as_int() const { return std::get<0>(data_); }
  double as_float() const { return std::get<1>(data_); }
  bool as_bool() const { return std::get<2>(data_); }
  const std::string& as_str() const { return std::get<3>(data_); }

  /// Structural equality; floats compare by bit-level identity of the
  /// canonical text (so NaN == NaN and -0.0 != 0.0).
  friend bool operator==(const Value& a, const Value& b);

 private:
  explicit Value(Storage s) : data_(std::move(s)) {}
  Storage data_;
};

/// int: decimal; float: shortest round-trip digits laid out like Python's
/// repr (fixed notation for exponents in [-4, 16), otherwise d.ddde±XX);
/// bool: true/false; str: double-quoted with \" \\ \n \t escapes.
std::string render_value(const Value& v);

/// Inverse of render_value for a known type. The text must be exactly one
/// value with no surrounding whitespace. Throws TupleError.
Value parse_value(std::string_view text, SemType type);

/// Float rendering on its own; exposed for the runner agreement fixture.
std::string render_float(double v);

/// Parse "(v1, v2, ...)" positionally against `types`. Whitespace around
/// elements is ignored. Throws TupleError.
std::vector<Value> parse_args_tuple(std::string_view text, std::span<const SemType> types);

/// "(" + rendered values joined by "," + ")"; the form used in feedback.
std::string render_args_tuple(std::span<const Value> values);

}  // namespace unitgrade

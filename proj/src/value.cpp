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

#include "unitgrade/value.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <system_error>

#include "unitgrade/errors.hpp"

namespace unitgrade {

std::string_view to_string(SemType type) noexcept {
  switch (type) {
    case SemType::Int:
      return "int";
    case SemType::Float:
      return "float";
    case SemType::Bool:
      return "bool";
    case SemType::Str:
      return "str";
  }
  return "int";
}

std::optional<SemType> sem_type_from_string(std::string_view tag) noexcept {
  if (tag == "int") return SemType::Int;
  if (tag == "float") return SemType::Float;
  if (tag == "bool") return SemType::Bool;
  if (tag == "str") return SemType::Str;
  return std::nullopt;
}

bool operator==(const Value& a, const Value& b) {
  if (a.data_.index() != b.data_.index()) return false;
  if (a.type() == SemType::Float) {
    double x = a.as_float(), y = b.as_float();
    if (std::isnan(x) || std::isnan(y)) return std::isnan(x) && std::isnan(y);
    return std::bit_cast<std::uint64_t>(x) == std::bit_cast<std::uint64_t>(y);
  }
  return a.data_ == b.data_;
}

std::string render_float(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";

  // Shortest round-trip digits in scientific form, e.g. "-1.2345e+02".
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
  std::string_view sci(buf, static_cast<std::size_t>(res.ptr - buf));

  std::string out;
  if (sci.front() == '-') {
    out.push_back('-');
    sci.remove_prefix(1);
  }
  auto epos = sci.find('e');
  std::string digits;
  for (char c : sci.substr(0, epos)) {
    if (c != '.') digits.push_back(c);
  }
  int exp10 = std::atoi(std::string(sci.substr(epos + 1)).c_str());
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();

  if (exp10 >= -4 && exp10 < 16) {
    if (exp10 >= 0) {
      auto int_len = static_cast<std::size_t>(exp10) + 1;
      if (digits.size() <= int_len) {
        out += digits;
        out.append(int_len - digits.size(), '0');
        out += ".0";
      } else {
        out += digits.substr(0, int_len);
        out.push_back('.');
        out += digits.substr(int_len);
      }
    } else {
      out += "0.";
      out.append(static_cast<std::size_t>(-exp10 - 1), '0');
      out += digits;
    }
    return out;
  }

  out.push_back(digits[0]);
  if (digits.size() > 1) {
    out.push_back('.');
    out += digits.substr(1);
  }
  out.push_back('e');
  out.push_back(exp10 < 0 ? '-' : '+');
  int mag = exp10 < 0 ? -exp10 : exp10;
  if (mag < 10) out.push_back('0');
  out += std::to_string(mag);
  return out;
}

std::string render_value(const Value& v) {
  switch (v.type()) {
    case SemType::Int:
      return std::to_string(v.as_int());
    case SemType::Float:
      return render_float(v.as_float());
    case SemType::Bool:
      return v.as_bool() ? "true" : "false";
    case SemType::Str: {
      std::string out = "\"";
      for (char c : v.as_str()) {
        switch (c) {
          case '"':
            out += "\\\"";
            break;
          case '\\':
            out += "\\\\";
            break;
          case '\n':
            out += "\\n";
            break;
          case '\t':
            out += "\\t";
            break;
          default:
            out.push_back(c);
        }
      }
      out.push_back('"');
      return out;
    }
  }
  return {};
}

namespace {

[[noreturn]] void bad_value(std::string_view text, SemType type) {
  throw TupleError("'" + std::string(text) + "' is not a valid " + std::string(to_string(type)));
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

Value parse_int(std::string_view text) {
  std::string_view body = text;
  if (!body.empty() && body.front() == '-') body.remove_prefix(1);
  if (body.empty()) bad_value(text, SemType::Int);
  for (char c : body) {
    if (c < '0' || c > '9') bad_value(text, SemType::Int);
  }
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw TupleError("integer '" + std::string(text) + "' out of 64-bit range");
  }
  return Value::of_int(v);
}

Value parse_float(std::string_view text) {
  if (text == "nan") return Value::of_float(std::nan(""));
  if (text == "inf") return Value::of_float(HUGE_VAL);
  if (text == "-inf") return Value::of_float(-HUGE_VAL);
  // from_chars also accepts spellings like "infinity" and hex-free forms we
  // do not emit; restrict to plain decimal syntax first.
  bool digit_seen = false;
  for (char c : text) {
    if (c >= '0' && c <= '9') {
      digit_seen = true;
    } else if (c != '-' && c != '+' && c != '.' && c != 'e' && c != 'E') {
      bad_value(text, SemType::Float);
    }
  }
  if (!digit_seen || text.front() == '+') bad_value(text, SemType::Float);
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ptr != text.data() + text.size()) bad_value(text, SemType::Float);
  if (ec == std::errc::result_out_of_range) {
    throw TupleError("float '" + std::string(text) + "' out of range");
  }
  if (ec != std::errc()) bad_value(text, SemType::Float);
  return Value::of_float(v);
}

Value parse_str(std::string_view text) {
  if (text.size() < 2 || text.front() != '"' || text.back() != '"') {
    bad_value(text, SemType::Str);
  }
  std::string out;
  auto body = text.substr(1, text.size() - 2);
  for (std::size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (c == '"') bad_value(text, SemType::Str);
    if (c != '\\') {
      out.push_back(c);
      continue;
    }
    if (++i == body.size()) bad_value(text, SemType::Str);
    switch (body[i]) {
      case '"':
        out.push_back('"');
        break;
      case '\\':
        out.push_back('\\');
        break;
      case 'n':
        out.push_back('\n');
        break;
      case 't':
        out.push_back('\t');
        break;
      default:
        throw TupleError("unknown escape '\\" + std::string(1, body[i]) + "' in " +
                         std::string(text));
    }
  }
  return Value::of_str(std::move(out));
}

}  // namespace

Value parse_value(std::string_view text, SemType type) {
  switch (type) {
    case SemType::Int:
      return parse_int(text);
    case SemType::Float:
      return parse_float(text);
    case SemType::Bool:
      if (text == "true") return Value::of_bool(true);
      if (text == "false") return Value::of_bool(false);
      bad_value(text, type);
    case SemType::Str:
      return parse_str(text);
  }
  bad_value(text, type);
}

std::vector<Value> parse_args_tuple(std::string_view text, std::span<const SemType> types) {
  auto t = trim(text);
  if (t.size() < 2 || t.front() != '(' || t.back() != ')') {
    throw TupleError("expected a parenthesized tuple, got '" + std::string(text) + "'");
  }
  auto inner = t.substr(1, t.size() - 2);

  // Split on commas outside string literals.
  std::vector<std::string_view> elems;
  if (!trim(inner).empty()) {
    std::size_t start = 0;
    bool in_str = false;
    for (std::size_t i = 0; i < inner.size(); ++i) {
      char c = inner[i];
      if (in_str) {
        if (c == '\\') {
          ++i;
        } else if (c == '"') {
          in_str = false;
        }
      } else if (c == '"') {
        in_str = true;
      } else if (c == '(' || c == ')') {
        throw TupleError("unbalanced parentheses in '" + std::string(text) + "'");
      } else if (c == ',') {
        elems.push_back(trim(inner.substr(start, i - start)));
        start = i + 1;
      }
    }
    if (in_str) throw TupleError("unterminated string in '" + std::string(text) + "'");
    elems.push_back(trim(inner.substr(start)));
  }

  if (elems.size() != types.size()) {
    throw TupleError("arity mismatch: got " + std::to_string(elems.size()) + " values, expected " +
                     std::to_string(types.size()));
  }
  std::vector<Value> out;
  out.reserve(elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i) {
    out.push_back(parse_value(elems[i], types[i]));
  }
  return out;
}

std::string render_args_tuple(std::span<const Value> values) {
  std::string out = "(";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out.push_back(',');
    out += render_value(values[i]);
  }
  out.push_back(')');
  return out;
}

}  // namespace unitgrade

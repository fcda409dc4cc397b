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

#include "unitgrade/testgen.hpp"

#include <cmath>

#include "unitgrade/errors.hpp"

namespace unitgrade {

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::string_view task_id, std::string_view submission_id,
                          std::optional<std::uint64_t> override_seed) noexcept {
  if (override_seed) return *override_seed;
  std::string key;
  key.reserve(task_id.size() + submission_id.size() + 1);
  key += task_id;
  key.push_back('\x1f');
  key += submission_id;
  return fnv1a64(key);
}

std::uint64_t SplitMix64::below(std::uint64_t span) noexcept {
  if (span == 0) return next();
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * span) >> 64);
}

Value sample(const GeneratorExpr& g, SplitMix64& rng) {
  struct Visitor {
    SplitMix64& rng;

    Value operator()(const IntRange& r) const {
      // Wraps to 0 for the full int64 range, which below() treats as 2^64.
      auto span = static_cast<std::uint64_t>(r.hi) - static_cast<std::uint64_t>(r.lo) + 1;
      return Value::of_int(
          static_cast<std::int64_t>(static_cast<std::uint64_t>(r.lo) + rng.below(span)));
    }
    Value operator()(const FloatRange& r) const {
      double u = rng.unit();
      if (r.lo == r.hi) return Value::of_float(r.lo);
      double v = r.lo + u * (r.hi - r.lo);
      if (v >= r.hi) v = std::nextafter(r.hi, r.lo);
      return Value::of_float(v);
    }
    Value operator()(const BoolCoin&) const { return Value::of_bool((rng.next() >> 63) != 0); }
    Value operator()(const StrLength& r) const {
      auto len = r.min_len + rng.below(r.max_len - r.min_len + 1);
      std::string s(len, 'a');
      for (auto& c : s) c = static_cast<char>('a' + rng.below(26));
      return Value::of_str(std::move(s));
    }
  };
  return std::visit(Visitor{rng}, g);
}

TestSuite generate_suite(const TestPlan& plan, const FunctionSpec& spec, std::uint64_t seed) {
  TestSuite suite;
  suite.seed = seed;
  suite.cases.reserve(plan.total());
  for (std::size_t i = 0; i < plan.predefined.size(); ++i) {
    suite.cases.push_back(TestCase{suite.cases.size(), plan.predefined[i].args, i});
  }
  if (plan.random) {
    SplitMix64 rng(seed);
    for (std::uint64_t k = 0; k < plan.random->n; ++k) {
      TestCase tc{suite.cases.size(), {}, std::nullopt};
      tc.args.reserve(spec.args.size());
      for (const auto& g : plan.random->args) tc.args.push_back(sample(g, rng));
      suite.cases.push_back(std::move(tc));
    }
  }
  return suite;
}

namespace {

std::string csv_field(const Value& v, bool sole_field) {
  std::string text = v.type() == SemType::Str ? v.as_str() : render_value(v);
  bool quote = text.find_first_of(",\"\n\r") != std::string::npos || (sole_field && text.empty());
  if (!quote) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string write_suite_csv(const TestSuite& suite) {
  std::string out;
  for (const auto& tc : suite.cases) {
    for (std::size_t j = 0; j < tc.args.size(); ++j) {
      if (j) out.push_back(',');
      out += csv_field(tc.args[j], tc.args.size() == 1);
    }
    out.push_back('\n');
  }
  return out;
}

std::vector<std::vector<Value>> parse_suite_csv(std::string_view csv,
                                                std::span<const SemType> types) {
  std::vector<std::vector<Value>> rows;
  std::size_t i = 0;
  while (i < csv.size()) {
    std::vector<std::string> fields;
    std::string field;
    bool row_done = false;
    bool quoted = false;
    while (!row_done) {
      if (i < csv.size() && csv[i] == '"') {
        quoted = true;
        ++i;
        while (true) {
          if (i >= csv.size()) throw TupleError("unterminated quoted CSV field");
          if (csv[i] == '"') {
            if (i + 1 < csv.size() && csv[i + 1] == '"') {
              field.push_back('"');
              i += 2;
              continue;
            }
            ++i;
            break;
          }
          field.push_back(csv[i++]);
        }
      }
      while (i < csv.size() && csv[i] != ',' && csv[i] != '\n') {
        if (quoted) throw TupleError("garbage after quoted CSV field");
        field.push_back(csv[i++]);
      }
      if (i >= csv.size() || csv[i] == '\n') {
        row_done = true;
      }
      if (i < csv.size()) ++i;
      fields.push_back(std::move(field));
      field.clear();
      quoted = false;
    }
    // An empty unquoted line is a zero-field record.
    if (fields.size() == 1 && fields[0].empty() && types.empty()) fields.clear();
    if (fields.size() != types.size()) {
      throw TupleError("CSV row " + std::to_string(rows.size()) + " has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(types.size()));
    }
    std::vector<Value> row;
    for (std::size_t j = 0; j < fields.size(); ++j) {
      row.push_back(types[j] == SemType::Str ? Value::of_str(fields[j])
                                             : parse_value(fields[j], types[j]));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace unitgrade

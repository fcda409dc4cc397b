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

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <cstdlib>
#include <limits>
#include <random>
#include <sstream>

#include "json.hpp"
#include "support.hpp"
#include "unitgrade/errors.hpp"
#include "unitgrade/value.hpp"

using namespace unitgrade;

namespace {

Value decode_golden(const std::string& kind, const std::string& enc) {
  if (kind == "int") return Value::of_int(std::stoll(enc));
  if (kind == "float") {
    if (enc == "inf") return Value::of_float(std::numeric_limits<double>::infinity());
    if (enc == "-inf") return Value::of_float(-std::numeric_limits<double>::infinity());
    if (enc == "nan") return Value::of_float(std::numeric_limits<double>::quiet_NaN());
    return Value::of_float(std::strtod(enc.c_str(), nullptr));
  }
  if (kind == "bool") return Value::of_bool(enc == "true");
  return Value::of_str(nlohmann::json::parse(enc).get<std::string>());
}

Value random_value(std::mt19937_64& rng, SemType type) {
  switch (type) {
    case SemType::Int:
      return Value::of_int(static_cast<std::int64_t>(rng()));
    case SemType::Float: {
      double d;
      do {
        std::uint64_t bits = rng();
        std::memcpy(&d, &bits, sizeof d);
      } while (std::isnan(d));
      return Value::of_float(d);
    }
    case SemType::Bool:
      return Value::of_bool(rng() & 1);
    case SemType::Str: {
      static const std::string alphabet = "ab \"\\\n\t,()'x\xc3\xa9";
      std::string s;
      auto n = rng() % 16;
      for (std::uint64_t i = 0; i < n; ++i) s += alphabet[rng() % alphabet.size()];
      return Value::of_str(s);
    }
  }
  return {};
}

}  // namespace

TEST_CASE("render_value examples") {
  CHECK(render_value(Value::of_int(5)) == "5");
  CHECK(render_value(Value::of_int(-1)) == "-1");
  CHECK(render_value(Value::of_str("a\"b")) == "\"a\\\"b\"");
  CHECK(render_value(Value::of_bool(true)) == "true");
  CHECK(render_value(Value::of_float(0.5)) == "0.5");
  CHECK(render_value(Value::of_float(2.0)) == "2.0");
  CHECK(render_value(Value::of_float(1e16)) == "1e+16");
  CHECK(render_value(Value::of_float(1e-5)) == "1e-05");
}

TEST_CASE("render_value matches the python harness on a frozen corpus") {
  std::istringstream in(testing::read_fixture("render_golden.tsv"));
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    auto t1 = line.find('\t');
    auto t2 = line.find('\t', t1 + 1);
    REQUIRE(t2 != std::string::npos);
    auto kind = line.substr(0, t1);
    auto enc = line.substr(t1 + 1, t2 - t1 - 1);
    auto expected = line.substr(t2 + 1);
    Value v = decode_golden(kind, enc);
    INFO(line);
    CHECK(render_value(v) == expected);
    ++rows;
  }
  CHECK(rows == 200);
}

TEST_CASE("parse_value inverts render_value") {
  std::mt19937_64 rng(7);
  for (SemType t : {SemType::Int, SemType::Float, SemType::Bool, SemType::Str}) {
    for (int i = 0; i < 500; ++i) {
      Value v = random_value(rng, t);
      std::string text = render_value(v);
      INFO(text);
      CHECK(parse_value(text, t) == v);
    }
  }
  CHECK(parse_value("nan", SemType::Float) == Value::of_float(std::nan("")));
  CHECK(parse_value("-inf", SemType::Float).as_float() < 0);
}

TEST_CASE("parse_value is strict") {
  CHECK_THROWS_AS(parse_value("5.0", SemType::Int), TupleError);
  CHECK_THROWS_AS(parse_value(" 5", SemType::Int), TupleError);
  CHECK_THROWS_AS(parse_value("99999999999999999999", SemType::Int), TupleError);
  CHECK_THROWS_AS(parse_value("True", SemType::Bool), TupleError);
  CHECK_THROWS_AS(parse_value("abc", SemType::Str), TupleError);
  CHECK_THROWS_AS(parse_value("\"open", SemType::Str), TupleError);
  CHECK_THROWS_AS(parse_value("", SemType::Float), TupleError);
}

TEST_CASE("argument tuples") {
  std::vector<SemType> two{SemType::Int, SemType::Int};
  auto v = parse_args_tuple("(10, 5)", two);
  REQUIRE(v.size() == 2);
  CHECK(v[0] == Value::of_int(10));
  CHECK(v[1] == Value::of_int(5));
  CHECK(render_args_tuple(v) == "(10,5)");
  CHECK(render_args_tuple(parse_args_tuple("(-1, 2)", two)) == "(-1,2)");
  CHECK(parse_args_tuple("()", {}).empty());
  CHECK_THROWS_AS(parse_args_tuple("(10, 5, 3)", two), TupleError);
  CHECK_THROWS_AS(parse_args_tuple("10, 5", two), TupleError);
  CHECK_THROWS_AS(parse_args_tuple("(10)", two), TupleError);

  std::vector<SemType> mixed{SemType::Str, SemType::Float, SemType::Bool};
  auto m = parse_args_tuple("(\"a, (b)\", 1.5, false)", mixed);
  CHECK(m[0] == Value::of_str("a, (b)"));
  CHECK(m[1] == Value::of_float(1.5));
  CHECK(m[2] == Value::of_bool(false));
}

TEST_CASE("tuple round trip property") {
  std::mt19937_64 rng(11);
  const SemType all[] = {SemType::Int, SemType::Float, SemType::Bool, SemType::Str};
  for (int i = 0; i < 300; ++i) {
    std::vector<SemType> types;
    std::vector<Value> values;
    auto n = rng() % 5;
    for (std::uint64_t k = 0; k < n; ++k) {
      types.push_back(all[rng() % 4]);
      values.push_back(random_value(rng, types.back()));
    }
    auto text = render_args_tuple(values);
    INFO(text);
    CHECK(parse_args_tuple(text, types) == values);
  }
}

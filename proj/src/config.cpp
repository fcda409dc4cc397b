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

#include "unitgrade/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <set>

#include "unitgrade/errors.hpp"

namespace unitgrade {

using nlohmann::json;

std::vector<SemType> FunctionSpec::arg_types() const {
  std::vector<SemType> out;
  out.reserve(args.size());
  for (const auto& a : args) out.push_back(a.type);
  return out;
}

std::string FunctionSpec::signature() const {
  std::string out = name + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += args[i].name + ": " + std::string(to_string(args[i].type));
  }
  out += ") -> " + std::string(to_string(return_type));
  return out;
}

std::size_t TestPlan::total() const {
  return predefined.size() + (random ? static_cast<std::size_t>(random->n) : 0);
}

SemType generator_kind(const GeneratorExpr& g) noexcept {
  return static_cast<SemType>(g.index());
}

std::string render_generator(const GeneratorExpr& g) {
  struct Visitor {
    std::string operator()(const IntRange& r) const {
      return "int(" + std::to_string(r.lo) + "," + std::to_string(r.hi) + ")";
    }
    std::string operator()(const FloatRange& r) const {
      return "float(" + render_float(r.lo) + "," + render_float(r.hi) + ")";
    }
    std::string operator()(const BoolCoin&) const { return "bool()"; }
    std::string operator()(const StrLength& r) const {
      return "str(" + std::to_string(r.min_len) + "," + std::to_string(r.max_len) + ")";
    }
  };
  return std::visit(Visitor{}, g);
}

// ---------------------------------------------------------------------------
// Generator DSL

namespace {

class DslScanner {
 public:
  explicit DslScanner(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  std::string_view word() {
    skip_ws();
    auto start = pos_;
    while (pos_ < text_.size() && text_[pos_] >= 'a' && text_[pos_] <= 'z') ++pos_;
    return text_.substr(start, pos_ - start);
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  // Raw numeric token: sign, digits, '.', exponent.
  std::string_view number() {
    skip_ws();
    auto start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      bool ok = (c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.' || c == 'e' || c == 'E';
      if (!ok) break;
      ++pos_;
    }
    if (start == pos_) fail("expected a number");
    return text_.substr(start, pos_ - start);
  }

  bool at_end() {
    skip_ws();
    return pos_ == text_.size();
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw DslError("bad generator '" + std::string(text_) + "': " + why + " at offset " +
                   std::to_string(pos_));
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::int64_t dsl_int(DslScanner& s, std::string_view tok) {
  std::int64_t v = 0;
  auto first = tok.data();
  auto last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) s.fail("'" + std::string(tok) + "' is not an integer");
  return v;
}

double dsl_float(DslScanner& s, std::string_view tok) {
  double v = 0;
  auto first = tok.data();
  auto last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    s.fail("'" + std::string(tok) + "' is not a finite number");
  }
  return v;
}

}  // namespace

GeneratorExpr parse_generator_expr(std::string_view text, SemType expected) {
  DslScanner s(text);
  auto kind_word = s.word();
  auto kind = sem_type_from_string(kind_word);
  if (!kind) s.fail("unknown generator kind '" + std::string(kind_word) + "'");
  s.expect('(');

  GeneratorExpr out;
  switch (*kind) {
    case SemType::Int: {
      auto lo = dsl_int(s, s.number());
      s.expect(',');
      auto hi = dsl_int(s, s.number());
      if (lo > hi) s.fail("lower bound exceeds upper bound");
      out = IntRange{lo, hi};
      break;
    }
    case SemType::Float: {
      auto lo = dsl_float(s, s.number());
      s.expect(',');
      auto hi = dsl_float(s, s.number());
      if (lo > hi) s.fail("lower bound exceeds upper bound");
      out = FloatRange{lo, hi};
      break;
    }
    case SemType::Bool:
      out = BoolCoin{};
      break;
    case SemType::Str: {
      auto lo = dsl_int(s, s.number());
      s.expect(',');
      auto hi = dsl_int(s, s.number());
      if (lo < 0) s.fail("negative minimum length");
      if (lo > hi) s.fail("minimum length exceeds maximum length");
      if (static_cast<std::uint64_t>(hi) > kMaxStrLength) {
        s.fail("maximum length above " + std::to_string(kMaxStrLength));
      }
      out = StrLength{static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(hi)};
      break;
    }
  }
  s.expect(')');
  if (!s.at_end()) s.fail("trailing characters");
  if (*kind != expected) {
    throw DslError("generator '" + std::string(text) + "' produces " +
                   std::string(to_string(*kind)) + ", expected " +
                   std::string(to_string(expected)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Schema validation

bool is_identifier(std::string_view name) {
  static const std::set<std::string_view> kReserved = {
      "False", "None",   "True",  "and",    "as",       "assert", "async",  "await",
      "break", "class",  "continue", "def", "del",      "elif",   "else",   "except",
      "finally", "for",  "from",  "global", "if",       "import", "in",     "is",
      "lambda", "nonlocal", "not", "or",    "pass",     "raise",  "return", "try",
      "while", "with",   "yield"};
  if (name.empty()) return false;
  auto head = name.front();
  if (!(head == '_' || (head >= 'A' && head <= 'Z') || (head >= 'a' && head <= 'z'))) return false;
  for (char c : name) {
    bool ok = c == '_' || (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
    if (!ok) return false;
  }
  return !kReserved.contains(name);
}

namespace {

std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void require_object(const json& doc, const std::string& path) {
  if (!doc.is_object()) throw SchemaError(path, "expected an object");
}

void reject_unknown_keys(const json& doc, const std::string& path,
                         std::initializer_list<std::string_view> allowed) {
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    bool known = false;
    for (auto a : allowed) known = known || it.key() == a;
    if (!known) throw SchemaError(path + "." + it.key(), "unknown key");
  }
}

const json& require_key(const json& doc, const std::string& path, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw SchemaError(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

std::string require_string(const json& node, const std::string& path) {
  if (!node.is_string()) throw SchemaError(path, "expected a string");
  return node.get<std::string>();
}

bool is_non_negative_integer(const json& node) {
  return node.is_number_unsigned() || (node.is_number_integer() && node.get<std::int64_t>() >= 0);
}

SemType require_type(const json& node, const std::string& path) {
  auto tag = require_string(node, path);
  auto t = sem_type_from_string(tag);
  if (!t) throw SchemaError(path, "unknown type '" + tag + "' (expected int, float, bool or str)");
  return *t;
}

}  // namespace

FunctionSpec parse_function_spec(const json& doc, const std::string& path) {
  require_object(doc, path);
  reject_unknown_keys(doc, path, {"name", "args", "return"});

  FunctionSpec spec;
  spec.name = require_string(require_key(doc, path, "name"), path + ".name");
  if (!is_identifier(spec.name)) {
    throw SchemaError(path + ".name", "'" + spec.name + "' is not a valid identifier");
  }

  const auto& args = require_key(doc, path, "args");
  if (!args.is_array()) throw SchemaError(path + ".args", "expected an array");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < args.size(); ++i) {
    auto ap = index_path(path + ".args", i);
    require_object(args[i], ap);
    reject_unknown_keys(args[i], ap, {"name", "type"});
    ArgSpec arg;
    arg.name = require_string(require_key(args[i], ap, "name"), ap + ".name");
    if (!is_identifier(arg.name)) {
      throw SchemaError(ap + ".name", "'" + arg.name + "' is not a valid identifier");
    }
    if (!seen.insert(arg.name).second) {
      throw SchemaError(ap + ".name", "duplicate argument name '" + arg.name + "'");
    }
    arg.type = require_type(require_key(args[i], ap, "type"), ap + ".type");
    spec.args.push_back(std::move(arg));
  }
  spec.return_type = require_type(require_key(doc, path, "return"), path + ".return");
  return spec;
}

TestPlan parse_test_plan(const json& doc, const FunctionSpec& spec, const std::string& path) {
  require_object(doc, path);
  reject_unknown_keys(doc, path, {"predefined", "random", "strict_float"});
  TestPlan plan;
  auto types = spec.arg_types();

  if (auto it = doc.find("predefined"); it != doc.end()) {
    auto pp = path + ".predefined";
    if (!it->is_array()) throw SchemaError(pp, "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      auto tp = index_path(pp, i);
      const auto& item = (*it)[i];
      require_object(item, tp);
      reject_unknown_keys(item, tp, {"data", "feedback"});
      PredefinedTest test;
      test.data = require_string(require_key(item, tp, "data"), tp + ".data");
      try {
        test.args = parse_args_tuple(test.data, types);
      } catch (const TupleError& e) {
        throw SchemaError(tp + ".data", e.what());
      }
      if (auto fb = item.find("feedback"); fb != item.end()) {
        auto fp = tp + ".feedback";
        require_object(*fb, fp);
        for (auto e = fb->begin(); e != fb->end(); ++e) {
          auto kp = fp + "." + e.key();
          if (e.key() != kWildcardKey) {
            try {
              parse_value(e.key(), spec.return_type);
            } catch (const TupleError& err) {
              throw SchemaError(kp, std::string("feedback key is neither \"**\" nor a valid ") +
                                        std::string(to_string(spec.return_type)) + ": " +
                                        err.what());
            }
          }
          test.feedback.emplace(e.key(), require_string(e.value(), kp));
        }
      }
      plan.predefined.push_back(std::move(test));
    }
  }

  if (auto it = doc.find("random"); it != doc.end()) {
    auto rp = path + ".random";
    require_object(*it, rp);
    reject_unknown_keys(*it, rp, {"n", "args", "seed"});
    RandomSpec random;
    const auto& n = require_key(*it, rp, "n");
    if (!is_non_negative_integer(n)) {
      throw SchemaError(rp + ".n", "expected a non-negative integer");
    }
    random.n = n.get<std::uint64_t>();
    if (random.n > kMaxRandomTests) {
      throw SchemaError(rp + ".n", "at most " + std::to_string(kMaxRandomTests) + " random tests");
    }
    const auto& gens = require_key(*it, rp, "args");
    if (!gens.is_array()) throw SchemaError(rp + ".args", "expected an array");
    if (gens.size() != spec.args.size()) {
      throw SchemaError(rp + ".args", "arity mismatch: " + std::to_string(gens.size()) +
                                          " generators for " + std::to_string(spec.args.size()) +
                                          " arguments");
    }
    for (std::size_t i = 0; i < gens.size(); ++i) {
      auto gp = index_path(rp + ".args", i);
      auto text = require_string(gens[i], gp);
      try {
        random.args.push_back(parse_generator_expr(text, spec.args[i].type));
      } catch (const DslError& e) {
        throw SchemaError(gp, e.what());
      }
    }
    if (auto seed = it->find("seed"); seed != it->end()) {
      if (!is_non_negative_integer(*seed)) {
        throw SchemaError(rp + ".seed", "expected a non-negative 64-bit integer");
      }
      random.seed = seed->get<std::uint64_t>();
    }
    plan.random = std::move(random);
  }

  if (auto it = doc.find("strict_float"); it != doc.end()) {
    if (!it->is_boolean()) throw SchemaError(path + ".strict_float", "expected a boolean");
    plan.strict_float = it->get<bool>();
  }

  if (plan.total() == 0) throw SchemaError(path, "test plan defines no tests");
  return plan;
}

Solution parse_solution(const json& doc, const std::string& path) {
  require_object(doc, path);
  Solution solution;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    auto fp = path + "." + it.key();
    if (it.key() != kBodyField) {
      throw SchemaError(fp, "unknown solution field (unit-testing tasks use only \"f1\")");
    }
    solution.fields.emplace(it.key(), require_string(it.value(), fp));
  }
  auto f1 = solution.fields.find(std::string(kBodyField));
  if (f1 == solution.fields.end()) throw SchemaError(path + ".f1", "missing");
  if (f1->second.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw SchemaError(path + ".f1", "solution body is empty");
  }
  return solution;
}

TaskConfig task_config_from_json(const json& doc) {
  require_object(doc, "");
  reject_unknown_keys(doc, "", {"spec", "test", "solution"});
  TaskConfig config;
  config.spec = parse_function_spec(require_key(doc, "", "spec"));
  config.test = parse_test_plan(require_key(doc, "", "test"), config.spec);
  config.solution = parse_solution(require_key(doc, "", "solution"));
  return config;
}

TaskConfig parse_task_config(std::string_view raw) {
  json doc;
  try {
    doc = json::parse(raw);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("malformed JSON: ") + e.what());
  }
  return task_config_from_json(doc);
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::ordered_json to_json(const FunctionSpec& spec) {
  nlohmann::ordered_json args = nlohmann::ordered_json::array();
  for (const auto& a : spec.args) {
    args.push_back({{"name", a.name}, {"type", to_string(a.type)}});
  }
  return {{"name", spec.name}, {"args", std::move(args)}, {"return", to_string(spec.return_type)}};
}

nlohmann::ordered_json to_json(const TestPlan& plan) {
  nlohmann::ordered_json out;
  auto predefined = nlohmann::ordered_json::array();
  for (const auto& t : plan.predefined) {
    nlohmann::ordered_json item{{"data", t.data}};
    if (!t.feedback.empty()) item["feedback"] = t.feedback;
    predefined.push_back(std::move(item));
  }
  out["predefined"] = std::move(predefined);
  if (plan.random) {
    nlohmann::ordered_json random{{"n", plan.random->n}};
    auto gens = nlohmann::ordered_json::array();
    for (const auto& g : plan.random->args) gens.push_back(render_generator(g));
    random["args"] = std::move(gens);
    if (plan.random->seed) random["seed"] = *plan.random->seed;
    out["random"] = std::move(random);
  }
  if (plan.strict_float) out["strict_float"] = true;
  return out;
}

nlohmann::ordered_json to_json(const Solution& solution) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& [k, v] : solution.fields) out[k] = v;
  return out;
}

nlohmann::ordered_json to_json(const TaskConfig& config) {
  return {{"spec", to_json(config.spec)},
          {"test", to_json(config.test)},
          {"solution", to_json(config.solution)}};
}

}  // namespace unitgrade

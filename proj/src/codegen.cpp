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

#include "unitgrade/codegen.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "unitgrade/errors.hpp"

namespace unitgrade {

namespace {

constexpr std::size_t kPythonIndent = 4;

std::string marker(const std::string& name) { return "{{" + name + "}}"; }

// Returns the placeholder on `line`, if the line is nothing but one.
std::optional<PlaceholderSpec> placeholder_on(std::string_view line) {
  auto indent = line.find_first_not_of(' ');
  if (indent == std::string_view::npos) return std::nullopt;
  auto rest = line.substr(indent);
  if (rest.size() < 5 || !rest.starts_with("{{") || !rest.ends_with("}}")) return std::nullopt;
  auto name = rest.substr(2, rest.size() - 4);
  if (!is_identifier(name)) return std::nullopt;
  return PlaceholderSpec{std::string(name), indent};
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      fn(text.substr(start), false);
      return;
    }
    fn(text.substr(start, nl - start), true);
    start = nl + 1;
  }
}

}  // namespace

bool is_supported_language(std::string_view language) noexcept { return language == "python"; }

std::string source_extension(std::string_view language) {
  if (language == "python") return "py";
  throw UnsupportedLanguage(std::string(language));
}

CodeTemplate make_template(const FunctionSpec& spec, std::string_view language) {
  if (!is_supported_language(language)) throw UnsupportedLanguage(std::string(language));

  std::string skeleton = "def " + spec.name + "(";
  for (std::size_t i = 0; i < spec.args.size(); ++i) {
    if (i) skeleton += ", ";
    skeleton += spec.args[i].name;
  }
  skeleton += "):\n";
  skeleton += std::string(kPythonIndent, ' ') + marker(std::string(kBodyField)) + "\n";

  return CodeTemplate{std::string(language), std::move(skeleton),
                      {PlaceholderSpec{std::string(kBodyField), kPythonIndent}}};
}

CodeTemplate parse_template(std::string_view language, std::string skeleton) {
  if (!is_supported_language(language)) throw UnsupportedLanguage(std::string(language));
  CodeTemplate tmpl{std::string(language), std::move(skeleton), {}};
  std::set<std::string> seen;
  for_each_line(tmpl.skeleton, [&](std::string_view line, bool) {
    if (auto p = placeholder_on(line)) {
      if (!seen.insert(p->name).second) {
        throw CorruptPackage("template repeats placeholder '" + p->name + "'");
      }
      tmpl.placeholders.push_back(std::move(*p));
    }
  });
  return tmpl;
}

std::string fill_template(const CodeTemplate& tmpl,
                          const std::map<std::string, std::string>& fields) {
  for (const auto& p : tmpl.placeholders) {
    if (!fields.contains(p.name)) throw MissingField(p.name);
  }

  std::string out;
  out.reserve(tmpl.skeleton.size());
  for_each_line(tmpl.skeleton, [&](std::string_view line, bool had_newline) {
    auto p = placeholder_on(line);
    auto spec = tmpl.placeholders.end();
    if (p) {
      spec = std::find_if(tmpl.placeholders.begin(), tmpl.placeholders.end(),
                          [&](const PlaceholderSpec& s) { return s.name == p->name; });
    }
    if (spec == tmpl.placeholders.end()) {
      out += line;
      if (had_newline) out.push_back('\n');
      return;
    }
    std::string_view fragment = fields.at(spec->name);
    if (fragment.ends_with('\n')) fragment.remove_suffix(1);
    const std::string pad(spec->indent, ' ');
    if (fragment.empty()) {
      out += pad;
    } else {
      for_each_line(fragment, [&](std::string_view frag_line, bool frag_nl) {
        out += pad;
        out += frag_line;
        if (frag_nl) out.push_back('\n');
      });
      // A fragment ending in "\n\n" leaves one empty final line.
      if (fragment.back() == '\n') out += pad;
    }
    if (had_newline) out.push_back('\n');
  });
  return out;
}

}  // namespace unitgrade

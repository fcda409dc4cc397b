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

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "unitgrade/config.hpp"

namespace unitgrade {

struct PlaceholderSpec {
  std::string name;
  std::size_t indent = 0;

  bool operator==(const PlaceholderSpec&) const = default;
};

/// Source skeleton for one target language. A placeholder occupies a line of
/// its own: `indent` spaces followed by `{{name}}`.
struct CodeTemplate {
  std::string language;
  std::string skeleton;
  std::vector<PlaceholderSpec> placeholders;

  bool operator==(const CodeTemplate&) const = default;
};

bool is_supported_language(std::string_view language) noexcept;

/// Source file name used for filled sources of `language` ("py" for python).
std::string source_extension(std::string_view language);

CodeTemplate make_template(const FunctionSpec& spec, std::string_view language);

/// Rebuild a template from a stored skeleton by scanning for placeholder lines.
CodeTemplate parse_template(std::string_view language, std::string skeleton);

/// Replace every placeholder line with its fragment; each fragment line is
/// prefixed with the placeholder's indent. Fragments are otherwise inserted
/// verbatim. Throws MissingField.
std::string fill_template(const CodeTemplate& tmpl, const std::map<std::string, std::string>& fields);

}  // namespace unitgrade

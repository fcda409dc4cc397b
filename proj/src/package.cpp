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

#include "unitgrade/package.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>

#include "unitgrade/errors.hpp"

namespace unitgrade {

nlohmann::ordered_json to_json(const Manifest& m) {
  return {{"task_id", m.task_id},
          {"task_type", m.task_type},
          {"language", m.language},
          {"created_at", m.created_at},
          {"config_digest", m.config_digest}};
}

Manifest manifest_from_json(const nlohmann::json& doc) {
  auto get = [&](const char* key) {
    auto it = doc.find(key);
    if (it == doc.end() || !it->is_string()) {
      throw CorruptPackage(std::string("manifest field '") + key + "' missing or not a string");
    }
    return it->get<std::string>();
  };
  if (!doc.is_object()) throw CorruptPackage("manifest is not a JSON object");
  return Manifest{get("task_id"), get("task_type"), get("language"), get("created_at"),
                  get("config_digest")};
}

std::string canonical_config(const TaskConfig& config) {
  // nlohmann::json keeps object keys sorted, which makes the dump canonical.
  return nlohmann::json::parse(to_json(config).dump()).dump();
}

std::string config_digest(const TaskConfig& config) {
  auto text = canonical_config(config);
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    char buf[3];
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

}  // namespace unitgrade

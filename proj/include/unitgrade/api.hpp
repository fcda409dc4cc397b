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

#include <cstddef>
#include <string>
#include <string_view>

#include "unitgrade/engine.hpp"

namespace httplib {
class Server;
}

namespace unitgrade {

struct ApiResponse {
  int status = 200;
  std::string body;  // application/json
};

/// Transport-independent handlers for the HTTP routes:
///   POST /api/tasks         create a task from {type, language, config, id?}
///   POST /api/execute       grade {tid, input}; replies {tid, status, output}
///   GET  /api/tasks         manifests
///   GET  /api/tasks/{tid}   public view: task_id, language, spec, inputs
class ApiService {
 public:
  static constexpr std::size_t kMaxInputBytes = 1 << 20;
  static constexpr std::size_t kDefaultOutputCap = 16384;

  explicit ApiService(Engine& engine, std::size_t output_cap = kDefaultOutputCap)
      : engine_(engine), output_cap_(output_cap) {}

  ApiResponse create_task(std::string_view body);
  ApiResponse execute(std::string_view body);
  ApiResponse list_tasks();
  ApiResponse get_task(std::string_view task_id);

 private:
  Engine& engine_;
  std::size_t output_cap_;
};

/// Longest prefix of `text` no longer than `limit` bytes that does not split a
/// UTF-8 sequence.
std::string truncate_utf8(std::string_view text, std::size_t limit);

void mount_routes(httplib::Server& server, ApiService& service);

/// Blocks serving on "host:port". Returns false if the address cannot be bound.
bool serve(Engine& engine, std::string_view address);

}  // namespace unitgrade

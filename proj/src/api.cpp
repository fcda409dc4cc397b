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

#include "unitgrade/api.hpp"

#include <httplib.h>

#include <iostream>

#include "unitgrade/errors.hpp"

namespace unitgrade {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ApiResponse reply(int status, const ordered_json& doc) { return {status, doc.dump()}; }

ApiResponse error_reply(int status, const Error& e) {
  ordered_json doc{{"error", e.kind()}, {"message", e.what()}};
  if (auto* schema = dynamic_cast<const SchemaError*>(&e)) doc["path"] = schema->path();
  return reply(status, doc);
}

ApiResponse bad_request(const std::string& path, const std::string& message) {
  return error_reply(400, SchemaError(path, message));
}

std::optional<json> parse_body(std::string_view body) {
  auto doc = json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
  return doc;
}

std::optional<std::string> string_member(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_string()) return std::nullopt;
  return it->get<std::string>();
}

}  // namespace

std::string truncate_utf8(std::string_view text, std::size_t limit) {
  if (text.size() <= limit) return std::string(text);
  std::size_t cut = limit;
  // Back up over continuation bytes to the start of the sequence.
  while (cut > 0 && (static_cast<unsigned char>(text[cut]) & 0xC0) == 0x80) --cut;
  return std::string(text.substr(0, cut));
}

ApiResponse ApiService::create_task(std::string_view body) {
  auto doc = parse_body(body);
  if (!doc) return bad_request("", "request body must be a JSON object");
  auto type = string_member(*doc, "type");
  if (!type) return bad_request("type", "expected a task type string");
  auto language = string_member(*doc, "language");
  if (!language) return bad_request("language", "expected a language string");
  std::optional<std::string> id;
  if (doc->contains("id")) {
    id = string_member(*doc, "id");
    if (!id) return bad_request("id", "expected a string");
  }
  if (!doc->contains("config")) return bad_request("config", "missing");

  try {
    // Type and language are checked before the config so an unsupported
    // task kind is reported as such, whatever its config looks like.
    if (*type != kUnitTestingType) throw UnsupportedType(*type);
    if (!is_supported_language(*language)) throw UnsupportedLanguage(*language);
    auto config = task_config_from_json((*doc)["config"]);
    auto manifest = engine_.create(*type, *language, config, id);
    return reply(201, to_json(manifest));
  } catch (const DuplicateId& e) {
    return error_reply(409, e);
  } catch (const SolutionLoadError& e) {
    return error_reply(422, e);
  } catch (const SetupError& e) {
    return error_reply(500, e);
  } catch (const Error& e) {
    return error_reply(400, e);
  }
}

ApiResponse ApiService::execute(std::string_view body) {
  auto doc = parse_body(body);
  if (!doc) return bad_request("", "request body must be a JSON object");
  auto tid = string_member(*doc, "tid");
  if (!tid || tid->empty()) return bad_request("tid", "expected a non-empty task id");
  auto input = string_member(*doc, "input");
  if (!input || input->empty()) return bad_request("input", "expected a non-empty string");
  if (input->size() > kMaxInputBytes) return bad_request("input", "input exceeds 1 MiB");

  GradeReport report;
  try {
    report = engine_.grade(*tid, *input);
  } catch (const NotFound& e) {
    return error_reply(404, e);
  } catch (const CorruptPackage& e) {
    return error_reply(500, e);
  } catch (const SetupError& e) {
    return error_reply(500, e);
  }

  auto output = serialize(report.output);
  std::string status(to_string(report.output.backend));
  if (output.size() > output_cap_) {
    output = truncate_utf8(output, output_cap_);
    status = "overflow";
  }
  return reply(200, ordered_json{{"tid", *tid}, {"status", status}, {"output", output}});
}

ApiResponse ApiService::list_tasks() {
  auto arr = ordered_json::array();
  for (const auto& m : engine_.store().list_tasks()) arr.push_back(to_json(m));
  return reply(200, arr);
}

ApiResponse ApiService::get_task(std::string_view task_id) {
  try {
    auto task = engine_.store().load_task(task_id);
    auto inputs = ordered_json::array();
    for (const auto& t : task.plan().predefined) inputs.push_back(t.data);
    return reply(200, ordered_json{{"task_id", task.task_id()},
                                   {"language", task.language()},
                                   {"spec", to_json(task.spec())},
                                   {"inputs", std::move(inputs)}});
  } catch (const NotFound& e) {
    return error_reply(404, e);
  } catch (const CorruptPackage& e) {
    return error_reply(500, e);
  }
}

void mount_routes(httplib::Server& server, ApiService& service) {
  auto send = [](httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server.Post("/api/tasks", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.create_task(req.body));
  });
  server.Post("/api/execute", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.execute(req.body));
  });
  server.Get("/api/tasks", [&service, send](const httplib::Request&, httplib::Response& res) {
    send(res, service.list_tasks());
  });
  server.Get(R"(/api/tasks/([^/]+))",
             [&service, send](const httplib::Request& req, httplib::Response& res) {
               send(res, service.get_task(req.matches[1].str()));
             });
}

bool serve(Engine& engine, std::string_view address) {
  auto colon = address.rfind(':');
  if (colon == std::string_view::npos) return false;
  std::string host(address.substr(0, colon));
  int port = std::atoi(std::string(address.substr(colon + 1)).c_str());
  if (port <= 0 || port > 65535) return false;

  ApiService service(engine);
  httplib::Server server;
  server.set_payload_max_length(ApiService::kMaxInputBytes * 4);
  mount_routes(server, service);
  std::cerr << "listening on " << host << ":" << port << '\n';
  return server.listen(host, port);
}

}  // namespace unitgrade

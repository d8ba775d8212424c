// Copyright 2026 The faitheval Authors.
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


#include "faitheval/annotation_server.h"

#include "httplib.h"
#include "json.hpp"

namespace faitheval {
namespace {

using nlohmann::json;

constexpr char kModule[] = "annotation_service";

constexpr char kPlaceholder[] =
    "<!doctype html><html><head><meta charset=\"utf-8\"><title>faitheval</title></head>"
    "<body><p>Annotation service is running. No UI bundle was configured "
    "(--ui-dir).</p></body></html>";

json Body(const httplib::Request& req) {
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) throw Error(Errc::kParse, kModule, "request body must be an object");
    return j;
  } catch (const json::exception& e) {
    throw Error(Errc::kParse, kModule, std::string("bad request body: ") + e.what());
  }
}

template <typename T>
T Get(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw Error(Errc::kSchema, kModule, std::string("missing field ") + name);
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(Errc::kSchema, kModule, std::string("field ") + name + " has the wrong type");
  }
}

TaskType TaskParam(const std::string& name) {
  auto t = ParseTaskType(name);
  if (!t) throw Error(Errc::kUnknownTask, kModule, "unknown task type '" + name + "'");
  return *t;
}

json TaskJson(const TaskView& v) {
  json j = {{"task_id", v.task_id},
            {"project", v.project},
            {"task", TaskName(v.type)},
            {"doc_id", v.pair.doc_id},
            {"system_id", v.pair.system_id},
            {"summary", v.summary},
            {"status", TaskStatusName(v.status)},
            {"assigned", v.assigned},
            {"submitted", v.submitted}};
  if (!v.document.empty()) j["document"] = v.document;
  return j;
}

void SendJson(httplib::Response& res, const json& j, int status = 200) {
  res.status = status;
  res.set_content(j.dump(), "application/json");
}

// Wraps a handler so library errors become JSON error responses.
template <typename Fn>
httplib::Server::Handler Guard(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      SendJson(res, {{"error", ErrcName(e.code())}, {"message", e.what()}},
               HttpStatusFor(e.code()));
    }
  };
}

}  // namespace

int HttpStatusFor(Errc code) {
  switch (code) {
    case Errc::kUnknownPair:
    case Errc::kUnknownSystem:
    case Errc::kMissingDocument:
      return 404;
    case Errc::kNotAssigned:
      return 403;
    case Errc::kAlreadySubmitted:
    case Errc::kDuplicateKey:
      return 409;
    case Errc::kFilterViolation:
      return 422;
    case Errc::kIo:
      return 500;
    default:
      return 400;
  }
}

AnnotationServer::AnnotationServer(AnnotationStore& store, ServerOptions options)
    : store_(store), options_(std::move(options)), server_(std::make_unique<httplib::Server>()) {
  Routes();
}

AnnotationServer::~AnnotationServer() { Stop(); }

void AnnotationServer::Routes() {
  auto& s = *server_;
  if (!options_.token.empty()) {
    const std::string expected = "Bearer " + options_.token;
    s.set_pre_routing_handler([expected](const httplib::Request& req, httplib::Response& res) {
      if (req.method == "POST" && req.get_header_value("Authorization") != expected) {
        SendJson(res, {{"error", "Unauthorized"}, {"message", "missing or wrong token"}}, 401);
        return httplib::Server::HandlerResponse::Handled;
      }
      return httplib::Server::HandlerResponse::Unhandled;
    });
  }

  s.Post("/projects", Guard([this](const httplib::Request& req, httplib::Response& res) {
           json body = Body(req);
           const auto name = Get<std::string>(body, "name");
           store_.CreateProject(name, body.value("pilot", false));
           SendJson(res, {{"name", name}}, 201);
         }));

  s.Post(R"(/projects/([^/]+)/batches)",
         Guard([this](const httplib::Request& req, httplib::Response& res) {
           json body = Body(req);
           const TaskType type = TaskParam(Get<std::string>(body, "type"));
           std::vector<PairKey> pairs;
           for (const auto& p : Get<json>(body, "pairs")) {
             pairs.push_back({Get<std::string>(p, "doc_id"), Get<std::string>(p, "system_id")});
           }
           auto ids = store_.CreateBatch(req.matches[1], pairs, type);
           SendJson(res, {{"task_ids", ids}}, 201);
         }));

  s.Get("/tasks/next", Guard([this](const httplib::Request& req, httplib::Response& res) {
          const std::string annotator = req.get_param_value("annotator");
          const TaskType type = TaskParam(req.get_param_value("type"));
          auto task = store_.NextTask(annotator, type, req.get_param_value("project"));
          if (!task) {
            res.status = 204;
            return;
          }
          SendJson(res, TaskJson(*task));
        }));

  s.Get(R"(/tasks/([^/]+))", Guard([this](const httplib::Request& req, httplib::Response& res) {
          auto task = store_.GetTask(req.matches[1]);
          if (!task) {
            SendJson(res, {{"error", "UnknownTask"}, {"message", "no such task"}}, 404);
            return;
          }
          SendJson(res, TaskJson(*task));
        }));

  s.Post(R"(/tasks/([^/]+)/spans)",
         Guard([this](const httplib::Request& req, httplib::Response& res) {
           json body = Body(req);
           std::vector<SpanInput> spans;
           for (const auto& sp : Get<json>(body, "spans")) {
             const auto label = Get<std::string>(sp, "label");
             auto parsed = ParseSpanLabel(label);
             if (!parsed) {
               throw Error(Errc::kIllegalLabel, kModule, "unknown label '" + label + "'");
             }
             spans.push_back({*parsed, Get<std::size_t>(sp, "char_start"),
                              Get<std::size_t>(sp, "char_end")});
           }
           const std::string id = req.matches[1];
           store_.SubmitSpans(id, Get<std::string>(body, "annotator_id"), spans);
           SendJson(res, {{"task_id", id}, {"status", TaskStatusName(store_.GetTask(id)->status)}});
         }));

  s.Post(R"(/tasks/([^/]+)/verdict)",
         Guard([this](const httplib::Request& req, httplib::Response& res) {
           json body = Body(req);
           const std::string id = req.matches[1];
           store_.SubmitVerdict(id, Get<std::string>(body, "annotator_id"),
                                Get<bool>(body, "verdict"), body.value("evidence_note", ""));
           SendJson(res, {{"task_id", id}, {"status", TaskStatusName(store_.GetTask(id)->status)}});
         }));

  s.Get("/export", Guard([this](const httplib::Request& req, httplib::Response& res) {
          std::optional<TaskType> type;
          if (req.has_param("type") && !req.get_param_value("type").empty()) {
            type = TaskParam(req.get_param_value("type"));
          }
          auto out = store_.Export(type, req.get_param_value("project"));
          res.set_header("X-Faitheval-Complete", out.complete() ? "true" : "false");
          res.set_content(out.tsv, "text/tab-separated-values; charset=utf-8");
        }));

  if (options_.ui_dir.empty() || !s.set_mount_point("/", options_.ui_dir)) {
    s.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kPlaceholder, "text/html; charset=utf-8");
    });
  }
}

int AnnotationServer::BindToAnyPort(const std::string& host) {
  return server_->bind_to_any_port(host);
}

bool AnnotationServer::Bind(const std::string& host, int port) {
  return server_->bind_to_port(host, port);
}

bool AnnotationServer::ListenAfterBind() { return server_->listen_after_bind(); }

void AnnotationServer::WaitUntilReady() { server_->wait_until_ready(); }

void AnnotationServer::Stop() {
  if (server_) server_->stop();
}

}  // namespace faitheval

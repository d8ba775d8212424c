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


// HTTP front end for AnnotationStore. Bodies are JSON objects whose field
// names follow the annotations TSV columns.
//
//   POST /projects                {"name","pilot"}
//   POST /projects/{p}/batches    {"type","pairs":[{"doc_id","system_id"}]}
//   GET  /tasks/next?annotator=&type=[&project=]   204 when nothing is left
//   GET  /tasks/{id}
//   POST /tasks/{id}/spans        {"annotator_id","spans":[{"label","char_start","char_end"}]}
//   POST /tasks/{id}/verdict      {"annotator_id","verdict","evidence_note"}
//   GET  /export?type=[&include_pilot=1]   canonical TSV; X-Faitheval-Complete
//   GET  /                        static UI bundle
//
// Errors come back as {"error": <kind>, "message": ...} with a 4xx status.

#ifndef FAITHEVAL_ANNOTATION_SERVER_H_
#define FAITHEVAL_ANNOTATION_SERVER_H_

#include <memory>
#include <string>

#include "faitheval/annotation_store.h"
#include "faitheval/error.h"

namespace httplib {
class Server;
}

namespace faitheval {

struct ServerOptions {
  // Directory served at /; a placeholder page is served when empty.
  std::string ui_dir;
  // When set, every POST needs "Authorization: Bearer <token>".
  std::string token;
};

int HttpStatusFor(Errc code);

class AnnotationServer {
 public:
  AnnotationServer(AnnotationStore& store, ServerOptions options = {});
  ~AnnotationServer();

  // Returns the bound port, or -1.
  int BindToAnyPort(const std::string& host = "127.0.0.1");
  bool Bind(const std::string& host, int port);
  // Blocks until Stop().
  bool ListenAfterBind();
  void WaitUntilReady();
  void Stop();

 private:
  void Routes();

  AnnotationStore& store_;
  ServerOptions options_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace faitheval

#endif  // FAITHEVAL_ANNOTATION_SERVER_H_

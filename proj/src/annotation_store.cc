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


#include "faitheval/annotation_store.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <mutex>

#include "faitheval/error.h"
#include "faitheval/io.h"
#include "json.hpp"

namespace faitheval {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr char kModule[] = "annotation_service";
constexpr char kSnapshot[] = "snapshot.ndjson";

std::int64_t WallClockMs() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

TaskType TaskFromName(const std::string& name) {
  auto t = ParseTaskType(name);
  if (!t) throw Error(Errc::kUnknownTask, kModule, "unknown task type '" + name + "'");
  return *t;
}

SpanLabel LabelFromName(const std::string& name) {
  auto l = ParseSpanLabel(name);
  if (!l) throw Error(Errc::kIllegalLabel, kModule, "unknown label '" + name + "'");
  return *l;
}

}  // namespace

std::string_view TaskStatusName(TaskStatus status) {
  switch (status) {
    case TaskStatus::kOpen:
      return "open";
    case TaskStatus::kAssigned:
      return "assigned";
    case TaskStatus::kDone:
      return "done";
  }
  return "";
}

std::string MakeTaskId(const std::string& project, TaskType type, const PairKey& pair) {
  // FNV-1a, 64 bit, over unit-separated fields.
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto feed = [&](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
    h ^= 0x1f;
    h *= 0x100000001b3ull;
  };
  feed(project);
  feed(TaskName(type));
  feed(pair.doc_id);
  feed(pair.system_id);
  char buf[24];
  std::snprintf(buf, sizeof buf, "t%016llx", static_cast<unsigned long long>(h));
  return buf;
}

TaskStatus AnnotationStore::Task::status() const {
  if (submitted() >= static_cast<std::size_t>(kRaters)) return TaskStatus::kDone;
  return assignees.empty() ? TaskStatus::kOpen : TaskStatus::kAssigned;
}

AnnotationStore::AnnotationStore(const Corpus& corpus, std::string data_dir, Clock clock)
    : corpus_(corpus), data_dir_(std::move(data_dir)), clock_(std::move(clock)) {
  if (!clock_) clock_ = WallClockMs;
  if (data_dir_.empty()) return;
  std::error_code ec;
  fs::create_directories(data_dir_, ec);
  if (ec) throw Error(Errc::kIo, kModule, "cannot create " + data_dir_ + ": " + ec.message());
  const fs::path snapshot = fs::path(data_dir_) / kSnapshot;
  if (fs::exists(snapshot)) Replay(snapshot.string());
  const fs::path log = fs::path(data_dir_) / log_name_;
  if (fs::exists(log)) Replay(log.string());
  log_.open(log, std::ios::app | std::ios::binary);
  if (!log_) throw Error(Errc::kIo, kModule, "cannot open " + log.string());
}

void AnnotationStore::Replay(const std::string& path) {
  std::string text = io::ReadFile(path);
  if (!text.empty() && text.back() != '\n') {
    // A torn final append never reached its newline; drop it so later
    // appends start on a clean line.
    text.erase(text.rfind('\n') == std::string::npos ? 0 : text.rfind('\n') + 1);
    io::WriteFile(path, text);
  }
  for (const auto& line : io::SplitLines(text)) {
    if (!line.empty()) Apply(line);
  }
}

void AnnotationStore::Commit(const std::string& line) {
  if (log_.is_open()) {
    log_ << line << '\n';
    log_.flush();
    if (!log_) throw Error(Errc::kIo, kModule, "event log write failed");
  }
  Apply(line);
}

void AnnotationStore::Apply(const std::string& line) {
  json ev;
  try {
    ev = json::parse(line);
    const std::string kind = ev.at("ev");
    if (kind == "snapshot") {
      log_name_ = ev.at("log").get<std::string>();
      generation_ = ev.at("generation").get<int>();
      return;
    }
    ++events_;
    if (kind == "project") {
      projects_[ev.at("name")] = ev.at("pilot").get<bool>();
    } else if (kind == "task") {
      Task t;
      t.project = ev.at("project");
      t.type = TaskFromName(ev.at("type").get<std::string>());
      t.pair = {ev.at("doc_id"), ev.at("system_id")};
      t.seq = next_seq_++;
      tasks_.emplace(ev.at("id").get<std::string>(), std::move(t));
    } else if (kind == "assign") {
      Task& t = tasks_.at(ev.at("id").get<std::string>());
      const std::string who = ev.at("annotator");
      t.assignees.push_back(who);
      t.issued_at[who] = ev.at("at").get<std::int64_t>();
    } else if (kind == "spans") {
      Task& t = tasks_.at(ev.at("id").get<std::string>());
      std::vector<SpanInput> spans;
      for (const auto& s : ev.at("spans")) {
        spans.push_back({LabelFromName(s.at(0).get<std::string>()),
                         s.at(1).get<std::size_t>(), s.at(2).get<std::size_t>()});
      }
      t.spans[ev.at("annotator")] = std::move(spans);
    } else if (kind == "verdict") {
      Task& t = tasks_.at(ev.at("id").get<std::string>());
      t.verdicts[ev.at("annotator")] = {ev.at("verdict").get<bool>(),
                                        ev.at("note").get<std::string>()};
    } else {
      throw Error(Errc::kParse, kModule, "unknown event '" + kind + "'");
    }
  } catch (const json::exception& e) {
    throw Error(Errc::kParse, kModule, "bad event: " + std::string(e.what()));
  } catch (const std::out_of_range&) {
    throw Error(Errc::kParse, kModule, "event refers to an unknown task: " + line);
  }
}

void AnnotationStore::CreateProject(const std::string& name, bool pilot) {
  if (name.empty()) throw Error(Errc::kEmptyField, kModule, "empty project name");
  std::unique_lock lock(mu_);
  if (auto it = projects_.find(name); it != projects_.end()) {
    if (it->second != pilot) {
      throw Error(Errc::kConfig, kModule, "project " + name + " exists with pilot=" +
                                              (it->second ? "true" : "false"));
    }
    return;
  }
  Commit(json{{"ev", "project"}, {"name", name}, {"pilot", pilot}}.dump());
}

std::vector<std::string> AnnotationStore::CreateBatch(const std::string& project,
                                                      const std::vector<PairKey>& pairs,
                                                      TaskType type) {
  std::unique_lock lock(mu_);
  if (!projects_.count(project)) {
    throw Error(Errc::kConfig, kModule, "unknown project '" + project + "'");
  }
  // Validate the whole batch before writing any of it.
  for (const auto& pair : pairs) {
    if (!corpus_.FindSummary(pair)) {
      throw Error(Errc::kUnknownPair, kModule,
                  "(" + pair.doc_id + ", " + pair.system_id + ") is not in the corpus");
    }
    if (!projects_.at(project)) {
      for (const auto& [other, pilot] : projects_) {
        if (pilot || other == project) continue;
        if (tasks_.count(MakeTaskId(other, type, pair))) {
          throw Error(Errc::kDuplicateKey, kModule,
                      "(" + pair.doc_id + ", " + pair.system_id + ") already has a " +
                          std::string(TaskName(type)) + " task in project " + other);
        }
      }
    }
    if (type != TaskType::kFactuality) continue;
    auto it = tasks_.find(MakeTaskId(project, TaskType::kHallucination, pair));
    bool flagged = false;
    if (it != tasks_.end() && it->second.status() == TaskStatus::kDone) {
      for (const auto& [who, spans] : it->second.spans) flagged |= !spans.empty();
    }
    if (!flagged) {
      throw Error(Errc::kFilterViolation, kModule,
                  "(" + pair.doc_id + ", " + pair.system_id +
                      ") has no completed hallucination task with a marked span");
    }
  }
  std::vector<std::string> ids;
  for (const auto& pair : pairs) {
    std::string id = MakeTaskId(project, type, pair);
    if (auto it = tasks_.find(id); it != tasks_.end()) {
      if (it->second.pair != pair || it->second.project != project || it->second.type != type) {
        throw Error(Errc::kDuplicateKey, kModule, "task id collision on " + id);
      }
    } else {
      Commit(json{{"ev", "task"},
                  {"id", id},
                  {"project", project},
                  {"type", TaskName(type)},
                  {"doc_id", pair.doc_id},
                  {"system_id", pair.system_id}}
                 .dump());
    }
    ids.push_back(std::move(id));
  }
  return ids;
}

TaskView AnnotationStore::View(const std::string& id, const Task& task) const {
  TaskView v;
  v.task_id = id;
  v.project = task.project;
  v.type = task.type;
  v.pair = task.pair;
  if (const SummaryRecord* s = corpus_.FindSummary(task.pair)) v.summary = s->text;
  if (task.type != TaskType::kLinguistic) {
    if (const DocumentRecord* d = corpus_.FindDocument(task.pair.doc_id)) v.document = d->text;
  }
  v.status = task.status();
  v.assigned = task.assignees.size();
  v.submitted = task.submitted();
  return v;
}

std::optional<TaskView> AnnotationStore::NextTask(const std::string& annotator, TaskType type,
                                                  const std::string& project) {
  if (annotator.empty()) throw Error(Errc::kEmptyField, kModule, "empty annotator id");
  std::unique_lock lock(mu_);
  const std::string* best = nullptr;
  const Task* best_task = nullptr;
  for (const auto& [id, t] : tasks_) {
    if (t.type != type || (!project.empty() && t.project != project)) continue;
    const bool mine = t.issued_at.count(annotator) > 0;
    if (mine) {
      const bool submitted = t.spans.count(annotator) || t.verdicts.count(annotator);
      if (!submitted) return View(id, t);
      continue;
    }
    if (t.status() == TaskStatus::kDone ||
        t.assignees.size() >= static_cast<std::size_t>(kRaters)) {
      continue;
    }
    if (!best_task ||
        std::pair(t.assignees.size(), t.seq) <
            std::pair(best_task->assignees.size(), best_task->seq)) {
      best = &id;
      best_task = &t;
    }
  }
  if (!best) return std::nullopt;
  const std::string id = *best;
  Commit(json{{"ev", "assign"}, {"id", id}, {"annotator", annotator}, {"at", clock_()}}.dump());
  return View(id, tasks_.at(id));
}

AnnotationStore::Task& AnnotationStore::RequireTask(const std::string& task_id) {
  auto it = tasks_.find(task_id);
  if (it == tasks_.end()) throw Error(Errc::kNotAssigned, kModule, "unknown task " + task_id);
  return it->second;
}

const AnnotationStore::Task& AnnotationStore::Assigned(const std::string& task_id,
                                                       const std::string& annotator,
                                                       TaskType expected_kind) {
  const Task& t = RequireTask(task_id);
  const bool wants_verdict = expected_kind == TaskType::kFactuality;
  if ((t.type == TaskType::kFactuality) != wants_verdict) {
    throw Error(Errc::kWrongTaskType, kModule,
                task_id + " is a " + std::string(TaskName(t.type)) + " task");
  }
  if (!t.issued_at.count(annotator)) {
    throw Error(Errc::kNotAssigned, kModule, task_id + " is not assigned to " + annotator);
  }
  if (t.spans.count(annotator) || t.verdicts.count(annotator)) {
    throw Error(Errc::kAlreadySubmitted, kModule, annotator + " already submitted " + task_id);
  }
  return t;
}

void AnnotationStore::SubmitSpans(const std::string& task_id, const std::string& annotator,
                                  const std::vector<SpanInput>& spans) {
  std::unique_lock lock(mu_);
  const Task& t = Assigned(task_id, annotator, TaskType::kHallucination);
  std::vector<SpanAnnotation> full;
  json list = json::array();
  for (const auto& s : spans) {
    if (TaskOf(s.label) != t.type) {
      throw Error(Errc::kIllegalLabel, kModule,
                  std::string(LabelName(s.label)) + " is not a " +
                      std::string(TaskName(t.type)) + " label");
    }
    SpanAnnotation a{t.pair.doc_id, t.pair.system_id, annotator, s.label, s.char_start,
                     s.char_end};
    ValidateSpan(a, corpus_);
    full.push_back(std::move(a));
    list.push_back({LabelName(s.label), s.char_start, s.char_end});
  }
  CheckNoOverlap(full);
  Commit(json{{"ev", "spans"}, {"id", task_id}, {"annotator", annotator}, {"spans", list}}
             .dump());
}

void AnnotationStore::SubmitVerdict(const std::string& task_id, const std::string& annotator,
                                    bool verdict, const std::string& evidence_note) {
  std::unique_lock lock(mu_);
  Assigned(task_id, annotator, TaskType::kFactuality);
  Commit(json{{"ev", "verdict"},
              {"id", task_id},
              {"annotator", annotator},
              {"verdict", verdict},
              {"note", evidence_note}}
             .dump());
}

std::optional<TaskView> AnnotationStore::GetTask(const std::string& task_id) const {
  std::shared_lock lock(mu_);
  auto it = tasks_.find(task_id);
  if (it == tasks_.end()) return std::nullopt;
  return View(it->first, it->second);
}

ExportResult AnnotationStore::Export(std::optional<TaskType> type,
                                    const std::string& project) const {
  std::shared_lock lock(mu_);
  AnnotationSet set(kRaters);
  ExportResult out;
  for (const auto& [id, t] : tasks_) {
    if (type && t.type != *type) continue;
    if (project.empty() ? projects_.at(t.project) : t.project != project) continue;
    ++out.tasks;
    out.done += t.status() == TaskStatus::kDone;
    for (const auto& [who, spans] : t.spans) {
      set.AddSubmission(t.pair, who, t.type);
      for (const auto& s : spans) {
        set.AddSpan({t.pair.doc_id, t.pair.system_id, who, s.label, s.char_start, s.char_end});
      }
    }
    for (const auto& [who, v] : t.verdicts) {
      set.AddSubmission(t.pair, who, TaskType::kFactuality);
      set.AddJudgment({t.pair.doc_id, t.pair.system_id, who, v.first, v.second});
    }
  }
  out.tsv = set.ToCanonicalTsv();
  return out;
}

std::vector<std::string> AnnotationStore::StateEvents() const {
  std::vector<std::string> lines;
  for (const auto& [name, pilot] : projects_) {
    lines.push_back(json{{"ev", "project"}, {"name", name}, {"pilot", pilot}}.dump());
  }
  std::vector<const std::pair<const std::string, Task>*> ordered;
  for (const auto& entry : tasks_) ordered.push_back(&entry);
  std::sort(ordered.begin(), ordered.end(),
            [](auto* a, auto* b) { return a->second.seq < b->second.seq; });
  for (const auto* entry : ordered) {
    const auto& [id, t] = *entry;
    lines.push_back(json{{"ev", "task"},
                         {"id", id},
                         {"project", t.project},
                         {"type", TaskName(t.type)},
                         {"doc_id", t.pair.doc_id},
                         {"system_id", t.pair.system_id}}
                        .dump());
    for (const auto& who : t.assignees) {
      lines.push_back(
          json{{"ev", "assign"}, {"id", id}, {"annotator", who}, {"at", t.issued_at.at(who)}}
              .dump());
    }
    for (const auto& [who, spans] : t.spans) {
      json list = json::array();
      for (const auto& s : spans) list.push_back({LabelName(s.label), s.char_start, s.char_end});
      lines.push_back(
          json{{"ev", "spans"}, {"id", id}, {"annotator", who}, {"spans", list}}.dump());
    }
    for (const auto& [who, v] : t.verdicts) {
      lines.push_back(json{{"ev", "verdict"},
                           {"id", id},
                           {"annotator", who},
                           {"verdict", v.first},
                           {"note", v.second}}
                          .dump());
    }
  }
  return lines;
}

void AnnotationStore::Compact() {
  std::unique_lock lock(mu_);
  if (data_dir_.empty()) return;
  const fs::path dir(data_dir_);
  const int generation = generation_ + 1;
  const std::string next_log = "events." + std::to_string(generation) + ".ndjson";
  std::string text =
      json{{"ev", "snapshot"}, {"log", next_log}, {"generation", generation}}.dump() + "\n";
  for (const auto& line : StateEvents()) text += line + "\n";
  io::WriteFile((dir / next_log).string(), "");
  io::WriteFile((dir / "snapshot.tmp").string(), text);
  // The rename is the commit point: before it the old snapshot and log are
  // authoritative, after it the new snapshot and the empty log are.
  fs::rename(dir / "snapshot.tmp", dir / kSnapshot);
  log_.close();
  std::error_code ec;
  fs::remove(dir / log_name_, ec);
  log_name_ = next_log;
  generation_ = generation;
  log_.open(dir / log_name_, std::ios::app | std::ios::binary);
  if (!log_) throw Error(Errc::kIo, kModule, "cannot open " + log_name_);
}

std::size_t AnnotationStore::event_count() const {
  std::shared_lock lock(mu_);
  return events_;
}

}  // namespace faitheval

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


// Event-sourced store behind the annotation service. Every accepted change
// is appended to the event log before it is applied in memory, and the state
// is rebuilt at startup by replaying snapshot.ndjson (if present) and then
// the log it names, events.ndjson by default.

#ifndef FAITHEVAL_ANNOTATION_STORE_H_
#define FAITHEVAL_ANNOTATION_STORE_H_

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "faitheval/corpus.h"

namespace faitheval {

enum class TaskStatus { kOpen, kAssigned, kDone };
std::string_view TaskStatusName(TaskStatus status);

struct TaskView {
  std::string task_id;
  std::string project;
  TaskType type = TaskType::kHallucination;
  PairKey pair;
  std::string summary;
  // Empty for linguistic tasks, which are judged on the summary alone.
  std::string document;
  TaskStatus status = TaskStatus::kOpen;
  std::size_t assigned = 0;
  std::size_t submitted = 0;
};

struct SpanInput {
  SpanLabel label = SpanLabel::kIntrinsic;
  std::size_t char_start = 0;
  std::size_t char_end = 0;
};

struct ExportResult {
  std::string tsv;
  std::size_t tasks = 0;
  std::size_t done = 0;
  bool complete() const { return done == tasks; }
};

// Deterministic id for a task: a hash of project, type and pair.
std::string MakeTaskId(const std::string& project, TaskType type, const PairKey& pair);

class AnnotationStore {
 public:
  using Clock = std::function<std::int64_t()>;  // milliseconds since epoch
  static constexpr int kRaters = 3;

  // `data_dir` empty keeps everything in memory. The corpus must outlive the
  // store.
  AnnotationStore(const Corpus& corpus, std::string data_dir, Clock clock = {});

  // Idempotent. Pilot projects are left out of default exports.
  void CreateProject(const std::string& name, bool pilot = false);

  // One task per pair; re-creating an existing task returns its id. Pairs
  // must exist in the corpus (UnknownPair), and a pair and type may belong to
  // only one non-pilot project (DuplicateKey). A factuality task needs a done
  // hallucination task for the same pair and project in which at least one
  // annotator marked a span (FilterViolation).
  std::vector<std::string> CreateBatch(const std::string& project,
                                       const std::vector<PairKey>& pairs, TaskType type);

  // The annotator's own unsubmitted assignment of this type if there is one,
  // else the not-done task with the fewest assignments (then oldest) that
  // the annotator has never been given and that has fewer than three
  // assignees. Empty `project` means any project.
  std::optional<TaskView> NextTask(const std::string& annotator, TaskType type,
                                   const std::string& project = "");

  void SubmitSpans(const std::string& task_id, const std::string& annotator,
                   const std::vector<SpanInput>& spans);
  void SubmitVerdict(const std::string& task_id, const std::string& annotator,
                     bool verdict, const std::string& evidence_note);

  std::optional<TaskView> GetTask(const std::string& task_id) const;

  // Canonical annotations TSV over submitted work, for one task type or all.
  // An empty `project` covers every non-pilot project; otherwise just the
  // named one.
  ExportResult Export(std::optional<TaskType> type = std::nullopt,
                      const std::string& project = "") const;

  // Rewrites the whole state as snapshot.ndjson and empties the event log.
  void Compact();

  std::size_t event_count() const;

 private:
  struct Task {
    std::string project;
    TaskType type = TaskType::kHallucination;
    PairKey pair;
    std::uint64_t seq = 0;
    std::vector<std::string> assignees;  // issue order
    std::map<std::string, std::int64_t> issued_at;
    std::map<std::string, std::vector<SpanInput>> spans;
    std::map<std::string, std::pair<bool, std::string>> verdicts;

    std::size_t submitted() const { return spans.size() + verdicts.size(); }
    TaskStatus status() const;
  };

  // Appends one event and applies it; caller holds the write lock.
  void Commit(const std::string& line);
  void Apply(const std::string& line);
  void Replay(const std::string& path);
  Task& RequireTask(const std::string& task_id);
  const Task& Assigned(const std::string& task_id, const std::string& annotator,
                       TaskType expected_kind);
  TaskView View(const std::string& id, const Task& task) const;
  std::vector<std::string> StateEvents() const;

  const Corpus& corpus_;
  std::string data_dir_;
  Clock clock_;
  mutable std::shared_mutex mu_;
  std::ofstream log_;
  std::string log_name_ = "events.ndjson";
  int generation_ = 0;
  std::size_t events_ = 0;
  std::uint64_t next_seq_ = 0;
  std::map<std::string, bool> projects_;  // name -> pilot
  std::map<std::string, Task> tasks_;
};

}  // namespace faitheval

#endif  // FAITHEVAL_ANNOTATION_STORE_H_

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

#include "faitheval/corpus.h"

#include <algorithm>
#include <tuple>

#include "faitheval/error.h"
#include "faitheval/io.h"
#include "faitheval/unicode.h"
#include "json.hpp"

namespace faitheval {
namespace {

constexpr char kModule[] = "corpus";

bool IsApostrophe(char32_t cp) { return cp == U'\'' || cp == U'’'; }

std::string AsciiLower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::optional<bool> ParseVerdict(std::string_view raw) {
  std::string v = AsciiLower(raw);
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  return std::nullopt;
}

std::string SpanWhere(const SpanAnnotation& s) {
  return "(" + s.doc_id + ", " + s.system_id + ", " + s.annotator_id + ") [" +
         std::to_string(s.char_start) + "," + std::to_string(s.char_end) + ")";
}

}  // namespace

std::string_view TaskName(TaskType task) {
  switch (task) {
    case TaskType::kHallucination: return "hallucination";
    case TaskType::kFactuality: return "factuality";
    case TaskType::kLinguistic: return "linguistic";
  }
  return "";
}

std::optional<TaskType> ParseTaskType(std::string_view name) {
  std::string n = AsciiLower(name);
  if (n == "hallucination") return TaskType::kHallucination;
  if (n == "factuality") return TaskType::kFactuality;
  if (n == "linguistic") return TaskType::kLinguistic;
  return std::nullopt;
}

std::string_view LabelName(SpanLabel label) {
  switch (label) {
    case SpanLabel::kIntrinsic: return "intrinsic";
    case SpanLabel::kExtrinsic: return "extrinsic";
    case SpanLabel::kRepetition: return "repetition";
    case SpanLabel::kIncoherence: return "incoherence";
  }
  return "";
}

std::optional<SpanLabel> ParseSpanLabel(std::string_view name) {
  std::string n = AsciiLower(name);
  if (n == "intrinsic") return SpanLabel::kIntrinsic;
  if (n == "extrinsic") return SpanLabel::kExtrinsic;
  if (n == "repetition") return SpanLabel::kRepetition;
  if (n == "incoherence") return SpanLabel::kIncoherence;
  return std::nullopt;
}

TaskType TaskOf(SpanLabel label) {
  return (label == SpanLabel::kIntrinsic || label == SpanLabel::kExtrinsic)
             ? TaskType::kHallucination
             : TaskType::kLinguistic;
}

// ---------------------------------------------------------------------------
// Tokenization

TokenSequence Tokenize(std::string_view text) {
  const std::u32string cps = unicode::Decode(text);
  TokenSequence tokens;
  enum class Kind { kNone, kWord, kPunct } kind = Kind::kNone;
  std::size_t start = 0;

  auto flush = [&](std::size_t end) {
    if (kind != Kind::kNone && end > start) {
      std::string surface;
      for (std::size_t i = start; i < end; ++i) {
        unicode::AppendUtf8(unicode::ToLower(cps[i]), surface);
      }
      tokens.push_back({std::move(surface), start, end});
    }
    kind = Kind::kNone;
  };

  const std::size_t n = cps.size();
  for (std::size_t i = 0; i < n; ++i) {
    const char32_t cp = cps[i];
    if (unicode::IsWhitespace(cp)) {
      flush(i);
      continue;
    }
    if (unicode::IsPunctuation(cp)) {
      // 's stays one token: apostrophe, then s, then a boundary.
      if (IsApostrophe(cp) && i + 1 < n && (cps[i + 1] == U's' || cps[i + 1] == U'S') &&
          (i + 2 == n || unicode::IsWhitespace(cps[i + 2]) ||
           unicode::IsPunctuation(cps[i + 2]))) {
        flush(i);
        kind = Kind::kWord;
        start = i;
        flush(i + 2);
        ++i;
        continue;
      }
      if (kind != Kind::kPunct) {
        flush(i);
        kind = Kind::kPunct;
        start = i;
      }
      continue;
    }
    if (kind != Kind::kWord) {
      flush(i);
      kind = Kind::kWord;
      start = i;
    }
  }
  flush(n);
  return tokens;
}

std::set<std::size_t> SpanToWords(std::size_t char_start, std::size_t char_end,
                                  const TokenSequence& tokens,
                                  std::size_t text_length) {
  if (char_start >= char_end || char_end > text_length) {
    throw Error(Errc::kSpanOutOfRange, kModule,
                "[" + std::to_string(char_start) + "," +
                    std::to_string(char_end) + ") over text of length " +
                    std::to_string(text_length));
  }
  std::set<std::size_t> words;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].char_start < char_end && char_start < tokens[i].char_end) {
      words.insert(i);
    }
  }
  return words;
}

// ---------------------------------------------------------------------------
// Corpus

void Corpus::AddDocument(DocumentRecord doc) {
  if (doc.doc_id.empty()) throw Error(Errc::kEmptyField, kModule, "empty doc_id");
  if (doc.text.empty()) {
    throw Error(Errc::kEmptyField, kModule, "empty text for doc " + doc.doc_id);
  }
  if (documents_.count(doc.doc_id)) {
    throw Error(Errc::kDuplicateKey, kModule, doc.doc_id);
  }
  std::string id = doc.doc_id;
  documents_.emplace(std::move(id), std::move(doc));
}

void Corpus::AddSummary(SummaryRecord summary) {
  if (summary.doc_id.empty() || summary.system_id.empty()) {
    throw Error(Errc::kEmptyField, kModule, "summary without doc_id/system_id");
  }
  if (summary.text.empty()) {
    throw Error(Errc::kEmptyField, kModule,
                "empty summary for (" + summary.doc_id + ", " + summary.system_id + ")");
  }
  if (!documents_.count(summary.doc_id)) {
    throw Error(Errc::kMissingDocument, kModule,
                "summary refers to unknown doc " + summary.doc_id);
  }
  PairKey key = summary.key();
  if (summaries_.count(key)) {
    throw Error(Errc::kDuplicateKey, kModule,
                "(" + key.doc_id + ", " + key.system_id + ")");
  }
  SummaryEntry entry;
  entry.tokens = Tokenize(summary.text);
  entry.length = unicode::CodepointLength(summary.text);
  entry.record = std::move(summary);
  summaries_.emplace(std::move(key), std::move(entry));
}

const DocumentRecord* Corpus::FindDocument(std::string_view doc_id) const {
  auto it = documents_.find(doc_id);
  return it == documents_.end() ? nullptr : &it->second;
}

const SummaryRecord* Corpus::FindSummary(const PairKey& key) const {
  auto it = summaries_.find(key);
  return it == summaries_.end() ? nullptr : &it->second.record;
}

const Corpus::SummaryEntry& Corpus::Entry(const PairKey& key) const {
  auto it = summaries_.find(key);
  if (it == summaries_.end()) {
    throw Error(Errc::kUnknownSystem, kModule,
                "no summary for (" + key.doc_id + ", " + key.system_id + ")");
  }
  return it->second;
}

const TokenSequence& Corpus::SummaryTokens(const PairKey& key) const {
  return Entry(key).tokens;
}

std::size_t Corpus::SummaryLength(const PairKey& key) const {
  return Entry(key).length;
}

std::vector<const SummaryRecord*> Corpus::SummariesFor(
    std::string_view system_id) const {
  std::vector<const SummaryRecord*> out;
  for (const auto& [key, entry] : summaries_) {
    if (key.system_id == system_id) out.push_back(&entry.record);
  }
  return out;
}

std::vector<std::string> Corpus::Systems() const {
  std::set<std::string> systems;
  for (const auto& [key, entry] : summaries_) systems.insert(key.system_id);
  return {systems.begin(), systems.end()};
}

// ---------------------------------------------------------------------------
// AnnotationSet

void AnnotationSet::AddSubmission(const PairKey& key,
                                  const std::string& annotator_id,
                                  TaskType task) {
  if (annotator_id.empty()) {
    throw Error(Errc::kEmptyField, kModule, "empty annotator_id");
  }
  submissions_[{key, task}].insert(annotator_id);
}

void AnnotationSet::AddSpan(SpanAnnotation span) {
  SubmissionKey key{span.key(), span.task()};
  auto& bucket = spans_[key];
  for (const auto& other : bucket) {
    if (other.annotator_id == span.annotator_id &&
        other.char_start < span.char_end && span.char_start < other.char_end) {
      throw Error(Errc::kOverlappingSpans, kModule,
                  "annotator " + span.annotator_id + " on doc " + span.doc_id +
                      ": " + SpanWhere(other) + " vs " + SpanWhere(span));
    }
  }
  AddSubmission(key.pair, span.annotator_id, key.task);
  bucket.push_back(std::move(span));
}

void AnnotationSet::AddJudgment(JudgmentRecord judgment) {
  auto& by_annotator = judgments_[judgment.key()];
  if (by_annotator.count(judgment.annotator_id)) {
    throw Error(Errc::kDuplicateKey, kModule,
                "second verdict by " + judgment.annotator_id + " for (" +
                    judgment.doc_id + ", " + judgment.system_id + ")");
  }
  AddSubmission(judgment.key(), judgment.annotator_id, TaskType::kFactuality);
  std::string annotator = judgment.annotator_id;
  by_annotator.emplace(std::move(annotator), std::move(judgment));
}

std::vector<PairKey> AnnotationSet::Pairs(TaskType task) const {
  std::vector<PairKey> out;
  for (const auto& [key, annotators] : submissions_) {
    if (key.task == task) out.push_back(key.pair);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> AnnotationSet::Systems() const {
  std::set<std::string> systems;
  for (const auto& [key, annotators] : submissions_) {
    systems.insert(key.pair.system_id);
  }
  return {systems.begin(), systems.end()};
}

std::set<std::string> AnnotationSet::Annotators(const PairKey& key,
                                                TaskType task) const {
  auto it = submissions_.find({key, task});
  return it == submissions_.end() ? std::set<std::string>{} : it->second;
}

std::map<std::string, std::vector<SpanAnnotation>>
AnnotationSet::SpansByAnnotator(const PairKey& key, TaskType task) const {
  std::map<std::string, std::vector<SpanAnnotation>> out;
  for (const auto& a : Annotators(key, task)) out[a];
  auto it = spans_.find({key, task});
  if (it != spans_.end()) {
    for (const auto& s : it->second) out[s.annotator_id].push_back(s);
  }
  return out;
}

std::vector<JudgmentRecord> AnnotationSet::Judgments(const PairKey& key) const {
  std::vector<JudgmentRecord> out;
  auto it = judgments_.find(key);
  if (it == judgments_.end()) return out;
  for (const auto& [annotator, j] : it->second) out.push_back(j);
  return out;
}

std::vector<SpanAnnotation> AnnotationSet::spans() const {
  std::vector<SpanAnnotation> out;
  for (const auto& [key, bucket] : spans_) {
    out.insert(out.end(), bucket.begin(), bucket.end());
  }
  return out;
}

std::vector<JudgmentRecord> AnnotationSet::judgments() const {
  std::vector<JudgmentRecord> out;
  for (const auto& [key, by_annotator] : judgments_) {
    for (const auto& [annotator, j] : by_annotator) out.push_back(j);
  }
  return out;
}

std::string AnnotationSet::ToCanonicalTsv() const {
  struct Line {
    std::string doc_id, system_id, task, annotator_id;
    long long start, end;  // -1 when unused
    std::string label, verdict, note;
    auto tie() const {
      return std::tie(doc_id, system_id, task, annotator_id, start, end, label,
                      verdict, note);
    }
  };
  std::vector<Line> lines;
  for (const auto& [key, annotators] : submissions_) {
    const std::string task(TaskName(key.task));
    if (key.task == TaskType::kFactuality) {
      auto jt = judgments_.find(key.pair);
      if (jt == judgments_.end()) continue;
      for (const auto& a : annotators) {
        auto found = jt->second.find(a);
        if (found == jt->second.end()) continue;
        const JudgmentRecord& j = found->second;
        lines.push_back({j.doc_id, j.system_id, task, a, -1, -1, "",
                         j.verdict ? "true" : "false", j.evidence_note});
      }
      continue;
    }
    auto st = spans_.find(key);
    std::set<std::string> with_spans;
    if (st != spans_.end()) {
      for (const auto& s : st->second) {
        with_spans.insert(s.annotator_id);
        lines.push_back({s.doc_id, s.system_id, task, s.annotator_id,
                         static_cast<long long>(s.char_start),
                         static_cast<long long>(s.char_end),
                         std::string(LabelName(s.label)), "", ""});
      }
    }
    for (const auto& a : annotators) {
      if (!with_spans.count(a)) {
        lines.push_back({key.pair.doc_id, key.pair.system_id, task, a, -1, -1,
                         "", "", ""});
      }
    }
  }
  std::sort(lines.begin(), lines.end(),
            [](const Line& a, const Line& b) { return a.tie() < b.tie(); });

  std::string out = io::JoinTsv({"doc_id", "system_id", "annotator_id", "task",
                                 "label", "char_start", "char_end", "verdict",
                                 "evidence_note"});
  out.push_back('\n');
  for (const auto& l : lines) {
    out += io::JoinTsv({l.doc_id, l.system_id, l.annotator_id, l.task, l.label,
                        l.start < 0 ? "" : std::to_string(l.start),
                        l.end < 0 ? "" : std::to_string(l.end), l.verdict,
                        l.note});
    out.push_back('\n');
  }
  return out;
}

bool AnnotationSet::operator==(const AnnotationSet& other) const {
  return annotators_per_item_ == other.annotators_per_item_ &&
         ToCanonicalTsv() == other.ToCanonicalTsv();
}

// ---------------------------------------------------------------------------
// Column maps

ColumnMap ColumnMap::Canonical() {
  ColumnMap map;
  for (const char* f : {"doc_id", "system_id", "annotator_id", "task", "label",
                        "char_start", "char_end", "verdict", "evidence_note"}) {
    map.columns[f] = f;
  }
  return map;
}

ColumnMap ColumnMap::Parse(std::string_view spec) {
  ColumnMap map;
  static const std::set<std::string> kFields = {
      "doc_id", "system_id", "annotator_id", "task",         "label",
      "char_start", "char_end", "verdict",   "evidence_note"};
  for (const auto& raw : io::Split(spec, ',')) {
    if (raw.empty()) continue;
    auto eq = raw.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::kConfig, kModule, "column map entry without '=': " + raw);
    }
    std::string key = raw.substr(0, eq);
    std::string value = raw.substr(eq + 1);
    if (key.starts_with("@")) {
      if (key == "@delimiter") {
        if (value == "tab") map.delimiter = '\t';
        else if (value == "comma") map.delimiter = ',';
        else if (value.size() == 1) map.delimiter = value[0];
        else throw Error(Errc::kConfig, kModule, "bad delimiter " + value);
      } else if (key == "@task") {
        map.fixed_task = ParseTaskType(value);
        if (!map.fixed_task) throw Error(Errc::kConfig, kModule, "bad task " + value);
      } else if (key == "@offset_base") {
        map.offset_base = static_cast<int>(io::ParseInt(value, key));
      } else if (key == "@end_inclusive") {
        map.end_inclusive = value == "1" || value == "true";
      } else if (key == "@null") {
        for (auto& v : io::Split(value, '|')) map.null_values.insert(v);
      } else {
        throw Error(Errc::kConfig, kModule, "unknown column map option " + key);
      }
      continue;
    }
    if (!kFields.count(key)) {
      throw Error(Errc::kConfig, kModule, "unknown annotation field " + key);
    }
    map.columns[key] = value;
  }
  for (const char* required : {"doc_id", "system_id", "annotator_id"}) {
    if (!map.columns.count(required)) {
      throw Error(Errc::kConfig, kModule,
                  std::string("column map lacks required field ") + required);
    }
  }
  if (!map.columns.count("task") && !map.fixed_task) {
    throw Error(Errc::kConfig, kModule, "column map needs a task column or @task");
  }
  return map;
}

// ---------------------------------------------------------------------------
// Ingestion

std::vector<DocumentRecord> ParseDocuments(std::string_view text,
                                           std::string_view source,
                                           DocumentFormat format) {
  std::vector<DocumentRecord> docs;
  std::set<std::string> seen;
  auto add = [&](DocumentRecord d, std::size_t line) {
    if (d.doc_id.empty() || d.text.empty()) {
      throw Error(Errc::kEmptyField, kModule,
                  std::string(source) + ":" + std::to_string(line) +
                      ": empty doc_id or text");
    }
    if (!seen.insert(d.doc_id).second) {
      throw Error(Errc::kDuplicateKey, kModule, d.doc_id);
    }
    docs.push_back(std::move(d));
  };
  if (format == DocumentFormat::kTsv) {
    io::Table table = io::ParseTsv(text, source);
    auto id = table.RequireColumn("doc_id", source);
    auto tx = table.RequireColumn("text", source);
    for (auto& row : table.rows) add({row.fields[id], row.fields[tx]}, row.line);
    return docs;
  }
  auto lines = io::SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::string where = std::string(source) + ":" + std::to_string(i + 1);
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(lines[i]);
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::kParse, kModule, where + ": " + e.what());
    }
    if (!obj.is_object() || !obj.contains("doc_id") || !obj.contains("text") ||
        !obj["doc_id"].is_string() || !obj["text"].is_string()) {
      throw Error(Errc::kParse, kModule, where + ": need string fields doc_id, text");
    }
    add({obj["doc_id"].get<std::string>(), obj["text"].get<std::string>()}, i + 1);
  }
  return docs;
}

std::vector<DocumentRecord> IngestDocuments(const std::string& path,
                                            DocumentFormat format) {
  return ParseDocuments(io::ReadFile(path), path, format);
}

std::vector<SummaryRecord> ParseSummaries(std::string_view text,
                                          std::string_view source) {
  std::vector<SummaryRecord> out;
  std::set<PairKey> seen;
  auto lines = io::SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::string where = std::string(source) + ":" + std::to_string(i + 1);
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(lines[i]);
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::kParse, kModule, where + ": " + e.what());
    }
    for (const char* f : {"doc_id", "system_id", "text"}) {
      if (!obj.is_object() || !obj.contains(f) || !obj[f].is_string()) {
        throw Error(Errc::kParse, kModule,
                    where + ": missing string field " + std::string(f));
      }
    }
    SummaryRecord s{obj["doc_id"].get<std::string>(),
                    obj["system_id"].get<std::string>(),
                    obj["text"].get<std::string>()};
    if (s.doc_id.empty() || s.system_id.empty() || s.text.empty()) {
      throw Error(Errc::kEmptyField, kModule, where);
    }
    if (!seen.insert(s.key()).second) {
      throw Error(Errc::kDuplicateKey, kModule,
                  "(" + s.doc_id + ", " + s.system_id + ")");
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<SummaryRecord> IngestSummaries(const std::string& path) {
  return ParseSummaries(io::ReadFile(path), path);
}

Corpus BuildCorpus(std::vector<DocumentRecord> documents,
                   std::vector<SummaryRecord> summaries) {
  Corpus corpus;
  for (auto& d : documents) corpus.AddDocument(std::move(d));
  for (auto& s : summaries) corpus.AddSummary(std::move(s));
  return corpus;
}

void ValidateSpan(const SpanAnnotation& span, const Corpus& corpus) {
  const PairKey key = span.key();
  if (!corpus.FindSummary(key)) {
    throw Error(Errc::kUnknownSystem, kModule,
                "no summary for (" + key.doc_id + ", " + key.system_id + ")");
  }
  auto words = SpanToWords(span.char_start, span.char_end,
                           corpus.SummaryTokens(key), corpus.SummaryLength(key));
  if (words.empty()) {
    throw Error(Errc::kSpanCoversNoToken, kModule, SpanWhere(span));
  }
}

void CheckNoOverlap(const std::vector<SpanAnnotation>& spans) {
  std::vector<const SpanAnnotation*> sorted;
  for (const auto& s : spans) sorted.push_back(&s);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) {
    return std::tie(a->annotator_id, a->char_start) <
           std::tie(b->annotator_id, b->char_start);
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const auto& a = *sorted[i - 1];
    const auto& b = *sorted[i];
    if (a.annotator_id == b.annotator_id && b.char_start < a.char_end) {
      throw Error(Errc::kOverlappingSpans, kModule,
                  "annotator " + a.annotator_id + " on doc " + a.doc_id + ": " +
                      SpanWhere(a) + " vs " + SpanWhere(b));
    }
  }
}

AnnotationSet ParseAnnotations(std::string_view text, std::string_view source,
                               const ColumnMap& map, const Corpus& corpus) {
  io::Table table = map.delimiter == '\t'
                        ? io::ParseTsv(text, source)
                        : io::ParseCsv(text, map.delimiter, source);
  auto column = [&](const char* field) -> std::optional<std::size_t> {
    auto it = map.columns.find(field);
    if (it == map.columns.end()) return std::nullopt;
    return table.RequireColumn(it->second, source);
  };
  const auto doc_col = column("doc_id");
  const auto sys_col = column("system_id");
  const auto ann_col = column("annotator_id");
  const auto task_col = column("task");
  const auto label_col = column("label");
  const auto start_col = column("char_start");
  const auto end_col = column("char_end");
  const auto verdict_col = column("verdict");
  const auto note_col = column("evidence_note");
  if (!doc_col || !sys_col || !ann_col) {
    throw Error(Errc::kConfig, kModule, "column map lacks key fields");
  }

  AnnotationSet set;
  for (const auto& row : table.rows) {
    const std::string where = std::string(source) + ":" + std::to_string(row.line);
    auto field = [&](const std::optional<std::size_t>& col) -> std::string {
      return col ? row.fields[*col] : std::string();
    };
    auto is_null = [&](const std::string& v) { return map.null_values.count(v) > 0; };

    PairKey key{field(doc_col), field(sys_col)};
    const std::string annotator = field(ann_col);
    if (key.doc_id.empty() || key.system_id.empty() || annotator.empty()) {
      throw Error(Errc::kEmptyField, kModule, where + ": empty key field");
    }
    if (!corpus.FindSummary(key)) {
      throw Error(Errc::kUnknownSystem, kModule,
                  where + ": no summary for (" + key.doc_id + ", " +
                      key.system_id + ")");
    }
    std::optional<TaskType> task = map.fixed_task;
    if (task_col) {
      task = ParseTaskType(field(task_col));
      if (!task) {
        throw Error(Errc::kParse, kModule, where + ": bad task '" + field(task_col) + "'");
      }
    }

    if (*task == TaskType::kFactuality) {
      auto verdict = ParseVerdict(field(verdict_col));
      if (!verdict) {
        throw Error(Errc::kParse, kModule,
                    where + ": bad verdict '" + field(verdict_col) + "'");
      }
      set.AddJudgment({key.doc_id, key.system_id, annotator, *verdict,
                       field(note_col)});
      continue;
    }

    const std::string raw_label = field(label_col);
    if (is_null(raw_label)) {
      set.AddSubmission(key, annotator, *task);
      continue;
    }
    auto label = ParseSpanLabel(raw_label);
    if (!label) {
      throw Error(Errc::kParse, kModule, where + ": bad label '" + raw_label + "'");
    }
    if (TaskOf(*label) != *task) {
      throw Error(Errc::kParse, kModule,
                  where + ": label " + raw_label + " not allowed for task " +
                      std::string(TaskName(*task)));
    }
    long long start = io::ParseInt(field(start_col), "char_start") - map.offset_base;
    long long end = io::ParseInt(field(end_col), "char_end") - map.offset_base +
                    (map.end_inclusive ? 1 : 0);
    if (start < 0 || end < 0) {
      throw Error(Errc::kSpanOutOfRange, kModule, where + ": negative offset");
    }
    SpanAnnotation span{key.doc_id, key.system_id, annotator, *label,
                        static_cast<std::size_t>(start),
                        static_cast<std::size_t>(end)};
    try {
      ValidateSpan(span, corpus);
      set.AddSpan(std::move(span));
    } catch (const Error& e) {
      throw Error(e.code(), kModule, where + ": " + e.what());
    }
  }
  return set;
}

AnnotationSet IngestAnnotations(const std::string& path, const ColumnMap& map,
                                const Corpus& corpus) {
  return ParseAnnotations(io::ReadFile(path), path, map, corpus);
}

}  // namespace faitheval

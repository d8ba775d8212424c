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

// Documents, system summaries, and human annotations over them.
//
// Summary spans are half-open [char_start, char_end) intervals counted in
// Unicode code points of the raw summary text. Word-level statistics go
// through Tokenize() and SpanToWords().

#ifndef FAITHEVAL_CORPUS_H_
#define FAITHEVAL_CORPUS_H_

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace faitheval {

enum class TaskType { kHallucination, kFactuality, kLinguistic };

enum class SpanLabel { kIntrinsic, kExtrinsic, kRepetition, kIncoherence };

std::string_view TaskName(TaskType task);
std::optional<TaskType> ParseTaskType(std::string_view name);
std::string_view LabelName(SpanLabel label);
std::optional<SpanLabel> ParseSpanLabel(std::string_view name);
// Hallucination labels belong to the hallucination task, the others to the
// linguistic task.
TaskType TaskOf(SpanLabel label);

struct PairKey {
  std::string doc_id;
  std::string system_id;

  auto operator<=>(const PairKey&) const = default;
};

// One metric value per (doc, system) pair.
using PairScores = std::map<PairKey, double>;

struct DocumentRecord {
  std::string doc_id;
  std::string text;
};

struct SummaryRecord {
  std::string doc_id;
  std::string system_id;
  std::string text;

  PairKey key() const { return {doc_id, system_id}; }
};

struct Token {
  std::string surface;
  std::size_t char_start = 0;
  std::size_t char_end = 0;

  bool operator==(const Token&) const = default;
};

using TokenSequence = std::vector<Token>;

struct SpanAnnotation {
  std::string doc_id;
  std::string system_id;
  std::string annotator_id;
  SpanLabel label = SpanLabel::kExtrinsic;
  std::size_t char_start = 0;
  std::size_t char_end = 0;

  TaskType task() const { return TaskOf(label); }
  PairKey key() const { return {doc_id, system_id}; }
  bool operator==(const SpanAnnotation&) const = default;
};

struct JudgmentRecord {
  std::string doc_id;
  std::string system_id;
  std::string annotator_id;
  bool verdict = false;  // true = factual
  std::string evidence_note;

  PairKey key() const { return {doc_id, system_id}; }
  bool operator==(const JudgmentRecord&) const = default;
};

// Lowercases, splits on Unicode whitespace, and makes each run of
// punctuation/symbol characters its own token. An apostrophe followed by a
// lone "s" becomes the single token "'s".
TokenSequence Tokenize(std::string_view text);

// Indices of tokens whose character interval overlaps the span by at least
// one code point. Throws SpanOutOfRange when the span is empty or extends past
// `text_length`.
std::set<std::size_t> SpanToWords(std::size_t char_start, std::size_t char_end,
                                  const TokenSequence& tokens,
                                  std::size_t text_length);

// Documents and summaries, validated and tokenized on insertion. Immutable
// once ingestion finishes.
class Corpus {
 public:
  void AddDocument(DocumentRecord doc);
  // The summary's doc_id must already be present.
  void AddSummary(SummaryRecord summary);

  const DocumentRecord* FindDocument(std::string_view doc_id) const;
  const SummaryRecord* FindSummary(const PairKey& key) const;
  // Tokens and code-point length of a known summary.
  const TokenSequence& SummaryTokens(const PairKey& key) const;
  std::size_t SummaryLength(const PairKey& key) const;

  const std::map<std::string, DocumentRecord, std::less<>>& documents() const {
    return documents_;
  }
  std::vector<const SummaryRecord*> SummariesFor(std::string_view system_id) const;
  std::vector<std::string> Systems() const;
  std::size_t summary_count() const { return summaries_.size(); }

 private:
  struct SummaryEntry {
    SummaryRecord record;
    TokenSequence tokens;
    std::size_t length = 0;
  };
  const SummaryEntry& Entry(const PairKey& key) const;

  std::map<std::string, DocumentRecord, std::less<>> documents_;
  std::map<PairKey, SummaryEntry> summaries_;
};

// Spans and verdicts from all annotators. A submission records that an
// annotator completed a task for a pair, which matters when they marked no
// spans at all.
class AnnotationSet {
 public:
  explicit AnnotationSet(int annotators_per_item = 3)
      : annotators_per_item_(annotators_per_item) {}

  void AddSubmission(const PairKey& key, const std::string& annotator_id,
                     TaskType task);
  void AddSpan(SpanAnnotation span);
  // At most one verdict per (pair, annotator).
  void AddJudgment(JudgmentRecord judgment);

  int annotators_per_item() const { return annotators_per_item_; }

  // Pairs with at least one submission for the task.
  std::vector<PairKey> Pairs(TaskType task) const;
  std::vector<std::string> Systems() const;
  std::set<std::string> Annotators(const PairKey& key, TaskType task) const;
  // Spans of one pair and task grouped by annotator; annotators who submitted
  // nothing still appear with an empty list.
  std::map<std::string, std::vector<SpanAnnotation>> SpansByAnnotator(
      const PairKey& key, TaskType task) const;
  std::vector<JudgmentRecord> Judgments(const PairKey& key) const;

  std::vector<SpanAnnotation> spans() const;
  std::vector<JudgmentRecord> judgments() const;

  // Canonical export: header plus one row per span, per verdict, and per
  // span-less submission, in a fixed order.
  std::string ToCanonicalTsv() const;

  bool operator==(const AnnotationSet& other) const;

 private:
  struct SubmissionKey {
    PairKey pair;
    TaskType task;
    auto operator<=>(const SubmissionKey&) const = default;
  };

  int annotators_per_item_;
  std::map<SubmissionKey, std::set<std::string>> submissions_;
  std::map<SubmissionKey, std::vector<SpanAnnotation>> spans_;
  std::map<PairKey, std::map<std::string, JudgmentRecord>> judgments_;
};

// Maps logical annotation fields onto columns of an arbitrary delimited file,
// plus a handful of options describing the file's conventions.
//
// Text form: comma-separated `field=column` entries and `@option=value`
// entries, e.g.
//   doc_id=bbcid,system_id=system,annotator_id=worker_id,
//   label=hallucination_type,char_start=hallucinated_span_start,
//   char_end=hallucinated_span_end,@task=hallucination,@delimiter=comma
struct ColumnMap {
  std::map<std::string, std::string> columns;  // logical field -> column
  char delimiter = '\t';
  std::optional<TaskType> fixed_task;  // used when there is no task column
  int offset_base = 0;                 // 1 when files count from 1
  bool end_inclusive = false;
  std::set<std::string> null_values = {""};

  static ColumnMap Canonical();
  static ColumnMap Parse(std::string_view spec);
};

enum class DocumentFormat { kJsonl, kTsv };

// Documents in JSONL (doc_id, text) or headed TSV with the same columns.
// Rejects duplicate doc_ids and empty fields.
std::vector<DocumentRecord> IngestDocuments(
    const std::string& path, DocumentFormat format = DocumentFormat::kJsonl);
std::vector<DocumentRecord> ParseDocuments(std::string_view text,
                                           std::string_view source,
                                           DocumentFormat format);
// Summaries in JSONL (doc_id, system_id, text). Rejects duplicate pairs.
std::vector<SummaryRecord> IngestSummaries(const std::string& path);
std::vector<SummaryRecord> ParseSummaries(std::string_view text,
                                          std::string_view source);

Corpus BuildCorpus(std::vector<DocumentRecord> documents,
                   std::vector<SummaryRecord> summaries);

// Parses and validates annotations against the corpus: spans must lie inside
// their summary, cover at least one token, and not overlap other spans by the
// same annotator on the same task.
// Span checks shared with the annotation service. ValidateSpan throws
// SpanOutOfRange / SpanCoversNoToken / UnknownSystem; CheckNoOverlap throws
// OverlappingSpans for intersecting spans in one annotator's list.
void ValidateSpan(const SpanAnnotation& span, const Corpus& corpus);
void CheckNoOverlap(const std::vector<SpanAnnotation>& spans);

AnnotationSet ParseAnnotations(std::string_view text, std::string_view source,
                               const ColumnMap& map, const Corpus& corpus);
AnnotationSet IngestAnnotations(const std::string& path, const ColumnMap& map,
                                const Corpus& corpus);

}  // namespace faitheval

#endif  // FAITHEVAL_CORPUS_H_

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

// Aggregation of span annotations and factuality verdicts into per-system
// hallucination tables.
//
// A word is an intrinsic (extrinsic) hallucination only when every annotator
// covered it with an intrinsic (extrinsic) span. A summary is hallucinated
// when it has at least one such word, and factual when all of its verdicts
// are true.

#ifndef FAITHEVAL_HALLU_STATS_H_
#define FAITHEVAL_HALLU_STATS_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "faitheval/corpus.h"

namespace faitheval {

struct UnanimousWords {
  std::vector<bool> intrinsic;
  std::vector<bool> extrinsic;
  // Every annotator marked the word with some hallucination label, types may
  // differ.
  std::vector<bool> any_type;
};

// Requires exactly `raters` annotators in `spans_by_annotator`
// (IncompleteAnnotation otherwise).
UnanimousWords UnanimousWordLabels(
    const TokenSequence& tokens, std::size_t text_length,
    const std::map<std::string, std::vector<SpanAnnotation>>& spans_by_annotator,
    int raters = 3);

// How the document-level I∪E flag is formed.
enum class UnionRule {
  kDocumentOr,       // intrinsic OR extrinsic document flags
  kWordAnyTypeUnanimous,  // some word unanimously marked with any type
};

struct DocFlags {
  bool intrinsic = false;
  bool extrinsic = false;
  bool hallucinated = false;
  bool faithful = true;
  // Set only for hallucinated summaries carrying a full set of verdicts.
  std::optional<bool> factual;
};

DocFlags ComputeDocFlags(const AnnotationSet& annotations, const Corpus& corpus,
                         const PairKey& key,
                         UnionRule rule = UnionRule::kDocumentOr);

struct SystemHalluRow {
  std::string system_id;
  std::size_t count = 0;
  double pct_intrinsic = 0.0;
  double pct_extrinsic = 0.0;
  double pct_union = 0.0;
  double pct_faithful = 0.0;
  // Empty for systems without verdicts (human references).
  std::optional<double> pct_faithful_or_factual;
};

struct FactualBreakdownRow {
  std::string system_id;
  std::size_t count = 0;
  double pct_faithful = 0.0;
  double pct_intrinsic = 0.0;
  std::optional<double> pct_intrinsic_factual;
  double pct_extrinsic = 0.0;
  std::optional<double> pct_extrinsic_factual;
  double pct_union = 0.0;
  std::optional<double> pct_union_factual;
  std::optional<double> pct_factual_total;
};

struct SpanStatsRow {
  std::string system_id;
  std::size_t documents = 0;
  std::size_t total_intrinsic_spans = 0;
  std::size_t total_extrinsic_spans = 0;
  double avg_intrinsic_per_doc = 0.0;
  double avg_extrinsic_per_doc = 0.0;
  // Mean token count over all hallucination spans.
  double avg_span_length = 0.0;
  // Same, extrinsic spans only.
  double avg_extrinsic_span_length = 0.0;
};

struct LinguisticRow {
  std::string system_id;
  std::size_t count = 0;
  double pct_repetition = 0.0;
  double pct_incoherence = 0.0;
};

struct HalluOptions {
  UnionRule union_rule = UnionRule::kDocumentOr;
};

// One row per system with hallucination annotations, sorted by system_id.
// Every pair needs a complete set of annotators. A system with any verdicts
// needs complete verdicts on each of its hallucinated pairs.
std::vector<SystemHalluRow> SystemTable(const AnnotationSet& annotations,
                                        const Corpus& corpus,
                                        const HalluOptions& options = {});

std::vector<FactualBreakdownRow> FactualBreakdown(const AnnotationSet& annotations,
                                                  const Corpus& corpus,
                                                  const HalluOptions& options = {});

// Totals pooled over annotators. Per-document averages divide by
// `corpus_size` when given, else by the number of annotated pairs.
std::vector<SpanStatsRow> SpanStats(const AnnotationSet& annotations,
                                    const Corpus& corpus,
                                    std::optional<std::size_t> corpus_size = {});

std::vector<LinguisticRow> RepIncohTable(const AnnotationSet& annotations,
                                         const Corpus& corpus);

}  // namespace faitheval

#endif  // FAITHEVAL_HALLU_STATS_H_

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

// Result tables, input loading shared by the CLI subcommands, and the full
// report run. Every subcommand and the report build their tables through the
// same functions, so a number printed by one appears verbatim in the other.

#ifndef FAITHEVAL_REPORT_H_
#define FAITHEVAL_REPORT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "faitheval/agreement.h"
#include "faitheval/corpus.h"
#include "faitheval/correlation.h"
#include "faitheval/entail_eval.h"
#include "faitheval/error.h"
#include "faitheval/hallu_stats.h"
#include "faitheval/qa_eval.h"
#include "faitheval/rouge.h"
#include "faitheval/scorer.h"

namespace faitheval {

struct ReportTable {
  std::string name;  // file stem, e.g. "rouge"
  std::string title;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Header plus one line per row, tab separated, '\n' terminated. Empty cells
// stay empty.
std::string RenderTsv(const ReportTable& table);
// Title line, then space-padded columns; empty cells print as "-".
std::string RenderText(const ReportTable& table);

// Scores are x100 with 2 decimals.
ReportTable RougeTable(const std::vector<std::pair<std::string, RougeTriple>>& rows);
// Long form: system_id, task, kappa (2 decimals); empty tasks are omitted.
ReportTable AgreementTable(const std::vector<KappaRow>& rows);
// Percentages carry 1 decimal.
ReportTable HallucinationTable(const std::vector<SystemHalluRow>& rows);
ReportTable FactualBreakdownTable(const std::vector<FactualBreakdownRow>& rows);
ReportTable SpanStatsTable(const std::vector<SpanStatsRow>& rows);
ReportTable LinguisticTable(const std::vector<LinguisticRow>& rows);
ReportTable EntailmentTable(const std::vector<ClassDistribution>& rows);
ReportTable QaTable(const std::vector<QaAccuracyRow>& rows);
// metric, abs_rs (3 decimals).
ReportTable CorrelationTable(const std::string& name,
                             const std::vector<std::pair<std::string, double>>& rows);
ReportTable SelectionTable(const std::vector<std::pair<std::string, SelectionEvalRow>>& rows);

// Corpus from summaries and, when `documents_path` is non-empty, documents.
// Without documents each referenced doc gets its id as placeholder text,
// which is enough for every computation that only reads summaries.
Corpus LoadCorpus(const std::string& documents_path, const std::string& summaries_path);
// `column_map` empty means the canonical export columns.
AnnotationSet LoadAnnotations(const std::string& path, const std::string& column_map,
                              const Corpus& corpus);
// From a JSONL file, or from the summaries of `reference_system`. Exactly one
// of the two must be given (Config otherwise).
ReferenceMap LoadReferenceMap(const std::string& path, const std::string& reference_system,
                              const Corpus& corpus);
std::vector<std::string> SplitList(const std::string& text);
UnionRule ParseUnionRule(const std::string& name);
MatchRule ParseMatchRule(const std::string& name);

// A per-pair metric for correlation. With `restrict_labels` only pairs that
// carry a score are correlated.
struct NamedMetric {
  std::string name;
  PairScores scores;
  bool restrict_labels = false;
};

// rouge1, rouge2 and rougeL F1 for every summary of `systems`.
std::vector<NamedMetric> RougeMetrics(const Corpus& corpus,
                                      const std::vector<std::string>& systems,
                                      const ReferenceMap& references);
NamedMetric EntailmentMetric(const EntailmentScores& scores);
// Share of a pair's questions answered correctly.
NamedMetric QaMetric(const std::vector<QaVerdict>& verdicts);
std::vector<NamedMetric> WideMetrics(const MetricScores& scores);

// |r_s| of every metric against `labels`, limited to `systems` when given.
std::vector<std::pair<std::string, double>> CorrelationRows(
    const std::vector<NamedMetric>& metrics, const PairLabels& labels,
    const std::vector<std::string>& systems);

// One selection per annotated document of `system_id`, all choosing it.
std::vector<SelectionResult> FixedSelection(const AnnotationSet& annotations,
                                            const std::string& system_id);

struct RunConfig {
  std::string documents;
  std::string summaries;
  std::string annotations;
  std::string column_map;
  std::string references;
  std::string reference_system;
  std::vector<std::string> systems;
  std::string entailment_scores;
  std::string metric_scores;
  std::string qa_pairs;
  std::string rc_answers;
  std::string folds;
  // One file per fold, in fold order.
  std::vector<std::string> fold_scores;
  std::string out;
  UnionRule union_rule = UnionRule::kDocumentOr;
  MatchOptions match;
  std::optional<std::size_t> corpus_size;
};

// Throws Config for a missing required field, an empty systems list, an
// unreadable input path, or an incomplete fold setup.
void ValidateRunConfig(const RunConfig& config);

struct ModuleFailure {
  std::string section;
  std::string module;
  Errc code = Errc::kConfig;
  std::string message;
};

struct ReportBundle {
  std::vector<ReportTable> tables;
  std::vector<ModuleFailure> failures;

  // The aligned rendering of every table, then the failures.
  std::string Summary() const;
  // 0, or the exit code of the first failure.
  int exit_code() const;
};

// Validates the config, then runs every section its inputs allow. A failing
// section is recorded and the others still run.
ReportBundle RunReport(const RunConfig& config);

// {name}.tsv per table plus report.txt.
void WriteBundle(const ReportBundle& bundle, const std::string& dir);

}  // namespace faitheval

#endif  // FAITHEVAL_REPORT_H_

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


// Entailment-based evaluation: per-pair NLI classes, selection of the most
// entailed candidate per document, and the fold export and cross-validated
// evaluation around an externally fine-tuned entailment scorer.

#ifndef FAITHEVAL_ENTAIL_EVAL_H_
#define FAITHEVAL_ENTAIL_EVAL_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "faitheval/corpus.h"
#include "faitheval/hallu_stats.h"
#include "faitheval/rouge.h"
#include "faitheval/scorer.h"

namespace faitheval {

enum class EntailClass { kEntailment, kNeutral, kContradiction };

std::string_view EntailClassName(EntailClass c);

// Argmax; ties go to the more pessimistic class.
EntailClass Classify(const EntailmentScore& score);

struct ClassDistribution {
  std::string system_id;
  std::size_t count = 0;
  double pct_entail = 0.0;
  double pct_neutral = 0.0;
  double pct_contradict = 0.0;
};

// One row per system present in `pairs`, sorted by system_id. A pair with no
// score throws MissingScore.
std::vector<ClassDistribution> ClassDistributions(const std::vector<PairKey>& pairs,
                                                  const EntailmentScores& scores);

struct SelectionResult {
  std::string doc_id;
  std::string chosen_system;
  double chosen_score = 0.0;
  std::size_t candidates_considered = 0;
};

// Highest p_entail wins, exact ties go to the smallest system_id. Throws
// NoCandidates on an empty map.
SelectionResult SelectSummary(const std::string& doc_id,
                              const std::map<std::string, double>& candidates);

// Selects per document over `systems` (every system in `scores` when empty),
// for `doc_ids` (every document in `scores` when empty). Candidates without a
// score are skipped; a document left with none throws NoCandidates. Output is
// sorted by doc_id.
std::vector<SelectionResult> SelectAll(const EntailmentScores& scores,
                                       const std::vector<std::string>& systems,
                                       const std::vector<std::string>& doc_ids = {});

std::string FormatSelections(const std::vector<SelectionResult>& selections);

struct SelectionEvalRow {
  std::size_t count = 0;
  RougeTriple rouge;
  double pct_faithful = 0.0;
  // Present when every chosen system carries factuality verdicts.
  std::optional<double> pct_faithful_or_factual;
};

// Mean ROUGE of the chosen summaries against the references, and the
// faithful and faithful-or-factual shares of the chosen set. A chosen pair
// without hallucination annotations, or a hallucinated chosen pair without
// verdicts when verdicts are expected, throws MissingAnnotation.
SelectionEvalRow SelectionEval(const std::vector<SelectionResult>& selections,
                               const Corpus& corpus, const ReferenceMap& references,
                               const AnnotationSet& annotations,
                               const HalluOptions& options = {});

struct FinetunePair {
  PairKey key;
  std::string document_text;
  std::string summary_text;
  EntailClass label = EntailClass::kNeutral;
  int fold = 0;
};

// doc_id to fold. Doc ids are sorted, shuffled with a seeded 64-bit
// Mersenne Twister, then dealt round-robin into k folds. Throws Config when
// k < 2.
using FoldMap = std::map<std::string, int, std::less<>>;
FoldMap AssignFolds(std::vector<std::string> doc_ids, int k, std::uint64_t seed);

// One pair per annotated summary: entailment when faithful, neutral
// otherwise.
std::vector<FinetunePair> ExportFinetune(const AnnotationSet& annotations,
                                         const Corpus& corpus, int k, std::uint64_t seed,
                                         const HalluOptions& options = {});

// Writes fold_{f}_train.tsv and fold_{f}_eval.tsv for every fold, plus
// folds.tsv (doc_id, fold), into `dir`.
void WriteFinetuneFolds(const std::vector<FinetunePair>& pairs, int k,
                        const std::string& dir);

FoldMap ParseFolds(std::string_view text, std::string_view source);
FoldMap LoadFolds(const std::string& path);

struct CrossvalResult {
  std::vector<SelectionResult> selections;
  SelectionEvalRow row;
};

// `fold_scores[f]` comes from a scorer trained without fold f. Each file may
// only hold pairs of fold f's documents (FoldLeakage); every fold in [0, k)
// must be present (MissingFold). Selection runs per fold on its held-out
// documents and the union is evaluated once.
CrossvalResult CrossvalEval(const std::map<int, EntailmentScores>& fold_scores,
                            const FoldMap& folds, const std::vector<std::string>& systems,
                            const Corpus& corpus, const ReferenceMap& references,
                            const AnnotationSet& annotations,
                            const HalluOptions& options = {});

}  // namespace faitheval

#endif  // FAITHEVAL_ENTAIL_EVAL_H_

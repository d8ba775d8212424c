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

// Inter-annotator agreement (Fleiss' kappa) at word level for span tasks and
// at summary level for factuality verdicts.

#ifndef FAITHEVAL_AGREEMENT_H_
#define FAITHEVAL_AGREEMENT_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "faitheval/corpus.h"

namespace faitheval {

// Per-word category index. Hallucination task: 0 faithful, 1 intrinsic,
// 2 extrinsic. Linguistic task: 0 clean, 1 repetition, 2 incoherence.
using WordCategories = std::vector<int>;

int CategoryOf(SpanLabel label);

// Category of every word of a summary, per annotator. Words not covered by any
// of an annotator's spans get category 0; a word touched by two of one
// annotator's spans takes the higher category.
// Per-word set of categories an annotator's spans cover, as bits
// (1 << category). Bit 0 is never set.
using WordMasks = std::vector<unsigned>;
std::map<std::string, WordMasks> WordLabelMasks(
    const TokenSequence& tokens, std::size_t text_length,
    const std::map<std::string, std::vector<SpanAnnotation>>& spans_by_annotator);

std::map<std::string, WordCategories> WordLabels(
    const TokenSequence& tokens, std::size_t text_length,
    const std::map<std::string, std::vector<SpanAnnotation>>& spans_by_annotator);

// counts[item][category] = number of raters choosing that category.
using ItemCategoryCounts = std::vector<std::vector<int>>;

// Fleiss' kappa. Every row must have the same width and sum to `raters`
// (RaggedCounts otherwise); raters >= 2 (InsufficientRaters). When chance
// agreement is 1 every item is unanimous on one category and kappa is 1.
double FleissKappa(const ItemCategoryCounts& counts, int raters);

struct KappaRow {
  std::string system_id;
  std::optional<double> hallucination;
  std::optional<double> factuality;
  std::optional<double> repetition;
  std::optional<double> incoherence;
};

// Kappas for one system. Word items are pooled over all of the system's
// summaries. Repetition and incoherence are each scored as a binary
// issue/clean decision per word. Factuality items are summaries with
// verdicts, categories {factual, non-factual}. A task without any annotations
// for the system is left empty; a pair with the wrong number of annotators
// throws IncompleteAnnotation.
KappaRow KappaReport(const AnnotationSet& annotations, const Corpus& corpus,
                     const std::string& system_id);

}  // namespace faitheval

#endif  // FAITHEVAL_AGREEMENT_H_

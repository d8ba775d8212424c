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

#include "faitheval/agreement.h"

#include "faitheval/error.h"

namespace faitheval {
namespace {

constexpr char kModule[] = "agreement";

void RequireComplete(const AnnotationSet& annotations, const PairKey& key,
                     TaskType task) {
  const auto n = annotations.Annotators(key, task).size();
  if (n != static_cast<std::size_t>(annotations.annotators_per_item())) {
    throw Error(Errc::kIncompleteAnnotation, kModule,
                std::string(TaskName(task)) + " for (" + key.doc_id + ", " +
                    key.system_id + ") has " + std::to_string(n) +
                    " annotators, expected " +
                    std::to_string(annotations.annotators_per_item()));
  }
}

// Appends one item per word: counts over `categories` after mapping each
// annotator's word value through `fold`.
template <typename Labels, typename Fold>
void AppendWordItems(const std::map<std::string, Labels>& labels,
                     std::size_t words, int categories, Fold fold,
                     ItemCategoryCounts& items) {
  for (std::size_t w = 0; w < words; ++w) {
    std::vector<int> row(categories, 0);
    for (const auto& [annotator, cats] : labels) ++row[fold(cats[w])];
    items.push_back(std::move(row));
  }
}

}  // namespace

int CategoryOf(SpanLabel label) {
  switch (label) {
    case SpanLabel::kIntrinsic:
    case SpanLabel::kRepetition:
      return 1;
    case SpanLabel::kExtrinsic:
    case SpanLabel::kIncoherence:
      return 2;
  }
  return 0;
}

std::map<std::string, WordMasks> WordLabelMasks(
    const TokenSequence& tokens, std::size_t text_length,
    const std::map<std::string, std::vector<SpanAnnotation>>& spans_by_annotator) {
  std::map<std::string, WordMasks> out;
  for (const auto& [annotator, spans] : spans_by_annotator) {
    WordMasks masks(tokens.size(), 0u);
    for (const auto& span : spans) {
      for (auto w : SpanToWords(span.char_start, span.char_end, tokens, text_length)) {
        masks[w] |= 1u << CategoryOf(span.label);
      }
    }
    out.emplace(annotator, std::move(masks));
  }
  return out;
}

std::map<std::string, WordCategories> WordLabels(
    const TokenSequence& tokens, std::size_t text_length,
    const std::map<std::string, std::vector<SpanAnnotation>>& spans_by_annotator) {
  std::map<std::string, WordCategories> out;
  for (auto& [annotator, masks] :
       WordLabelMasks(tokens, text_length, spans_by_annotator)) {
    WordCategories cats(masks.size(), 0);
    for (std::size_t w = 0; w < masks.size(); ++w) {
      cats[w] = (masks[w] & 4u) ? 2 : (masks[w] & 2u) ? 1 : 0;
    }
    out.emplace(annotator, std::move(cats));
  }
  return out;
}

double FleissKappa(const ItemCategoryCounts& counts, int raters) {
  if (raters < 2) {
    throw Error(Errc::kInsufficientRaters, kModule,
                "need at least 2 raters, got " + std::to_string(raters));
  }
  if (counts.empty() || counts.front().empty()) {
    throw Error(Errc::kRaggedCounts, kModule, "no items");
  }
  const std::size_t k = counts.front().size();
  const double n_items = static_cast<double>(counts.size());
  const double n_raters = static_cast<double>(raters);
  std::vector<double> column(k, 0.0);
  double agreement_sum = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto& row = counts[i];
    if (row.size() != k) {
      throw Error(Errc::kRaggedCounts, kModule,
                  "item " + std::to_string(i) + " has " + std::to_string(row.size()) +
                      " categories, expected " + std::to_string(k));
    }
    long total = 0;
    double squares = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (row[j] < 0) throw Error(Errc::kRaggedCounts, kModule, "negative count");
      total += row[j];
      squares += static_cast<double>(row[j]) * row[j];
      column[j] += row[j];
    }
    if (total != raters) {
      throw Error(Errc::kRaggedCounts, kModule,
                  "item " + std::to_string(i) + " has " + std::to_string(total) +
                      " labels, expected " + std::to_string(raters));
    }
    agreement_sum += (squares - n_raters) / (n_raters * (n_raters - 1.0));
  }
  const double p_bar = agreement_sum / n_items;
  double p_e = 0.0;
  for (double c : column) {
    const double p = c / (n_items * n_raters);
    p_e += p * p;
  }
  // Chance agreement of 1 means a single category was used throughout.
  if (p_e >= 1.0) return 1.0;
  return (p_bar - p_e) / (1.0 - p_e);
}

KappaRow KappaReport(const AnnotationSet& annotations, const Corpus& corpus,
                     const std::string& system_id) {
  KappaRow row;
  row.system_id = system_id;
  const int raters = annotations.annotators_per_item();

  ItemCategoryCounts hall_items;
  for (const auto& key : annotations.Pairs(TaskType::kHallucination)) {
    if (key.system_id != system_id) continue;
    RequireComplete(annotations, key, TaskType::kHallucination);
    const auto& tokens = corpus.SummaryTokens(key);
    auto labels = WordLabels(tokens, corpus.SummaryLength(key),
                             annotations.SpansByAnnotator(key, TaskType::kHallucination));
    AppendWordItems(labels, tokens.size(), 3, [](int c) { return c; }, hall_items);
  }
  if (!hall_items.empty()) row.hallucination = FleissKappa(hall_items, raters);

  ItemCategoryCounts rep_items, inco_items;
  bool any_linguistic = false;
  for (const auto& key : annotations.Pairs(TaskType::kLinguistic)) {
    if (key.system_id != system_id) continue;
    any_linguistic = true;
    RequireComplete(annotations, key, TaskType::kLinguistic);
    const auto& tokens = corpus.SummaryTokens(key);
    auto masks = WordLabelMasks(tokens, corpus.SummaryLength(key),
                                annotations.SpansByAnnotator(key, TaskType::kLinguistic));
    AppendWordItems(masks, tokens.size(), 2,
                    [](unsigned m) { return (m & 2u) ? 1 : 0; }, rep_items);
    AppendWordItems(masks, tokens.size(), 2,
                    [](unsigned m) { return (m & 4u) ? 1 : 0; }, inco_items);
  }
  if (any_linguistic && !rep_items.empty()) {
    row.repetition = FleissKappa(rep_items, raters);
    row.incoherence = FleissKappa(inco_items, raters);
  }

  ItemCategoryCounts fact_items;
  for (const auto& key : annotations.Pairs(TaskType::kFactuality)) {
    if (key.system_id != system_id) continue;
    RequireComplete(annotations, key, TaskType::kFactuality);
    std::vector<int> counts(2, 0);
    for (const auto& j : annotations.Judgments(key)) ++counts[j.verdict ? 0 : 1];
    fact_items.push_back(std::move(counts));
  }
  if (!fact_items.empty()) row.factuality = FleissKappa(fact_items, raters);
  return row;
}

}  // namespace faitheval

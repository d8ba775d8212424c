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

#include "faitheval/hallu_stats.h"

#include <algorithm>

#include "faitheval/agreement.h"
#include "faitheval/error.h"

namespace faitheval {
namespace {

constexpr char kModule[] = "hallu_stats";

constexpr unsigned kIntrinsicBit = 1u << 1;
constexpr unsigned kExtrinsicBit = 1u << 2;

std::string PairName(const PairKey& key) {
  return "(" + key.doc_id + ", " + key.system_id + ")";
}

void RequireRaters(std::size_t have, int raters, const PairKey& key,
                   TaskType task) {
  if (have != static_cast<std::size_t>(raters)) {
    throw Error(Errc::kIncompleteAnnotation, kModule,
                std::string(TaskName(task)) + " for " + PairName(key) + " has " +
                    std::to_string(have) + " annotators, expected " +
                    std::to_string(raters));
  }
}

// Word w is unanimous for `bits` when every annotator's mask intersects it.
std::vector<bool> Unanimous(const std::map<std::string, WordMasks>& masks,
                            std::size_t words, unsigned bits) {
  std::vector<bool> out(words, !masks.empty());
  for (const auto& [annotator, m] : masks) {
    for (std::size_t w = 0; w < words; ++w) {
      if (!(m[w] & bits)) out[w] = false;
    }
  }
  return out;
}

bool Any(const std::vector<bool>& v) {
  return std::find(v.begin(), v.end(), true) != v.end();
}

double Percent(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

std::map<std::string, std::vector<PairKey>> PairsBySystem(
    const AnnotationSet& annotations, TaskType task) {
  std::map<std::string, std::vector<PairKey>> out;
  for (auto& key : annotations.Pairs(task)) out[key.system_id].push_back(key);
  return out;
}

bool SystemHasVerdicts(const AnnotationSet& annotations,
                       const std::string& system_id) {
  for (const auto& key : annotations.Pairs(TaskType::kFactuality)) {
    if (key.system_id == system_id) return true;
  }
  return false;
}

struct SystemCounts {
  std::size_t n = 0, intrinsic = 0, extrinsic = 0, hallucinated = 0;
  std::size_t intrinsic_factual = 0, extrinsic_factual = 0, union_factual = 0;
  bool has_verdicts = false;
};

SystemCounts CountSystem(const AnnotationSet& annotations, const Corpus& corpus,
                         const std::string& system_id,
                         const std::vector<PairKey>& pairs, UnionRule rule) {
  SystemCounts c;
  c.has_verdicts = SystemHasVerdicts(annotations, system_id);
  for (const auto& key : pairs) {
    DocFlags f = ComputeDocFlags(annotations, corpus, key, rule);
    ++c.n;
    c.intrinsic += f.intrinsic;
    c.extrinsic += f.extrinsic;
    c.hallucinated += f.hallucinated;
    if (!c.has_verdicts || !f.hallucinated) continue;
    if (!f.factual) {
      RequireRaters(annotations.Annotators(key, TaskType::kFactuality).size(),
                    annotations.annotators_per_item(), key, TaskType::kFactuality);
    }
    if (*f.factual) {
      c.intrinsic_factual += f.intrinsic;
      c.extrinsic_factual += f.extrinsic;
      ++c.union_factual;
    }
  }
  return c;
}

}  // namespace

UnanimousWords UnanimousWordLabels(
    const TokenSequence& tokens, std::size_t text_length,
    const std::map<std::string, std::vector<SpanAnnotation>>& spans_by_annotator,
    int raters) {
  if (spans_by_annotator.size() != static_cast<std::size_t>(raters)) {
    throw Error(Errc::kIncompleteAnnotation, kModule,
                "expected " + std::to_string(raters) + " annotators, got " +
                    std::to_string(spans_by_annotator.size()));
  }
  auto masks = WordLabelMasks(tokens, text_length, spans_by_annotator);
  return {Unanimous(masks, tokens.size(), kIntrinsicBit),
          Unanimous(masks, tokens.size(), kExtrinsicBit),
          Unanimous(masks, tokens.size(), kIntrinsicBit | kExtrinsicBit)};
}

DocFlags ComputeDocFlags(const AnnotationSet& annotations, const Corpus& corpus,
                         const PairKey& key, UnionRule rule) {
  const int raters = annotations.annotators_per_item();
  auto words = UnanimousWordLabels(
      corpus.SummaryTokens(key), corpus.SummaryLength(key),
      annotations.SpansByAnnotator(key, TaskType::kHallucination), raters);
  DocFlags f;
  f.intrinsic = Any(words.intrinsic);
  f.extrinsic = Any(words.extrinsic);
  f.hallucinated = rule == UnionRule::kDocumentOr ? (f.intrinsic || f.extrinsic)
                                                   : Any(words.any_type);
  f.faithful = !f.hallucinated;
  if (f.hallucinated) {
    auto verdicts = annotations.Judgments(key);
    if (verdicts.size() == static_cast<std::size_t>(raters)) {
      f.factual = std::all_of(verdicts.begin(), verdicts.end(),
                              [](const JudgmentRecord& j) { return j.verdict; });
    }
  }
  return f;
}

std::vector<SystemHalluRow> SystemTable(const AnnotationSet& annotations,
                                        const Corpus& corpus,
                                        const HalluOptions& options) {
  std::vector<SystemHalluRow> rows;
  for (const auto& [system, pairs] : PairsBySystem(annotations, TaskType::kHallucination)) {
    SystemCounts c = CountSystem(annotations, corpus, system, pairs, options.union_rule);
    SystemHalluRow row;
    row.system_id = system;
    row.count = c.n;
    row.pct_intrinsic = Percent(c.intrinsic, c.n);
    row.pct_extrinsic = Percent(c.extrinsic, c.n);
    row.pct_union = Percent(c.hallucinated, c.n);
    row.pct_faithful = Percent(c.n - c.hallucinated, c.n);
    if (c.has_verdicts) {
      row.pct_faithful_or_factual = Percent(c.n - c.hallucinated + c.union_factual, c.n);
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<FactualBreakdownRow> FactualBreakdown(const AnnotationSet& annotations,
                                                  const Corpus& corpus,
                                                  const HalluOptions& options) {
  std::vector<FactualBreakdownRow> rows;
  for (const auto& [system, pairs] : PairsBySystem(annotations, TaskType::kHallucination)) {
    SystemCounts c = CountSystem(annotations, corpus, system, pairs, options.union_rule);
    FactualBreakdownRow row;
    row.system_id = system;
    row.count = c.n;
    row.pct_faithful = Percent(c.n - c.hallucinated, c.n);
    row.pct_intrinsic = Percent(c.intrinsic, c.n);
    row.pct_extrinsic = Percent(c.extrinsic, c.n);
    row.pct_union = Percent(c.hallucinated, c.n);
    if (c.has_verdicts) {
      row.pct_intrinsic_factual = Percent(c.intrinsic_factual, c.n);
      row.pct_extrinsic_factual = Percent(c.extrinsic_factual, c.n);
      row.pct_union_factual = Percent(c.union_factual, c.n);
      row.pct_factual_total = Percent(c.n - c.hallucinated + c.union_factual, c.n);
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<SpanStatsRow> SpanStats(const AnnotationSet& annotations,
                                    const Corpus& corpus,
                                    std::optional<std::size_t> corpus_size) {
  std::vector<SpanStatsRow> rows;
  for (const auto& [system, pairs] : PairsBySystem(annotations, TaskType::kHallucination)) {
    SpanStatsRow row;
    row.system_id = system;
    row.documents = corpus_size.value_or(pairs.size());
    std::size_t words_all = 0, words_ext = 0;
    for (const auto& key : pairs) {
      const auto& tokens = corpus.SummaryTokens(key);
      const std::size_t len = corpus.SummaryLength(key);
      for (const auto& [annotator, spans] :
           annotations.SpansByAnnotator(key, TaskType::kHallucination)) {
        for (const auto& s : spans) {
          const std::size_t n = SpanToWords(s.char_start, s.char_end, tokens, len).size();
          words_all += n;
          if (s.label == SpanLabel::kIntrinsic) {
            ++row.total_intrinsic_spans;
          } else {
            ++row.total_extrinsic_spans;
            words_ext += n;
          }
        }
      }
    }
    const double docs = static_cast<double>(row.documents);
    if (row.documents > 0) {
      row.avg_intrinsic_per_doc = static_cast<double>(row.total_intrinsic_spans) / docs;
      row.avg_extrinsic_per_doc = static_cast<double>(row.total_extrinsic_spans) / docs;
    }
    const std::size_t spans = row.total_intrinsic_spans + row.total_extrinsic_spans;
    if (spans > 0) {
      row.avg_span_length = static_cast<double>(words_all) / static_cast<double>(spans);
    }
    if (row.total_extrinsic_spans > 0) {
      row.avg_extrinsic_span_length =
          static_cast<double>(words_ext) / static_cast<double>(row.total_extrinsic_spans);
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<LinguisticRow> RepIncohTable(const AnnotationSet& annotations,
                                         const Corpus& corpus) {
  std::vector<LinguisticRow> rows;
  const int raters = annotations.annotators_per_item();
  for (const auto& [system, pairs] : PairsBySystem(annotations, TaskType::kLinguistic)) {
    std::size_t rep = 0, inco = 0;
    for (const auto& key : pairs) {
      auto spans = annotations.SpansByAnnotator(key, TaskType::kLinguistic);
      RequireRaters(spans.size(), raters, key, TaskType::kLinguistic);
      const auto& tokens = corpus.SummaryTokens(key);
      auto masks = WordLabelMasks(tokens, corpus.SummaryLength(key), spans);
      rep += Any(Unanimous(masks, tokens.size(), 1u << 1));
      inco += Any(Unanimous(masks, tokens.size(), 1u << 2));
    }
    rows.push_back({system, pairs.size(), Percent(rep, pairs.size()),
                    Percent(inco, pairs.size())});
  }
  return rows;
}

}  // namespace faitheval

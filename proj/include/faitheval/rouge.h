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

// ROUGE-N and summary-level ROUGE-L over corpus tokens. No stemming, no
// stopword removal; matching is on lowercased token surfaces.

#ifndef FAITHEVAL_ROUGE_H_
#define FAITHEVAL_ROUGE_H_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "faitheval/corpus.h"

namespace faitheval {

struct PrfScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  // f1 = 2PR/(P+R), or 0 when P+R == 0.
  static PrfScore FromPrecisionRecall(double precision, double recall);
  bool operator==(const PrfScore&) const = default;
};

struct RougeTriple {
  PrfScore r1;
  PrfScore r2;
  PrfScore rl;

  bool operator==(const RougeTriple&) const = default;
};

PrfScore RougeN(const TokenSequence& candidate, const TokenSequence& reference,
                int n);
PrfScore RougeL(const TokenSequence& candidate, const TokenSequence& reference);
RougeTriple ScoreRouge(const TokenSequence& candidate,
                       const TokenSequence& reference);

// Length of the longest common subsequence of two token surface sequences.
std::size_t LcsLength(std::span<const std::string> a,
                      std::span<const std::string> b);

// Arithmetic mean of per-pair precision, recall and F1.
RougeTriple MeanRouge(std::span<const RougeTriple> scores);

// Reference text keyed by doc_id.
using ReferenceMap = std::map<std::string, std::string, std::less<>>;

// Per-pair scores for every summary of `system_id`. Throws MissingReference
// for a summary whose doc has no reference.
std::map<PairKey, RougeTriple> PairRouge(const Corpus& corpus,
                                         const std::string& system_id,
                                         const ReferenceMap& references);

// Mean over the system's pairs; throws MissingReference, or MissingScore when
// the system has no summaries.
RougeTriple CorpusRouge(const Corpus& corpus, const std::string& system_id,
                        const ReferenceMap& references);

// References from a JSONL file of {doc_id, text} (system_id ignored if
// present), or from the summaries of a reference system inside a corpus.
ReferenceMap LoadReferences(const std::string& path);
ReferenceMap ReferencesFromSystem(const Corpus& corpus,
                                  const std::string& system_id);

}  // namespace faitheval

#endif  // FAITHEVAL_ROUGE_H_

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


// Spearman rank correlation between per-pair metric values and binary human
// labels.

#ifndef FAITHEVAL_CORRELATION_H_
#define FAITHEVAL_CORRELATION_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "faitheval/corpus.h"
#include "faitheval/hallu_stats.h"

namespace faitheval {

// 1-based ranks; tied values share the mean of the ranks they occupy.
std::vector<double> AverageRanks(std::span<const double> xs);

// Pearson correlation of the average-rank vectors. Throws DegenerateSeries
// when the lengths differ, fewer than 2 items are given, or either side is
// constant.
double Spearman(std::span<const double> xs, std::span<const double> ys);

enum class HumanLabel { kFaithful, kFactual };

HumanLabel ParseHumanLabel(std::string_view name);
std::string_view HumanLabelName(HumanLabel label);

struct PairedItem {
  PairKey key;
  double metric_value = 0.0;
  int human_label = 0;
};

using PairLabels = std::map<PairKey, int>;

// kFaithful: 1 for every annotated pair with no unanimous hallucinated word.
// kFactual: only hallucinated pairs carrying verdicts, 1 when all are true.
PairLabels HumanLabels(const AnnotationSet& annotations, const Corpus& corpus,
                       HumanLabel label, const HalluOptions& options = {});

// One item per labelled pair, in key order. A labelled pair without a score
// throws MissingScore; scores for unlabelled pairs are ignored.
std::vector<PairedItem> Align(const PairScores& scores, const PairLabels& labels);

// |Spearman| over all pairs pooled, or over the pairs of `system_id` when it
// is non-empty.
double MetricCorrelation(const PairScores& scores, const PairLabels& labels,
                         const std::string& system_id = "");

}  // namespace faitheval

#endif  // FAITHEVAL_CORRELATION_H_

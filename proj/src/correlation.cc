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


#include "faitheval/correlation.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "faitheval/error.h"

namespace faitheval {
namespace {

constexpr char kModule[] = "correlation";

}  // namespace

std::vector<double> AverageRanks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    // Positions i..j (0-based) hold ranks i+1..j+1.
    const double mean = (static_cast<double>(i + j) + 2.0) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean;
    i = j + 1;
  }
  return ranks;
}

double Spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw Error(Errc::kDegenerateSeries, kModule,
                "series lengths differ: " + std::to_string(xs.size()) + " vs " +
                    std::to_string(ys.size()));
  }
  if (xs.size() < 2) {
    throw Error(Errc::kDegenerateSeries, kModule, "need at least 2 items");
  }
  for (double v : xs) {
    if (std::isnan(v)) throw Error(Errc::kDegenerateSeries, kModule, "NaN value");
  }
  for (double v : ys) {
    if (std::isnan(v)) throw Error(Errc::kDegenerateSeries, kModule, "NaN value");
  }
  auto rx = AverageRanks(xs);
  auto ry = AverageRanks(ys);
  const double n = static_cast<double>(rx.size());
  // Mean rank is (n+1)/2 on both sides whatever the ties.
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean, dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(Errc::kDegenerateSeries, kModule,
                std::string(sxx == 0.0 ? "first" : "second") + " series is constant");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

HumanLabel ParseHumanLabel(std::string_view name) {
  if (name == "faithful") return HumanLabel::kFaithful;
  if (name == "factual") return HumanLabel::kFactual;
  throw Error(Errc::kConfig, kModule,
              "unknown label '" + std::string(name) + "', expected faithful|factual");
}

std::string_view HumanLabelName(HumanLabel label) {
  return label == HumanLabel::kFaithful ? "faithful" : "factual";
}

PairLabels HumanLabels(const AnnotationSet& annotations, const Corpus& corpus,
                       HumanLabel label, const HalluOptions& options) {
  PairLabels out;
  for (const auto& key : annotations.Pairs(TaskType::kHallucination)) {
    DocFlags f = ComputeDocFlags(annotations, corpus, key, options.union_rule);
    if (label == HumanLabel::kFaithful) {
      out.emplace(key, f.faithful ? 1 : 0);
    } else if (f.factual) {
      out.emplace(key, *f.factual ? 1 : 0);
    }
  }
  return out;
}

std::vector<PairedItem> Align(const PairScores& scores, const PairLabels& labels) {
  std::vector<PairedItem> out;
  out.reserve(labels.size());
  for (const auto& [key, label] : labels) {
    auto it = scores.find(key);
    if (it == scores.end()) {
      throw Error(Errc::kMissingScore, kModule,
                  "no score for (" + key.doc_id + ", " + key.system_id + ")");
    }
    out.push_back({key, it->second, label});
  }
  return out;
}

double MetricCorrelation(const PairScores& scores, const PairLabels& labels,
                         const std::string& system_id) {
  std::vector<double> xs, ys;
  for (const auto& item : Align(scores, labels)) {
    if (!system_id.empty() && item.key.system_id != system_id) continue;
    xs.push_back(item.metric_value);
    ys.push_back(item.human_label);
  }
  return std::abs(Spearman(xs, ys));
}

}  // namespace faitheval

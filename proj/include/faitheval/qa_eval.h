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


// Question-answering round trip: questions generated from a summary are
// answered against the source document, and the share of answers agreeing
// with the summary's is reported per system.

#ifndef FAITHEVAL_QA_EVAL_H_
#define FAITHEVAL_QA_EVAL_H_

#include <string>
#include <string_view>
#include <vector>

#include "faitheval/corpus.h"
#include "faitheval/scorer.h"

namespace faitheval {

// Lowercase, drop punctuation and symbols, drop the words a/an/the, and
// join the remaining words with single spaces.
std::string NormalizeAnswer(std::string_view answer);

// Token-overlap F1 of the normalized answers; 1 when both are empty.
double TokenF1(std::string_view a, std::string_view b);

enum class MatchRule { kExact, kTokenF1 };

struct MatchOptions {
  MatchRule rule = MatchRule::kExact;
  // Used by kTokenF1: matched when F1 reaches this value.
  double f1_threshold = 0.5;
};

// An empty normalized rc answer never matches a non-empty expected one.
bool AnswersMatch(std::string_view expected, std::string_view rc_answer,
                  const MatchOptions& options = {});

struct QaVerdict {
  QuestionKey key;
  std::string expected_answer;
  std::string rc_answer;
  bool matched = false;
};

// One verdict per question, in key order. A question without an rc answer
// throws MissingScore.
std::vector<QaVerdict> ScoreRoundtrip(const QaPairs& questions, const RcAnswers& answers,
                                      const MatchOptions& options = {});

// Generates questions for `pairs` and answers them through `client`.
std::vector<QaVerdict> RunRoundtrip(const Corpus& corpus, const std::vector<PairKey>& pairs,
                                    ScorerClient& client, const MatchOptions& options = {});

std::string FormatVerdicts(const std::vector<QaVerdict>& verdicts);

struct QaAccuracyRow {
  std::string system_id;
  std::size_t n_questions = 0;
  double accuracy = 0.0;
};

// One row per system, sorted. With `systems` given, a listed system without
// questions throws NoQuestions; otherwise the systems seen in `verdicts`.
std::vector<QaAccuracyRow> QaAccuracy(const std::vector<QaVerdict>& verdicts,
                                      const std::vector<std::string>& systems = {});

}  // namespace faitheval

#endif  // FAITHEVAL_QA_EVAL_H_

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


// Access to external model scorers, either through precomputed score files
// or through HTTP endpoints with a memo cache in front.
//
// Wire protocol: one POST endpoint per kind, JSON bodies on a single line.
//
//   /score/entailment  {"doc_id","system_id","document","summary"}
//                   -> {"p_entail","p_neutral","p_contradict"}
//   /score/qg          {"doc_id","system_id","summary"}
//                   -> {"pairs":[{"q_index","question","answer"},...]}
//   /score/rc          {"doc_id","system_id","q_index","question","document"}
//                   -> {"rc_answer"}

#ifndef FAITHEVAL_SCORER_H_
#define FAITHEVAL_SCORER_H_

#include <atomic>
#include <compare>
#include <cstddef>
#include <future>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "faitheval/corpus.h"

namespace faitheval {

struct EntailmentScore {
  PairKey key;
  double p_entail = 0.0;
  double p_neutral = 0.0;
  double p_contradict = 0.0;
};

// Checks a probability triple in place. Each value must lie in [0,1]. A sum
// within 1e-6 of 1 is kept as is, within 1e-3 it is rescaled to 1, anything
// further off throws ProbabilityNotNormalized.
void NormalizeProbabilities(EntailmentScore& score, std::string_view where);

struct QuestionKey {
  PairKey pair;
  int q_index = 0;

  auto operator<=>(const QuestionKey&) const = default;
};

struct QaPair {
  QuestionKey key;
  std::string question;
  std::string answer;
};

using EntailmentScores = std::map<PairKey, EntailmentScore>;
using QaPairs = std::map<QuestionKey, QaPair>;
using RcAnswers = std::map<QuestionKey, std::string>;
// Metric name to per-pair values.
using MetricScores = std::map<std::string, PairScores, std::less<>>;

// entailment_scores.tsv: doc_id, system_id, p_entail, p_neutral, p_contradict.
EntailmentScores ParseEntailmentScores(std::string_view text, std::string_view source);
EntailmentScores LoadEntailmentScores(const std::string& path);
std::string FormatEntailmentScores(const EntailmentScores& scores);

// qa_pairs.tsv: doc_id, system_id, q_index, question, answer.
QaPairs ParseQaPairs(std::string_view text, std::string_view source);
QaPairs LoadQaPairs(const std::string& path);
std::string FormatQaPairs(const QaPairs& pairs);

// rc_answers.tsv: doc_id, system_id, q_index, rc_answer. Empty = no answer.
RcAnswers ParseRcAnswers(std::string_view text, std::string_view source);
RcAnswers LoadRcAnswers(const std::string& path);
std::string FormatRcAnswers(const RcAnswers& answers);

// Wide table: doc_id, system_id, then one column per metric. Values must be
// finite.
MetricScores ParseMetricScores(std::string_view text, std::string_view source);
MetricScores LoadMetricScores(const std::string& path);
std::string FormatMetricScores(const MetricScores& scores);

// Score file kinds accepted by LoadScoreFile's callers.
enum class ScoreKind { kEntailment, kSimilarity, kQaPairs, kRcAnswers };
ScoreKind ParseScoreKind(std::string_view name);

enum class ScorerKind { kEntailment, kQuestionGeneration, kReadingComprehension };
std::string_view ScorerPath(ScorerKind kind);

struct EndpointConfig {
  // Base URLs such as "http://127.0.0.1:8500". The kind's path is appended.
  std::string entail_url;
  std::string qg_url;
  std::string rc_url;
  int timeout_ms = 30000;
  int max_retries = 3;
  int backoff_ms = 200;
  int parallelism = 8;
  std::string bearer_token;
  bool cache = true;
};

// Reads FAITHEVAL_ENTAIL_URL, FAITHEVAL_QG_URL, FAITHEVAL_RC_URL and
// FAITHEVAL_SCORER_TOKEN over the given defaults.
EndpointConfig EndpointConfigFromEnv(EndpointConfig base = {});

struct CacheStats {
  std::size_t hits = 0;
  std::size_t misses = 0;
  std::size_t entries = 0;

  bool operator==(const CacheStats&) const = default;
};

class ScorerClient {
 public:
  explicit ScorerClient(EndpointConfig config);

  // Raw POST, memoized on (kind, body). Connection failures, 429 and 5xx
  // are retried with exponential backoff; after the last attempt the call
  // throws EndpointUnavailable. Other non-200 statuses throw InvalidResponse.
  std::string Request(ScorerKind kind, const std::string& body);

  EntailmentScore Entailment(const PairKey& key, std::string_view document,
                             std::string_view summary);
  std::vector<QaPair> Questions(const PairKey& key, std::string_view summary);
  std::string Answer(const QuestionKey& key, std::string_view question,
                     std::string_view document);

  // Batch helpers over a corpus, at most `parallelism` requests in flight.
  EntailmentScores ScoreEntailment(const Corpus& corpus, const std::vector<PairKey>& pairs);
  QaPairs GenerateQuestions(const Corpus& corpus, const std::vector<PairKey>& pairs);
  RcAnswers AnswerQuestions(const Corpus& corpus, const QaPairs& questions);

  CacheStats cache_stats() const;
  void ClearCache();
  // Requests that reached the network, retries included.
  std::size_t upstream_calls() const { return upstream_calls_.load(); }

 private:
  std::string Post(ScorerKind kind, const std::string& body);

  EndpointConfig config_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::shared_future<std::string>> cache_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
  std::atomic<std::size_t> upstream_calls_{0};
};

}  // namespace faitheval

#endif  // FAITHEVAL_SCORER_H_

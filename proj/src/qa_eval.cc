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


#include "faitheval/qa_eval.h"

#include <algorithm>
#include <map>

#include "faitheval/error.h"
#include "faitheval/io.h"
#include "faitheval/unicode.h"

namespace faitheval {
namespace {

constexpr char kModule[] = "qa_eval";

std::vector<std::string> NormalizedWords(std::string_view answer) {
  std::vector<std::string> words;
  std::string word;
  auto flush = [&] {
    if (!word.empty() && word != "a" && word != "an" && word != "the") {
      words.push_back(word);
    }
    word.clear();
  };
  for (char32_t cp : unicode::Decode(answer)) {
    if (unicode::IsWhitespace(cp)) {
      flush();
    } else if (!unicode::IsPunctuation(cp)) {
      unicode::AppendUtf8(unicode::ToLower(cp), word);
    }
  }
  flush();
  return words;
}

}  // namespace

std::string NormalizeAnswer(std::string_view answer) {
  std::string out;
  for (const auto& w : NormalizedWords(answer)) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

double TokenF1(std::string_view a, std::string_view b) {
  auto wa = NormalizedWords(a);
  auto wb = NormalizedWords(b);
  if (wa.empty() && wb.empty()) return 1.0;
  if (wa.empty() || wb.empty()) return 0.0;
  std::map<std::string, int> counts;
  for (const auto& w : wa) ++counts[w];
  std::size_t common = 0;
  for (const auto& w : wb) {
    if (counts[w] > 0) {
      --counts[w];
      ++common;
    }
  }
  if (common == 0) return 0.0;
  const double p = static_cast<double>(common) / static_cast<double>(wb.size());
  const double r = static_cast<double>(common) / static_cast<double>(wa.size());
  return 2 * p * r / (p + r);
}

bool AnswersMatch(std::string_view expected, std::string_view rc_answer,
                  const MatchOptions& options) {
  const std::string e = NormalizeAnswer(expected);
  const std::string r = NormalizeAnswer(rc_answer);
  if (r.empty() && !e.empty()) return false;
  if (options.rule == MatchRule::kExact) return e == r;
  return TokenF1(e, r) >= options.f1_threshold;
}

std::vector<QaVerdict> ScoreRoundtrip(const QaPairs& questions, const RcAnswers& answers,
                                      const MatchOptions& options) {
  std::vector<QaVerdict> out;
  out.reserve(questions.size());
  for (const auto& [key, qa] : questions) {
    auto it = answers.find(key);
    if (it == answers.end()) {
      throw Error(Errc::kMissingScore, kModule,
                  "no rc answer for (" + key.pair.doc_id + ", " + key.pair.system_id +
                      ") q" + std::to_string(key.q_index));
    }
    out.push_back({key, qa.answer, it->second, AnswersMatch(qa.answer, it->second, options)});
  }
  return out;
}

std::vector<QaVerdict> RunRoundtrip(const Corpus& corpus, const std::vector<PairKey>& pairs,
                                    ScorerClient& client, const MatchOptions& options) {
  QaPairs questions = client.GenerateQuestions(corpus, pairs);
  RcAnswers answers = client.AnswerQuestions(corpus, questions);
  return ScoreRoundtrip(questions, answers, options);
}

std::string FormatVerdicts(const std::vector<QaVerdict>& verdicts) {
  std::string out =
      io::JoinTsv({"doc_id", "system_id", "q_index", "expected_answer", "rc_answer", "matched"}) +
      '\n';
  for (const auto& v : verdicts) {
    out += io::JoinTsv({v.key.pair.doc_id, v.key.pair.system_id, std::to_string(v.key.q_index),
                        v.expected_answer, v.rc_answer, v.matched ? "1" : "0"}) +
           '\n';
  }
  return out;
}

std::vector<QaAccuracyRow> QaAccuracy(const std::vector<QaVerdict>& verdicts,
                                      const std::vector<std::string>& systems) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
  for (const auto& s : systems) counts[s];
  for (const auto& v : verdicts) {
    const auto& sys = v.key.pair.system_id;
    if (!systems.empty() && !counts.count(sys)) continue;
    auto& [total, matched] = counts[sys];
    ++total;
    matched += v.matched;
  }
  std::vector<QaAccuracyRow> rows;
  for (const auto& [sys, c] : counts) {
    if (c.first == 0) throw Error(Errc::kNoQuestions, kModule, "no questions for " + sys);
    rows.push_back({sys, c.first,
                    100.0 * static_cast<double>(c.second) / static_cast<double>(c.first)});
  }
  return rows;
}

}  // namespace faitheval

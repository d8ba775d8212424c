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

#include "faitheval/rouge.h"

#include <algorithm>
#include <set>

#include "faitheval/error.h"
#include "faitheval/io.h"
#include "json.hpp"

namespace faitheval {
namespace {

constexpr char kModule[] = "rouge";

std::vector<std::string> Words(const TokenSequence& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

// N-gram multiset; n-grams joined with a separator that cannot occur inside a
// token surface.
std::map<std::string, int> NGramCounts(const std::vector<std::string>& words,
                                       int n) {
  std::map<std::string, int> counts;
  if (n <= 0 || words.size() < static_cast<std::size_t>(n)) return counts;
  for (std::size_t i = 0; i + n <= words.size(); ++i) {
    std::string key = words[i];
    for (int k = 1; k < n; ++k) {
      key.push_back(' ');
      key += words[i + k];
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

PrfScore PrfScore::FromPrecisionRecall(double precision, double recall) {
  PrfScore s{precision, recall, 0.0};
  if (precision + recall > 0.0) {
    s.f1 = 2.0 * precision * recall / (precision + recall);
  }
  return s;
}

PrfScore RougeN(const TokenSequence& candidate, const TokenSequence& reference,
                int n) {
  if (n < 1) throw Error(Errc::kConfig, kModule, "n must be >= 1");
  auto cand = NGramCounts(Words(candidate), n);
  auto ref = NGramCounts(Words(reference), n);
  long cand_total = 0, ref_total = 0, overlap = 0;
  for (const auto& [gram, c] : cand) cand_total += c;
  for (const auto& [gram, c] : ref) ref_total += c;
  if (cand_total == 0 || ref_total == 0) return {};
  for (const auto& [gram, c] : cand) {
    auto it = ref.find(gram);
    if (it != ref.end()) overlap += std::min(c, it->second);
  }
  return PrfScore::FromPrecisionRecall(
      static_cast<double>(overlap) / static_cast<double>(cand_total),
      static_cast<double>(overlap) / static_cast<double>(ref_total));
}

std::size_t LcsLength(std::span<const std::string> a,
                      std::span<const std::string> b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

PrfScore RougeL(const TokenSequence& candidate, const TokenSequence& reference) {
  if (candidate.empty() || reference.empty()) return {};
  auto cand = Words(candidate);
  auto ref = Words(reference);
  const double lcs = static_cast<double>(LcsLength(cand, ref));
  return PrfScore::FromPrecisionRecall(lcs / static_cast<double>(cand.size()),
                                       lcs / static_cast<double>(ref.size()));
}

RougeTriple ScoreRouge(const TokenSequence& candidate,
                       const TokenSequence& reference) {
  return {RougeN(candidate, reference, 1), RougeN(candidate, reference, 2),
          RougeL(candidate, reference)};
}

RougeTriple MeanRouge(std::span<const RougeTriple> scores) {
  RougeTriple mean;
  if (scores.empty()) return mean;
  auto add = [](PrfScore& acc, const PrfScore& s) {
    acc.precision += s.precision;
    acc.recall += s.recall;
    acc.f1 += s.f1;
  };
  for (const auto& s : scores) {
    add(mean.r1, s.r1);
    add(mean.r2, s.r2);
    add(mean.rl, s.rl);
  }
  const double n = static_cast<double>(scores.size());
  for (PrfScore* p : {&mean.r1, &mean.r2, &mean.rl}) {
    p->precision /= n;
    p->recall /= n;
    p->f1 /= n;
  }
  return mean;
}

std::map<PairKey, RougeTriple> PairRouge(const Corpus& corpus,
                                         const std::string& system_id,
                                         const ReferenceMap& references) {
  std::map<PairKey, RougeTriple> out;
  for (const SummaryRecord* s : corpus.SummariesFor(system_id)) {
    auto ref = references.find(s->doc_id);
    if (ref == references.end()) {
      throw Error(Errc::kMissingReference, kModule, s->doc_id);
    }
    out.emplace(s->key(),
                ScoreRouge(corpus.SummaryTokens(s->key()), Tokenize(ref->second)));
  }
  return out;
}

RougeTriple CorpusRouge(const Corpus& corpus, const std::string& system_id,
                        const ReferenceMap& references) {
  auto per_pair = PairRouge(corpus, system_id, references);
  if (per_pair.empty()) {
    throw Error(Errc::kMissingScore, kModule, "no summaries for system " + system_id);
  }
  std::vector<RougeTriple> scores;
  for (const auto& [key, triple] : per_pair) scores.push_back(triple);
  return MeanRouge(scores);
}

ReferenceMap LoadReferences(const std::string& path) {
  ReferenceMap refs;
  const std::string text = io::ReadFile(path);
  auto lines = io::SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::string where = path + ":" + std::to_string(i + 1);
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(lines[i]);
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::kParse, kModule, where + ": " + e.what());
    }
    if (!obj.is_object() || !obj.contains("doc_id") || !obj.contains("text") ||
        !obj["doc_id"].is_string() || !obj["text"].is_string()) {
      throw Error(Errc::kParse, kModule, where + ": need string fields doc_id, text");
    }
    auto id = obj["doc_id"].get<std::string>();
    if (!refs.emplace(id, obj["text"].get<std::string>()).second) {
      throw Error(Errc::kDuplicateKey, kModule, id);
    }
  }
  return refs;
}

ReferenceMap ReferencesFromSystem(const Corpus& corpus,
                                  const std::string& system_id) {
  ReferenceMap refs;
  for (const SummaryRecord* s : corpus.SummariesFor(system_id)) {
    refs.emplace(s->doc_id, s->text);
  }
  return refs;
}

}  // namespace faitheval

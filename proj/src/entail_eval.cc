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


#include "faitheval/entail_eval.h"

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <random>
#include <set>

#include "faitheval/error.h"
#include "faitheval/io.h"

namespace faitheval {
namespace {

constexpr char kModule[] = "entail_eval";

std::string PairName(const PairKey& key) {
  return "(" + key.doc_id + ", " + key.system_id + ")";
}

double Percent(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

std::string Line(const std::vector<std::string>& fields) {
  return io::JoinTsv(fields) + '\n';
}

// Uniform integer in [0, bound) from raw engine output. Rejection keeps the
// result independent of the standard library's distribution code.
std::uint64_t Uniform(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t reject_below = (0 - bound) % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x < reject_below);
  return x % bound;
}

std::set<std::string> SystemsWithVerdicts(const AnnotationSet& annotations) {
  std::set<std::string> out;
  for (const auto& key : annotations.Pairs(TaskType::kFactuality)) out.insert(key.system_id);
  return out;
}

}  // namespace

std::string_view EntailClassName(EntailClass c) {
  switch (c) {
    case EntailClass::kEntailment:
      return "entailment";
    case EntailClass::kNeutral:
      return "neutral";
    case EntailClass::kContradiction:
      return "contradiction";
  }
  return "";
}

EntailClass Classify(const EntailmentScore& s) {
  if (s.p_contradict >= s.p_neutral && s.p_contradict >= s.p_entail) {
    return EntailClass::kContradiction;
  }
  if (s.p_neutral >= s.p_entail) return EntailClass::kNeutral;
  return EntailClass::kEntailment;
}

std::vector<ClassDistribution> ClassDistributions(const std::vector<PairKey>& pairs,
                                                  const EntailmentScores& scores) {
  std::map<std::string, std::array<std::size_t, 3>> counts;
  for (const auto& key : pairs) {
    auto it = scores.find(key);
    if (it == scores.end()) {
      throw Error(Errc::kMissingScore, kModule, "no entailment score for " + PairName(key));
    }
    ++counts[key.system_id][static_cast<int>(Classify(it->second))];
  }
  std::vector<ClassDistribution> rows;
  for (const auto& [system, c] : counts) {
    const std::size_t n = c[0] + c[1] + c[2];
    rows.push_back({system, n, Percent(c[0], n), Percent(c[1], n), Percent(c[2], n)});
  }
  return rows;
}

SelectionResult SelectSummary(const std::string& doc_id,
                              const std::map<std::string, double>& candidates) {
  if (candidates.empty()) {
    throw Error(Errc::kNoCandidates, kModule, "no scored candidates for " + doc_id);
  }
  // Map order is ascending system_id, so a strict comparison keeps the
  // smallest id among exact ties.
  auto best = candidates.begin();
  for (auto it = std::next(best); it != candidates.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return {doc_id, best->first, best->second, candidates.size()};
}

std::vector<SelectionResult> SelectAll(const EntailmentScores& scores,
                                       const std::vector<std::string>& systems,
                                       const std::vector<std::string>& doc_ids) {
  std::set<std::string> wanted(systems.begin(), systems.end());
  std::map<std::string, std::map<std::string, double>> by_doc;
  for (const auto& id : doc_ids) by_doc[id];
  for (const auto& [key, s] : scores) {
    if (!wanted.empty() && !wanted.count(key.system_id)) continue;
    if (!doc_ids.empty() && !by_doc.count(key.doc_id)) continue;
    by_doc[key.doc_id][key.system_id] = s.p_entail;
  }
  std::vector<SelectionResult> out;
  out.reserve(by_doc.size());
  for (const auto& [doc, candidates] : by_doc) out.push_back(SelectSummary(doc, candidates));
  return out;
}

std::string FormatSelections(const std::vector<SelectionResult>& selections) {
  std::string out = Line({"doc_id", "chosen_system", "chosen_score"});
  char buf[32];
  for (const auto& s : selections) {
    std::snprintf(buf, sizeof buf, "%.6f", s.chosen_score);
    out += Line({s.doc_id, s.chosen_system, buf});
  }
  return out;
}

SelectionEvalRow SelectionEval(const std::vector<SelectionResult>& selections,
                               const Corpus& corpus, const ReferenceMap& references,
                               const AnnotationSet& annotations,
                               const HalluOptions& options) {
  std::vector<SelectionResult> sorted = selections;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.doc_id < b.doc_id; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].doc_id == sorted[i - 1].doc_id) {
      throw Error(Errc::kDuplicateKey, kModule, "two selections for " + sorted[i].doc_id);
    }
  }
  const auto with_verdicts = SystemsWithVerdicts(annotations);
  bool expect_verdicts = !sorted.empty();
  for (const auto& s : sorted) expect_verdicts &= with_verdicts.count(s.chosen_system) > 0;

  SelectionEvalRow row;
  row.count = sorted.size();
  std::vector<RougeTriple> rouge;
  std::size_t hallucinated = 0, factual = 0;
  for (const auto& s : sorted) {
    const PairKey key{s.doc_id, s.chosen_system};
    auto ref = references.find(key.doc_id);
    if (ref == references.end()) {
      throw Error(Errc::kMissingReference, kModule, key.doc_id);
    }
    rouge.push_back(ScoreRouge(corpus.SummaryTokens(key), Tokenize(ref->second)));
    if (annotations.Annotators(key, TaskType::kHallucination).empty()) {
      throw Error(Errc::kMissingAnnotation, kModule,
                  "no hallucination annotations for " + PairName(key));
    }
    DocFlags f = ComputeDocFlags(annotations, corpus, key, options.union_rule);
    if (!f.hallucinated) continue;
    ++hallucinated;
    if (!expect_verdicts) continue;
    if (!f.factual) {
      throw Error(Errc::kMissingAnnotation, kModule,
                  "no complete factuality verdicts for " + PairName(key));
    }
    factual += *f.factual;
  }
  row.rouge = MeanRouge(rouge);
  row.pct_faithful = Percent(row.count - hallucinated, row.count);
  if (expect_verdicts) {
    row.pct_faithful_or_factual = Percent(row.count - hallucinated + factual, row.count);
  }
  return row;
}

FoldMap AssignFolds(std::vector<std::string> doc_ids, int k, std::uint64_t seed) {
  if (k < 2) throw Error(Errc::kConfig, kModule, "need k >= 2 folds, got " + std::to_string(k));
  std::sort(doc_ids.begin(), doc_ids.end());
  doc_ids.erase(std::unique(doc_ids.begin(), doc_ids.end()), doc_ids.end());
  std::mt19937_64 rng(seed);
  for (std::size_t i = doc_ids.size(); i > 1; --i) {
    std::swap(doc_ids[i - 1], doc_ids[Uniform(rng, i)]);
  }
  FoldMap folds;
  for (std::size_t i = 0; i < doc_ids.size(); ++i) {
    folds.emplace(doc_ids[i], static_cast<int>(i % static_cast<std::size_t>(k)));
  }
  return folds;
}

std::vector<FinetunePair> ExportFinetune(const AnnotationSet& annotations,
                                         const Corpus& corpus, int k, std::uint64_t seed,
                                         const HalluOptions& options) {
  auto pairs = annotations.Pairs(TaskType::kHallucination);
  std::vector<std::string> docs;
  for (const auto& key : pairs) docs.push_back(key.doc_id);
  FoldMap folds = AssignFolds(docs, k, seed);
  std::vector<FinetunePair> out;
  for (const auto& key : pairs) {
    const DocumentRecord* doc = corpus.FindDocument(key.doc_id);
    const SummaryRecord* sum = corpus.FindSummary(key);
    if (!doc || !sum) throw Error(Errc::kUnknownPair, kModule, PairName(key));
    DocFlags f = ComputeDocFlags(annotations, corpus, key, options.union_rule);
    out.push_back({key, doc->text, sum->text,
                   f.faithful ? EntailClass::kEntailment : EntailClass::kNeutral,
                   folds.at(key.doc_id)});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
  return out;
}

void WriteFinetuneFolds(const std::vector<FinetunePair>& pairs, int k,
                        const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::kIo, kModule, "cannot create " + dir + ": " + ec.message());
  const std::vector<std::string> header = {"doc_id", "system_id", "document_text",
                                           "summary_text", "label"};
  std::map<std::string, int> doc_folds;
  for (const auto& p : pairs) doc_folds[p.key.doc_id] = p.fold;
  for (int f = 0; f < k; ++f) {
    std::string train = Line(header), eval = Line(header);
    for (const auto& p : pairs) {
      std::string line = Line({p.key.doc_id, p.key.system_id, p.document_text,
                               p.summary_text, std::string(EntailClassName(p.label))});
      (p.fold == f ? eval : train) += line;
    }
    const auto base = dir + "/fold_" + std::to_string(f);
    io::WriteFile(base + "_train.tsv", train);
    io::WriteFile(base + "_eval.tsv", eval);
  }
  std::string folds = Line({"doc_id", "fold"});
  for (const auto& [doc, f] : doc_folds) folds += Line({doc, std::to_string(f)});
  io::WriteFile(dir + "/folds.tsv", folds);
}

FoldMap ParseFolds(std::string_view text, std::string_view source) {
  io::Table t = io::ParseTsv(text, source);
  const auto doc = t.RequireColumn("doc_id", source);
  const auto fold = t.RequireColumn("fold", source);
  FoldMap out;
  for (const auto& row : t.rows) {
    const std::string where = std::string(source) + ":" + std::to_string(row.line);
    long long f = io::ParseInt(row.fields[fold], where + " fold");
    if (f < 0 || f > 1000) throw Error(Errc::kParse, kModule, where + ": fold out of range");
    if (!out.emplace(row.fields[doc], static_cast<int>(f)).second) {
      throw Error(Errc::kDuplicateKey, kModule, where + ": " + row.fields[doc]);
    }
  }
  return out;
}

FoldMap LoadFolds(const std::string& path) { return ParseFolds(io::ReadFile(path), path); }

CrossvalResult CrossvalEval(const std::map<int, EntailmentScores>& fold_scores,
                            const FoldMap& folds, const std::vector<std::string>& systems,
                            const Corpus& corpus, const ReferenceMap& references,
                            const AnnotationSet& annotations,
                            const HalluOptions& options) {
  int k = 0;
  std::map<int, std::vector<std::string>> held_out;
  for (const auto& [doc, f] : folds) {
    k = std::max(k, f + 1);
    held_out[f].push_back(doc);
  }
  for (const auto& [f, scores] : fold_scores) {
    if (f < 0 || f >= k) {
      throw Error(Errc::kConfig, kModule, "score file for unknown fold " + std::to_string(f));
    }
  }
  CrossvalResult result;
  for (int f = 0; f < k; ++f) {
    auto it = fold_scores.find(f);
    if (it == fold_scores.end()) {
      throw Error(Errc::kMissingFold, kModule, "no scores for fold " + std::to_string(f));
    }
    for (const auto& [key, s] : it->second) {
      auto doc = folds.find(key.doc_id);
      if (doc == folds.end() || doc->second != f) {
        throw Error(Errc::kFoldLeakage, kModule,
                    "fold " + std::to_string(f) + " scores contain " + PairName(key) +
                        (doc == folds.end() ? " (no fold)"
                                            : " of fold " + std::to_string(doc->second)));
      }
    }
    if (held_out[f].empty()) continue;
    auto chosen = SelectAll(it->second, systems, held_out[f]);
    result.selections.insert(result.selections.end(), chosen.begin(), chosen.end());
  }
  std::sort(result.selections.begin(), result.selections.end(),
            [](const auto& a, const auto& b) { return a.doc_id < b.doc_id; });
  result.row = SelectionEval(result.selections, corpus, references, annotations, options);
  return result;
}

}  // namespace faitheval

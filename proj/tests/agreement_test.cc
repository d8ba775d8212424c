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

#include <random>

#include "doctest.h"
#include "faitheval/agreement.h"
#include "faitheval/error.h"
#include "oracles.h"

namespace faitheval {
namespace {

Errc KappaError(const ItemCategoryCounts& counts, int raters) {
  try {
    FleissKappa(counts, raters);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected error");
  return Errc::kConfig;
}

SpanAnnotation Span(const std::string& annotator, SpanLabel label,
                    std::size_t start, std::size_t end) {
  return {"d1", "sys", annotator, label, start, end};
}

// "w0 w1 w2 w3 w4": word i spans [3i, 3i+2).
const char kFiveWords[] = "w0 w1 w2 w3 w4";

TEST_CASE("word_labels") {
  auto tokens = Tokenize(kFiveWords);
  const std::size_t len = 14;
  std::map<std::string, std::vector<SpanAnnotation>> none = {{"A", {}}, {"B", {}}, {"C", {}}};
  for (const auto& [a, cats] : WordLabels(tokens, len, none)) {
    CHECK(cats == WordCategories{0, 0, 0, 0, 0});
  }

  std::map<std::string, std::vector<SpanAnnotation>> spans = {
      {"A", {Span("A", SpanLabel::kExtrinsic, 6, 11)}}, {"B", {}}};
  auto labels = WordLabels(tokens, len, spans);
  CHECK(labels["A"] == WordCategories{0, 0, 2, 2, 0});
  CHECK(labels["B"] == WordCategories{0, 0, 0, 0, 0});

  // A marks word 2 intrinsic, B and C nothing: word 2 counts (2 faithful, 1 intrinsic).
  std::map<std::string, std::vector<SpanAnnotation>> one = {
      {"A", {Span("A", SpanLabel::kIntrinsic, 6, 8)}}, {"B", {}}, {"C", {}}};
  auto l3 = WordLabels(tokens, len, one);
  std::vector<int> word2(3, 0);
  for (const auto& [a, cats] : l3) ++word2[cats[2]];
  CHECK(word2 == std::vector<int>{2, 1, 0});
}

TEST_CASE("fleiss kappa hand examples") {
  CHECK(FleissKappa({{3, 0, 0}, {3, 0, 0}, {0, 0, 3}, {0, 0, 3}}, 3) ==
        doctest::Approx(1.0));
  CHECK(FleissKappa({{2, 0, 1}, {0, 0, 3}}, 3) == doctest::Approx(0.25));
  CHECK(FleissKappa({{3, 0, 0}, {3, 0, 0}}, 3) == 1.0);
  CHECK(FleissKappa({{3}}, 3) == 1.0);
}

TEST_CASE("fleiss kappa errors") {
  CHECK(KappaError({{1, 0}}, 1) == Errc::kInsufficientRaters);
  CHECK(KappaError({{2, 0}, {1, 1, 1}}, 2) == Errc::kRaggedCounts);
  CHECK(KappaError({{2, 0}, {1, 0}}, 2) == Errc::kRaggedCounts);
  CHECK(KappaError({}, 3) == Errc::kRaggedCounts);
}

TEST_CASE("fleiss kappa matches exact rational oracle on random matrices") {
  std::mt19937 rng(13);
  for (int iter = 0; iter < 3000; ++iter) {
    const int raters = 2 + static_cast<int>(rng() % 4);
    const std::size_t k = 1 + rng() % 4;
    const std::size_t n = 1 + rng() % 7;
    ItemCategoryCounts counts(n, std::vector<int>(k, 0));
    for (auto& row : counts) {
      for (int r = 0; r < raters; ++r) ++row[rng() % k];
    }
    const double expected = oracle::ExactFleissKappa(counts, raters).ToDouble();
    const double got = FleissKappa(counts, raters);
    CHECK(got == doctest::Approx(expected).epsilon(1e-12));
    CHECK(got <= 1.0 + 1e-12);

    // Item duplication leaves kappa unchanged.
    auto doubled = counts;
    doubled.insert(doubled.end(), counts.begin(), counts.end());
    CHECK(FleissKappa(doubled, raters) == doctest::Approx(got).epsilon(1e-12));

    bool unanimous = true;
    for (const auto& row : counts) {
      bool one = false;
      for (int c : row) one = one || c == raters;
      unanimous = unanimous && one;
    }
    CHECK((std::abs(got - 1.0) < 1e-12) == unanimous);
  }
}

AnnotationSet ThreeRaterSet(const std::vector<std::vector<SpanAnnotation>>& per_rater) {
  AnnotationSet set;
  const char* names[] = {"A", "B", "C"};
  for (int r = 0; r < 3; ++r) {
    set.AddSubmission({"d1", "sys"}, names[r], TaskType::kHallucination);
    for (auto s : per_rater[r]) {
      s.annotator_id = names[r];
      set.AddSpan(s);
    }
  }
  return set;
}

TEST_CASE("kappa report over a system") {
  Corpus corpus = BuildCorpus({{"d1", "doc"}}, {{"d1", "sys", kFiveWords}});
  auto perfect = ThreeRaterSet({{Span("", SpanLabel::kExtrinsic, 0, 2)},
                                {Span("", SpanLabel::kExtrinsic, 0, 2)},
                                {Span("", SpanLabel::kExtrinsic, 0, 2)}});
  auto row = KappaReport(perfect, corpus, "sys");
  REQUIRE(row.hallucination);
  CHECK(*row.hallucination == 1.0);
  CHECK_FALSE(row.factuality);
  CHECK_FALSE(row.repetition);

  // Permuting annotator identities leaves kappa unchanged.
  auto a = ThreeRaterSet({{Span("", SpanLabel::kExtrinsic, 0, 5)},
                          {Span("", SpanLabel::kIntrinsic, 3, 8)},
                          {}});
  auto b = ThreeRaterSet({{},
                          {Span("", SpanLabel::kExtrinsic, 0, 5)},
                          {Span("", SpanLabel::kIntrinsic, 3, 8)}});
  CHECK(*KappaReport(a, corpus, "sys").hallucination ==
        doctest::Approx(*KappaReport(b, corpus, "sys").hallucination));

  AnnotationSet incomplete;
  incomplete.AddSubmission({"d1", "sys"}, "A", TaskType::kHallucination);
  try {
    KappaReport(incomplete, corpus, "sys");
    FAIL("expected IncompleteAnnotation");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kIncompleteAnnotation);
  }
}

TEST_CASE("kappa report: factuality at summary level, linguistic per issue") {
  Corpus corpus = BuildCorpus({{"d1", "doc"}, {"d2", "doc"}},
                              {{"d1", "sys", kFiveWords}, {"d2", "sys", kFiveWords}});
  AnnotationSet set;
  for (const char* a : {"A", "B", "C"}) {
    set.AddJudgment({"d1", "sys", a, true, ""});
    set.AddJudgment({"d2", "sys", a, std::string(a) != "C", ""});
    set.AddSpan({"d1", "sys", a, SpanLabel::kRepetition, 0, 2});
    set.AddSubmission({"d2", "sys"}, a, TaskType::kLinguistic);
  }
  auto row = KappaReport(set, corpus, "sys");
  // Factuality items (3,0), (2,1): P = (1 + 1/3)/2, pe = (5/6)^2 + (1/6)^2.
  const double p_bar = (1.0 + 1.0 / 3) / 2;
  const double p_e = 25.0 / 36 + 1.0 / 36;
  REQUIRE(row.factuality);
  CHECK(*row.factuality == doctest::Approx((p_bar - p_e) / (1 - p_e)));
  REQUIRE(row.repetition);
  CHECK(*row.repetition == 1.0);
  CHECK(*row.incoherence == 1.0);
}

}  // namespace
}  // namespace faitheval

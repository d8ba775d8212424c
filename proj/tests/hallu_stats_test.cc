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
#include "faitheval/error.h"
#include "faitheval/hallu_stats.h"

namespace faitheval {
namespace {

// Word i of "w0 w1 w2 w3 w4" covers [3i, 3i+2).
const char kFiveWords[] = "w0 w1 w2 w3 w4";
constexpr std::size_t kLen = 14;

SpanAnnotation Words(const std::string& annotator, SpanLabel label, int first,
                     int last, const std::string& doc = "d1",
                     const std::string& sys = "sys") {
  return {doc, sys, annotator, label, static_cast<std::size_t>(3 * first),
          static_cast<std::size_t>(3 * last + 2)};
}

using SpanMap = std::map<std::string, std::vector<SpanAnnotation>>;

TEST_CASE("unanimous word labels are per type intersections") {
  auto tokens = Tokenize(kFiveWords);
  SpanMap spans = {{"A", {Words("A", SpanLabel::kExtrinsic, 2, 3)}},
                   {"B", {Words("B", SpanLabel::kExtrinsic, 2, 2)}},
                   {"C", {Words("C", SpanLabel::kExtrinsic, 2, 4)}}};
  auto u = UnanimousWordLabels(tokens, kLen, spans);
  CHECK(u.extrinsic == std::vector<bool>{false, false, true, false, false});
  CHECK(u.intrinsic == std::vector<bool>(5, false));

  SpanMap mixed = {{"A", {Words("A", SpanLabel::kIntrinsic, 2, 2)}},
                   {"B", {Words("B", SpanLabel::kExtrinsic, 2, 2)}},
                   {"C", {Words("C", SpanLabel::kExtrinsic, 2, 2)}}};
  auto m = UnanimousWordLabels(tokens, kLen, mixed);
  CHECK(m.extrinsic == std::vector<bool>(5, false));
  CHECK(m.intrinsic == std::vector<bool>(5, false));
  CHECK(m.any_type[2]);

  SpanMap none = {{"A", {}}, {"B", {}}, {"C", {}}};
  auto n = UnanimousWordLabels(tokens, kLen, none);
  CHECK(n.extrinsic == std::vector<bool>(5, false));

  SpanMap two = {{"A", {}}, {"B", {}}};
  CHECK_THROWS_AS(UnanimousWordLabels(tokens, kLen, two), Error);
}

struct Fixture {
  Corpus corpus = BuildCorpus({{"d1", "doc"}, {"d2", "doc"}},
                              {{"d1", "sys", kFiveWords},
                               {"d2", "sys", kFiveWords},
                               {"d1", "gold", kFiveWords}});
  AnnotationSet set;

  void Submit(const std::string& doc, const std::string& sys) {
    for (const char* a : {"A", "B", "C"}) {
      set.AddSubmission({doc, sys}, a, TaskType::kHallucination);
    }
  }
  void Mark(const std::string& doc, const std::string& sys, SpanLabel label,
            int first, int last, std::initializer_list<const char*> who = {"A", "B", "C"}) {
    for (const char* a : who) set.AddSpan(Words(a, label, first, last, doc, sys));
  }
};

TEST_CASE("doc flags") {
  Fixture f;
  f.Submit("d1", "sys");
  f.Mark("d1", "sys", SpanLabel::kExtrinsic, 1, 1);
  auto flags = ComputeDocFlags(f.set, f.corpus, {"d1", "sys"});
  CHECK_FALSE(flags.intrinsic);
  CHECK(flags.extrinsic);
  CHECK(flags.hallucinated);
  CHECK_FALSE(flags.faithful);
  CHECK_FALSE(flags.factual.has_value());

  f.set.AddJudgment({"d1", "sys", "A", true, ""});
  f.set.AddJudgment({"d1", "sys", "B", true, ""});
  f.set.AddJudgment({"d1", "sys", "C", false, ""});
  flags = ComputeDocFlags(f.set, f.corpus, {"d1", "sys"});
  REQUIRE(flags.factual.has_value());
  CHECK_FALSE(*flags.factual);

  // Mixed types on one word: no unanimous word of either type.
  Fixture g;
  g.Submit("d2", "sys");
  g.Mark("d2", "sys", SpanLabel::kIntrinsic, 2, 2, {"A"});
  g.Mark("d2", "sys", SpanLabel::kExtrinsic, 2, 2, {"B", "C"});
  auto mixed = ComputeDocFlags(g.set, g.corpus, {"d2", "sys"});
  CHECK(mixed.faithful);
  auto alt = ComputeDocFlags(g.set, g.corpus, {"d2", "sys"},
                             UnionRule::kWordAnyTypeUnanimous);
  CHECK(alt.hallucinated);
  CHECK_FALSE(alt.intrinsic);
  CHECK_FALSE(alt.extrinsic);
}

TEST_CASE("system table") {
  Fixture f;
  f.Submit("d1", "sys");
  f.Submit("d2", "sys");
  f.Submit("d1", "gold");
  f.Mark("d1", "sys", SpanLabel::kExtrinsic, 0, 1);
  f.Mark("d1", "sys", SpanLabel::kIntrinsic, 3, 3);
  f.Mark("d1", "gold", SpanLabel::kExtrinsic, 4, 4);
  for (const char* a : {"A", "B", "C"}) f.set.AddJudgment({"d1", "sys", a, true, ""});

  auto rows = SystemTable(f.set, f.corpus);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].system_id == "gold");
  CHECK(rows[0].pct_extrinsic == 100.0);
  CHECK_FALSE(rows[0].pct_faithful_or_factual.has_value());
  const auto& sys = rows[1];
  CHECK(sys.count == 2);
  CHECK(sys.pct_intrinsic == 50.0);
  CHECK(sys.pct_extrinsic == 50.0);
  CHECK(sys.pct_union == 50.0);
  CHECK(sys.pct_faithful == 50.0);
  REQUIRE(sys.pct_faithful_or_factual);
  CHECK(*sys.pct_faithful_or_factual == 100.0);

  auto breakdown = FactualBreakdown(f.set, f.corpus);
  CHECK(*breakdown[1].pct_extrinsic_factual == 50.0);
  CHECK(*breakdown[1].pct_intrinsic_factual == 50.0);
  CHECK(*breakdown[1].pct_factual_total == 100.0);
  CHECK_FALSE(breakdown[0].pct_union_factual.has_value());
}

TEST_CASE("system table edge cases") {
  Fixture f;
  f.Submit("d1", "sys");
  f.Submit("d2", "sys");
  auto rows = SystemTable(f.set, f.corpus);
  CHECK(rows.at(0).pct_faithful == 100.0);

  // Verdicts exist for the system, but a hallucinated pair lacks them.
  f.Mark("d1", "sys", SpanLabel::kExtrinsic, 0, 0);
  for (const char* a : {"A", "B", "C"}) f.set.AddJudgment({"d1", "sys", a, false, ""});
  CHECK(*FactualBreakdown(f.set, f.corpus).at(0).pct_union_factual == 0.0);
  f.Mark("d2", "sys", SpanLabel::kExtrinsic, 0, 0);
  CHECK_THROWS_AS(FactualBreakdown(f.set, f.corpus), Error);
  try {
    // d2 is hallucinated with no verdicts while the system has some.
    SystemTable(f.set, f.corpus);
    FAIL("expected IncompleteAnnotation");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kIncompleteAnnotation);
  }
}

TEST_CASE("span stats") {
  Corpus corpus = BuildCorpus({{"d1", "doc"}}, {{"d1", "sys", kFiveWords}});
  AnnotationSet set(1);
  set.AddSpan(Words("A", SpanLabel::kIntrinsic, 1, 3));
  auto rows = SpanStats(set, corpus);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].total_intrinsic_spans == 1);
  CHECK(rows[0].avg_intrinsic_per_doc == 1.0);
  CHECK(rows[0].avg_span_length == 3.0);
  CHECK(rows[0].avg_extrinsic_span_length == 0.0);

  set.AddSpan(Words("A", SpanLabel::kExtrinsic, 4, 4));
  rows = SpanStats(set, corpus, 4);
  CHECK(rows[0].avg_extrinsic_per_doc == 0.25);
  CHECK(rows[0].avg_span_length == 2.0);
  CHECK(rows[0].avg_extrinsic_span_length == 1.0);
}

TEST_CASE("repetition and incoherence table") {
  Corpus corpus = BuildCorpus({{"d1", "doc"}, {"d2", "doc"}},
                              {{"d1", "sys", kFiveWords}, {"d2", "sys", kFiveWords}});
  AnnotationSet set;
  for (const char* a : {"A", "B", "C"}) {
    set.AddSubmission({"d1", "sys"}, a, TaskType::kLinguistic);
    set.AddSubmission({"d2", "sys"}, a, TaskType::kLinguistic);
  }
  auto empty = RepIncohTable(set, corpus);
  CHECK(empty.at(0).pct_repetition == 0.0);
  CHECK(empty.at(0).pct_incoherence == 0.0);
  for (const char* a : {"A", "B", "C"}) {
    set.AddSpan(Words(a, SpanLabel::kRepetition, 0, 1, "d1"));
  }
  set.AddSpan(Words("A", SpanLabel::kIncoherence, 3, 3, "d2"));
  auto rows = RepIncohTable(set, corpus);
  CHECK(rows.at(0).pct_repetition == 50.0);
  CHECK(rows.at(0).pct_incoherence == 0.0);
}

// Random three-annotator annotation sets over four-word summaries.
AnnotationSet RandomSet(std::mt19937& rng, const std::vector<PairKey>& pairs) {
  AnnotationSet set;
  for (const auto& key : pairs) {
    for (const char* a : {"A", "B", "C"}) {
      set.AddSubmission(key, a, TaskType::kHallucination);
      int w = 0;
      while (w < 4) {
        int len = 1 + static_cast<int>(rng() % 2);
        int last = std::min(3, w + len - 1);
        int pick = static_cast<int>(rng() % 3);
        if (pick) {
          set.AddSpan(Words(a, pick == 1 ? SpanLabel::kIntrinsic : SpanLabel::kExtrinsic,
                            w, last, key.doc_id, key.system_id));
        }
        w = last + 1;
      }
    }
  }
  return set;
}

TEST_CASE("aggregate invariants on random annotation sets") {
  std::vector<DocumentRecord> docs;
  std::vector<SummaryRecord> sums;
  std::vector<PairKey> pairs;
  for (int d = 0; d < 12; ++d) {
    const std::string id = "d" + std::to_string(d);
    docs.push_back({id, "doc"});
    for (const char* s : {"x", "y"}) {
      sums.push_back({id, s, "a1 b2 c3 d4"});
      pairs.push_back({id, s});
    }
  }
  Corpus corpus = BuildCorpus(docs, sums);
  std::mt19937 rng(21);
  for (int iter = 0; iter < 200; ++iter) {
    AnnotationSet set = RandomSet(rng, pairs);
    auto rows = SystemTable(set, corpus);
    for (const auto& r : rows) {
      CHECK(r.pct_union <= r.pct_intrinsic + r.pct_extrinsic + 1e-9);
      CHECK(r.pct_union >= std::max(r.pct_intrinsic, r.pct_extrinsic) - 1e-9);
      CHECK(r.pct_faithful + r.pct_union == doctest::Approx(100.0));
    }
    // Monotonicity: extend the set by one more non-overlapping span per pair
    // where an annotator has a free word.
    AnnotationSet bigger = set;
    for (const auto& key : pairs) {
      auto by = set.SpansByAnnotator(key, TaskType::kHallucination);
      const auto& mine = by["A"];
      for (int w = 0; w < 4; ++w) {
        bool taken = false;
        for (const auto& s : mine) {
          if (s.char_start <= static_cast<std::size_t>(3 * w) &&
              static_cast<std::size_t>(3 * w) < s.char_end) {
            taken = true;
          }
        }
        if (!taken) {
          bigger.AddSpan(Words("A", rng() % 2 ? SpanLabel::kIntrinsic : SpanLabel::kExtrinsic,
                               w, w, key.doc_id, key.system_id));
          break;
        }
      }
    }
    auto grown = SystemTable(bigger, corpus);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(grown[i].pct_intrinsic >= rows[i].pct_intrinsic);
      CHECK(grown[i].pct_extrinsic >= rows[i].pct_extrinsic);
      CHECK(grown[i].pct_union >= rows[i].pct_union);
    }
  }
}

}  // namespace
}  // namespace faitheval

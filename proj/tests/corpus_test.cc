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
#include <string>
#include <vector>

#include "doctest.h"
#include "faitheval/corpus.h"
#include "faitheval/error.h"
#include "faitheval/unicode.h"

namespace faitheval {
namespace {

template <typename F>
Errc CaughtCode(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected faitheval::Error");
  return Errc::kConfig;
}

std::vector<std::string> Surfaces(const TokenSequence& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

Corpus SmallCorpus() {
  return BuildCorpus({{"d1", "Some article text."}},
                     {{"d1", "sysA", "abcd efghi jklmn opqrs"},   // 22 chars
                      {"d1", "sysB", "Zac Goldsmith's bid."}});
}

TEST_CASE("tokenize splits apostrophe-s and punctuation with offsets") {
  auto tokens = Tokenize("Zac Goldsmith's bid.");
  std::vector<Token> expected = {{"zac", 0, 3},
                                 {"goldsmith", 4, 13},
                                 {"'s", 13, 15},
                                 {"bid", 16, 19},
                                 {".", 19, 20}};
  CHECK(tokens == expected);
}

TEST_CASE("tokenize empty and whitespace-only") {
  CHECK(Tokenize("").empty());
  CHECK(Tokenize(" \t\n ").empty());
}

TEST_CASE("tokenize double space offsets index the original string") {
  auto tokens = Tokenize("a  b");
  std::vector<Token> expected = {{"a", 0, 1}, {"b", 3, 4}};
  CHECK(tokens == expected);
}

TEST_CASE("tokenize unicode: code point offsets, lowercase, punctuation runs") {
  // "É" is one code point; the curly apostrophe also forms 's.
  auto tokens = Tokenize("Élan’s “big” deal...!");
  std::vector<Token> expected = {{"élan", 0, 4},   {"’s", 4, 6},
                                 {"“", 7, 8}, {"big", 8, 11},
                                 {"”", 11, 12}, {"deal", 13, 17},
                                 {"...!", 17, 21}};
  CHECK(tokens == expected);
  // Non-breaking space separates words.
  CHECK(Surfaces(Tokenize("a b")) == std::vector<std::string>{"a", "b"});
}

TEST_CASE("tokenize keeps other apostrophes as punctuation") {
  CHECK(Surfaces(Tokenize("don't")) == std::vector<std::string>{"don", "'", "t"});
  CHECK(Surfaces(Tokenize("it'sy")) == std::vector<std::string>{"it", "'", "sy"});
  CHECK(Surfaces(Tokenize("U.S.'s")) ==
        std::vector<std::string>{"u", ".", "s", ".", "'s"});
  CHECK(Surfaces(Tokenize("$5,000")) ==
        std::vector<std::string>{"$", "5", ",", "000"});
}

TEST_CASE("tokenize is idempotent on its surface output") {
  std::mt19937 rng(7);
  const std::vector<std::string> pieces = {
      "a", "B", "zz", "'", "s", "S", "’", ".", ",", "!", " ", "  ", "\t",
      "é", "Ö", " ", "“", "x", "'s", "-", "。", "9"};
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::uniform_int_distribution<int> len(0, 14);
  for (int iter = 0; iter < 3000; ++iter) {
    std::string text;
    for (int k = len(rng); k > 0; --k) text += pieces[pick(rng)];
    auto first = Surfaces(Tokenize(text));
    std::string joined;
    for (std::size_t i = 0; i < first.size(); ++i) {
      if (i) joined += ' ';
      joined += first[i];
    }
    INFO("text=" << text);
    CHECK(Surfaces(Tokenize(joined)) == first);
    // Offsets strictly increasing, non-overlapping, non-empty.
    auto tokens = Tokenize(text);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      CHECK(tokens[i].char_end > tokens[i].char_start);
      if (i) CHECK(tokens[i].char_start >= tokens[i - 1].char_end);
    }
  }
}

TEST_CASE("span_to_words overlap rule") {
  TokenSequence tokens = {{"abc", 0, 3}, {"efg", 4, 7}};
  CHECK(SpanToWords(0, 3, tokens, 7) == std::set<std::size_t>{0});
  CHECK(SpanToWords(2, 5, tokens, 7) == std::set<std::size_t>{0, 1});
  CHECK(SpanToWords(0, 7, tokens, 7) == std::set<std::size_t>{0, 1});
  CHECK(SpanToWords(3, 4, tokens, 7).empty());
  CHECK(CaughtCode([&] { SpanToWords(5, 9, tokens, 7); }) == Errc::kSpanOutOfRange);
  CHECK(CaughtCode([&] { SpanToWords(4, 4, tokens, 7); }) == Errc::kSpanOutOfRange);
}

TEST_CASE("disjoint token-aligned spans map to disjoint word sets") {
  std::mt19937 rng(11);
  const std::string text = "one two, three four's five. six";
  auto tokens = Tokenize(text);
  const std::size_t len = unicode::CodepointLength(text);
  for (int iter = 0; iter < 500; ++iter) {
    std::uniform_int_distribution<std::size_t> cut(1, tokens.size() - 1);
    std::size_t m = cut(rng);
    auto left = SpanToWords(tokens.front().char_start, tokens[m - 1].char_end, tokens, len);
    auto right = SpanToWords(tokens[m].char_start, tokens.back().char_end, tokens, len);
    for (auto w : left) CHECK(right.count(w) == 0);
    CHECK(left.size() + right.size() == tokens.size());
  }
}

TEST_CASE("ingest documents") {
  auto docs = ParseDocuments(R"({"doc_id":"d1","text":"a b"})", "mem",
                             DocumentFormat::kJsonl);
  REQUIRE(docs.size() == 1);
  CHECK(docs[0].doc_id == "d1");
  CHECK(docs[0].text == "a b");

  CHECK(CaughtCode([] {
          ParseDocuments("{\"doc_id\":\"d1\",\"text\":\"a\"}\n{\"doc_id\":\"d1\",\"text\":\"b\"}\n",
                         "mem", DocumentFormat::kJsonl);
        }) == Errc::kDuplicateKey);
  CHECK(CaughtCode([] {
          ParseDocuments(R"({"doc_id":"d1","text":""})", "mem", DocumentFormat::kJsonl);
        }) == Errc::kEmptyField);
  CHECK(CaughtCode([] {
          ParseDocuments("{\"doc_id\":\"d1\",\n", "mem", DocumentFormat::kJsonl);
        }) == Errc::kParse);

  auto tsv = ParseDocuments("doc_id\ttext\nd1\tline\\none\n", "mem", DocumentFormat::kTsv);
  REQUIRE(tsv.size() == 1);
  CHECK(tsv[0].text == "line\none");
}

TEST_CASE("ingest summaries rejects duplicate pairs and unknown docs") {
  CHECK(CaughtCode([] {
          ParseSummaries(
              "{\"doc_id\":\"d1\",\"system_id\":\"a\",\"text\":\"x\"}\n"
              "{\"doc_id\":\"d1\",\"system_id\":\"a\",\"text\":\"y\"}\n",
              "mem");
        }) == Errc::kDuplicateKey);
  CHECK(CaughtCode([] { BuildCorpus({{"d1", "t"}}, {{"d2", "a", "x"}}); }) ==
        Errc::kMissingDocument);
}

const char kHeader[] =
    "doc_id\tsystem_id\tannotator_id\ttask\tlabel\tchar_start\tchar_end\tverdict\tevidence_note\n";

TEST_CASE("ingest annotations validates spans") {
  Corpus corpus = SmallCorpus();
  const ColumnMap map = ColumnMap::Canonical();

  auto ok = ParseAnnotations(
      std::string(kHeader) + "d1\tsysA\tA\thallucination\textrinsic\t0\t10\t\t\n", "mem",
      map, corpus);
  CHECK(ok.spans().size() == 1);

  CHECK(CaughtCode([&] {
          ParseAnnotations(std::string(kHeader) +
                               "d1\tsysA\tA\thallucination\textrinsic\t0\t5\t\t\n"
                               "d1\tsysA\tA\thallucination\tintrinsic\t3\t8\t\t\n",
                           "mem", map, corpus);
        }) == Errc::kOverlappingSpans);
  // Different annotators may overlap.
  CHECK_NOTHROW(ParseAnnotations(std::string(kHeader) +
                                     "d1\tsysA\tA\thallucination\textrinsic\t0\t5\t\t\n"
                                     "d1\tsysA\tB\thallucination\tintrinsic\t3\t8\t\t\n",
                                 "mem", map, corpus));
  CHECK(CaughtCode([&] {
          ParseAnnotations(std::string(kHeader) +
                               "d1\tsysA\tA\thallucination\textrinsic\t15\t25\t\t\n",
                           "mem", map, corpus);
        }) == Errc::kSpanOutOfRange);
  CHECK(CaughtCode([&] {
          ParseAnnotations(std::string(kHeader) +
                               "d1\tnope\tA\thallucination\textrinsic\t0\t2\t\t\n",
                           "mem", map, corpus);
        }) == Errc::kUnknownSystem);
  // A span over the single space between words covers no token.
  CHECK(CaughtCode([&] {
          ParseAnnotations(std::string(kHeader) +
                               "d1\tsysA\tA\thallucination\textrinsic\t4\t5\t\t\n",
                           "mem", map, corpus);
        }) == Errc::kSpanCoversNoToken);
  CHECK(CaughtCode([&] {
          ParseAnnotations(std::string(kHeader) +
                               "d1\tsysA\tA\tlinguistic\tintrinsic\t0\t2\t\t\n",
                           "mem", map, corpus);
        }) == Errc::kParse);
  CHECK(CaughtCode([&] {
          ParseAnnotations(std::string(kHeader) +
                               "d1\tsysB\tA\tfactuality\t\t\t\ttrue\t\n"
                               "d1\tsysB\tA\tfactuality\t\t\t\tfalse\t\n",
                           "mem", map, corpus);
        }) == Errc::kDuplicateKey);
}

TEST_CASE("column map adapter reads a CSV with 1-based inclusive offsets") {
  Corpus corpus = SmallCorpus();
  const std::string csv =
      "bbcid,system,summary,hallucination_type,start,end,worker\n"
      "d1,sysB,\"Zac Goldsmith's bid.\",extrinsic,1,3,w1\n"
      "d1,sysB,\"Zac, \"\"quoted\"\"\",NULL,-1,-1,w2\n";
  ColumnMap map = ColumnMap::Parse(
      "doc_id=bbcid,system_id=system,annotator_id=worker,label=hallucination_type,"
      "char_start=start,char_end=end,@task=hallucination,@delimiter=comma,"
      "@offset_base=1,@end_inclusive=1,@null=NULL");
  auto set = ParseAnnotations(csv, "mem.csv", map, corpus);
  auto spans = set.spans();
  REQUIRE(spans.size() == 1);
  CHECK(spans[0].char_start == 0);
  CHECK(spans[0].char_end == 3);
  CHECK(set.Annotators({"d1", "sysB"}, TaskType::kHallucination) ==
        std::set<std::string>{"w1", "w2"});
  CHECK(CaughtCode([] { ColumnMap::Parse("doc_id=a,system_id=b"); }) == Errc::kConfig);
}

TEST_CASE("canonical export round-trips byte-exactly") {
  Corpus corpus = SmallCorpus();
  const std::string text = std::string(kHeader) +
                           "d1\tsysB\tC\thallucination\t\t\t\t\t\n"
                           "d1\tsysA\tB\thallucination\textrinsic\t6\t10\t\t\n"
                           "d1\tsysA\tA\thallucination\textrinsic\t0\t5\t\t\n"
                           "d1\tsysA\tA\thallucination\tintrinsic\t11\t16\t\t\n"
                           "d1\tsysB\tA\tfactuality\t\t\t\tfalse\tno MP named\\tZac\n"
                           "d1\tsysA\tA\tlinguistic\trepetition\t0\t4\t\t\n";
  auto first = ParseAnnotations(text, "mem", ColumnMap::Canonical(), corpus);
  const std::string exported = first.ToCanonicalTsv();
  auto second = ParseAnnotations(exported, "mem", ColumnMap::Canonical(), corpus);
  CHECK(second == first);
  CHECK(second.ToCanonicalTsv() == exported);
  CHECK(first.Judgments({"d1", "sysB"}).at(0).evidence_note == "no MP named\tZac");
  CHECK(AnnotationSet().ToCanonicalTsv() == kHeader);
}

}  // namespace
}  // namespace faitheval

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

#include <filesystem>
#include <set>
#include <string>

#include "doctest.h"
#include "faitheval/error.h"
#include "faitheval/io.h"
#include "faitheval/report.h"

namespace faitheval {
namespace {

namespace fs = std::filesystem;

const std::string kSmall = std::string(FAITHEVAL_FIXTURE_DIR) + "/small";

RunConfig SmallConfig() {
  RunConfig c;
  c.documents = kSmall + "/documents.jsonl";
  c.summaries = kSmall + "/summaries.jsonl";
  c.annotations = kSmall + "/annotations.tsv";
  c.references = kSmall + "/references.jsonl";
  c.systems = {"sysa", "sysb"};
  c.entailment_scores = kSmall + "/entailment_scores.tsv";
  c.metric_scores = kSmall + "/metric_scores.tsv";
  c.qa_pairs = kSmall + "/qa_pairs.tsv";
  c.rc_answers = kSmall + "/rc_answers.tsv";
  c.folds = kSmall + "/folds.tsv";
  c.fold_scores = {kSmall + "/fold_0_scores.tsv", kSmall + "/fold_1_scores.tsv"};
  return c;
}

const ReportTable& Find(const ReportBundle& b, const std::string& name) {
  for (const auto& t : b.tables) {
    if (t.name == name) return t;
  }
  FAIL("missing table " << name);
  throw std::logic_error("unreachable");
}

fs::path TempDir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("faitheval_report_test_" + name);
  fs::remove_all(dir);
  return dir;
}

TEST_CASE("tables render as tsv and aligned text") {
  ReportTable t{"demo", "Demo", {"system_id", "n", "pct"}, {{"a", "3", "12.5"}, {"longer", "10", ""}}};
  CHECK(RenderTsv(t) == "system_id\tn\tpct\na\t3\t12.5\nlonger\t10\t\n");
  CHECK(RenderText(t) ==
        "Demo\n"
        "system_id   n   pct\n"
        "a           3  12.5\n"
        "longer     10     -\n");
}

TEST_CASE("hallucination table from hand-counted fixture pairs") {
  auto corpus = LoadCorpus(kSmall + "/documents.jsonl", kSmall + "/summaries.jsonl");
  auto ann = LoadAnnotations(kSmall + "/annotations.tsv", "", corpus);
  auto t = HallucinationTable(SystemTable(ann, corpus));
  REQUIRE(t.rows.size() == 2);
  // sysa: intrinsic d02 d03, extrinsic d03 d05, faithful d01 d04, factual d05.
  CHECK(t.rows[0] == std::vector<std::string>{"sysa", "5", "40.0", "40.0", "60.0", "40.0", "60.0"});
  // sysb: intrinsic d05, extrinsic d01 d03, faithful d02 d04, factual d01.
  CHECK(t.rows[1] == std::vector<std::string>{"sysb", "5", "20.0", "40.0", "60.0", "40.0", "60.0"});
}

TEST_CASE("report emits every table and matches direct module calls") {
  auto bundle = RunReport(SmallConfig());
  CHECK(bundle.failures.empty());
  CHECK(bundle.exit_code() == 0);
  std::set<std::string> names;
  for (const auto& t : bundle.tables) names.insert(t.name);
  for (const char* want : {"rouge", "hallucination", "factual_breakdown", "span_stats",
                           "linguistic", "agreement", "entailment", "qa",
                           "correlation_faithful", "correlation_factual", "selection"}) {
    CHECK_MESSAGE(names.count(want) == 1, want);
  }

  auto corpus = LoadCorpus(kSmall + "/documents.jsonl", kSmall + "/summaries.jsonl");
  auto ann = LoadAnnotations(kSmall + "/annotations.tsv", "", corpus);
  auto refs = LoadReferences(kSmall + "/references.jsonl");
  std::vector<std::pair<std::string, RougeTriple>> rouge;
  for (const char* sys : {"sysa", "sysb"}) rouge.emplace_back(sys, CorpusRouge(corpus, sys, refs));
  CHECK(RenderTsv(Find(bundle, "rouge")) == RenderTsv(RougeTable(rouge)));
  CHECK(RenderTsv(Find(bundle, "hallucination")) ==
        RenderTsv(HallucinationTable(SystemTable(ann, corpus))));
  CHECK(RenderTsv(Find(bundle, "span_stats")) == RenderTsv(SpanStatsTable(SpanStats(ann, corpus))));

  const auto& sel = Find(bundle, "selection");
  REQUIRE(sel.rows.size() == 4);
  CHECK(sel.rows[2][0] == "entail");
  CHECK(sel.rows[3][0] == "entail_cv");
  // Identical per-fold scores make cross-validation equal plain selection.
  CHECK(std::vector<std::string>(sel.rows[2].begin() + 1, sel.rows[2].end()) ==
        std::vector<std::string>(sel.rows[3].begin() + 1, sel.rows[3].end()));

  const auto& corr = Find(bundle, "correlation_faithful");
  std::vector<std::string> metrics;
  for (const auto& r : corr.rows) metrics.push_back(r[0]);
  CHECK(metrics == std::vector<std::string>{"rouge1", "rouge2", "rougeL", "bertscore", "qa",
                                            "entailment"});
}

TEST_CASE("a missing input path fails before any computation") {
  auto c = SmallConfig();
  c.annotations = kSmall + "/does_not_exist.tsv";
  try {
    RunReport(c);
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kConfig);
    CHECK(std::string(e.what()).find("does_not_exist.tsv") != std::string::npos);
  }
  c = SmallConfig();
  c.annotations.clear();
  CHECK_THROWS_AS(RunReport(c), Error);
  c = SmallConfig();
  c.reference_system = "sysa";
  CHECK_THROWS_AS(RunReport(c), Error);
  c = SmallConfig();
  c.fold_scores.clear();
  CHECK_THROWS_AS(RunReport(c), Error);
}

TEST_CASE("a failing section is reported while the others still run") {
  auto dir = TempDir("bad_scores");
  fs::create_directories(dir);
  io::WriteFile((dir / "scores.tsv").string(), "doc_id\tsystem_id\tp_entail\nd01\tsysa\t0.5\n");
  auto c = SmallConfig();
  c.entailment_scores = (dir / "scores.tsv").string();
  c.folds.clear();
  c.fold_scores.clear();
  auto bundle = RunReport(c);
  REQUIRE(!bundle.failures.empty());
  CHECK(bundle.failures[0].code == Errc::kSchema);
  CHECK(bundle.exit_code() == ExitCodeFor(Errc::kSchema));
  CHECK_NOTHROW(Find(bundle, "hallucination"));
  CHECK_NOTHROW(Find(bundle, "rouge"));
  CHECK(bundle.Summary().find("entailment") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("re-running the report writes byte-identical files") {
  auto a = TempDir("run_a");
  auto b = TempDir("run_b");
  WriteBundle(RunReport(SmallConfig()), a.string());
  WriteBundle(RunReport(SmallConfig()), b.string());
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    auto other = b / entry.path().filename();
    REQUIRE(fs::exists(other));
    CHECK(io::ReadFile(entry.path().string()) == io::ReadFile(other.string()));
    ++files;
  }
  CHECK(files == 12);
  fs::remove_all(a);
  fs::remove_all(b);
}

}  // namespace
}  // namespace faitheval

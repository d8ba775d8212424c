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

// Runs the built command-line binary.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "faitheval/io.h"

namespace faitheval {
namespace {

namespace fs = std::filesystem;

const std::string kSmall = std::string(FAITHEVAL_FIXTURE_DIR) + "/small";

struct Result {
  int code;
  std::string out;
  std::string err;
};

fs::path Scratch() {
  static fs::path dir = [] {
    auto d = fs::temp_directory_path() / "faitheval_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Result Run(const std::string& args) {
  const auto out = Scratch() / "stdout.txt";
  const auto err = Scratch() / "stderr.txt";
  const std::string cmd = std::string(FAITHEVAL_CLI_PATH) + " " + args + " >" + out.string() +
                          " 2>" + err.string();
  int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, io::ReadFile(out.string()),
          io::ReadFile(err.string())};
}

std::string WriteConfig(const std::string& name, const std::string& body) {
  auto path = Scratch() / name;
  io::WriteFile(path.string(), body);
  return path.string();
}

std::string SmallInputs() {
  return "--summaries " + kSmall + "/summaries.jsonl --references " + kSmall +
         "/references.jsonl";
}

TEST_CASE("rouge prints one row per requested system") {
  auto r = Run("rouge " + SmallInputs() + " --systems sysa,sysb");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("system_id\tr1\tr2\trl\n", 0) == 0);
  CHECK(r.out.find("\nsysa\t") != std::string::npos);
  CHECK(r.out.find("\nsysb\t") != std::string::npos);
}

TEST_CASE("flags override the config file, which overrides defaults") {
  auto config = WriteConfig("rouge.ini", "summaries = " + kSmall + "/summaries.jsonl\n" +
                                             "references = " + kSmall + "/references.jsonl\n" +
                                             "systems = sysa\n");
  auto from_file = Run("rouge --config " + config);
  REQUIRE(from_file.code == 0);
  CHECK(from_file.out.find("\nsysa\t") != std::string::npos);
  CHECK(from_file.out.find("\nsysb\t") == std::string::npos);

  auto overridden = Run("rouge --config " + config + " --systems sysb");
  REQUIRE(overridden.code == 0);
  CHECK(overridden.out.find("\nsysa\t") == std::string::npos);
  CHECK(overridden.out.find("\nsysb\t") != std::string::npos);
}

TEST_CASE("configuration problems exit 1 before computing") {
  auto missing = WriteConfig("missing.ini", "summaries = " + kSmall + "/summaries.jsonl\n" +
                                                "annotations = " + kSmall + "/nope.tsv\n" +
                                                "systems = sysa\n");
  auto out_dir = (Scratch() / "report_missing").string();
  auto r = Run("report --config " + missing + " --out " + out_dir);
  CHECK(r.code == 1);
  CHECK(r.err.find("nope.tsv") != std::string::npos);
  CHECK(!fs::exists(out_dir + "/report.txt"));

  auto unknown = WriteConfig("unknown.ini", "no_such_option = 3\n");
  CHECK(Run("rouge --config " + unknown).code == 1);
  CHECK(Run("rouge --no-such-flag").code == 1);
}

TEST_CASE("an unreachable scorer exits 3") {
  auto r = Run("entail-eval --live --documents " + kSmall + "/documents.jsonl --summaries " +
               kSmall + "/summaries.jsonl --annotations " + kSmall +
               "/annotations.tsv --entail-url http://127.0.0.1:1 --timeout-ms 200 --retries 0");
  CHECK(r.code == 3);
}

TEST_CASE("malformed score files exit 2") {
  auto bad = WriteConfig("bad_scores.tsv", "doc_id\tsystem_id\tp_entail\nd01\tsysa\tx\n");
  auto r = Run("select " + SmallInputs() + " --annotations " + kSmall +
               "/annotations.tsv --scores " + bad + " --systems sysa,sysb");
  CHECK(r.code == 2);
}

TEST_CASE("report writes every table and a summary") {
  auto out_dir = (Scratch() / "report_ok").string();
  auto r = Run("report --documents " + kSmall + "/documents.jsonl " + SmallInputs() +
               " --annotations " + kSmall + "/annotations.tsv --systems sysa,sysb" +
               " --entailment-scores " + kSmall + "/entailment_scores.tsv --out " + out_dir +
               " --quiet");
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  for (const char* f : {"report.txt", "rouge.tsv", "hallucination.tsv", "agreement.tsv",
                        "entailment.tsv", "selection.tsv", "correlation_faithful.tsv"}) {
    CHECK_MESSAGE(fs::exists(out_dir + "/" + f), f);
  }
}

}  // namespace
}  // namespace faitheval

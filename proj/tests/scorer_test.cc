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


#include <atomic>
#include <thread>

#include "doctest.h"
#include "faitheval/error.h"
#include "faitheval/scorer.h"
#include "httplib.h"
#include "json.hpp"

namespace faitheval {
namespace {

using nlohmann::json;

Errc CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no exception");
  return Errc::kConfig;
}

TEST_CASE("entailment score files") {
  const std::string header = "doc_id\tsystem_id\tp_entail\tp_neutral\tp_contradict\n";
  auto s = ParseEntailmentScores(header + "d1\tx\t0.5\t0.3\t0.2\n", "t");
  CHECK(s.at({"d1", "x"}).p_entail == 0.5);
  CHECK(CodeOf([&] { ParseEntailmentScores(header + "d1\tx\t0.9\t0.9\t0.9\n", "t"); }) ==
        Errc::kProbabilityNotNormalized);
  CHECK(CodeOf([&] {
          ParseEntailmentScores(header + "d1\tx\t0.5\t0.3\t0.2\nd1\tx\t0.2\t0.3\t0.5\n", "t");
        }) == Errc::kDuplicateKey);
  CHECK(CodeOf([&] { ParseEntailmentScores(header + "d1\tx\t1.2\t0\t-0.2\n", "t"); }) ==
        Errc::kProbabilityNotNormalized);
  CHECK(CodeOf([&] { ParseEntailmentScores("doc_id\tsystem_id\tp_entail\n", "t"); }) ==
        Errc::kSchema);

  // Rounded output within 1e-3 is rescaled onto the simplex.
  auto r = ParseEntailmentScores(header + "d1\tx\t0.333\t0.333\t0.333\n", "t");
  const auto& e = r.at({"d1", "x"});
  CHECK(e.p_entail + e.p_neutral + e.p_contradict == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.p_entail == doctest::Approx(1.0 / 3.0));

  // Round trip through the writer is exact.
  CHECK(ParseEntailmentScores(FormatEntailmentScores(r), "t").at({"d1", "x"}).p_entail ==
        e.p_entail);
}

TEST_CASE("qa, rc and metric files") {
  auto qa = ParseQaPairs(
      "doc_id\tsystem_id\tq_index\tquestion\tanswer\n"
      "d1\tx\t1\tWho?\tZac\nd1\tx\t0\tWhat?\ta bid\n",
      "t");
  REQUIRE(qa.size() == 2);
  CHECK(qa.begin()->second.question == "What?");
  CHECK(ParseQaPairs(FormatQaPairs(qa), "t").size() == 2);
  CHECK(CodeOf([] {
          ParseQaPairs("doc_id\tsystem_id\tq_index\tquestion\tanswer\nd1\tx\t0\t\tZac\n", "t");
        }) == Errc::kEmptyField);
  CHECK(CodeOf([] {
          ParseQaPairs(
              "doc_id\tsystem_id\tq_index\tquestion\tanswer\nd1\tx\t0\tq\ta\nd1\tx\t0\tq\ta\n",
              "t");
        }) == Errc::kDuplicateKey);

  auto rc = ParseRcAnswers("doc_id\tsystem_id\tq_index\trc_answer\nd1\tx\t0\t\nd1\tx\t1\tZac\n",
                           "t");
  CHECK(rc.at({{"d1", "x"}, 0}).empty());
  CHECK(rc.at({{"d1", "x"}, 1}) == "Zac");

  auto m = ParseMetricScores("doc_id\tsystem_id\tbertscore\trouge1\nd1\tx\t0.9\t0.4\n", "t");
  CHECK(m.at("bertscore").at({"d1", "x"}) == 0.9);
  CHECK(m.at("rouge1").at({"d1", "x"}) == 0.4);
  CHECK(ParseMetricScores(FormatMetricScores(m), "t") == m);
  CHECK(CodeOf([] { ParseMetricScores("doc_id\tsystem_id\nd1\tx\n", "t"); }) == Errc::kSchema);
  CHECK(CodeOf([] { ParseMetricScores("doc_id\tsystem_id\tm\nd1\tx\tnan\n", "t"); }) ==
        Errc::kParse);
}

// A scorer backend on a loopback port. The first `fail_first` requests of
// each run get a 503.
class MockScorer {
 public:
  MockScorer() {
    server_.Post("/score/entailment", [this](const httplib::Request& req, httplib::Response& res) {
      if (!Admit(req, res)) return;
      json in = json::parse(req.body);
      // Entailment grows with summary length, a deterministic stand-in.
      double e = std::min(0.9, 0.1 * static_cast<double>(in["summary"].get<std::string>().size()));
      json out = {{"p_entail", e}, {"p_neutral", (1 - e) / 2}, {"p_contradict", (1 - e) / 2}};
      res.set_content(out.dump(), "application/json");
    });
    server_.Post("/score/qg", [this](const httplib::Request& req, httplib::Response& res) {
      if (!Admit(req, res)) return;
      json in = json::parse(req.body);
      json out = {{"pairs", json::array({{{"q_index", 0},
                                          {"question", "what?"},
                                          {"answer", in["summary"]}}})}};
      res.set_content(out.dump(), "application/json");
    });
    server_.Post("/score/rc", [this](const httplib::Request& req, httplib::Response& res) {
      if (!Admit(req, res)) return;
      json out = {{"rc_answer", garbage_ ? json(5) : json("answer")}};
      res.set_content(out.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockScorer() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  std::atomic<int> calls{0};
  std::atomic<int> fail_first{0};
  std::atomic<bool> garbage_{false};
  std::string last_auth;

 private:
  bool Admit(const httplib::Request& req, httplib::Response& res) {
    ++calls;
    {
      std::lock_guard lock(mu_);
      last_auth = req.get_header_value("Authorization");
    }
    if (fail_first > 0) {
      --fail_first;
      res.status = 503;
      return false;
    }
    return true;
  }

  httplib::Server server_;
  std::mutex mu_;
  int port_ = 0;
  std::thread thread_;
};

EndpointConfig ConfigFor(const MockScorer& mock) {
  EndpointConfig c;
  c.entail_url = c.qg_url = c.rc_url = mock.url();
  c.backoff_ms = 1;
  c.timeout_ms = 2000;
  return c;
}

TEST_CASE("wire requests, caching and retries") {
  MockScorer mock;
  auto config = ConfigFor(mock);
  config.bearer_token = "tok";
  ScorerClient client(config);
  CHECK(client.cache_stats() == CacheStats{0, 0, 0});

  auto s = client.Entailment({"d1", "x"}, "doc", "abc");
  CHECK(s.p_entail + s.p_neutral + s.p_contradict == doctest::Approx(1.0));
  CHECK(s.p_entail == doctest::Approx(0.3));
  CHECK(client.cache_stats() == CacheStats{0, 1, 1});
  client.Entailment({"d1", "x"}, "doc", "abc");
  CHECK(client.cache_stats() == CacheStats{1, 1, 1});
  CHECK(mock.calls == 1);
  CHECK(mock.last_auth == "Bearer tok");
  client.ClearCache();
  CHECK(client.cache_stats().entries == 0);

  mock.fail_first = 2;
  client.Entailment({"d2", "x"}, "doc", "abcd");
  CHECK(mock.calls == 4);

  auto qs = client.Questions({"d1", "x"}, "zac bid");
  REQUIRE(qs.size() == 1);
  CHECK(qs[0].answer == "zac bid");
  CHECK(client.Answer({{"d1", "x"}, 0}, "what?", "doc") == "answer");

  mock.garbage_ = true;
  CHECK(CodeOf([&] { client.Answer({{"d1", "x"}, 1}, "who?", "doc"); }) ==
        Errc::kInvalidResponse);
}

TEST_CASE("unavailable endpoint") {
  std::string url;
  {
    MockScorer mock;
    url = mock.url();
  }
  EndpointConfig c;
  c.entail_url = url;
  c.max_retries = 2;
  c.backoff_ms = 1;
  ScorerClient client(c);
  CHECK(CodeOf([&] { client.Entailment({"d1", "x"}, "doc", "s"); }) ==
        Errc::kEndpointUnavailable);
  CHECK(client.upstream_calls() == 3);
  // Failures are not cached.
  CHECK(client.cache_stats().entries == 0);

  ScorerClient unconfigured(EndpointConfig{});
  CHECK(CodeOf([&] { unconfigured.Answer({{"d", "x"}, 0}, "q", "doc"); }) == Errc::kConfig);
}

TEST_CASE("wire and file access agree, with and without cache") {
  MockScorer mock;
  std::vector<DocumentRecord> docs;
  std::vector<SummaryRecord> sums;
  std::vector<PairKey> pairs;
  for (int d = 0; d < 20; ++d) {
    const std::string id = "d" + std::to_string(d);
    docs.push_back({id, "document " + id});
    for (const char* sys : {"x", "y"}) {
      sums.push_back({id, sys, std::string(1 + d % 7, 'a') + sys});
      pairs.push_back({id, sys});
    }
  }
  Corpus corpus = BuildCorpus(docs, sums);
  auto config = ConfigFor(mock);
  ScorerClient cached(config);
  auto wire = cached.ScoreEntailment(corpus, pairs);
  CHECK(wire.size() == 40);
  // Identical summaries across docs are distinct requests (doc_id differs).
  CHECK(cached.cache_stats().misses == 40);

  auto file = ParseEntailmentScores(FormatEntailmentScores(wire), "wire");
  CHECK(FormatEntailmentScores(file) == FormatEntailmentScores(wire));

  config.cache = false;
  config.parallelism = 1;
  ScorerClient uncached(config);
  CHECK(FormatEntailmentScores(uncached.ScoreEntailment(corpus, pairs)) ==
        FormatEntailmentScores(wire));
  CHECK(uncached.cache_stats() == CacheStats{0, 0, 0});

  auto qa = cached.GenerateQuestions(corpus, pairs);
  CHECK(qa.size() == 40);
  auto rc = cached.AnswerQuestions(corpus, qa);
  CHECK(rc.size() == 40);
  CHECK(ParseRcAnswers(FormatRcAnswers(rc), "t") == rc);
}

}  // namespace
}  // namespace faitheval

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


#include "faitheval/scorer.h"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <optional>
#include <thread>

#include "faitheval/error.h"
#include "faitheval/io.h"
#include "httplib.h"
#include "json.hpp"

namespace faitheval {
namespace {

using nlohmann::json;

constexpr char kModule[] = "scorer_gateway";

std::string Where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line);
}

std::string ShortestDouble(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string TsvLine(const std::vector<std::string>& fields) {
  return io::JoinTsv(fields) + '\n';
}

std::string PairName(const PairKey& key) {
  return "(" + key.doc_id + ", " + key.system_id + ")";
}

PairKey ReadPair(const io::Row& row, std::size_t doc_col, std::size_t sys_col,
                 std::string_view source) {
  PairKey key{row.fields[doc_col], row.fields[sys_col]};
  if (key.doc_id.empty() || key.system_id.empty()) {
    throw Error(Errc::kEmptyField, kModule,
                Where(source, row.line) + ": empty doc_id or system_id");
  }
  return key;
}

int ReadIndex(const io::Row& row, std::size_t col, std::string_view source) {
  long long v = io::ParseInt(row.fields[col], Where(source, row.line) + " q_index");
  if (v < 0 || v > 1'000'000'000) {
    throw Error(Errc::kParse, kModule, Where(source, row.line) + ": q_index out of range");
  }
  return static_cast<int>(v);
}

template <typename Map, typename Key>
void RequireNew(const Map& map, const Key& key, const std::string& where,
                const std::string& name) {
  if (map.count(key)) {
    throw Error(Errc::kDuplicateKey, kModule, where + ": duplicate key " + name);
  }
}

// Runs fn(i) for i in [0, n) on up to `workers` threads. If any call throws,
// the exception of the lowest failing index is rethrown once all are done.
template <typename Fn>
void ParallelFor(std::size_t n, int workers, Fn fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t count =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < count; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

json ParseResponse(const std::string& body, ScorerKind kind) {
  try {
    json j = json::parse(body);
    if (!j.is_object()) throw json::type_error::create(302, "not an object", nullptr);
    return j;
  } catch (const json::exception& e) {
    throw Error(Errc::kInvalidResponse, kModule,
                std::string(ScorerPath(kind)) + ": " + e.what());
  }
}

template <typename T>
T Field(const json& j, const char* name, ScorerKind kind) {
  auto it = j.find(name);
  if (it == j.end()) {
    throw Error(Errc::kInvalidResponse, kModule,
                std::string(ScorerPath(kind)) + ": missing field '" + name + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(Errc::kInvalidResponse, kModule,
                std::string(ScorerPath(kind)) + ": field '" + name + "' has wrong type");
  }
}

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path prefix without trailing slash
};

SplitUrl SplitBaseUrl(const std::string& url) {
  auto scheme = url.find("://");
  auto path = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  SplitUrl out;
  out.origin = url.substr(0, path);
  if (path != std::string::npos) out.prefix = url.substr(path);
  while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  return out;
}

}  // namespace

void NormalizeProbabilities(EntailmentScore& s, std::string_view where) {
  for (double p : {s.p_entail, s.p_neutral, s.p_contradict}) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw Error(Errc::kProbabilityNotNormalized, kModule,
                  std::string(where) + ": probability " + ShortestDouble(p) +
                      " outside [0,1]");
    }
  }
  const double sum = s.p_entail + s.p_neutral + s.p_contradict;
  const double off = std::abs(sum - 1.0);
  if (off <= 1e-6) return;
  if (off > 1e-3) {
    throw Error(Errc::kProbabilityNotNormalized, kModule,
                std::string(where) + ": probabilities sum to " + ShortestDouble(sum));
  }
  s.p_entail /= sum;
  s.p_neutral /= sum;
  s.p_contradict /= sum;
}

EntailmentScores ParseEntailmentScores(std::string_view text, std::string_view source) {
  io::Table t = io::ParseTsv(text, source);
  const auto doc = t.RequireColumn("doc_id", source);
  const auto sys = t.RequireColumn("system_id", source);
  const auto pe = t.RequireColumn("p_entail", source);
  const auto pn = t.RequireColumn("p_neutral", source);
  const auto pc = t.RequireColumn("p_contradict", source);
  EntailmentScores out;
  for (const auto& row : t.rows) {
    const std::string where = Where(source, row.line);
    EntailmentScore s;
    s.key = ReadPair(row, doc, sys, source);
    s.p_entail = io::ParseDouble(row.fields[pe], where + " p_entail");
    s.p_neutral = io::ParseDouble(row.fields[pn], where + " p_neutral");
    s.p_contradict = io::ParseDouble(row.fields[pc], where + " p_contradict");
    NormalizeProbabilities(s, where);
    RequireNew(out, s.key, where, PairName(s.key));
    out.emplace(s.key, s);
  }
  return out;
}

EntailmentScores LoadEntailmentScores(const std::string& path) {
  return ParseEntailmentScores(io::ReadFile(path), path);
}

std::string FormatEntailmentScores(const EntailmentScores& scores) {
  std::string out = TsvLine({"doc_id", "system_id", "p_entail", "p_neutral", "p_contradict"});
  for (const auto& [key, s] : scores) {
    out += TsvLine({key.doc_id, key.system_id, ShortestDouble(s.p_entail),
                        ShortestDouble(s.p_neutral), ShortestDouble(s.p_contradict)});
  }
  return out;
}

QaPairs ParseQaPairs(std::string_view text, std::string_view source) {
  io::Table t = io::ParseTsv(text, source);
  const auto doc = t.RequireColumn("doc_id", source);
  const auto sys = t.RequireColumn("system_id", source);
  const auto qi = t.RequireColumn("q_index", source);
  const auto q = t.RequireColumn("question", source);
  const auto a = t.RequireColumn("answer", source);
  QaPairs out;
  for (const auto& row : t.rows) {
    const std::string where = Where(source, row.line);
    QaPair p;
    p.key = {ReadPair(row, doc, sys, source), ReadIndex(row, qi, source)};
    p.question = row.fields[q];
    p.answer = row.fields[a];
    if (p.question.empty() || p.answer.empty()) {
      throw Error(Errc::kEmptyField, kModule, where + ": empty question or answer");
    }
    RequireNew(out, p.key, where,
               PairName(p.key.pair) + " q" + std::to_string(p.key.q_index));
    out.emplace(p.key, std::move(p));
  }
  return out;
}

QaPairs LoadQaPairs(const std::string& path) {
  return ParseQaPairs(io::ReadFile(path), path);
}

std::string FormatQaPairs(const QaPairs& pairs) {
  std::string out = TsvLine({"doc_id", "system_id", "q_index", "question", "answer"});
  for (const auto& [key, p] : pairs) {
    out += TsvLine({key.pair.doc_id, key.pair.system_id, std::to_string(key.q_index),
                        p.question, p.answer});
  }
  return out;
}

RcAnswers ParseRcAnswers(std::string_view text, std::string_view source) {
  io::Table t = io::ParseTsv(text, source);
  const auto doc = t.RequireColumn("doc_id", source);
  const auto sys = t.RequireColumn("system_id", source);
  const auto qi = t.RequireColumn("q_index", source);
  const auto a = t.RequireColumn("rc_answer", source);
  RcAnswers out;
  for (const auto& row : t.rows) {
    const std::string where = Where(source, row.line);
    QuestionKey key{ReadPair(row, doc, sys, source), ReadIndex(row, qi, source)};
    RequireNew(out, key, where, PairName(key.pair) + " q" + std::to_string(key.q_index));
    out.emplace(key, row.fields[a]);
  }
  return out;
}

RcAnswers LoadRcAnswers(const std::string& path) {
  return ParseRcAnswers(io::ReadFile(path), path);
}

std::string FormatRcAnswers(const RcAnswers& answers) {
  std::string out = TsvLine({"doc_id", "system_id", "q_index", "rc_answer"});
  for (const auto& [key, a] : answers) {
    out += TsvLine({key.pair.doc_id, key.pair.system_id, std::to_string(key.q_index), a});
  }
  return out;
}

MetricScores ParseMetricScores(std::string_view text, std::string_view source) {
  io::Table t = io::ParseTsv(text, source);
  const auto doc = t.RequireColumn("doc_id", source);
  const auto sys = t.RequireColumn("system_id", source);
  MetricScores out;
  std::vector<std::size_t> metric_cols;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (c == doc || c == sys) continue;
    if (t.header[c].empty() || out.count(t.header[c])) {
      throw Error(Errc::kSchema, kModule,
                  std::string(source) + ": empty or repeated metric column '" +
                      t.header[c] + "'");
    }
    out[t.header[c]];
    metric_cols.push_back(c);
  }
  if (metric_cols.empty()) {
    throw Error(Errc::kSchema, kModule, std::string(source) + ": no metric columns");
  }
  for (const auto& row : t.rows) {
    const std::string where = Where(source, row.line);
    PairKey key = ReadPair(row, doc, sys, source);
    for (std::size_t c : metric_cols) {
      auto& scores = out[t.header[c]];
      RequireNew(scores, key, where, PairName(key));
      double v = io::ParseDouble(row.fields[c], where + " " + t.header[c]);
      if (!std::isfinite(v)) {
        throw Error(Errc::kParse, kModule, where + ": non-finite " + t.header[c]);
      }
      scores.emplace(key, v);
    }
  }
  return out;
}

MetricScores LoadMetricScores(const std::string& path) {
  return ParseMetricScores(io::ReadFile(path), path);
}

std::string FormatMetricScores(const MetricScores& scores) {
  std::vector<std::string> header = {"doc_id", "system_id"};
  std::map<PairKey, std::vector<std::string>> rows;
  for (const auto& [metric, values] : scores) {
    header.push_back(metric);
    for (const auto& [key, v] : values) rows[key];
  }
  for (auto& [key, cells] : rows) {
    cells = {key.doc_id, key.system_id};
    for (const auto& [metric, values] : scores) {
      auto it = values.find(key);
      if (it == values.end()) {
        throw Error(Errc::kMissingScore, kModule,
                    "metric " + metric + " has no value for " + PairName(key));
      }
      cells.push_back(ShortestDouble(it->second));
    }
  }
  std::string out = TsvLine(header);
  for (const auto& [key, cells] : rows) out += TsvLine(cells);
  return out;
}

ScoreKind ParseScoreKind(std::string_view name) {
  if (name == "entailment") return ScoreKind::kEntailment;
  if (name == "similarity") return ScoreKind::kSimilarity;
  if (name == "qa_pairs") return ScoreKind::kQaPairs;
  if (name == "rc_answers") return ScoreKind::kRcAnswers;
  throw Error(Errc::kConfig, kModule, "unknown score kind '" + std::string(name) + "'");
}

std::string_view ScorerPath(ScorerKind kind) {
  switch (kind) {
    case ScorerKind::kEntailment:
      return "/score/entailment";
    case ScorerKind::kQuestionGeneration:
      return "/score/qg";
    case ScorerKind::kReadingComprehension:
      return "/score/rc";
  }
  return "";
}

EndpointConfig EndpointConfigFromEnv(EndpointConfig base) {
  auto env = [](const char* name, std::string& into) {
    if (const char* v = std::getenv(name); v && *v) into = v;
  };
  env("FAITHEVAL_ENTAIL_URL", base.entail_url);
  env("FAITHEVAL_QG_URL", base.qg_url);
  env("FAITHEVAL_RC_URL", base.rc_url);
  env("FAITHEVAL_SCORER_TOKEN", base.bearer_token);
  return base;
}

ScorerClient::ScorerClient(EndpointConfig config) : config_(std::move(config)) {}

std::string ScorerClient::Post(ScorerKind kind, const std::string& body) {
  const std::string& base = kind == ScorerKind::kEntailment           ? config_.entail_url
                            : kind == ScorerKind::kQuestionGeneration ? config_.qg_url
                                                                      : config_.rc_url;
  if (base.empty()) {
    throw Error(Errc::kConfig, kModule,
                "no endpoint configured for " + std::string(ScorerPath(kind)));
  }
  SplitUrl url = SplitBaseUrl(base);
  const std::string path = url.prefix + std::string(ScorerPath(kind));
  httplib::Client client(url.origin);
  if (!client.is_valid()) {
    throw Error(Errc::kConfig, kModule, "invalid endpoint url '" + base + "'");
  }
  const auto timeout = std::chrono::milliseconds(config_.timeout_ms);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers headers;
  if (!config_.bearer_token.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.bearer_token);
  }

  std::string last_error;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(static_cast<long long>(config_.backoff_ms) << (attempt - 1)));
    }
    ++upstream_calls_;
    auto res = client.Post(path, headers, body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) return res->body;
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    throw Error(Errc::kInvalidResponse, kModule,
                base + path.substr(url.prefix.size()) + " returned HTTP " +
                    std::to_string(res->status));
  }
  throw Error(Errc::kEndpointUnavailable, kModule,
              base + std::string(ScorerPath(kind)) + " failed after " +
                  std::to_string(config_.max_retries + 1) + " attempts: " + last_error);
}

std::string ScorerClient::Request(ScorerKind kind, const std::string& body) {
  if (!config_.cache) return Post(kind, body);
  const std::string key = std::string(ScorerPath(kind)) + '\n' + body;
  std::promise<std::string> promise;
  std::unique_lock lock(mu_);
  if (auto it = cache_.find(key); it != cache_.end()) {
    ++hits_;
    // A concurrent duplicate waits on the single upstream call.
    auto pending = it->second;
    lock.unlock();
    return pending.get();
  }
  ++misses_;
  cache_.emplace(key, promise.get_future().share());
  lock.unlock();
  try {
    std::string value = Post(kind, body);
    promise.set_value(value);
    return value;
  } catch (...) {
    promise.set_exception(std::current_exception());
    lock.lock();
    cache_.erase(key);
    throw;
  }
}

EntailmentScore ScorerClient::Entailment(const PairKey& key, std::string_view document,
                                         std::string_view summary) {
  json req = {{"doc_id", key.doc_id},
              {"system_id", key.system_id},
              {"document", document},
              {"summary", summary}};
  const auto kind = ScorerKind::kEntailment;
  json res = ParseResponse(Request(kind, req.dump()), kind);
  EntailmentScore s;
  s.key = key;
  s.p_entail = Field<double>(res, "p_entail", kind);
  s.p_neutral = Field<double>(res, "p_neutral", kind);
  s.p_contradict = Field<double>(res, "p_contradict", kind);
  try {
    NormalizeProbabilities(s, PairName(key));
  } catch (const Error& e) {
    throw Error(Errc::kInvalidResponse, kModule, e.what());
  }
  return s;
}

std::vector<QaPair> ScorerClient::Questions(const PairKey& key, std::string_view summary) {
  json req = {{"doc_id", key.doc_id}, {"system_id", key.system_id}, {"summary", summary}};
  const auto kind = ScorerKind::kQuestionGeneration;
  json res = ParseResponse(Request(kind, req.dump()), kind);
  auto pairs = Field<json>(res, "pairs", kind);
  if (!pairs.is_array()) {
    throw Error(Errc::kInvalidResponse, kModule, "/score/qg: 'pairs' is not an array");
  }
  std::vector<QaPair> out;
  std::set<int> seen;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const json& item = pairs[i];
    if (!item.is_object()) {
      throw Error(Errc::kInvalidResponse, kModule, "/score/qg: pair is not an object");
    }
    QaPair p;
    p.key = {key, item.contains("q_index") ? Field<int>(item, "q_index", kind)
                                           : static_cast<int>(i)};
    p.question = Field<std::string>(item, "question", kind);
    p.answer = Field<std::string>(item, "answer", kind);
    if (p.question.empty() || p.answer.empty() || p.key.q_index < 0 ||
        !seen.insert(p.key.q_index).second) {
      throw Error(Errc::kInvalidResponse, kModule,
                  "/score/qg: bad pair " + std::to_string(i) + " for " + PairName(key));
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::string ScorerClient::Answer(const QuestionKey& key, std::string_view question,
                                 std::string_view document) {
  json req = {{"doc_id", key.pair.doc_id},  {"system_id", key.pair.system_id},
              {"q_index", key.q_index},     {"question", question},
              {"document", document}};
  const auto kind = ScorerKind::kReadingComprehension;
  json res = ParseResponse(Request(kind, req.dump()), kind);
  return Field<std::string>(res, "rc_answer", kind);
}

EntailmentScores ScorerClient::ScoreEntailment(const Corpus& corpus,
                                               const std::vector<PairKey>& pairs) {
  std::vector<EntailmentScore> results(pairs.size());
  ParallelFor(pairs.size(), config_.parallelism, [&](std::size_t i) {
    const SummaryRecord* sum = corpus.FindSummary(pairs[i]);
    const DocumentRecord* doc = corpus.FindDocument(pairs[i].doc_id);
    if (!sum || !doc) {
      throw Error(Errc::kUnknownPair, kModule, "unknown pair " + PairName(pairs[i]));
    }
    results[i] = Entailment(pairs[i], doc->text, sum->text);
  });
  EntailmentScores out;
  for (auto& s : results) out.emplace(s.key, s);
  return out;
}

QaPairs ScorerClient::GenerateQuestions(const Corpus& corpus,
                                        const std::vector<PairKey>& pairs) {
  std::vector<std::vector<QaPair>> results(pairs.size());
  ParallelFor(pairs.size(), config_.parallelism, [&](std::size_t i) {
    const SummaryRecord* sum = corpus.FindSummary(pairs[i]);
    if (!sum) throw Error(Errc::kUnknownPair, kModule, "unknown pair " + PairName(pairs[i]));
    results[i] = Questions(pairs[i], sum->text);
  });
  QaPairs out;
  for (auto& list : results) {
    for (auto& p : list) out.emplace(p.key, std::move(p));
  }
  return out;
}

RcAnswers ScorerClient::AnswerQuestions(const Corpus& corpus, const QaPairs& questions) {
  std::vector<const QaPair*> items;
  for (const auto& [key, p] : questions) items.push_back(&p);
  std::vector<std::string> results(items.size());
  ParallelFor(items.size(), config_.parallelism, [&](std::size_t i) {
    const DocumentRecord* doc = corpus.FindDocument(items[i]->key.pair.doc_id);
    if (!doc) {
      throw Error(Errc::kMissingDocument, kModule,
                  "unknown document " + items[i]->key.pair.doc_id);
    }
    results[i] = Answer(items[i]->key, items[i]->question, doc->text);
  });
  RcAnswers out;
  for (std::size_t i = 0; i < items.size(); ++i) out.emplace(items[i]->key, results[i]);
  return out;
}

CacheStats ScorerClient::cache_stats() const {
  std::lock_guard lock(mu_);
  return {hits_, misses_, cache_.size()};
}

void ScorerClient::ClearCache() {
  std::lock_guard lock(mu_);
  cache_.clear();
}

}  // namespace faitheval

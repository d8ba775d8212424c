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

// Command-line entry point. Every subcommand accepts --config FILE with
// key = value lines named after its long flags; flags on the command line
// override the file, which overrides the defaults.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <pthread.h>

#include "CLI11.hpp"
#include "faitheval/agreement.h"
#include "faitheval/annotation_server.h"
#include "faitheval/annotation_store.h"
#include "faitheval/correlation.h"
#include "faitheval/corpus.h"
#include "faitheval/entail_eval.h"
#include "faitheval/error.h"
#include "faitheval/hallu_stats.h"
#include "faitheval/io.h"
#include "faitheval/qa_eval.h"
#include "faitheval/report.h"
#include "faitheval/rouge.h"
#include "faitheval/scorer.h"

namespace fe = faitheval;

namespace {

constexpr char kModule[] = "cli";

[[noreturn]] void ConfigError(const std::string& msg) {
  throw fe::Error(fe::Errc::kConfig, kModule, msg);
}

void Require(const std::string& value, const std::string& flag) {
  if (value.empty()) ConfigError(flag + " is required");
}

struct Inputs {
  std::string documents;
  std::string summaries;
  std::string annotations;
  std::string column_map;
  std::string union_rule = "document_or";
  std::string format = "tsv";
};

void AddCorpusFlags(CLI::App* app, Inputs& in, bool annotations) {
  app->add_option("--documents", in.documents, "documents JSONL");
  app->add_option("--summaries", in.summaries, "summaries JSONL");
  if (annotations) {
    app->add_option("--annotations", in.annotations, "annotation file");
    app->add_option("--column-map", in.column_map,
                    "field=column,... mapping for non-canonical annotation files");
    app->add_option("--union-rule", in.union_rule, "document_or | word_any_type");
  }
  app->add_option("--format", in.format, "tsv | text");
}

void AddConfigFlag(CLI::App* app) {
  // Consumed before parsing; registered so that --help lists it.
  app->add_option("--config", "key = value file of flag defaults");
}

struct Loaded {
  fe::Corpus corpus;
  fe::AnnotationSet annotations;
  fe::HalluOptions hallu;
};

Loaded Load(const Inputs& in, bool need_annotations) {
  Require(in.summaries, "--summaries");
  if (need_annotations) Require(in.annotations, "--annotations");
  if (in.format != "tsv" && in.format != "text") ConfigError("unknown format " + in.format);
  Loaded out;
  out.hallu.union_rule = fe::ParseUnionRule(in.union_rule);
  out.corpus = fe::LoadCorpus(in.documents, in.summaries);
  if (need_annotations) {
    out.annotations = fe::LoadAnnotations(in.annotations, in.column_map, out.corpus);
  }
  return out;
}

void Emit(const std::vector<fe::ReportTable>& tables, const std::string& format) {
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (i > 0) std::cout << "\n";
    std::cout << (format == "text" ? fe::RenderText(tables[i]) : fe::RenderTsv(tables[i]));
  }
}

struct RefFlags {
  std::string references;
  std::string reference_system;
};

void AddRefFlags(CLI::App* app, RefFlags& refs) {
  app->add_option("--references", refs.references, "reference JSONL (doc_id, text)");
  app->add_option("--reference-system", refs.reference_system,
                  "take references from this system's summaries");
}

struct EndpointFlags {
  int timeout_ms = 30000;
  int retries = 3;
  int parallelism = 8;
  std::string entail_url;
  std::string qg_url;
  std::string rc_url;
};

void AddEndpointFlags(CLI::App* app, EndpointFlags& ep) {
  app->add_option("--entail-url", ep.entail_url, "entailment scorer base URL");
  app->add_option("--qg-url", ep.qg_url, "question generation base URL");
  app->add_option("--rc-url", ep.rc_url, "reading comprehension base URL");
  app->add_option("--timeout-ms", ep.timeout_ms, "per-request timeout");
  app->add_option("--retries", ep.retries, "retries on 429/5xx/connection failure");
  app->add_option("--parallelism", ep.parallelism, "requests in flight");
}

fe::EndpointConfig MakeEndpoints(const EndpointFlags& ep) {
  fe::EndpointConfig config = fe::EndpointConfigFromEnv();
  if (!ep.entail_url.empty()) config.entail_url = ep.entail_url;
  if (!ep.qg_url.empty()) config.qg_url = ep.qg_url;
  if (!ep.rc_url.empty()) config.rc_url = ep.rc_url;
  config.timeout_ms = ep.timeout_ms;
  config.max_retries = ep.retries;
  config.parallelism = ep.parallelism;
  return config;
}

// Entailment files carry p_entail; anything else is a wide metric file.
bool IsEntailmentFile(const std::string& path) {
  auto lines = fe::io::SplitLines(fe::io::ReadFile(path));
  if (lines.empty()) return false;
  for (const auto& col : fe::io::Split(lines.front(), '\t')) {
    if (col == "p_entail") return true;
  }
  return false;
}

std::vector<std::pair<std::string, fe::SelectionEvalRow>> BaselineRows(
    const Loaded& in, const std::vector<std::string>& systems, const fe::ReferenceMap& refs) {
  std::vector<std::pair<std::string, fe::SelectionEvalRow>> rows;
  for (const auto& sys : systems) {
    rows.emplace_back(sys, fe::SelectionEval(fe::FixedSelection(in.annotations, sys), in.corpus,
                                             refs, in.annotations, in.hallu));
  }
  return rows;
}

// Turns the --config file into "--key=value" tokens placed right after the
// subcommand name, so later command-line flags take precedence.
std::vector<std::string> ExpandConfig(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty() || args.size() < 2) return args;
  std::ifstream file(path);
  if (!file) ConfigError("cannot read config file " + path);
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_config(file);
  } catch (const CLI::ParseError& e) {
    ConfigError("config file " + path + ": " + e.what());
  }
  const std::string& sub = args[1];
  std::vector<std::string> injected;
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    std::string name = item.fullname();
    if (name.rfind(sub + ".", 0) == 0) name = name.substr(sub.size() + 1);
    if (name.find('.') != std::string::npos) continue;  // another subcommand's section
    if (name == "config") ConfigError("config files cannot nest");
    for (auto& c : name) {
      if (c == '_') c = '-';
    }
    std::string value;
    for (std::size_t i = 0; i < item.inputs.size(); ++i) {
      if (i > 0) value += ",";
      value += item.inputs[i];
    }
    injected.push_back("--" + name + "=" + value);
  }
  std::vector<std::string> out = {args[0], args[1]};
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), args.begin() + 2, args.end());
  return out;
}

int Serve(fe::AnnotationStore& store, const fe::ServerOptions& options, const std::string& host,
          int port) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  fe::AnnotationServer server(store, options);
  if (!server.Bind(host, port)) {
    throw fe::Error(fe::Errc::kIo, kModule,
                    "cannot bind " + host + ":" + std::to_string(port));
  }
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.Stop();
  });
  std::cerr << "listening on http://" << host << ":" << port << "\n";
  server.ListenAfterBind();
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  store.Compact();
  return 0;
}

int Run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  args = ExpandConfig(args);

  CLI::App app{"Faithfulness and factuality evaluation for abstractive summaries", "faitheval"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  std::function<int()> action;

  // ingest
  Inputs ingest_in;
  std::string ingest_out;
  auto* ingest = app.add_subcommand("ingest", "Validate inputs and export canonical annotations");
  AddCorpusFlags(ingest, ingest_in, true);
  ingest->add_option("--out", ingest_out, "write canonical annotation TSV here");
  AddConfigFlag(ingest);
  ingest->callback([&] {
    action = [&] {
      Loaded in = Load(ingest_in, !ingest_in.annotations.empty() || !ingest_out.empty());
      fe::ReportTable t{"ingest", "Ingested records", {"kind", "count"}, {}};
      t.rows.push_back({"documents", std::to_string(in.corpus.documents().size())});
      t.rows.push_back({"summaries", std::to_string(in.corpus.summary_count())});
      if (!ingest_in.annotations.empty()) {
        t.rows.push_back({"spans", std::to_string(in.annotations.spans().size())});
        t.rows.push_back({"verdicts", std::to_string(in.annotations.judgments().size())});
      }
      if (!ingest_out.empty()) fe::io::WriteFile(ingest_out, in.annotations.ToCanonicalTsv());
      Emit({t}, ingest_in.format);
      return 0;
    };
  });

  // rouge
  Inputs rouge_in;
  RefFlags rouge_refs;
  std::string rouge_systems;
  auto* rouge = app.add_subcommand("rouge", "Corpus ROUGE-1/2/L F1 per system");
  AddCorpusFlags(rouge, rouge_in, false);
  AddRefFlags(rouge, rouge_refs);
  rouge->add_option("--system,--systems", rouge_systems,
                    "comma-separated systems (default: all but the reference system)");
  AddConfigFlag(rouge);
  rouge->callback([&] {
    action = [&] {
      Loaded in = Load(rouge_in, false);
      auto refs = fe::LoadReferenceMap(rouge_refs.references, rouge_refs.reference_system,
                                       in.corpus);
      auto systems = fe::SplitList(rouge_systems);
      if (systems.empty()) {
        for (const auto& s : in.corpus.Systems()) {
          if (s != rouge_refs.reference_system) systems.push_back(s);
        }
      }
      std::vector<std::pair<std::string, fe::RougeTriple>> rows;
      for (const auto& s : systems) rows.emplace_back(s, fe::CorpusRouge(in.corpus, s, refs));
      Emit({fe::RougeTable(rows)}, rouge_in.format);
      return 0;
    };
  });

  // agreement
  Inputs agree_in;
  auto* agree = app.add_subcommand("agreement", "Fleiss' kappa per system and task");
  AddCorpusFlags(agree, agree_in, true);
  AddConfigFlag(agree);
  agree->callback([&] {
    action = [&] {
      Loaded in = Load(agree_in, true);
      std::vector<fe::KappaRow> rows;
      for (const auto& s : in.annotations.Systems()) {
        rows.push_back(fe::KappaReport(in.annotations, in.corpus, s));
      }
      Emit({fe::AgreementTable(rows)}, agree_in.format);
      return 0;
    };
  });

  // hallu-stats
  Inputs hallu_in;
  bool span_stats = false;
  bool linguistic = false;
  bool breakdown = false;
  std::size_t corpus_size = 0;
  auto* hallu = app.add_subcommand("hallu-stats", "Hallucination, faithfulness and factuality");
  AddCorpusFlags(hallu, hallu_in, true);
  hallu->add_flag("--span-stats", span_stats, "also emit span counts and lengths");
  hallu->add_flag("--linguistic", linguistic, "also emit repetition/incoherence");
  hallu->add_flag("--factual-breakdown", breakdown, "also emit factuality per type");
  hallu->add_option("--corpus-size", corpus_size,
                    "divide span averages by this many documents");
  AddConfigFlag(hallu);
  hallu->callback([&] {
    action = [&] {
      Loaded in = Load(hallu_in, true);
      std::vector<fe::ReportTable> tables = {
          fe::HallucinationTable(fe::SystemTable(in.annotations, in.corpus, in.hallu))};
      if (breakdown) {
        tables.push_back(fe::FactualBreakdownTable(
            fe::FactualBreakdown(in.annotations, in.corpus, in.hallu)));
      }
      if (span_stats) {
        std::optional<std::size_t> size;
        if (corpus_size > 0) size = corpus_size;
        tables.push_back(fe::SpanStatsTable(fe::SpanStats(in.annotations, in.corpus, size)));
      }
      if (linguistic) {
        tables.push_back(fe::LinguisticTable(fe::RepIncohTable(in.annotations, in.corpus)));
      }
      Emit(tables, hallu_in.format);
      return 0;
    };
  });

  // correlate
  Inputs corr_in;
  RefFlags corr_refs;
  std::string corr_scores, corr_qa, corr_rc, corr_label = "faithful", corr_systems;
  std::string corr_match = "exact";
  double corr_f1 = 0.5;
  auto* corr = app.add_subcommand("correlate", "Spearman |r_s| of metrics against human labels");
  AddCorpusFlags(corr, corr_in, true);
  AddRefFlags(corr, corr_refs);
  corr->add_option("--scores", corr_scores, "entailment or wide metric score file");
  corr->add_option("--qa-pairs", corr_qa, "question/answer pairs for the qa metric");
  corr->add_option("--rc-answers", corr_rc, "reading comprehension answers");
  corr->add_option("--label", corr_label, "faithful | factual");
  corr->add_option("--systems", corr_systems, "comma-separated systems to pool");
  corr->add_option("--match-rule", corr_match, "exact | token_f1");
  corr->add_option("--f1-threshold", corr_f1, "token_f1 match threshold");
  AddConfigFlag(corr);
  corr->callback([&] {
    action = [&] {
      fe::HumanLabel label = fe::ParseHumanLabel(corr_label);
      fe::MatchOptions match{fe::ParseMatchRule(corr_match), corr_f1};
      if (corr_qa.empty() != corr_rc.empty()) {
        ConfigError("--qa-pairs and --rc-answers go together");
      }
      bool use_refs = !corr_refs.references.empty() || !corr_refs.reference_system.empty();
      if (corr_scores.empty() && corr_qa.empty() && !use_refs) {
        ConfigError("no metric source: give --scores, --qa-pairs or references");
      }
      Loaded in = Load(corr_in, true);
      auto systems = fe::SplitList(corr_systems);
      std::vector<fe::NamedMetric> metrics;
      if (use_refs) {
        auto refs = fe::LoadReferenceMap(corr_refs.references, corr_refs.reference_system,
                                         in.corpus);
        std::vector<std::string> rouge_systems = systems;
        if (rouge_systems.empty()) rouge_systems = in.annotations.Systems();
        metrics = fe::RougeMetrics(in.corpus, rouge_systems, refs);
      }
      std::optional<fe::NamedMetric> entail;
      if (!corr_scores.empty()) {
        if (IsEntailmentFile(corr_scores)) {
          entail = fe::EntailmentMetric(fe::LoadEntailmentScores(corr_scores));
        } else {
          for (auto& m : fe::WideMetrics(fe::LoadMetricScores(corr_scores))) {
            metrics.push_back(std::move(m));
          }
        }
      }
      if (!corr_qa.empty()) {
        metrics.push_back(fe::QaMetric(fe::ScoreRoundtrip(
            fe::LoadQaPairs(corr_qa), fe::LoadRcAnswers(corr_rc), match)));
      }
      if (entail) metrics.push_back(*entail);
      auto labels = fe::HumanLabels(in.annotations, in.corpus, label, in.hallu);
      std::string name = "correlation_" + std::string(fe::HumanLabelName(label));
      Emit({fe::CorrelationTable(name, fe::CorrelationRows(metrics, labels, systems))},
           corr_in.format);
      return 0;
    };
  });

  // entail-eval
  Inputs ee_in;
  EndpointFlags ee_ep;
  std::string ee_scores, ee_scores_out;
  bool ee_live = false;
  auto* ee = app.add_subcommand("entail-eval", "Entailment class distribution per system");
  AddCorpusFlags(ee, ee_in, true);
  ee->add_option("--scores", ee_scores, "entailment score file");
  ee->add_flag("--live", ee_live, "score annotated pairs through the entailment endpoint");
  ee->add_option("--scores-out", ee_scores_out, "write live scores here");
  AddEndpointFlags(ee, ee_ep);
  AddConfigFlag(ee);
  ee->callback([&] {
    action = [&] {
      if (ee_live == !ee_scores.empty()) ConfigError("give exactly one of --scores and --live");
      if (ee_live) Require(ee_in.documents, "--documents");
      Loaded in = Load(ee_in, true);
      auto pairs = in.annotations.Pairs(fe::TaskType::kHallucination);
      fe::EntailmentScores scores;
      if (ee_live) {
        fe::ScorerClient client(MakeEndpoints(ee_ep));
        scores = client.ScoreEntailment(in.corpus, pairs);
        if (!ee_scores_out.empty()) {
          fe::io::WriteFile(ee_scores_out, fe::FormatEntailmentScores(scores));
        }
      } else {
        scores = fe::LoadEntailmentScores(ee_scores);
      }
      Emit({fe::EntailmentTable(fe::ClassDistributions(pairs, scores))}, ee_in.format);
      return 0;
    };
  });

  // select
  Inputs sel_in;
  RefFlags sel_refs;
  std::string sel_scores, sel_systems, sel_out;
  auto* sel = app.add_subcommand("select", "Pick the most entailed summary per document");
  AddCorpusFlags(sel, sel_in, true);
  AddRefFlags(sel, sel_refs);
  sel->add_option("--scores", sel_scores, "entailment score file");
  sel->add_option("--systems", sel_systems, "comma-separated candidate systems");
  sel->add_option("--selections-out", sel_out, "per-document selections TSV");
  AddConfigFlag(sel);
  sel->callback([&] {
    action = [&] {
      Require(sel_scores, "--scores");
      auto systems = fe::SplitList(sel_systems);
      if (systems.empty()) ConfigError("--systems is required");
      Loaded in = Load(sel_in, true);
      auto refs = fe::LoadReferenceMap(sel_refs.references, sel_refs.reference_system,
                                       in.corpus);
      auto scores = fe::LoadEntailmentScores(sel_scores);
      auto selections = fe::SelectAll(scores, systems);
      auto rows = BaselineRows(in, systems, refs);
      rows.emplace_back("entail", fe::SelectionEval(selections, in.corpus, refs,
                                                    in.annotations, in.hallu));
      if (!sel_out.empty()) fe::io::WriteFile(sel_out, fe::FormatSelections(selections));
      Emit({fe::SelectionTable(rows)}, sel_in.format);
      return 0;
    };
  });

  // export-finetune
  Inputs ft_in;
  int ft_k = 5;
  std::uint64_t ft_seed = 0;
  std::string ft_out;
  auto* ft = app.add_subcommand("export-finetune", "Write k-fold entailment fine-tuning data");
  AddCorpusFlags(ft, ft_in, true);
  ft->add_option("--k", ft_k, "number of folds");
  ft->add_option("--seed", ft_seed, "shuffle seed")->required();
  ft->add_option("--out", ft_out, "output directory")->required();
  AddConfigFlag(ft);
  ft->callback([&] {
    action = [&] {
      Require(ft_in.documents, "--documents");
      Loaded in = Load(ft_in, true);
      auto pairs = fe::ExportFinetune(in.annotations, in.corpus, ft_k, ft_seed, in.hallu);
      fe::WriteFinetuneFolds(pairs, ft_k, ft_out);
      std::map<int, std::size_t> per_fold;
      std::set<std::string> docs;
      for (const auto& p : pairs) {
        if (docs.insert(p.key.doc_id).second) ++per_fold[p.fold];
      }
      fe::ReportTable t{"folds", "Documents per fold", {"fold", "documents"}, {}};
      for (const auto& [f, n] : per_fold) t.rows.push_back({std::to_string(f), std::to_string(n)});
      Emit({t}, ft_in.format);
      return 0;
    };
  });

  // crossval-eval
  Inputs cv_in;
  RefFlags cv_refs;
  std::string cv_folds, cv_scores, cv_systems, cv_out;
  auto* cv = app.add_subcommand("crossval-eval", "Selection with fold-held-out scorers");
  AddCorpusFlags(cv, cv_in, true);
  AddRefFlags(cv, cv_refs);
  cv->add_option("--folds", cv_folds, "folds.tsv from export-finetune");
  cv->add_option("--fold-scores", cv_scores, "comma-separated score files, fold 0 first");
  cv->add_option("--systems", cv_systems, "comma-separated candidate systems");
  cv->add_option("--selections-out", cv_out, "per-document selections TSV");
  AddConfigFlag(cv);
  cv->callback([&] {
    action = [&] {
      Require(cv_folds, "--folds");
      auto files = fe::SplitList(cv_scores);
      if (files.empty()) ConfigError("--fold-scores is required");
      auto systems = fe::SplitList(cv_systems);
      if (systems.empty()) ConfigError("--systems is required");
      Loaded in = Load(cv_in, true);
      auto refs = fe::LoadReferenceMap(cv_refs.references, cv_refs.reference_system,
                                       in.corpus);
      std::map<int, fe::EntailmentScores> fold_scores;
      for (std::size_t f = 0; f < files.size(); ++f) {
        fold_scores[static_cast<int>(f)] = fe::LoadEntailmentScores(files[f]);
      }
      auto result = fe::CrossvalEval(fold_scores, fe::LoadFolds(cv_folds), systems, in.corpus,
                                     refs, in.annotations, in.hallu);
      if (!cv_out.empty()) fe::io::WriteFile(cv_out, fe::FormatSelections(result.selections));
      Emit({fe::SelectionTable({{"entail_cv", result.row}})}, cv_in.format);
      return 0;
    };
  });

  // qa-eval
  Inputs qa_in;
  EndpointFlags qa_ep;
  std::string qa_qg, qa_rc, qa_systems, qa_verdicts, qa_match = "exact";
  std::string qa_qg_out, qa_rc_out;
  double qa_f1 = 0.5;
  bool qa_live = false;
  auto* qa = app.add_subcommand("qa-eval", "Question-answering round trip accuracy");
  AddCorpusFlags(qa, qa_in, false);
  qa->add_option("--qg-file", qa_qg, "generated question/answer pairs");
  qa->add_option("--rc-file", qa_rc, "reading comprehension answers");
  qa->add_flag("--live", qa_live, "generate and answer through the endpoints");
  qa->add_option("--systems", qa_systems, "comma-separated systems");
  qa->add_option("--verdicts-out", qa_verdicts, "per-question verdicts TSV");
  qa->add_option("--qg-out", qa_qg_out, "write live questions here");
  qa->add_option("--rc-out", qa_rc_out, "write live answers here");
  qa->add_option("--match-rule", qa_match, "exact | token_f1");
  qa->add_option("--f1-threshold", qa_f1, "token_f1 match threshold");
  AddEndpointFlags(qa, qa_ep);
  AddConfigFlag(qa);
  qa->callback([&] {
    action = [&] {
      fe::MatchOptions match{fe::ParseMatchRule(qa_match), qa_f1};
      bool files = !qa_qg.empty() || !qa_rc.empty();
      if (files == qa_live) ConfigError("give --qg-file and --rc-file, or --live");
      if (files && (qa_qg.empty() || qa_rc.empty())) {
        ConfigError("--qg-file and --rc-file go together");
      }
      auto systems = fe::SplitList(qa_systems);
      std::vector<fe::QaVerdict> verdicts;
      if (qa_live) {
        Require(qa_in.documents, "--documents");
        Loaded in = Load(qa_in, false);
        std::vector<fe::PairKey> pairs;
        std::set<std::string> keep(systems.begin(), systems.end());
        for (const auto& s : in.corpus.Systems()) {
          if (!keep.empty() && !keep.count(s)) continue;
          for (const auto* rec : in.corpus.SummariesFor(s)) pairs.push_back(rec->key());
        }
        fe::ScorerClient client(MakeEndpoints(qa_ep));
        auto questions = client.GenerateQuestions(in.corpus, pairs);
        auto answers = client.AnswerQuestions(in.corpus, questions);
        if (!qa_qg_out.empty()) fe::io::WriteFile(qa_qg_out, fe::FormatQaPairs(questions));
        if (!qa_rc_out.empty()) fe::io::WriteFile(qa_rc_out, fe::FormatRcAnswers(answers));
        verdicts = fe::ScoreRoundtrip(questions, answers, match);
      } else {
        if (qa_in.format != "tsv" && qa_in.format != "text") {
          ConfigError("unknown format " + qa_in.format);
        }
        verdicts = fe::ScoreRoundtrip(fe::LoadQaPairs(qa_qg), fe::LoadRcAnswers(qa_rc), match);
      }
      if (!qa_verdicts.empty()) fe::io::WriteFile(qa_verdicts, fe::FormatVerdicts(verdicts));
      Emit({fe::QaTable(fe::QaAccuracy(verdicts, systems))}, qa_in.format);
      return 0;
    };
  });

  // serve
  Inputs srv_in;
  std::string srv_data, srv_ui, srv_host = "127.0.0.1";
  int srv_port = 8080;
  auto* srv = app.add_subcommand("serve", "Run the annotation service");
  srv->add_option("--documents", srv_in.documents, "documents JSONL");
  srv->add_option("--summaries", srv_in.summaries, "summaries JSONL");
  srv->add_option("--data-dir", srv_data, "event log directory")->required();
  srv->add_option("--port", srv_port, "TCP port");
  srv->add_option("--host", srv_host, "bind address");
  srv->add_option("--ui-dir", srv_ui, "static UI bundle served at /");
  AddConfigFlag(srv);
  srv->callback([&] {
    action = [&] {
      Require(srv_in.documents, "--documents");
      Loaded in = Load(srv_in, false);
      fe::ServerOptions options{srv_ui, ""};
      if (const char* token = std::getenv("FAITHEVAL_PROJECT_TOKEN")) options.token = token;
      fe::AnnotationStore store(in.corpus, srv_data);
      return Serve(store, options, srv_host, srv_port);
    };
  });

  // report
  fe::RunConfig rc;
  std::string rep_systems, rep_fold_scores, rep_union = "document_or", rep_match = "exact";
  double rep_f1 = 0.5;
  std::size_t rep_corpus_size = 0;
  bool rep_quiet = false;
  auto* rep = app.add_subcommand("report", "Run every evaluation and write all tables");
  rep->add_option("--documents", rc.documents, "documents JSONL");
  rep->add_option("--summaries", rc.summaries, "summaries JSONL");
  rep->add_option("--annotations", rc.annotations, "annotation file");
  rep->add_option("--column-map", rc.column_map, "annotation column mapping");
  rep->add_option("--references", rc.references, "reference JSONL");
  rep->add_option("--reference-system", rc.reference_system, "reference system id");
  rep->add_option("--systems", rep_systems, "comma-separated systems");
  rep->add_option("--entailment-scores", rc.entailment_scores, "entailment score file");
  rep->add_option("--metric-scores", rc.metric_scores, "wide metric score file");
  rep->add_option("--qa-pairs", rc.qa_pairs, "question/answer pairs");
  rep->add_option("--rc-answers", rc.rc_answers, "reading comprehension answers");
  rep->add_option("--folds", rc.folds, "folds.tsv");
  rep->add_option("--fold-scores", rep_fold_scores, "comma-separated per-fold score files");
  rep->add_option("--union-rule", rep_union, "document_or | word_any_type");
  rep->add_option("--match-rule", rep_match, "exact | token_f1");
  rep->add_option("--f1-threshold", rep_f1, "token_f1 match threshold");
  rep->add_option("--corpus-size", rep_corpus_size, "divide span averages by this");
  rep->add_option("--out", rc.out, "output directory");
  rep->add_flag("--quiet", rep_quiet, "do not print the summary");
  AddConfigFlag(rep);
  rep->callback([&] {
    action = [&] {
      Require(rc.out, "--out");
      rc.systems = fe::SplitList(rep_systems);
      rc.fold_scores = fe::SplitList(rep_fold_scores);
      rc.union_rule = fe::ParseUnionRule(rep_union);
      rc.match = {fe::ParseMatchRule(rep_match), rep_f1};
      if (rep_corpus_size > 0) rc.corpus_size = rep_corpus_size;
      fe::ReportBundle bundle = fe::RunReport(rc);
      fe::WriteBundle(bundle, rc.out);
      if (!rep_quiet) std::cout << bundle.Summary();
      for (const auto& f : bundle.failures) {
        std::cerr << "error in " << f.section << ": " << f.message << "\n";
      }
      return bundle.exit_code();
    };
  });

  std::vector<const char*> cargs;
  for (const auto& a : args) cargs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  return action ? action() : 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Run(argc, argv);
  } catch (const fe::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fe::ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

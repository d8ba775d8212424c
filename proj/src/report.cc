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

#include "faitheval/report.h"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <set>

#include "faitheval/correlation.h"
#include "faitheval/io.h"

namespace faitheval {
namespace {

constexpr char kModule[] = "report";

std::string Pct(double v) { return io::FormatFixed(v, 1); }
std::string Pct(const std::optional<double>& v) { return v ? Pct(*v) : std::string(); }
std::string Hundred(double v) { return io::FormatFixed(100.0 * v, 2); }
std::string Count(std::size_t n) { return std::to_string(n); }

}  // namespace

std::string RenderTsv(const ReportTable& table) {
  std::string out = io::JoinTsv(table.header) + "\n";
  for (const auto& row : table.rows) out += io::JoinTsv(row) + "\n";
  return out;
}

std::string RenderText(const ReportTable& table) {
  std::vector<std::size_t> width(table.header.size(), 0);
  auto cell = [](const std::string& s) { return s.empty() ? std::string("-") : s; };
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    width[c] = table.header[c].size();
    for (const auto& row : table.rows) width[c] = std::max(width[c], cell(row[c]).size());
  }
  auto line = [&](const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      std::string v = cell(fields[c]);
      std::string pad(width[c] - v.size(), ' ');
      if (c > 0) out += "  ";
      out += c == 0 ? v + pad : pad + v;
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  std::string out = table.title + "\n";
  out += line(table.header);
  for (const auto& row : table.rows) out += line(row);
  return out;
}

ReportTable RougeTable(const std::vector<std::pair<std::string, RougeTriple>>& rows) {
  ReportTable t{"rouge", "ROUGE F1 (x100)", {"system_id", "r1", "r2", "rl"}, {}};
  for (const auto& [sys, r] : rows) {
    t.rows.push_back({sys, Hundred(r.r1.f1), Hundred(r.r2.f1), Hundred(r.rl.f1)});
  }
  return t;
}

ReportTable AgreementTable(const std::vector<KappaRow>& rows) {
  ReportTable t{"agreement", "Fleiss' kappa", {"system_id", "task", "kappa"}, {}};
  for (const auto& r : rows) {
    const std::pair<const char*, const std::optional<double>*> tasks[] = {
        {"hallucination", &r.hallucination},
        {"factuality", &r.factuality},
        {"repetition", &r.repetition},
        {"incoherence", &r.incoherence}};
    for (const auto& [name, value] : tasks) {
      if (*value) t.rows.push_back({r.system_id, name, io::FormatFixed(**value, 2)});
    }
  }
  return t;
}

ReportTable HallucinationTable(const std::vector<SystemHalluRow>& rows) {
  ReportTable t{"hallucination",
                "Hallucinated, faithful and factual summaries (%)",
                {"system_id", "count", "pct_intrinsic", "pct_extrinsic", "pct_union",
                 "pct_faithful", "pct_faithful_or_factual"},
                {}};
  for (const auto& r : rows) {
    t.rows.push_back({r.system_id, Count(r.count), Pct(r.pct_intrinsic),
                      Pct(r.pct_extrinsic), Pct(r.pct_union), Pct(r.pct_faithful),
                      Pct(r.pct_faithful_or_factual)});
  }
  return t;
}

ReportTable FactualBreakdownTable(const std::vector<FactualBreakdownRow>& rows) {
  ReportTable t{"factual_breakdown",
                "Hallucination types and their factuality (%)",
                {"system_id", "count", "pct_faithful", "pct_intrinsic",
                 "pct_intrinsic_factual", "pct_extrinsic", "pct_extrinsic_factual",
                 "pct_union", "pct_union_factual", "pct_factual_total"},
                {}};
  for (const auto& r : rows) {
    t.rows.push_back({r.system_id, Count(r.count), Pct(r.pct_faithful),
                      Pct(r.pct_intrinsic), Pct(r.pct_intrinsic_factual),
                      Pct(r.pct_extrinsic), Pct(r.pct_extrinsic_factual), Pct(r.pct_union),
                      Pct(r.pct_union_factual), Pct(r.pct_factual_total)});
  }
  return t;
}

ReportTable SpanStatsTable(const std::vector<SpanStatsRow>& rows) {
  ReportTable t{"span_stats",
                "Hallucination spans",
                {"system_id", "documents", "total_intrinsic_spans", "total_extrinsic_spans",
                 "avg_intrinsic_per_doc", "avg_extrinsic_per_doc", "avg_span_length",
                 "avg_extrinsic_span_length"},
                {}};
  for (const auto& r : rows) {
    t.rows.push_back({r.system_id, Count(r.documents), Count(r.total_intrinsic_spans),
                      Count(r.total_extrinsic_spans), io::FormatFixed(r.avg_intrinsic_per_doc, 2),
                      io::FormatFixed(r.avg_extrinsic_per_doc, 2),
                      io::FormatFixed(r.avg_span_length, 2),
                      io::FormatFixed(r.avg_extrinsic_span_length, 2)});
  }
  return t;
}

ReportTable LinguisticTable(const std::vector<LinguisticRow>& rows) {
  ReportTable t{"linguistic",
                "Repetition and incoherence (%)",
                {"system_id", "count", "pct_repetition", "pct_incoherence"},
                {}};
  for (const auto& r : rows) {
    t.rows.push_back(
        {r.system_id, Count(r.count), Pct(r.pct_repetition), Pct(r.pct_incoherence)});
  }
  return t;
}

ReportTable EntailmentTable(const std::vector<ClassDistribution>& rows) {
  ReportTable t{"entailment",
                "Entailment classes (%)",
                {"system_id", "count", "entail", "neutral", "contradict"},
                {}};
  for (const auto& r : rows) {
    t.rows.push_back({r.system_id, Count(r.count), Pct(r.pct_entail), Pct(r.pct_neutral),
                      Pct(r.pct_contradict)});
  }
  return t;
}

ReportTable QaTable(const std::vector<QaAccuracyRow>& rows) {
  ReportTable t{"qa", "Questions answered correctly (%)",
                {"system_id", "n_questions", "accuracy"}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({r.system_id, Count(r.n_questions), Pct(r.accuracy)});
  }
  return t;
}

ReportTable CorrelationTable(const std::string& name,
                             const std::vector<std::pair<std::string, double>>& rows) {
  ReportTable t{name, "Spearman |r_s| (" + name + ")", {"metric", "abs_rs"}, {}};
  for (const auto& [metric, rho] : rows) t.rows.push_back({metric, io::FormatFixed(rho, 3)});
  return t;
}

ReportTable SelectionTable(const std::vector<std::pair<std::string, SelectionEvalRow>>& rows) {
  ReportTable t{"selection",
                "Selected summaries: ROUGE F1 (x100) and faithfulness (%)",
                {"selection", "count", "r1", "r2", "rl", "faithful", "faithful_or_factual"},
                {}};
  for (const auto& [name, r] : rows) {
    t.rows.push_back({name, Count(r.count), Hundred(r.rouge.r1.f1), Hundred(r.rouge.r2.f1),
                      Hundred(r.rouge.rl.f1), Pct(r.pct_faithful),
                      Pct(r.pct_faithful_or_factual)});
  }
  return t;
}

Corpus LoadCorpus(const std::string& documents_path, const std::string& summaries_path) {
  auto summaries = IngestSummaries(summaries_path);
  std::vector<DocumentRecord> documents;
  if (!documents_path.empty()) {
    documents = IngestDocuments(documents_path);
  } else {
    std::set<std::string> ids;
    for (const auto& s : summaries) ids.insert(s.doc_id);
    for (const auto& id : ids) documents.push_back({id, id});
  }
  return BuildCorpus(std::move(documents), std::move(summaries));
}

AnnotationSet LoadAnnotations(const std::string& path, const std::string& column_map,
                              const Corpus& corpus) {
  ColumnMap map = column_map.empty() ? ColumnMap::Canonical() : ColumnMap::Parse(column_map);
  return IngestAnnotations(path, map, corpus);
}

ReferenceMap LoadReferenceMap(const std::string& path, const std::string& reference_system,
                              const Corpus& corpus) {
  if (path.empty() == reference_system.empty()) {
    throw Error(Errc::kConfig, kModule,
                "give exactly one of --references and --reference-system");
  }
  return path.empty() ? ReferencesFromSystem(corpus, reference_system) : LoadReferences(path);
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  for (auto& item : io::Split(text, ',')) {
    auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    auto e = item.find_last_not_of(" \t");
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

UnionRule ParseUnionRule(const std::string& name) {
  if (name == "document_or") return UnionRule::kDocumentOr;
  if (name == "word_any_type") return UnionRule::kWordAnyTypeUnanimous;
  throw Error(Errc::kConfig, kModule, "unknown union rule: " + name);
}

MatchRule ParseMatchRule(const std::string& name) {
  if (name == "exact") return MatchRule::kExact;
  if (name == "token_f1") return MatchRule::kTokenF1;
  throw Error(Errc::kConfig, kModule, "unknown match rule: " + name);
}

std::vector<NamedMetric> RougeMetrics(const Corpus& corpus,
                                      const std::vector<std::string>& systems,
                                      const ReferenceMap& references) {
  std::vector<NamedMetric> out = {{"rouge1", {}, false}, {"rouge2", {}, false},
                                  {"rougeL", {}, false}};
  for (const auto& sys : systems.empty() ? corpus.Systems() : systems) {
    for (const auto& [key, r] : PairRouge(corpus, sys, references)) {
      out[0].scores[key] = r.r1.f1;
      out[1].scores[key] = r.r2.f1;
      out[2].scores[key] = r.rl.f1;
    }
  }
  return out;
}

NamedMetric EntailmentMetric(const EntailmentScores& scores) {
  NamedMetric m{"entailment", {}, false};
  for (const auto& [key, s] : scores) m.scores[key] = s.p_entail;
  return m;
}

NamedMetric QaMetric(const std::vector<QaVerdict>& verdicts) {
  std::map<PairKey, std::pair<std::size_t, std::size_t>> counts;
  for (const auto& v : verdicts) {
    auto& c = counts[v.key.pair];
    ++c.first;
    if (v.matched) ++c.second;
  }
  NamedMetric m{"qa", {}, true};
  for (const auto& [key, c] : counts) {
    m.scores[key] = static_cast<double>(c.second) / static_cast<double>(c.first);
  }
  return m;
}

std::vector<NamedMetric> WideMetrics(const MetricScores& scores) {
  std::vector<NamedMetric> out;
  for (const auto& [name, values] : scores) out.push_back({name, values, false});
  return out;
}

std::vector<std::pair<std::string, double>> CorrelationRows(
    const std::vector<NamedMetric>& metrics, const PairLabels& labels,
    const std::vector<std::string>& systems) {
  std::set<std::string> keep(systems.begin(), systems.end());
  PairLabels base;
  for (const auto& [key, label] : labels) {
    if (keep.empty() || keep.count(key.system_id)) base.emplace(key, label);
  }
  std::vector<std::pair<std::string, double>> out;
  for (const auto& m : metrics) {
    PairLabels used;
    for (const auto& [key, label] : base) {
      if (!m.restrict_labels || m.scores.count(key)) used.emplace(key, label);
    }
    try {
      out.emplace_back(m.name, MetricCorrelation(m.scores, used));
    } catch (const Error& e) {
      // Drop the "module: Name: " prefix that what() already carries.
      std::string_view detail = e.what();
      for (int i = 0; i < 2; ++i) {
        auto colon = detail.find(": ");
        if (colon != std::string_view::npos) detail.remove_prefix(colon + 2);
      }
      throw Error(e.code(), e.module(), "metric " + m.name + ": " + std::string(detail));
    }
  }
  return out;
}

std::vector<SelectionResult> FixedSelection(const AnnotationSet& annotations,
                                            const std::string& system_id) {
  std::vector<SelectionResult> out;
  for (const auto& key : annotations.Pairs(TaskType::kHallucination)) {
    if (key.system_id == system_id) out.push_back({key.doc_id, system_id, 0.0, 1});
  }
  if (out.empty()) {
    throw Error(Errc::kMissingAnnotation, kModule,
                "no hallucination annotations for system " + system_id);
  }
  return out;
}

void ValidateRunConfig(const RunConfig& c) {
  auto fail = [](const std::string& msg) { throw Error(Errc::kConfig, kModule, msg); };
  if (c.summaries.empty()) fail("summaries path is required");
  if (c.annotations.empty()) fail("annotations path is required");
  if (c.systems.empty()) fail("systems list is empty");
  if (!c.references.empty() && !c.reference_system.empty()) {
    fail("give at most one of references and reference-system");
  }
  if (c.folds.empty() != c.fold_scores.empty()) {
    fail("folds and fold-scores must be given together");
  }
  if (c.qa_pairs.empty() != c.rc_answers.empty()) {
    fail("qa-pairs and rc-answers must be given together");
  }
  std::vector<std::pair<const char*, std::string>> paths = {
      {"documents", c.documents},          {"summaries", c.summaries},
      {"annotations", c.annotations},      {"references", c.references},
      {"entailment-scores", c.entailment_scores}, {"metric-scores", c.metric_scores},
      {"qa-pairs", c.qa_pairs},            {"rc-answers", c.rc_answers},
      {"folds", c.folds}};
  for (const auto& f : c.fold_scores) paths.emplace_back("fold-scores", f);
  for (const auto& [what, path] : paths) {
    if (path.empty()) continue;
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
      fail(std::string(what) + " path does not exist: " + path);
    }
  }
}

std::string ReportBundle::Summary() const {
  std::string out;
  for (const auto& t : tables) {
    if (!out.empty()) out += "\n";
    out += RenderText(t);
  }
  if (!failures.empty()) {
    if (!out.empty()) out += "\n";
    out += "Failures\n";
    for (const auto& f : failures) {
      out += f.section + ": " + f.message + "\n";
    }
  }
  return out;
}

int ReportBundle::exit_code() const {
  return failures.empty() ? 0 : ExitCodeFor(failures.front().code);
}

ReportBundle RunReport(const RunConfig& config) {
  ValidateRunConfig(config);
  ReportBundle bundle;
  auto section = [&bundle](const std::string& name, const std::function<void()>& body) {
    try {
      body();
      return true;
    } catch (const Error& e) {
      bundle.failures.push_back({name, e.module(), e.code(), e.what()});
    } catch (const std::exception& e) {
      bundle.failures.push_back({name, kModule, Errc::kParse, e.what()});
    }
    return false;
  };

  Corpus corpus;
  AnnotationSet annotations;
  if (!section("inputs", [&] {
        corpus = LoadCorpus(config.documents, config.summaries);
        annotations = LoadAnnotations(config.annotations, config.column_map, corpus);
      })) {
    return bundle;
  }
  HalluOptions hallu{config.union_rule};

  std::optional<ReferenceMap> refs;
  if (!config.references.empty() || !config.reference_system.empty()) {
    section("references", [&] {
      refs = LoadReferenceMap(config.references, config.reference_system, corpus);
    });
  }
  std::optional<EntailmentScores> entail;
  if (!config.entailment_scores.empty()) {
    section("entailment", [&] { entail = LoadEntailmentScores(config.entailment_scores); });
  }
  std::optional<std::vector<QaVerdict>> verdicts;
  if (!config.qa_pairs.empty()) {
    section("qa", [&] {
      verdicts = ScoreRoundtrip(LoadQaPairs(config.qa_pairs),
                                LoadRcAnswers(config.rc_answers), config.match);
    });
  }

  if (refs) {
    section("rouge", [&] {
      std::vector<std::pair<std::string, RougeTriple>> rows;
      for (const auto& sys : config.systems) {
        rows.emplace_back(sys, CorpusRouge(corpus, sys, *refs));
      }
      bundle.tables.push_back(RougeTable(rows));
    });
  }
  section("hallucination", [&] {
    bundle.tables.push_back(HallucinationTable(SystemTable(annotations, corpus, hallu)));
  });
  section("factual_breakdown", [&] {
    bundle.tables.push_back(
        FactualBreakdownTable(FactualBreakdown(annotations, corpus, hallu)));
  });
  section("span_stats", [&] {
    bundle.tables.push_back(
        SpanStatsTable(SpanStats(annotations, corpus, config.corpus_size)));
  });
  if (!annotations.Pairs(TaskType::kLinguistic).empty()) {
    section("linguistic", [&] {
      bundle.tables.push_back(LinguisticTable(RepIncohTable(annotations, corpus)));
    });
  }
  section("agreement", [&] {
    std::vector<KappaRow> rows;
    for (const auto& sys : annotations.Systems()) {
      rows.push_back(KappaReport(annotations, corpus, sys));
    }
    bundle.tables.push_back(AgreementTable(rows));
  });
  if (entail) {
    section("entailment", [&] {
      bundle.tables.push_back(EntailmentTable(
          ClassDistributions(annotations.Pairs(TaskType::kHallucination), *entail)));
    });
  }
  if (verdicts) {
    section("qa", [&] { bundle.tables.push_back(QaTable(QaAccuracy(*verdicts))); });
  }

  std::vector<NamedMetric> metrics;
  bool metrics_ok = true;
  if (refs) {
    metrics_ok &= section("correlation", [&] {
      for (auto& m : RougeMetrics(corpus, config.systems, *refs)) {
        metrics.push_back(std::move(m));
      }
    });
  }
  if (!config.metric_scores.empty()) {
    metrics_ok &= section("correlation", [&] {
      for (auto& m : WideMetrics(LoadMetricScores(config.metric_scores))) {
        metrics.push_back(std::move(m));
      }
    });
  }
  if (verdicts) metrics.push_back(QaMetric(*verdicts));
  if (entail) metrics.push_back(EntailmentMetric(*entail));
  if (metrics_ok && !metrics.empty()) {
    for (HumanLabel label : {HumanLabel::kFaithful, HumanLabel::kFactual}) {
      std::string name = "correlation_" + std::string(HumanLabelName(label));
      section(name, [&] {
        auto labels = HumanLabels(annotations, corpus, label, hallu);
        bundle.tables.push_back(
            CorrelationTable(name, CorrelationRows(metrics, labels, config.systems)));
      });
    }
  }

  if (refs) {
    section("selection", [&] {
      std::vector<std::pair<std::string, SelectionEvalRow>> rows;
      for (const auto& sys : config.systems) {
        rows.emplace_back(sys, SelectionEval(FixedSelection(annotations, sys), corpus, *refs,
                                             annotations, hallu));
      }
      if (entail) {
        rows.emplace_back("entail", SelectionEval(SelectAll(*entail, config.systems), corpus,
                                                  *refs, annotations, hallu));
      }
      if (!config.folds.empty()) {
        std::map<int, EntailmentScores> fold_scores;
        for (std::size_t f = 0; f < config.fold_scores.size(); ++f) {
          fold_scores[static_cast<int>(f)] = LoadEntailmentScores(config.fold_scores[f]);
        }
        auto cv = CrossvalEval(fold_scores, LoadFolds(config.folds), config.systems, corpus,
                               *refs, annotations, hallu);
        rows.emplace_back("entail_cv", cv.row);
      }
      bundle.tables.push_back(SelectionTable(rows));
    });
  }
  return bundle;
}

void WriteBundle(const ReportBundle& bundle, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::kIo, kModule, "cannot create " + dir + ": " + ec.message());
  for (const auto& t : bundle.tables) {
    io::WriteFile((std::filesystem::path(dir) / (t.name + ".tsv")).string(), RenderTsv(t));
  }
  io::WriteFile((std::filesystem::path(dir) / "report.txt").string(), bundle.Summary());
}

}  // namespace faitheval

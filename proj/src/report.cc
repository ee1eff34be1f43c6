/*
 * Copyright 2026 The Unintuit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "unintuit/report.h"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace unintuit {
namespace {

using nlohmann::json;

json MetricsJson(const EvalMetrics& m) {
  return {{"precision", m.precision},
          {"recall", m.recall},
          {"f1", m.f1},
          {"accuracy", m.accuracy},
          {"n_test", m.n_test}};
}

EvalMetrics MetricsFromJson(const json& j) {
  EvalMetrics m;
  m.precision = j.at("precision");
  m.recall = j.at("recall");
  m.f1 = j.at("f1");
  m.accuracy = j.at("accuracy");
  m.n_test = j.at("n_test");
  return m;
}

json ThresholdsJson(const Thresholds& t) {
  return {{"low", t.low}, {"high", t.high}};
}

Thresholds ThresholdsFromJson(const json& j) {
  return {j.at("low").get<double>(), j.at("high").get<double>()};
}

json PatternJson(const CandidatePattern& p,
                 const std::vector<std::string>& example_ids) {
  return {{"phrase", p.Text()},
          {"tokens", p.phrase},
          {"anchor", p.anchor},
          {"sentiment", SentimentName(p.sentiment)},
          {"p_score", p.p_score},
          {"support", p.support},
          {"source_doc_ids", p.source_doc_ids},
          {"example_ids", example_ids}};
}

json PatternsJson(const PatternExplanation& e) {
  json selected = json::array();
  for (std::size_t i = 0; i < e.patterns.selected.size(); ++i) {
    selected.push_back(PatternJson(e.patterns.selected[i], e.example_ids[i]));
  }
  return {{"lambda", e.patterns.lambda},
          {"max_patterns", e.patterns.max_patterns},
          {"selected", selected}};
}

PatternExplanation PatternsFromJson(const json& j) {
  PatternExplanation e;
  e.patterns.lambda = j.at("lambda");
  e.patterns.max_patterns = j.at("max_patterns");
  for (const json& p : j.at("selected")) {
    CandidatePattern pattern;
    pattern.phrase = p.at("tokens").get<std::vector<std::string>>();
    pattern.anchor = p.at("anchor");
    pattern.sentiment = ParseSentiment(p.at("sentiment").get<std::string>());
    pattern.p_score = p.at("p_score");
    pattern.support = p.at("support");
    pattern.source_doc_ids =
        p.at("source_doc_ids").get<std::vector<std::string>>();
    e.patterns.selected.push_back(std::move(pattern));
    e.example_ids.push_back(p.at("example_ids").get<std::vector<std::string>>());
  }
  return e;
}

json ExamplesJson(const std::vector<ExampleDoc>& docs) {
  json out = json::array();
  for (const ExampleDoc& d : docs) out.push_back({{"id", d.id}, {"text", d.text}});
  return out;
}

std::vector<ExampleDoc> ExamplesFromJson(const json& j) {
  std::vector<ExampleDoc> out;
  for (const json& d : j) out.push_back({d.at("id"), d.at("text")});
  return out;
}

void WriteValue(const json& value, int depth, std::string& out) {
  const std::string indent(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  switch (value.type()) {
    case json::value_t::object: {
      if (value.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      // nlohmann::json objects iterate in key order.
      for (const auto& [key, item] : value.items()) {
        if (!first) out += ",\n";
        first = false;
        out += indent + json(key).dump() + ": ";
        WriteValue(item, depth + 1, out);
      }
      out += "\n" + close + "}";
      return;
    }
    case json::value_t::array: {
      if (value.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i > 0) out += ",\n";
        out += indent;
        WriteValue(value[i], depth + 1, out);
      }
      out += "\n" + close + "]";
      return;
    }
    case json::value_t::number_float: {
      double x = value.get<double>();
      if (!std::isfinite(x)) throw DataError("non-finite number in report");
      if (x == 0.0) x = 0.0;  // Drops the sign of -0.
      char buffer[32];
      std::snprintf(buffer, sizeof(buffer), "%.6g", x);
      out += buffer;
      return;
    }
    default:
      out += value.dump();
  }
}

}  // namespace

const ExplanationBundle* PipelineReport::FindBundle(
    std::string_view word) const {
  for (const ExplanationBundle& bundle : bundles) {
    if (bundle.word == word) return &bundle;
  }
  return nullptr;
}

json ToJson(const FeatureDiagnosis& d) {
  json out = {{"word", d.feature.word},
              {"coefficient", d.feature.coefficient},
              {"rank", d.feature.rank},
              {"model_sentiment", SentimentName(d.feature.model_sentiment)},
              {"p_pos", d.intuition.p_pos},
              {"p_neg", d.intuition.p_neg},
              {"backend_id", d.intuition.backend_id},
              {"prompt", d.intuition.prompt},
              {"category", CategoryName(d.category)}};
  out["ablation_significant"] =
      d.ablation_significant ? json(*d.ablation_significant) : json(nullptr);
  return out;
}

FeatureDiagnosis DiagnosisFromJson(const json& j) {
  FeatureDiagnosis d;
  d.feature.word = j.at("word");
  d.feature.coefficient = j.at("coefficient");
  d.feature.rank = j.at("rank");
  d.feature.model_sentiment =
      ParseSentiment(j.at("model_sentiment").get<std::string>());
  d.intuition.text = d.feature.word;
  d.intuition.p_pos = j.at("p_pos");
  d.intuition.p_neg = j.at("p_neg");
  d.intuition.backend_id = j.at("backend_id");
  d.intuition.prompt = j.at("prompt");
  d.category = ParseCategory(j.at("category").get<std::string>());
  if (!j.at("ablation_significant").is_null()) {
    d.ablation_significant = j.at("ablation_significant").get<bool>();
  }
  return d;
}

json ToJson(const ExplanationBundle& b) {
  return {{"word", b.word},
          {"diagnosis", ToJson(b.diagnosis)},
          {"distribution",
           {{"n_pos", b.distribution.n_pos},
            {"n_neg", b.distribution.n_neg},
            {"p_pos_posterior", b.distribution.p_pos_posterior}}},
          {"examples",
           {{"per_side", b.examples.per_side},
            {"positive", ExamplesJson(b.examples.positive)},
            {"negative", ExamplesJson(b.examples.negative)}}},
          {"patterns",
           {{"positive", PatternsJson(b.patterns_pos)},
            {"negative", PatternsJson(b.patterns_neg)}}}};
}

ExplanationBundle BundleFromJson(const json& j) {
  ExplanationBundle b;
  b.word = j.at("word");
  b.diagnosis = DiagnosisFromJson(j.at("diagnosis"));
  const json& dist = j.at("distribution");
  b.distribution.word = b.word;
  b.distribution.n_pos = dist.at("n_pos");
  b.distribution.n_neg = dist.at("n_neg");
  b.distribution.p_pos_posterior = dist.at("p_pos_posterior");
  const json& ex = j.at("examples");
  b.examples.word = b.word;
  b.examples.per_side = ex.at("per_side");
  b.examples.positive = ExamplesFromJson(ex.at("positive"));
  b.examples.negative = ExamplesFromJson(ex.at("negative"));
  b.patterns_pos = PatternsFromJson(j.at("patterns").at("positive"));
  b.patterns_neg = PatternsFromJson(j.at("patterns").at("negative"));
  return b;
}

json ToJson(const PipelineConfig& c) {
  const TrainConfig& t = c.train;
  const MineConfig& m = c.explain.mine;
  return {
      {"category", c.category},
      {"min_df", c.min_df},
      {"stopwords", c.stopwords},
      {"train",
       {{"learning_rate", t.learning_rate},
        {"l2", t.l2},
        {"max_iterations", t.max_iterations},
        {"tolerance", t.tolerance},
        {"test_fraction", t.test_fraction},
        {"seed", t.seed}}},
      {"top_k", c.top_k},
      {"thresholds", ThresholdsJson(c.thresholds)},
      {"ablate", c.ablate},
      {"words", c.words},
      {"auto_bundles", c.auto_bundles},
      {"explain",
       {{"examples_per_side", c.explain.examples_per_side},
        {"examples_per_pattern", c.explain.examples_per_pattern},
        {"seed", c.explain.seed},
        {"mine",
         {{"max_left", m.max_left},
          {"max_right", m.max_right},
          {"threshold", m.threshold},
          {"include_bare_anchor", m.include_bare_anchor},
          {"lambda", m.lambda},
          {"max_patterns", m.max_patterns},
          {"doc_cap", m.doc_cap},
          {"seed", m.seed}}}}}};
}

PipelineConfig ConfigFromJson(const json& j) {
  PipelineConfig c;
  c.category = j.at("category");
  c.min_df = j.at("min_df");
  c.stopwords = j.at("stopwords");
  const json& t = j.at("train");
  c.train.learning_rate = t.at("learning_rate");
  c.train.l2 = t.at("l2");
  c.train.max_iterations = t.at("max_iterations");
  c.train.tolerance = t.at("tolerance");
  c.train.test_fraction = t.at("test_fraction");
  c.train.seed = t.at("seed");
  c.top_k = j.at("top_k");
  c.thresholds = ThresholdsFromJson(j.at("thresholds"));
  c.ablate = j.at("ablate");
  c.words = j.at("words").get<std::vector<std::string>>();
  c.auto_bundles = j.at("auto_bundles");
  const json& e = j.at("explain");
  c.explain.examples_per_side = e.at("examples_per_side");
  c.explain.examples_per_pattern = e.at("examples_per_pattern");
  c.explain.seed = e.at("seed");
  c.explain.thresholds = c.thresholds;
  const json& m = e.at("mine");
  c.explain.mine.max_left = m.at("max_left");
  c.explain.mine.max_right = m.at("max_right");
  c.explain.mine.threshold = m.at("threshold");
  c.explain.mine.include_bare_anchor = m.at("include_bare_anchor");
  c.explain.mine.lambda = m.at("lambda");
  c.explain.mine.max_patterns = m.at("max_patterns");
  c.explain.mine.doc_cap = m.at("doc_cap");
  c.explain.mine.seed = m.at("seed");
  return c;
}

json ToJson(const PipelineReport& r) {
  json diagnoses = json::array();
  for (const auto& d : r.diagnoses) diagnoses.push_back(ToJson(d));
  json bundles = json::array();
  for (const auto& b : r.bundles) bundles.push_back(ToJson(b));
  return {{"schema_version", r.schema_version},
          {"category", r.category},
          {"corpus",
           {{"n_documents", r.corpus.n_documents},
            {"n_positive", r.corpus.n_positive},
            {"n_negative", r.corpus.n_negative}}},
          {"metrics", MetricsJson(r.metrics)},
          {"diagnoses", diagnoses},
          {"bundles", bundles},
          {"config", ToJson(r.config)},
          {"backends",
           {{"scorer", r.scorer_id}, {"embedder", r.embedder_id}}}};
}

PipelineReport ReportFromJson(const json& j) {
  try {
    PipelineReport r;
    r.schema_version = j.at("schema_version");
    if (r.schema_version != kReportSchemaVersion) {
      throw DataError("unsupported report schema '" + r.schema_version + "'");
    }
    r.category = j.at("category");
    const json& c = j.at("corpus");
    r.corpus.n_documents = c.at("n_documents");
    r.corpus.n_positive = c.at("n_positive");
    r.corpus.n_negative = c.at("n_negative");
    r.metrics = MetricsFromJson(j.at("metrics"));
    for (const json& d : j.at("diagnoses")) {
      r.diagnoses.push_back(DiagnosisFromJson(d));
    }
    for (const json& b : j.at("bundles")) r.bundles.push_back(BundleFromJson(b));
    r.config = ConfigFromJson(j.at("config"));
    r.scorer_id = j.at("backends").at("scorer");
    r.embedder_id = j.at("backends").at("embedder");
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  } catch (const UsageError& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
}

std::string CanonicalJson(const json& value) {
  std::string out;
  WriteValue(value, 0, out);
  out += '\n';
  return out;
}

void WriteReport(const PipelineReport& report,
                 const std::filesystem::path& path) {
  const std::string text = CanonicalJson(ToJson(report));
  std::ofstream output(path, std::ios::binary | std::ios::trunc);
  if (!output) throw DataError("cannot write report to " + path.string());
  output << text;
  output.flush();
  if (!output) throw DataError("failed writing report to " + path.string());
}

PipelineReport ReadReport(const std::filesystem::path& path) {
  std::ifstream input(path, std::ios::binary);
  if (!input) throw DataError("cannot open report " + path.string());
  json parsed;
  try {
    parsed = json::parse(input);
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return ReportFromJson(parsed);
}

}  // namespace unintuit

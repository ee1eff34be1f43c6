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

// Python bindings: unintuit._core. Structured results cross the boundary as
// plain dicts and lists in the same shape as the report JSON.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "unintuit/classifier.h"
#include "unintuit/corpus.h"
#include "unintuit/detector.h"
#include "unintuit/explain.h"
#include "unintuit/intuition.h"
#include "unintuit/miner.h"
#include "unintuit/pipeline.h"
#include "unintuit/report.h"
#include "unintuit/stats.h"

namespace py = pybind11;
using nlohmann::json;

namespace unintuit {
namespace {

py::object ToPython(const json& value) {
  return py::module_::import("json").attr("loads")(value.dump());
}

json FromPython(const py::handle& value) {
  return json::parse(
      py::module_::import("json").attr("dumps")(value).cast<std::string>());
}

json MetricsJson(const EvalMetrics& m) {
  return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1},
          {"accuracy", m.accuracy},   {"n_test", m.n_test}};
}

json FeatureJson(const FeatureScore& f) {
  return {{"word", f.word},
          {"coefficient", f.coefficient},
          {"rank", f.rank},
          {"model_sentiment", SentimentName(f.model_sentiment)}};
}

// Defaults overlaid with the caller's (possibly partial, nested) settings.
PipelineConfig ConfigFrom(const py::dict& overrides) {
  json config = ToJson(PipelineConfig{});
  config.merge_patch(FromPython(overrides));
  try {
    return ConfigFromJson(config);
  } catch (const json::exception& e) {
    throw UsageError(std::string("invalid config: ") + e.what());
  }
}

Corpus CorpusFromRecords(
    const std::string& category,
    const std::vector<std::tuple<std::string, std::string, std::string>>&
        records) {
  std::vector<Document> docs;
  docs.reserve(records.size());
  for (const auto& [id, label, text] : records) {
    Document doc;
    doc.id = id;
    doc.label = ParseSentiment(label);
    doc.text = text;
    doc.tokens = Tokenize(text);
    docs.push_back(std::move(doc));
  }
  return Corpus(category, std::move(docs));
}

std::shared_ptr<IntuitionScorer> NewScorer(
    const std::optional<std::filesystem::path>& lexicon) {
  return std::make_shared<IntuitionScorer>(MakeScorer(lexicon));
}

}  // namespace
}  // namespace unintuit

PYBIND11_MODULE(_core, m) {
  using namespace unintuit;
  m.doc() = "Find and explain unintuitive features of sentiment classifiers";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<UsageError>(m, "UsageError", base.ptr());
  py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<BackendError>(m, "BackendError", base.ptr());

  m.def("tokenize", &Tokenize, py::arg("text"));

  py::class_<Corpus>(m, "Corpus")
      .def_static("from_records", &CorpusFromRecords, py::arg("category"),
                  py::arg("records"),
                  "Builds a corpus from (id, 'pos'|'neg', text) tuples.")
      .def_static(
          "load",
          [](const std::filesystem::path& path, const std::string& category,
             const std::string& stars) {
            return Ingest(path, FormatFromPath(path), StarMapping::Parse(stars),
                          category);
          },
          py::arg("path"), py::arg("category") = "",
          py::arg("stars") = "1:neg,5:pos")
      .def("save", [](const Corpus& c, const std::filesystem::path& p) {
        WriteCorpus(c, p);
      })
      .def_property_readonly("category", &Corpus::category)
      .def_property_readonly("n_positive",
                             [](const Corpus& c) {
                               return c.CountLabel(Sentiment::kPositive);
                             })
      .def_property_readonly("n_negative",
                             [](const Corpus& c) {
                               return c.CountLabel(Sentiment::kNegative);
                             })
      .def("__len__", &Corpus::size)
      .def("document_frequency", &Corpus::DocumentFrequency, py::arg("token"));

  py::class_<TrainedClassifier>(m, "Model")
      .def_static("load", &TrainedClassifier::Load, py::arg("path"))
      .def("save", &TrainedClassifier::Save, py::arg("path"))
      .def_property_readonly("metrics",
                             [](const TrainedClassifier& model) {
                               return ToPython(MetricsJson(model.metrics()));
                             })
      .def_property_readonly("bias", &TrainedClassifier::bias)
      .def_property_readonly("vocabulary",
                             [](const TrainedClassifier& model) {
                               std::vector<std::string> terms;
                               const Vectorizer& v = model.vectorizer();
                               for (std::size_t i = 0; i < v.size(); ++i) {
                                 terms.push_back(v.term(i));
                               }
                               return terms;
                             })
      .def("coefficient", &TrainedClassifier::Coefficient, py::arg("word"))
      .def(
          "predict_proba",
          [](const TrainedClassifier& model, const std::string& text) {
            return model.ProbabilityPositive(Tokenize(text));
          },
          py::arg("text"))
      .def(
          "top_features",
          [](const TrainedClassifier& model, std::size_t k) {
            const TopFeatures top = RankFeatures(model, k);
            json out = {{"positive", json::array()},
                        {"negative", json::array()}};
            for (const auto& f : top.positive) out["positive"].push_back(FeatureJson(f));
            for (const auto& f : top.negative) out["negative"].push_back(FeatureJson(f));
            return ToPython(out);
          },
          py::arg("k"));

  py::class_<IntuitionScorer, std::shared_ptr<IntuitionScorer>>(m, "Scorer")
      .def(py::init(&NewScorer), py::arg("lexicon") = py::none(),
           "Remote scorer when UNINTUIT_SCORER_URL is set, else the lexicon "
           "mock.")
      .def_property_readonly("backend_id",
                             [](const IntuitionScorer& s) {
                               return s.backend().id();
                             })
      .def(
          "score_word",
          [](const IntuitionScorer& s, const std::string& category,
             const std::string& word) {
            return s.ScoreWord(category, word).p_pos;
          },
          py::arg("category"), py::arg("word"))
      .def(
          "score_phrase",
          [](const IntuitionScorer& s, const std::string& phrase) {
            return s.ScorePhrase(Tokenize(phrase)).p_pos;
          },
          py::arg("phrase"));

  m.def(
      "train",
      [](const Corpus& corpus, const py::dict& config) {
        const PipelineConfig c = ConfigFrom(config);
        py::gil_scoped_release release;
        return TrainFromConfig(corpus, c);
      },
      py::arg("corpus"), py::arg("config") = py::dict());

  m.def(
      "diagnose",
      [](const TrainedClassifier& model, const IntuitionScorer& scorer,
         const std::string& category, std::size_t top_k, double low,
         double high) {
        json out = json::array();
        for (const auto& d :
             DiagnoseTopFeatures(model, scorer, category, top_k, {low, high})) {
          out.push_back(ToJson(d));
        }
        return ToPython(out);
      },
      py::arg("model"), py::arg("scorer"), py::arg("category"),
      py::arg("top_k") = 200, py::arg("low") = 0.2, py::arg("high") = 0.8);

  m.def(
      "categorize",
      [](const std::string& model_sentiment, double p_pos, double low,
         double high) {
        return std::string(CategoryName(
            Categorize(ParseSentiment(model_sentiment), p_pos, {low, high})));
      },
      py::arg("model_sentiment"), py::arg("p_pos"), py::arg("low") = 0.2,
      py::arg("high") = 0.8);

  m.def(
      "ablate",
      [](const TrainedClassifier& model, const Corpus& corpus,
         const std::string& word) {
        AblationResult r;
        {
          py::gil_scoped_release release;
          r = Ablate(model, corpus, word);
        }
        return ToPython({{"word", r.word},
                         {"significant", r.significant},
                         {"p_value", r.test.p_value},
                         {"method", r.test.method},
                         {"only_full_correct", r.test.only_first_correct},
                         {"only_ablated_correct", r.test.only_second_correct},
                         {"full_metrics", MetricsJson(r.full_metrics)},
                         {"ablated_metrics", MetricsJson(r.ablated_metrics)}});
      },
      py::arg("model"), py::arg("corpus"), py::arg("word"));

  m.def(
      "build_bundle",
      [](const Corpus& corpus, const TrainedClassifier& model,
         const IntuitionScorer& scorer, const std::string& word,
         const py::dict& config) {
        const PipelineConfig c = ConfigFrom(config);
        ExplainConfig explain = c.explain;
        explain.thresholds = c.thresholds;
        ExplanationBundle bundle;
        {
          py::gil_scoped_release release;
          bundle = BuildBundle(corpus, model, scorer, *MakeEmbedder(corpus),
                               word, explain);
        }
        return ToPython(ToJson(bundle));
      },
      py::arg("corpus"), py::arg("model"), py::arg("scorer"), py::arg("word"),
      py::arg("config") = py::dict());

  m.def(
      "run_pipeline",
      [](const Corpus& corpus, const IntuitionScorer& scorer,
         const py::dict& config) {
        const PipelineConfig c = ConfigFrom(config);
        std::string text;
        {
          py::gil_scoped_release release;
          text = CanonicalJson(ToJson(
              RunPipeline(corpus, c, scorer, *MakeEmbedder(corpus)).report));
        }
        return text;
      },
      py::arg("corpus"), py::arg("scorer"), py::arg("config") = py::dict(),
      "Runs the whole pipeline and returns the canonical report JSON text.");

  m.def("default_config", [] { return ToPython(ToJson(PipelineConfig{})); });

  m.def(
      "aggregate_judgments",
      [](int n_pos, int n_neg, int n_ns, int panel_size) {
        return AggregateJudgments({"", n_pos, n_neg, n_ns}, panel_size);
      },
      py::arg("n_pos"), py::arg("n_neg"), py::arg("n_ns"),
      py::arg("panel_size") = kDefaultPanelSize);

  m.def(
      "correlate",
      [](const std::vector<std::pair<double, double>>& pairs) {
        const Correlation c = Correlate(pairs);
        return ToPython({{"rho", c.rho}, {"p_value", c.p_value}, {"n", c.n}});
      },
      py::arg("pairs"));

  m.def(
      "mcnemar",
      [](const std::vector<bool>& first, const std::vector<bool>& second) {
        const McNemarResult r = McNemarTest(first, second);
        return ToPython({{"only_first_correct", r.only_first_correct},
                         {"only_second_correct", r.only_second_correct},
                         {"statistic", r.statistic},
                         {"p_value", r.p_value},
                         {"method", r.method}});
      },
      py::arg("first_correct"), py::arg("second_correct"));
}

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

#include <gtest/gtest.h>

#include "synthetic.h"
#include "unintuit/pipeline.h"

namespace unintuit {
namespace {

using nlohmann::json;

PipelineConfig SmallConfig() {
  PipelineConfig config;
  config.top_k = 15;
  config.words = {"problems", "money"};
  return config;
}

PipelineResult RunSmall(const PipelineConfig& config = SmallConfig()) {
  const Corpus corpus = testing::GenerateSynthetic({.n_docs = 1200, .seed = 5});
  const IntuitionScorer scorer(
      std::make_shared<LexiconScorer>(LexiconScorer::Default()));
  const BagOfTokensEmbedder embedder = BagOfTokensEmbedder::FromCorpus(corpus);
  return RunPipeline(corpus, config, scorer, embedder);
}

TEST(CanonicalJsonTest, SortedKeysAndSixDigitFloats) {
  const json value = {{"b", 1.0 / 3.0},
                      {"a", {{"z", -0.0}, {"y", 1234567.0}, {"x", 2}}},
                      {"c", json::array()},
                      {"d", {true, nullptr, "q\"s"}}};
  EXPECT_EQ(CanonicalJson(value),
            "{\n"
            "  \"a\": {\n"
            "    \"x\": 2,\n"
            "    \"y\": 1.23457e+06,\n"
            "    \"z\": 0\n"
            "  },\n"
            "  \"b\": 0.333333,\n"
            "  \"c\": [],\n"
            "  \"d\": [\n"
            "    true,\n"
            "    null,\n"
            "    \"q\\\"s\"\n"
            "  ]\n"
            "}\n");
  EXPECT_THROW(CanonicalJson(json(std::nan(""))), DataError);
}

TEST(CanonicalJsonTest, StableUnderReparse) {
  const json value = {{"p", 0.123456789}, {"q", 1e-7}, {"r", 0.9}};
  const std::string once = CanonicalJson(value);
  EXPECT_EQ(CanonicalJson(json::parse(once)), once);
}

TEST(ReportTest, WriteReadRoundTrip) {
  testing::TempDir dir;
  const PipelineReport report = RunSmall().report;
  WriteReport(report, dir / "report.json");
  const std::string bytes = testing::ReadFile(dir / "report.json");
  const PipelineReport back = ReadReport(dir / "report.json");
  EXPECT_EQ(CanonicalJson(ToJson(back)), bytes);
  EXPECT_EQ(back.schema_version, kReportSchemaVersion);
  EXPECT_EQ(back.category, report.category);
  EXPECT_EQ(back.corpus.n_documents, report.corpus.n_documents);
  ASSERT_EQ(back.diagnoses.size(), report.diagnoses.size());
  for (std::size_t i = 0; i < back.diagnoses.size(); ++i) {
    EXPECT_EQ(back.diagnoses[i].feature.word, report.diagnoses[i].feature.word);
    EXPECT_EQ(back.diagnoses[i].category, report.diagnoses[i].category);
    EXPECT_NEAR(back.diagnoses[i].intuition.p_pos,
                report.diagnoses[i].intuition.p_pos, 1e-6);
  }
  ASSERT_EQ(back.bundles.size(), 2u);
  EXPECT_EQ(back.bundles[1].patterns_neg.patterns.selected.size(),
            report.bundles[1].patterns_neg.patterns.selected.size());
  EXPECT_EQ(back.config.words, report.config.words);
  EXPECT_EQ(back.scorer_id, report.scorer_id);
}

TEST(ReportTest, TwoRunsAreByteIdentical) {
  testing::TempDir dir;
  WriteReport(RunSmall().report, dir / "a.json");
  WriteReport(RunSmall().report, dir / "b.json");
  EXPECT_EQ(testing::ReadFile(dir / "a.json"), testing::ReadFile(dir / "b.json"));
}

TEST(ReportTest, ConfigEchoReproducesReport) {
  const PipelineReport first = RunSmall().report;
  const PipelineConfig echoed = ConfigFromJson(ToJson(first.config));
  EXPECT_EQ(CanonicalJson(ToJson(RunSmall(echoed).report)),
            CanonicalJson(ToJson(first)));
}

TEST(ReportTest, MissingDirectoryNamesPath) {
  testing::TempDir dir;
  const auto path = dir / "nope" / "report.json";
  try {
    WriteReport(PipelineReport{}, path);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find(path.string()), std::string::npos);
  }
}

TEST(ReportTest, SchemaMismatchRejected) {
  json value = ToJson(PipelineReport{});
  EXPECT_NO_THROW(ReportFromJson(value));
  value["schema_version"] = "unintuit.report/0";
  EXPECT_THROW(ReportFromJson(value), DataError);
  EXPECT_THROW(ReportFromJson(json::object()), DataError);
}

TEST(PipelineTest, DiagnosesAndBundles) {
  const PipelineResult result = RunSmall();
  const PipelineReport& report = result.report;
  EXPECT_EQ(report.diagnoses.size(), 30u);
  EXPECT_EQ(report.corpus.n_positive + report.corpus.n_negative,
            report.corpus.n_documents);
  ASSERT_NE(report.FindBundle("problems"), nullptr);
  EXPECT_EQ(report.FindBundle("problems")->diagnosis.category,
            FeatureCategory::kParadoxPositive);
  EXPECT_EQ(report.FindBundle("money")->diagnosis.category,
            FeatureCategory::kParadoxNegative);
  EXPECT_EQ(report.FindBundle("zebra"), nullptr);
  EXPECT_EQ(report.config.category, "Home and Kitchen");
}

TEST(PipelineTest, AutoBundleWordsSkipIntuitive) {
  auto diagnosis = [](std::string word, double coef, FeatureCategory c) {
    FeatureDiagnosis d;
    d.feature.word = std::move(word);
    d.feature.coefficient = coef;
    d.category = c;
    return d;
  };
  const std::vector<FeatureDiagnosis> diagnoses = {
      diagnosis("great", 3.0, FeatureCategory::kIntuitivePositive),
      diagnosis("fit", -1.5, FeatureCategory::kParadoxNegative),
      diagnosis("box", 1.5, FeatureCategory::kAmbiguous),
      diagnosis("problems", 2.0, FeatureCategory::kParadoxPositive)};
  EXPECT_EQ(AutoBundleWords(diagnoses, 2),
            (std::vector<std::string>{"problems", "box"}));
  EXPECT_EQ(AutoBundleWords(diagnoses, 10).size(), 3u);
}

TEST(PipelineTest, AblationFlagsOnlyNonIntuitive) {
  PipelineConfig config = SmallConfig();
  config.top_k = 5;
  config.ablate = true;
  config.words = {"money"};
  const PipelineReport report = RunSmall(config).report;
  for (const FeatureDiagnosis& d : report.diagnoses) {
    const bool intuitive = d.category == FeatureCategory::kIntuitivePositive ||
                           d.category == FeatureCategory::kIntuitiveNegative;
    EXPECT_EQ(d.ablation_significant.has_value(), !intuitive) << d.feature.word;
  }
}

}  // namespace
}  // namespace unintuit

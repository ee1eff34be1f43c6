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

#include "unintuit/pipeline.h"

#include <algorithm>
#include <cmath>

namespace unintuit {
namespace {

bool IsIntuitive(FeatureCategory category) {
  return category == FeatureCategory::kIntuitivePositive ||
         category == FeatureCategory::kIntuitiveNegative;
}

}  // namespace

std::set<std::string> ResolveStopwords(const PipelineConfig& config) {
  if (config.stopwords.empty() || config.stopwords == "builtin") {
    return DefaultStopwords();
  }
  if (config.stopwords == "none") return {};
  return LoadStopwords(config.stopwords);
}

TrainedClassifier TrainFromConfig(const Corpus& corpus,
                                  const PipelineConfig& config) {
  Vectorizer vectorizer =
      Vectorizer::Fit(corpus, ResolveStopwords(config), config.min_df);
  return Train(corpus, std::move(vectorizer), config.train, config.min_df);
}

std::vector<FeatureDiagnosis> DiagnoseTopFeatures(
    const TrainedClassifier& model, const IntuitionScorer& scorer,
    const std::string& category, std::size_t top_k,
    const Thresholds& thresholds) {
  const std::size_t k = std::min(top_k, model.vectorizer().size() / 2);
  const TopFeatures top = RankFeatures(model, k);
  std::vector<FeatureScore> features = top.positive;
  features.insert(features.end(), top.negative.begin(), top.negative.end());
  std::vector<IntuitionScore> scores;
  scores.reserve(features.size());
  for (const FeatureScore& feature : features) {
    scores.push_back(scorer.ScoreWord(category, feature.word));
  }
  return Diagnose(features, scores, thresholds);
}

std::vector<std::string> AutoBundleWords(
    const std::vector<FeatureDiagnosis>& diagnoses, std::size_t count) {
  std::vector<const FeatureDiagnosis*> pool;
  for (const FeatureDiagnosis& d : diagnoses) {
    if (!IsIntuitive(d.category)) pool.push_back(&d);
  }
  std::sort(pool.begin(), pool.end(), [](const auto* a, const auto* b) {
    const double ma = std::abs(a->feature.coefficient);
    const double mb = std::abs(b->feature.coefficient);
    if (ma != mb) return ma > mb;
    return a->feature.word < b->feature.word;
  });
  std::vector<std::string> words;
  for (std::size_t i = 0; i < pool.size() && i < count; ++i) {
    words.push_back(pool[i]->feature.word);
  }
  return words;
}

PipelineResult RunPipeline(const Corpus& corpus, const PipelineConfig& input,
                           const IntuitionScorer& scorer,
                           const EmbeddingProvider& embedder) {
  PipelineConfig config = input;
  if (config.category.empty()) config.category = corpus.category();
  config.explain.thresholds = config.thresholds;

  TrainedClassifier model = TrainFromConfig(corpus, config);

  PipelineReport report;
  report.category = config.category;
  report.corpus = {corpus.size(), corpus.CountLabel(Sentiment::kPositive),
                   corpus.CountLabel(Sentiment::kNegative)};
  report.metrics = model.metrics();
  report.diagnoses = DiagnoseTopFeatures(model, scorer, config.category,
                                         config.top_k, config.thresholds);
  if (config.ablate) {
    for (FeatureDiagnosis& d : report.diagnoses) {
      if (IsIntuitive(d.category)) continue;
      d.ablation_significant = Ablate(model, corpus, d.feature.word).significant;
    }
  }
  const std::vector<std::string> words =
      config.words.empty() ? AutoBundleWords(report.diagnoses,
                                             config.auto_bundles)
                           : config.words;
  for (const std::string& word : words) {
    report.bundles.push_back(
        BuildBundle(corpus, model, scorer, embedder, word, config.explain));
  }
  report.config = config;
  report.scorer_id = scorer.backend().id();
  report.embedder_id = embedder.id();
  return {std::move(model), std::move(report)};
}

}  // namespace unintuit

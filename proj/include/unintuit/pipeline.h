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

// End-to-end run: vectorize, train, rank, diagnose, optionally ablate, and
// build bundles.

#ifndef UNINTUIT_PIPELINE_H_
#define UNINTUIT_PIPELINE_H_

#include <set>
#include <string>
#include <vector>

#include "unintuit/classifier.h"
#include "unintuit/corpus.h"
#include "unintuit/intuition.h"
#include "unintuit/miner.h"
#include "unintuit/report.h"

namespace unintuit {

struct PipelineResult {
  TrainedClassifier model;
  PipelineReport report;
};

// The stopword set named by `config.stopwords`.
std::set<std::string> ResolveStopwords(const PipelineConfig& config);

// Fits the vectorizer and classifier the way RunPipeline does.
TrainedClassifier TrainFromConfig(const Corpus& corpus,
                                  const PipelineConfig& config);

// Top-k features of both sides (k clamped to |vocabulary| / 2), positive side
// first, each scored and categorized.
std::vector<FeatureDiagnosis> DiagnoseTopFeatures(
    const TrainedClassifier& model, const IntuitionScorer& scorer,
    const std::string& category, std::size_t top_k,
    const Thresholds& thresholds);

// Bundle words when none are requested: non-intuitive diagnoses by
// |coefficient| descending, then word.
std::vector<std::string> AutoBundleWords(
    const std::vector<FeatureDiagnosis>& diagnoses, std::size_t count);

PipelineResult RunPipeline(const Corpus& corpus, const PipelineConfig& config,
                           const IntuitionScorer& scorer,
                           const EmbeddingProvider& embedder);

}  // namespace unintuit

#endif  // UNINTUIT_PIPELINE_H_

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

// The three explanation tools for one word: label distribution, sampled
// reviews and contextual patterns, bundled for both sentiments.

#ifndef UNINTUIT_EXPLAIN_H_
#define UNINTUIT_EXPLAIN_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "unintuit/classifier.h"
#include "unintuit/corpus.h"
#include "unintuit/detector.h"
#include "unintuit/intuition.h"
#include "unintuit/miner.h"

namespace unintuit {

struct LabelDistribution {
  std::string word;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  double p_pos_posterior = 0.0;  // n_pos / (n_pos + n_neg).
};

// Throws DataError("no occurrences") when no document contains `word`.
LabelDistribution Distribution(const Corpus& corpus, std::string_view word);

struct ExampleDoc {
  std::string id;
  std::string text;
};

struct ExampleSet {
  std::string word;
  std::size_t per_side = 0;
  std::vector<ExampleDoc> positive;  // Draw order.
  std::vector<ExampleDoc> negative;
};

// Uniform seeded draw without replacement of up to `per_side` reviews
// containing `word` from each label.
ExampleSet SampleExamples(const Corpus& corpus, std::string_view word,
                          std::size_t per_side, std::uint64_t seed);

struct ExplainConfig {
  std::size_t examples_per_side = 25;
  std::size_t examples_per_pattern = 3;
  std::uint64_t seed = 17;
  Thresholds thresholds;
  MineConfig mine;
};

struct PatternExplanation {
  PatternSet patterns;
  // Aligned with patterns.selected: up to examples_per_pattern source ids,
  // the first ones under a seeded shuffle.
  std::vector<std::vector<std::string>> example_ids;
};

struct ExplanationBundle {
  std::string word;
  FeatureDiagnosis diagnosis;
  LabelDistribution distribution;
  ExampleSet examples;
  PatternExplanation patterns_pos;
  PatternExplanation patterns_neg;

  const PatternExplanation& patterns(Sentiment sentiment) const {
    return sentiment == Sentiment::kPositive ? patterns_pos : patterns_neg;
  }
};

// Builds every tool for `word`, which must be in the model vocabulary.
// Component failures are rethrown with the stage name prefixed ("mine:",
// "intuition:", ...) and their original error kind.
ExplanationBundle BuildBundle(const Corpus& corpus,
                              const TrainedClassifier& model,
                              const IntuitionScorer& scorer,
                              const EmbeddingProvider& embedder,
                              std::string_view word,
                              const ExplainConfig& config);

}  // namespace unintuit

#endif  // UNINTUIT_EXPLAIN_H_

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

// Binary L2-regularized logistic regression over TF-IDF features, feature
// ranking by coefficient, and ablation screening.

#ifndef UNINTUIT_CLASSIFIER_H_
#define UNINTUIT_CLASSIFIER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unintuit/common.h"
#include "unintuit/corpus.h"
#include "unintuit/stats.h"

namespace unintuit {

struct TrainConfig {
  // Full-batch gradient descent step size. Rows are L2-normalized, so the
  // loss gradient is Lipschitz with constant <= 0.5 + l2 and steps up to
  // ~2 / (0.5 + l2) are stable.
  double learning_rate = 2.0;
  // Penalty (l2 / 2) * ||w||^2 added to the mean logistic loss. The bias is
  // not penalized.
  double l2 = 1e-3;
  int max_iterations = 20000;
  // Converged when max |gradient component| < tolerance.
  double tolerance = 1e-4;
  // Stratified held-out share per label.
  double test_fraction = 0.1;
  std::uint64_t seed = 13;
};

struct EvalMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  std::size_t n_test = 0;

  // Positive is the reference class.
  static EvalMetrics FromPredictions(std::span<const Sentiment> truth,
                                     std::span<const Sentiment> predicted);
};

struct Split {
  std::vector<std::size_t> train;  // Ascending document indices.
  std::vector<std::size_t> test;
};

// Per label, floor(count * test_fraction) documents go to the test side,
// chosen by a seeded shuffle.
Split StratifiedSplit(const Corpus& corpus, double test_fraction,
                      std::uint64_t seed);

struct DesignMatrix {
  std::vector<SparseVector> rows;
  std::vector<double> targets;  // 1 = positive, 0 = negative.
  std::size_t n_features = 0;
};

DesignMatrix BuildDesign(const Corpus& corpus, const Vectorizer& vectorizer,
                         std::span<const std::size_t> documents);

struct LossGradient {
  double loss = 0.0;
  std::vector<double> weight_gradient;
  double bias_gradient = 0.0;
};

// Mean logistic loss + (l2 / 2) ||w||^2 and its exact gradient.
LossGradient LogisticObjective(const DesignMatrix& data,
                               std::span<const double> weights, double bias,
                               double l2);

struct FitResult {
  std::vector<double> weights;
  double bias = 0.0;
  int iterations = 0;
  double final_loss = 0.0;
  double gradient_norm = 0.0;  // Max-abs component at exit.
};

// Throws DataError carrying the final loss if tolerance is not reached within
// max_iterations.
FitResult FitLogistic(const DesignMatrix& data, const TrainConfig& config);

class TrainedClassifier {
 public:
  TrainedClassifier(Vectorizer vectorizer, std::vector<double> weights,
                    double bias, EvalMetrics metrics, TrainConfig config,
                    std::size_t min_df);

  const Vectorizer& vectorizer() const { return vectorizer_; }
  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }
  const EvalMetrics& metrics() const { return metrics_; }
  const TrainConfig& config() const { return config_; }
  std::size_t min_df() const { return min_df_; }

  double Margin(const SparseVector& row) const;
  // In (0, 1).
  double ProbabilityPositive(std::span<const std::string> tokens) const;
  Sentiment Predict(std::span<const std::string> tokens) const;

  // Throws DataError for words outside the vocabulary.
  double Coefficient(std::string_view word) const;

  void Save(const std::filesystem::path& path) const;
  static TrainedClassifier Load(const std::filesystem::path& path);

 private:
  Vectorizer vectorizer_;
  std::vector<double> weights_;
  double bias_;
  EvalMetrics metrics_;
  TrainConfig config_;
  std::size_t min_df_;
};

inline constexpr int kModelFormatVersion = 1;

// Splits, fits on the train side and evaluates on the held-out side. Throws
// DataError when the corpus lacks either label.
TrainedClassifier Train(const Corpus& corpus, Vectorizer vectorizer,
                        const TrainConfig& config, std::size_t min_df = 0);

struct FeatureScore {
  std::string word;
  double coefficient = 0.0;
  int rank = 0;  // 1-based within its sentiment side.
  Sentiment model_sentiment = Sentiment::kNegative;  // Positive iff coef > 0.
};

struct TopFeatures {
  std::vector<FeatureScore> positive;  // Largest coefficients, descending.
  std::vector<FeatureScore> negative;  // Smallest coefficients, ascending.
};

// k highest and k lowest coefficients. Features are totally ordered by
// coefficient descending, then word ascending; the negative side is the tail
// of that order read backwards, so the sides are disjoint. Requires
// 1 <= k <= |vocabulary| / 2.
TopFeatures RankFeatures(const TrainedClassifier& model, std::size_t k);

// Same ranking as RankFeatures, for a single vocabulary word.
FeatureScore ScoreFeature(const TrainedClassifier& model,
                          std::string_view word);

struct AblationResult {
  std::string word;
  std::vector<std::string> test_ids;
  std::vector<bool> full_correct;
  std::vector<bool> ablated_correct;
  EvalMetrics full_metrics;
  EvalMetrics ablated_metrics;
  McNemarResult test;
  // Full model has more discordant wins and p < significance_level.
  bool significant = false;
};

inline constexpr double kAblationSignificance = 0.05;

// Retrains `model`'s configuration on the same split with `word` removed from
// the vocabulary and compares held-out correctness with McNemar's test.
AblationResult Ablate(const TrainedClassifier& model, const Corpus& corpus,
                      std::string_view word);

}  // namespace unintuit

#endif  // UNINTUIT_CLASSIFIER_H_

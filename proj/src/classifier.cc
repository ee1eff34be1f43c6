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

#include "unintuit/classifier.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "unintuit/random.h"

namespace unintuit {
namespace {

// log(1 + exp(z)) without overflow.
double Softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double Dot(const SparseVector& row, std::span<const double> weights) {
  double sum = 0.0;
  for (const auto& [index, value] : row) sum += value * weights[index];
  return sum;
}

// One total order over features: coefficient descending, then word. The
// negative side walks it from the end, so the two sides never overlap.
bool RankBefore(double coef_a, const std::string& word_a, double coef_b,
                const std::string& word_b, bool descending) {
  if (coef_a != coef_b) return descending ? coef_a > coef_b : coef_a < coef_b;
  return descending ? word_a < word_b : word_a > word_b;
}

}  // namespace

EvalMetrics EvalMetrics::FromPredictions(std::span<const Sentiment> truth,
                                         std::span<const Sentiment> predicted) {
  if (truth.size() != predicted.size()) {
    throw DataError("prediction and truth vectors differ in length");
  }
  std::size_t tp = 0, fp = 0, fn = 0, correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool pos_truth = truth[i] == Sentiment::kPositive;
    const bool pos_pred = predicted[i] == Sentiment::kPositive;
    if (pos_truth == pos_pred) ++correct;
    if (pos_pred && pos_truth) ++tp;
    if (pos_pred && !pos_truth) ++fp;
    if (!pos_pred && pos_truth) ++fn;
  }
  EvalMetrics metrics;
  metrics.n_test = truth.size();
  if (truth.empty()) return metrics;
  metrics.accuracy =
      static_cast<double>(correct) / static_cast<double>(truth.size());
  if (tp + fp > 0) metrics.precision = static_cast<double>(tp) / (tp + fp);
  if (tp + fn > 0) metrics.recall = static_cast<double>(tp) / (tp + fn);
  const double pr = metrics.precision + metrics.recall;
  metrics.f1 = pr > 0 ? 2.0 * metrics.precision * metrics.recall / pr : 0.0;
  return metrics;
}

Split StratifiedSplit(const Corpus& corpus, double test_fraction,
                      std::uint64_t seed) {
  if (!(test_fraction >= 0.0 && test_fraction < 1.0)) {
    throw UsageError("test_fraction must be in [0, 1)");
  }
  std::vector<std::size_t> by_label[2];
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    by_label[static_cast<int>(corpus.document(i).label)].push_back(i);
  }
  Split split;
  Rng rng(DeriveSeed(seed, "stratified-split"));
  for (auto& indices : by_label) {
    rng.Shuffle(std::span<std::size_t>(indices));
    const auto n_test = static_cast<std::size_t>(
        std::floor(static_cast<double>(indices.size()) * test_fraction));
    split.test.insert(split.test.end(), indices.begin(),
                      indices.begin() + n_test);
    split.train.insert(split.train.end(), indices.begin() + n_test,
                       indices.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

DesignMatrix BuildDesign(const Corpus& corpus, const Vectorizer& vectorizer,
                         std::span<const std::size_t> documents) {
  DesignMatrix data;
  data.n_features = vectorizer.size();
  data.rows.reserve(documents.size());
  data.targets.reserve(documents.size());
  for (std::size_t index : documents) {
    const Document& doc = corpus.document(index);
    data.rows.push_back(vectorizer.Transform(doc.tokens));
    data.targets.push_back(doc.label == Sentiment::kPositive ? 1.0 : 0.0);
  }
  return data;
}

LossGradient LogisticObjective(const DesignMatrix& data,
                               std::span<const double> weights, double bias,
                               double l2) {
  LossGradient out;
  out.weight_gradient.assign(data.n_features, 0.0);
  const double n = static_cast<double>(std::max<std::size_t>(data.rows.size(), 1));
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    const double margin = Dot(data.rows[i], weights) + bias;
    const double y = data.targets[i];
    // -[y log s(m) + (1 - y) log(1 - s(m))] = softplus(m) - y m.
    out.loss += Softplus(margin) - y * margin;
    const double residual = Sigmoid(margin) - y;
    for (const auto& [index, value] : data.rows[i]) {
      out.weight_gradient[index] += residual * value;
    }
    out.bias_gradient += residual;
  }
  out.loss /= n;
  out.bias_gradient /= n;
  double penalty = 0.0;
  for (std::size_t j = 0; j < data.n_features; ++j) {
    out.weight_gradient[j] = out.weight_gradient[j] / n + l2 * weights[j];
    penalty += weights[j] * weights[j];
  }
  out.loss += 0.5 * l2 * penalty;
  return out;
}

FitResult FitLogistic(const DesignMatrix& data, const TrainConfig& config) {
  if (config.learning_rate <= 0 || config.l2 < 0 || config.max_iterations < 1) {
    throw UsageError("invalid optimizer configuration");
  }
  FitResult fit;
  fit.weights.assign(data.n_features, 0.0);
  for (int iteration = 0;; ++iteration) {
    const LossGradient step =
        LogisticObjective(data, fit.weights, fit.bias, config.l2);
    double max_component = std::abs(step.bias_gradient);
    for (double g : step.weight_gradient) {
      max_component = std::max(max_component, std::abs(g));
    }
    fit.final_loss = step.loss;
    fit.gradient_norm = max_component;
    fit.iterations = iteration;
    if (!std::isfinite(step.loss)) {
      throw DataError("logistic regression diverged (non-finite loss); "
                      "lower the learning rate");
    }
    if (max_component < config.tolerance) return fit;
    if (iteration == config.max_iterations) break;
    for (std::size_t j = 0; j < data.n_features; ++j) {
      fit.weights[j] -= config.learning_rate * step.weight_gradient[j];
    }
    fit.bias -= config.learning_rate * step.bias_gradient;
  }
  std::ostringstream message;
  message << "logistic regression did not converge in "
          << config.max_iterations << " iterations (final loss "
          << fit.final_loss << ", gradient " << fit.gradient_norm << ")";
  throw DataError(message.str());
}

TrainedClassifier::TrainedClassifier(Vectorizer vectorizer,
                                     std::vector<double> weights, double bias,
                                     EvalMetrics metrics, TrainConfig config,
                                     std::size_t min_df)
    : vectorizer_(std::move(vectorizer)),
      weights_(std::move(weights)),
      bias_(bias),
      metrics_(metrics),
      config_(config),
      min_df_(min_df) {
  if (weights_.size() != vectorizer_.size()) {
    throw DataError("weight count does not match vocabulary size");
  }
}

double TrainedClassifier::Margin(const SparseVector& row) const {
  return Dot(row, weights_) + bias_;
}

double TrainedClassifier::ProbabilityPositive(
    std::span<const std::string> tokens) const {
  const double p = Sigmoid(Margin(vectorizer_.Transform(tokens)));
  // Keep strictly inside (0, 1) even for saturated margins.
  return std::clamp(p, 1e-300, std::nextafter(1.0, 0.0));
}

Sentiment TrainedClassifier::Predict(std::span<const std::string> tokens) const {
  return Margin(vectorizer_.Transform(tokens)) >= 0.0 ? Sentiment::kPositive
                                                      : Sentiment::kNegative;
}

double TrainedClassifier::Coefficient(std::string_view word) const {
  const auto index = vectorizer_.IndexOf(word);
  if (!index) {
    throw DataError("word '" + std::string(word) + "' is not in the vocabulary");
  }
  return weights_[*index];
}

void TrainedClassifier::Save(const std::filesystem::path& path) const {
  nlohmann::json model;
  model["format"] = "unintuit-model";
  model["version"] = kModelFormatVersion;
  model["vocabulary"] = vectorizer_.terms();
  model["idf"] = vectorizer_.idf();
  model["stopwords"] = vectorizer_.stopwords();
  model["weights"] = weights_;
  model["bias"] = bias_;
  model["min_df"] = min_df_;
  model["metrics"] = {{"precision", metrics_.precision},
                      {"recall", metrics_.recall},
                      {"f1", metrics_.f1},
                      {"accuracy", metrics_.accuracy},
                      {"n_test", metrics_.n_test}};
  model["train_config"] = {{"learning_rate", config_.learning_rate},
                           {"l2", config_.l2},
                           {"max_iterations", config_.max_iterations},
                           {"tolerance", config_.tolerance},
                           {"test_fraction", config_.test_fraction},
                           {"seed", config_.seed}};
  std::ofstream output(path, std::ios::trunc);
  if (!output) throw DataError("cannot write model file " + path.string());
  output << model.dump() << '\n';
  if (!output) throw DataError("failed writing " + path.string());
}

TrainedClassifier TrainedClassifier::Load(const std::filesystem::path& path) {
  std::ifstream input(path);
  if (!input) throw DataError("cannot open model file " + path.string());
  try {
    const nlohmann::json model = nlohmann::json::parse(input);
    if (model.at("format") != "unintuit-model") {
      throw DataError(path.string() + " is not a model file");
    }
    if (model.at("version").get<int>() != kModelFormatVersion) {
      throw DataError(path.string() + ": unsupported model version " +
                      model.at("version").dump());
    }
    EvalMetrics metrics;
    const auto& m = model.at("metrics");
    metrics.precision = m.at("precision");
    metrics.recall = m.at("recall");
    metrics.f1 = m.at("f1");
    metrics.accuracy = m.at("accuracy");
    metrics.n_test = m.at("n_test");
    TrainConfig config;
    const auto& c = model.at("train_config");
    config.learning_rate = c.at("learning_rate");
    config.l2 = c.at("l2");
    config.max_iterations = c.at("max_iterations");
    config.tolerance = c.at("tolerance");
    config.test_fraction = c.at("test_fraction");
    config.seed = c.at("seed");
    Vectorizer vectorizer(model.at("vocabulary").get<std::vector<std::string>>(),
                          model.at("idf").get<std::vector<double>>(),
                          model.at("stopwords").get<std::set<std::string>>());
    return TrainedClassifier(std::move(vectorizer),
                             model.at("weights").get<std::vector<double>>(),
                             model.at("bias").get<double>(), metrics, config,
                             model.at("min_df").get<std::size_t>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": malformed model file (" + e.what() +
                    ")");
  }
}

TrainedClassifier Train(const Corpus& corpus, Vectorizer vectorizer,
                        const TrainConfig& config, std::size_t min_df) {
  if (corpus.CountLabel(Sentiment::kPositive) == 0 ||
      corpus.CountLabel(Sentiment::kNegative) == 0) {
    throw DataError("training corpus must contain both labels");
  }
  const Split split = StratifiedSplit(corpus, config.test_fraction, config.seed);
  const DesignMatrix train = BuildDesign(corpus, vectorizer, split.train);
  FitResult fit = FitLogistic(train, config);

  std::vector<Sentiment> truth;
  std::vector<Sentiment> predicted;
  TrainedClassifier model(std::move(vectorizer), std::move(fit.weights),
                          fit.bias, EvalMetrics{}, config, min_df);
  for (std::size_t index : split.test) {
    const Document& doc = corpus.document(index);
    truth.push_back(doc.label);
    predicted.push_back(model.Predict(doc.tokens));
  }
  return TrainedClassifier(model.vectorizer(), model.weights(), model.bias(),
                           EvalMetrics::FromPredictions(truth, predicted),
                           config, min_df);
}

TopFeatures RankFeatures(const TrainedClassifier& model, std::size_t k) {
  const std::size_t vocab = model.vectorizer().size();
  if (k == 0) throw UsageError("top-k must be at least 1");
  if (k > vocab / 2) {
    throw UsageError("top-k " + std::to_string(k) +
                     " exceeds half the vocabulary (" + std::to_string(vocab) +
                     ")");
  }
  const auto& terms = model.vectorizer().terms();
  const auto& weights = model.weights();
  std::vector<std::size_t> order(vocab);
  std::iota(order.begin(), order.end(), 0);

  auto take = [&](bool descending) {
    std::partial_sort(order.begin(), order.begin() + k, order.end(),
                      [&](std::size_t a, std::size_t b) {
                        return RankBefore(weights[a], terms[a], weights[b],
                                          terms[b], descending);
                      });
    std::vector<FeatureScore> scores;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = order[i];
      scores.push_back({terms[j], weights[j], static_cast<int>(i + 1),
                        weights[j] > 0 ? Sentiment::kPositive
                                       : Sentiment::kNegative});
    }
    return scores;
  };
  TopFeatures top;
  top.positive = take(true);
  top.negative = take(false);
  return top;
}

FeatureScore ScoreFeature(const TrainedClassifier& model,
                          std::string_view word) {
  FeatureScore score;
  score.word = std::string(word);
  score.coefficient = model.Coefficient(word);
  score.model_sentiment =
      score.coefficient > 0 ? Sentiment::kPositive : Sentiment::kNegative;
  const bool descending = score.model_sentiment == Sentiment::kPositive;
  const auto& terms = model.vectorizer().terms();
  const auto& weights = model.weights();
  int ahead = 0;
  for (std::size_t j = 0; j < terms.size(); ++j) {
    if (RankBefore(weights[j], terms[j], score.coefficient, score.word,
                   descending)) {
      ++ahead;
    }
  }
  score.rank = ahead + 1;
  return score;
}

AblationResult Ablate(const TrainedClassifier& model, const Corpus& corpus,
                      std::string_view word) {
  if (!model.vectorizer().IndexOf(word)) {
    throw DataError("cannot ablate '" + std::string(word) +
                    "': not in the vocabulary");
  }
  const TrainedClassifier ablated =
      Train(corpus, model.vectorizer().Without(word), model.config(),
            model.min_df());
  const Split split = StratifiedSplit(corpus, model.config().test_fraction,
                                      model.config().seed);
  AblationResult result;
  result.word = std::string(word);
  std::vector<Sentiment> truth, full_pred, ablated_pred;
  for (std::size_t index : split.test) {
    const Document& doc = corpus.document(index);
    result.test_ids.push_back(doc.id);
    truth.push_back(doc.label);
    full_pred.push_back(model.Predict(doc.tokens));
    ablated_pred.push_back(ablated.Predict(doc.tokens));
    result.full_correct.push_back(full_pred.back() == doc.label);
    result.ablated_correct.push_back(ablated_pred.back() == doc.label);
  }
  result.full_metrics = EvalMetrics::FromPredictions(truth, full_pred);
  result.ablated_metrics = EvalMetrics::FromPredictions(truth, ablated_pred);
  result.test = McNemarTest(result.full_correct, result.ablated_correct);
  result.significant =
      result.test.only_first_correct > result.test.only_second_correct &&
      result.test.p_value < kAblationSignificance;
  return result;
}

}  // namespace unintuit

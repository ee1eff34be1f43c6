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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.h"
#include "synthetic.h"
#include "unintuit/random.h"

namespace unintuit {
namespace {

using ::unintuit::testing::MakeCorpus;
using ::unintuit::testing::RandomDesign;

// Independent dense reference: Newton's method on the same objective, with
// the bias as the last coordinate.
std::vector<double> NewtonReference(const std::vector<std::vector<double>>& x,
                                    const std::vector<double>& y, double l2) {
  const std::size_t n = x.size();
  const std::size_t d = x[0].size() + 1;
  std::vector<double> theta(d, 0.0);
  for (int iteration = 0; iteration < 100; ++iteration) {
    std::vector<double> grad(d, 0.0);
    std::vector<std::vector<double>> hess(d, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> row = x[i];
      row.push_back(1.0);
      double z = 0.0;
      for (std::size_t j = 0; j < d; ++j) z += row[j] * theta[j];
      const double p = 1.0 / (1.0 + std::exp(-z));
      for (std::size_t j = 0; j < d; ++j) {
        grad[j] += (p - y[i]) * row[j] / n;
        for (std::size_t k = 0; k < d; ++k) {
          hess[j][k] += p * (1 - p) * row[j] * row[k] / n;
        }
      }
    }
    for (std::size_t j = 0; j + 1 < d; ++j) {
      grad[j] += l2 * theta[j];
      hess[j][j] += l2;
    }
    // Solve hess * step = grad by Gaussian elimination with pivoting.
    std::vector<double> step = grad;
    for (std::size_t col = 0; col < d; ++col) {
      std::size_t pivot = col;
      for (std::size_t r = col + 1; r < d; ++r) {
        if (std::abs(hess[r][col]) > std::abs(hess[pivot][col])) pivot = r;
      }
      std::swap(hess[col], hess[pivot]);
      std::swap(step[col], step[pivot]);
      for (std::size_t r = col + 1; r < d; ++r) {
        const double f = hess[r][col] / hess[col][col];
        for (std::size_t k = col; k < d; ++k) hess[r][k] -= f * hess[col][k];
        step[r] -= f * step[col];
      }
    }
    for (std::size_t col = d; col-- > 0;) {
      for (std::size_t k = col + 1; k < d; ++k) step[col] -= hess[col][k] * step[k];
      step[col] /= hess[col][col];
    }
    double largest = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      theta[j] -= step[j];
      largest = std::max(largest, std::abs(step[j]));
    }
    if (largest < 1e-14) break;
  }
  return theta;
}

TrainedClassifier FixedModel(const std::vector<std::string>& terms,
                             const std::vector<double>& weights) {
  Vectorizer vectorizer(terms, std::vector<double>(terms.size(), 1.0), {});
  return TrainedClassifier(std::move(vectorizer), weights, 0.0, {}, {}, 1);
}

TEST(TrainTest, SeparableSigns) {
  std::vector<std::pair<Sentiment, std::string>> docs;
  for (int i = 0; i < 20; ++i) {
    docs.push_back({Sentiment::kPositive, "good item " + std::to_string(i)});
    docs.push_back({Sentiment::kNegative, "bad item " + std::to_string(i)});
  }
  const Corpus corpus = MakeCorpus(docs);
  const TrainedClassifier model =
      Train(corpus, Vectorizer::Fit(corpus, {}, 2), TrainConfig{});
  EXPECT_GT(model.Coefficient("good"), 0.0);
  EXPECT_LT(model.Coefficient("bad"), 0.0);
  EXPECT_EQ(model.metrics().n_test, 4u);
  EXPECT_DOUBLE_EQ(model.metrics().f1, 1.0);
}

TEST(TrainTest, SixDocWeightsMatchNewtonReference) {
  const Corpus corpus = MakeCorpus({{Sentiment::kPositive, "good fit good"},
                                    {Sentiment::kPositive, "great fit"},
                                    {Sentiment::kPositive, "good price"},
                                    {Sentiment::kNegative, "bad fit"},
                                    {Sentiment::kNegative, "bad price bad"},
                                    {Sentiment::kNegative, "great price"}});
  TrainConfig config;
  config.test_fraction = 0.0;
  config.l2 = 0.05;
  config.tolerance = 1e-10;
  config.max_iterations = 200000;
  const Vectorizer vectorizer = Vectorizer::Fit(corpus, {}, 1);
  const TrainedClassifier model = Train(corpus, vectorizer, config);

  std::vector<std::vector<double>> dense;
  std::vector<double> y;
  for (const Document& doc : corpus.documents()) {
    std::vector<double> row(vectorizer.size(), 0.0);
    for (const auto& [j, v] : vectorizer.Transform(doc.tokens)) row[j] = v;
    dense.push_back(row);
    y.push_back(doc.label == Sentiment::kPositive ? 1.0 : 0.0);
  }
  const std::vector<double> reference = NewtonReference(dense, y, config.l2);
  for (std::size_t j = 0; j < vectorizer.size(); ++j) {
    EXPECT_NEAR(model.weights()[j], reference[j], 1e-4) << vectorizer.term(j);
  }
  EXPECT_NEAR(model.bias(), reference.back(), 1e-4);
}

TEST(TrainTest, GradientMatchesFiniteDifferences) {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const DesignMatrix data =
        RandomDesign(rng, 3 + rng.UniformIndex(8), 1 + rng.UniformIndex(6));
    std::vector<double> w(data.n_features);
    for (double& v : w) v = rng.UniformReal() * 4 - 2;
    const double bias = rng.UniformReal() - 0.5;
    const double l2 = 0.1 * rng.UniformReal();
    EXPECT_LT(testing::GradientCheckError(data, w, bias, l2), 1e-5);
  }
}

TEST(TrainTest, SingleLabelCorpusFails) {
  const Corpus corpus = MakeCorpus({{Sentiment::kPositive, "a"},
                                    {Sentiment::kPositive, "b"}});
  EXPECT_THROW(Train(corpus, Vectorizer::Fit(corpus, {}, 1), {}), DataError);
}

TEST(TrainTest, NonConvergenceReportsLoss) {
  const Corpus corpus = MakeCorpus({{Sentiment::kPositive, "a b"},
                                    {Sentiment::kNegative, "b c"}});
  TrainConfig config;
  config.test_fraction = 0.0;
  config.max_iterations = 2;
  try {
    Train(corpus, Vectorizer::Fit(corpus, {}, 1), config);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("final loss"), std::string::npos);
  }
}

TEST(TrainTest, IdfScalingLeavesPredictionsUnchanged) {
  const Corpus corpus = testing::GenerateSynthetic({.n_docs = 300, .seed = 4});
  const Vectorizer base = Vectorizer::Fit(corpus, DefaultStopwords(), 3);
  for (double factor : {0.25, 3.0}) {
    std::vector<double> idf = base.idf();
    for (double& v : idf) v *= factor;
    const Vectorizer scaled(base.terms(), idf, base.stopwords());
    const TrainedClassifier a = Train(corpus, base, {});
    const TrainedClassifier b = Train(corpus, scaled, {});
    for (const Document& doc : corpus.documents()) {
      ASSERT_EQ(a.Predict(doc.tokens), b.Predict(doc.tokens));
    }
  }
}

TEST(TrainTest, SaveLoadRoundTrip) {
  testing::TempDir dir;
  const Corpus corpus = testing::GenerateSynthetic({.n_docs = 200, .seed = 2});
  const TrainedClassifier model =
      Train(corpus, Vectorizer::Fit(corpus, DefaultStopwords(), 3), {}, 3);
  model.Save(dir / "model.json");
  const TrainedClassifier back = TrainedClassifier::Load(dir / "model.json");
  EXPECT_EQ(back.vectorizer().terms(), model.vectorizer().terms());
  EXPECT_EQ(back.weights(), model.weights());
  EXPECT_EQ(back.bias(), model.bias());
  EXPECT_EQ(back.min_df(), 3u);
  EXPECT_EQ(back.config().seed, model.config().seed);
  EXPECT_EQ(back.metrics().f1, model.metrics().f1);
  testing::WriteFile(dir / "bad.json", "{\"format\":\"other\"}");
  EXPECT_THROW(TrainedClassifier::Load(dir / "bad.json"), DataError);
}

TEST(SplitTest, StratifiedFloorPerLabel) {
  std::vector<std::pair<Sentiment, std::string>> docs;
  for (int i = 0; i < 37; ++i) docs.push_back({Sentiment::kPositive, "x"});
  for (int i = 0; i < 23; ++i) docs.push_back({Sentiment::kNegative, "x"});
  const Corpus corpus = MakeCorpus(docs);
  const Split split = StratifiedSplit(corpus, 0.1, 13);
  EXPECT_EQ(split.test.size(), 3u + 2u);
  std::vector<std::size_t> all = split.train;
  all.insert(all.end(), split.test.begin(), split.test.end());
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> expected(60);
  std::iota(expected.begin(), expected.end(), 0);
  EXPECT_EQ(all, expected);
  EXPECT_EQ(StratifiedSplit(corpus, 0.1, 13).test, split.test);
  EXPECT_THROW(StratifiedSplit(corpus, 1.0, 13), UsageError);
}

TEST(RankFeaturesTest, SmallExample) {
  const TrainedClassifier model = FixedModel({"a", "b", "c", "d"},
                                             {2.0, -1.0, 0.5, -3.0});
  TopFeatures top = RankFeatures(model, 1);
  ASSERT_EQ(top.positive.size(), 1u);
  EXPECT_EQ(top.positive[0].word, "a");
  EXPECT_EQ(top.negative[0].word, "d");
  top = RankFeatures(model, 2);
  EXPECT_EQ(top.positive[1].word, "c");
  EXPECT_EQ(top.negative[1].word, "b");
  EXPECT_EQ(top.negative[1].rank, 2);
  EXPECT_EQ(top.negative[1].model_sentiment, Sentiment::kNegative);
  EXPECT_THROW(RankFeatures(model, 0), UsageError);
  EXPECT_THROW(RankFeatures(model, 3), UsageError);
}

TEST(RankFeaturesTest, MatchesFullSort) {
  Rng rng(8);
  std::vector<std::string> terms;
  std::vector<double> weights;
  for (int j = 0; j < 100; ++j) {
    char name[8];
    std::snprintf(name, sizeof(name), "w%03d", j);
    terms.push_back(name);
    // Coarse values force ties.
    weights.push_back(std::round((rng.UniformReal() * 4 - 2) * 10) / 10);
  }
  const TrainedClassifier model = FixedModel(terms, weights);
  std::vector<std::size_t> order(terms.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t k : {1u, 7u, 25u, 50u}) {
    const TopFeatures top = RankFeatures(model, k);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) {
      return std::tie(weights[b], terms[a]) < std::tie(weights[a], terms[b]);
    });
    std::set<std::string> seen;
    for (std::size_t i = 0; i < k; ++i) {
      EXPECT_EQ(top.positive[i].word, terms[order[i]]);
      seen.insert(top.positive[i].word);
    }
    // Negative side: the same order read from the end.
    for (std::size_t i = 0; i < k; ++i) {
      EXPECT_EQ(top.negative[i].word, terms[order[order.size() - 1 - i]]);
      seen.insert(top.negative[i].word);
    }
    EXPECT_EQ(seen.size(), 2 * k);
  }
}

TEST(RankFeaturesTest, ScoreFeatureAgreesWithRanking) {
  const TrainedClassifier model = FixedModel({"a", "b", "c", "d", "e", "f"},
                                             {2.0, -1.0, 0.5, -3.0, 0.5, -1.0});
  const TopFeatures top = RankFeatures(model, 3);
  for (const auto* side : {&top.positive, &top.negative}) {
    for (const FeatureScore& f : *side) {
      const FeatureScore single = ScoreFeature(model, f.word);
      EXPECT_EQ(single.rank, f.rank) << f.word;
      EXPECT_EQ(single.model_sentiment, f.model_sentiment);
    }
  }
  EXPECT_THROW(ScoreFeature(model, "zzz"), DataError);
}

TEST(AblateTest, DeterminingWordIsSignificant) {
  std::vector<std::pair<Sentiment, std::string>> docs;
  Rng rng(3);
  const auto& filler = testing::FillerWords();
  for (int i = 0; i < 400; ++i) {
    std::string text;
    for (int t = 0; t < 6; ++t) text += filler[rng.UniformIndex(filler.size())] + " ";
    const bool positive = i % 2 == 0;
    docs.push_back({positive ? Sentiment::kPositive : Sentiment::kNegative,
                    positive ? text + "fit" : text});
  }
  const Corpus corpus = MakeCorpus(docs);
  const TrainedClassifier model =
      Train(corpus, Vectorizer::Fit(corpus, {}, 1), {});
  const AblationResult result = Ablate(model, corpus, "fit");
  EXPECT_TRUE(result.significant);
  EXPECT_LT(result.test.p_value, 0.05);
  EXPECT_GT(result.full_metrics.accuracy, result.ablated_metrics.accuracy);
  EXPECT_EQ(result.test_ids.size(), 40u);
}

TEST(AblateTest, WordAbsentFromTestSetIsNotSignificant) {
  std::vector<std::pair<Sentiment, std::string>> docs;
  for (int i = 0; i < 60; ++i) {
    docs.push_back({i % 2 ? Sentiment::kNegative : Sentiment::kPositive,
                    i % 2 ? "bad thing" : "good thing"});
  }
  const Split split = StratifiedSplit(MakeCorpus(docs), 0.1, 13);
  for (std::size_t i = 0; i < 3; ++i) docs[split.train[i]].second += " rare";
  const Corpus corpus = MakeCorpus(docs);
  const TrainedClassifier model =
      Train(corpus, Vectorizer::Fit(corpus, {}, 1), {});
  const AblationResult result = Ablate(model, corpus, "rare");
  EXPECT_FALSE(result.significant);
  EXPECT_EQ(result.full_correct, result.ablated_correct);
  EXPECT_EQ(result.test.p_value, 1.0);
  EXPECT_THROW(Ablate(model, corpus, "missing"), DataError);
}

TEST(AblateTest, PlantedStrongVersusNoise) {
  testing::SyntheticOptions options;
  options.n_docs = 1200;
  options.seed = 21;
  options.strong_word = "stellar";
  options.strong_rate = 0.4;
  options.noise_word = "widget";
  options.noise_rate = 0.2;
  const Corpus corpus = testing::GenerateSynthetic(options);
  const TrainedClassifier model =
      Train(corpus, Vectorizer::Fit(corpus, DefaultStopwords(), 5), {}, 5);
  EXPECT_TRUE(Ablate(model, corpus, "stellar").significant);
  EXPECT_FALSE(Ablate(model, corpus, "widget").significant);
}

}  // namespace
}  // namespace unintuit

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

#include "unintuit/explain.h"

#include <gtest/gtest.h>

#include <algorithm>

#include "synthetic.h"
#include "unintuit/random.h"
#include "unintuit/report.h"

namespace unintuit {
namespace {

using ::unintuit::testing::MakeCorpus;

class FailingBackend : public ScorerBackend {
 public:
  std::string id() const override { return "failing"; }
  std::vector<double> Score(const ScoreRequest&) const override {
    throw BackendError("service down", /*retryable=*/true);
  }
};

bool ContainsToken(const std::string& text, const std::string& word) {
  const auto tokens = Tokenize(text);
  return std::find(tokens.begin(), tokens.end(), word) != tokens.end();
}

struct Fixture {
  Corpus corpus = testing::GenerateSynthetic({.n_docs = 1500, .seed = 11});
  TrainedClassifier model =
      Train(corpus, Vectorizer::Fit(corpus, DefaultStopwords(), 5), {}, 5);
  IntuitionScorer scorer{
      std::make_shared<LexiconScorer>(LexiconScorer::Default())};
  BagOfTokensEmbedder embedder = BagOfTokensEmbedder::FromCorpus(corpus);
};

const Fixture& Shared() {
  static const Fixture fixture;
  return fixture;
}

TEST(DistributionTest, Ratios) {
  std::vector<std::pair<Sentiment, std::string>> docs;
  for (int i = 0; i < 80; ++i) docs.push_back({Sentiment::kPositive, "fit ok"});
  for (int i = 0; i < 20; ++i) docs.push_back({Sentiment::kNegative, "fit no"});
  docs.push_back({Sentiment::kNegative, "only here"});
  const Corpus corpus = MakeCorpus(docs);
  const LabelDistribution d = Distribution(corpus, "fit");
  EXPECT_EQ(d.n_pos, 80u);
  EXPECT_EQ(d.n_neg, 20u);
  EXPECT_DOUBLE_EQ(d.p_pos_posterior, 0.8);
  EXPECT_EQ(Distribution(corpus, "only").p_pos_posterior, 0.0);
  try {
    Distribution(corpus, "zebra");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("no occurrences"), std::string::npos);
  }
}

TEST(DistributionTest, MatchesScan) {
  const Corpus& corpus = Shared().corpus;
  for (const char* word : {"problems", "money", "great", "box", "the"}) {
    std::size_t pos = 0, neg = 0;
    for (const Document& doc : corpus.documents()) {
      if (!ContainsToken(doc.text, word)) continue;
      (doc.label == Sentiment::kPositive ? pos : neg)++;
    }
    const LabelDistribution d = Distribution(corpus, word);
    EXPECT_EQ(d.n_pos, pos) << word;
    EXPECT_EQ(d.n_neg, neg) << word;
    EXPECT_EQ(d.p_pos_posterior,
              static_cast<double>(pos) / static_cast<double>(pos + neg));
  }
}

TEST(SampleExamplesTest, SizesAndDeterminism) {
  std::vector<std::pair<Sentiment, std::string>> docs;
  for (int i = 0; i < 100; ++i) {
    docs.push_back({Sentiment::kPositive, "fit pos " + std::to_string(i)});
    docs.push_back({Sentiment::kNegative, "fit neg " + std::to_string(i)});
  }
  for (int i = 0; i < 3; ++i) {
    docs.push_back({Sentiment::kPositive, "rare " + std::to_string(i)});
  }
  const Corpus corpus = MakeCorpus(docs);
  const ExampleSet a = SampleExamples(corpus, "fit", 25, 5);
  EXPECT_EQ(a.positive.size(), 25u);
  EXPECT_EQ(a.negative.size(), 25u);
  const ExampleSet b = SampleExamples(corpus, "fit", 25, 5);
  for (std::size_t i = 0; i < 25; ++i) {
    EXPECT_EQ(a.positive[i].id, b.positive[i].id);
    EXPECT_EQ(a.negative[i].id, b.negative[i].id);
  }
  std::set<std::string> unique;
  for (const auto& doc : a.positive) {
    unique.insert(doc.id);
    EXPECT_TRUE(ContainsToken(doc.text, "fit"));
  }
  EXPECT_EQ(unique.size(), 25u);
  const ExampleSet rare = SampleExamples(corpus, "rare", 25, 5);
  EXPECT_EQ(rare.positive.size(), 3u);
  EXPECT_TRUE(rare.negative.empty());
  EXPECT_THROW(SampleExamples(corpus, "fit", 0, 5), UsageError);
}

TEST(BuildBundleTest, MoneyPatternsOnBothSides) {
  const Fixture& f = Shared();
  const ExplanationBundle bundle = BuildBundle(
      f.corpus, f.model, f.scorer, f.embedder, "money", ExplainConfig{});
  EXPECT_EQ(bundle.diagnosis.category, FeatureCategory::kParadoxNegative);
  const auto texts = [](const PatternExplanation& e) {
    std::vector<std::string> out;
    for (const auto& p : e.patterns.selected) out.push_back(p.Text());
    return out;
  };
  const auto pos = texts(bundle.patterns_pos);
  const auto neg = texts(bundle.patterns_neg);
  EXPECT_NE(std::find(pos.begin(), pos.end(), "worth the money"), pos.end());
  EXPECT_NE(std::find(neg.begin(), neg.end(), "waste of money"), neg.end());
  EXPECT_EQ(bundle.examples.positive.size(),
            std::min<std::size_t>(25, bundle.distribution.n_pos));
  EXPECT_EQ(bundle.examples.negative.size(),
            std::min<std::size_t>(25, bundle.distribution.n_neg));
}

TEST(BuildBundleTest, ExamplesAndPatternIdsAreConsistent) {
  const Fixture& f = Shared();
  for (const char* word : {"problems", "money", "great"}) {
    const ExplanationBundle bundle = BuildBundle(
        f.corpus, f.model, f.scorer, f.embedder, word, ExplainConfig{});
    for (const auto* side : {&bundle.examples.positive, &bundle.examples.negative}) {
      for (const ExampleDoc& doc : *side) {
        EXPECT_TRUE(ContainsToken(doc.text, word)) << doc.id;
      }
    }
    for (Sentiment s : kBothSentiments) {
      const PatternExplanation& e = bundle.patterns(s);
      ASSERT_EQ(e.example_ids.size(), e.patterns.selected.size());
      for (std::size_t i = 0; i < e.example_ids.size(); ++i) {
        const auto& source = e.patterns.selected[i].source_doc_ids;
        EXPECT_LE(e.example_ids[i].size(), 3u);
        EXPECT_EQ(e.example_ids[i].size(), std::min<std::size_t>(3, source.size()));
        for (const std::string& id : e.example_ids[i]) {
          EXPECT_NE(std::find(source.begin(), source.end(), id), source.end());
        }
        EXPECT_GT(e.patterns.selected[i].p_score, 0.8);
      }
    }
  }
}

TEST(BuildBundleTest, Reproducible) {
  const Fixture& f = Shared();
  const auto build = [&] {
    return CanonicalJson(ToJson(BuildBundle(f.corpus, f.model, f.scorer,
                                            f.embedder, "problems", {})));
  };
  EXPECT_EQ(build(), build());
}

TEST(BuildBundleTest, Preconditions) {
  const Fixture& f = Shared();
  // Present in the corpus but below min_df.
  std::vector<std::pair<Sentiment, std::string>> docs;
  for (int i = 0; i < 10; ++i) {
    docs.push_back({i % 2 ? Sentiment::kNegative : Sentiment::kPositive,
                    i % 2 ? "bad box" : "good box"});
  }
  docs.push_back({Sentiment::kPositive, "good unusual box"});
  const Corpus corpus = MakeCorpus(docs);
  const TrainedClassifier model =
      Train(corpus, Vectorizer::Fit(corpus, {}, 2), {}, 2);
  EXPECT_THROW(BuildBundle(corpus, model, f.scorer, f.embedder, "unusual", {}),
               DataError);

  const IntuitionScorer failing(std::make_shared<FailingBackend>());
  try {
    BuildBundle(f.corpus, f.model, failing, f.embedder, "money", {});
    FAIL() << "expected BackendError";
  } catch (const BackendError& e) {
    EXPECT_TRUE(e.retryable());
    EXPECT_EQ(std::string(e.what()).rfind("intuition: ", 0), 0u);
  }
}

}  // namespace
}  // namespace unintuit

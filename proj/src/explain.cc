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

#include <algorithm>

#include "unintuit/random.h"

namespace unintuit {
namespace {

template <typename Fn>
auto Stage(std::string_view stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const BackendError& e) {
    throw BackendError(std::string(stage) + ": " + e.what(), e.retryable());
  } catch (const UsageError& e) {
    throw UsageError(std::string(stage) + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(std::string(stage) + ": " + e.what());
  }
}

std::vector<ExampleDoc> DrawSide(const Corpus& corpus, std::string_view word,
                                 Sentiment label, std::size_t per_side,
                                 std::uint64_t seed) {
  const auto postings = corpus.Postings(word, label);
  Rng rng(DeriveSeed(seed, "examples/" + std::string(word) + "/" +
                               std::string(SentimentName(label))));
  std::vector<ExampleDoc> side;
  for (std::size_t pick : rng.SampleIndices(postings.size(), per_side)) {
    const Document& doc = corpus.document(postings[pick]);
    side.push_back({doc.id, doc.text});
  }
  return side;
}

PatternExplanation ExplainPatterns(const Corpus& corpus, std::string_view word,
                                   Sentiment sentiment,
                                   const IntuitionScorer& scorer,
                                   const EmbeddingProvider& embedder,
                                   const ExplainConfig& config) {
  const std::vector<CandidatePattern> candidates =
      Stage("mine", [&] { return Mine(corpus, word, sentiment, scorer,
                                      config.mine); });
  PatternExplanation out;
  out.patterns = Stage("select", [&] {
    return SelectDiverse(candidates, embedder, config.mine.lambda,
                         config.mine.max_patterns);
  });
  for (const CandidatePattern& pattern : out.patterns.selected) {
    std::vector<std::string> ids = pattern.source_doc_ids;
    Rng rng(DeriveSeed(config.seed, "pattern-examples/" +
                                        std::string(SentimentName(sentiment)) +
                                        "/" + pattern.Text()));
    rng.Shuffle(std::span<std::string>(ids));
    ids.resize(std::min(ids.size(), config.examples_per_pattern));
    out.example_ids.push_back(std::move(ids));
  }
  return out;
}

}  // namespace

LabelDistribution Distribution(const Corpus& corpus, std::string_view word) {
  LabelDistribution distribution;
  distribution.word = std::string(word);
  distribution.n_pos = corpus.Postings(word, Sentiment::kPositive).size();
  distribution.n_neg = corpus.Postings(word, Sentiment::kNegative).size();
  const std::size_t total = distribution.n_pos + distribution.n_neg;
  if (total == 0) {
    throw DataError("no occurrences of '" + std::string(word) + "'");
  }
  distribution.p_pos_posterior =
      static_cast<double>(distribution.n_pos) / static_cast<double>(total);
  return distribution;
}

ExampleSet SampleExamples(const Corpus& corpus, std::string_view word,
                          std::size_t per_side, std::uint64_t seed) {
  if (per_side < 1) throw UsageError("examples per side must be at least 1");
  ExampleSet examples;
  examples.word = std::string(word);
  examples.per_side = per_side;
  examples.positive =
      DrawSide(corpus, word, Sentiment::kPositive, per_side, seed);
  examples.negative =
      DrawSide(corpus, word, Sentiment::kNegative, per_side, seed);
  return examples;
}

ExplanationBundle BuildBundle(const Corpus& corpus,
                              const TrainedClassifier& model,
                              const IntuitionScorer& scorer,
                              const EmbeddingProvider& embedder,
                              std::string_view word,
                              const ExplainConfig& config) {
  if (!model.vectorizer().IndexOf(word)) {
    throw DataError("'" + std::string(word) +
                    "' is not in the model vocabulary");
  }
  ExplanationBundle bundle;
  bundle.word = std::string(word);
  const FeatureScore feature = ScoreFeature(model, word);
  const IntuitionScore intuition = Stage(
      "intuition", [&] { return scorer.ScoreWord(corpus.category(), word); });
  bundle.diagnosis = Stage("diagnose", [&] {
    return Diagnose(std::span(&feature, 1), std::span(&intuition, 1),
                    config.thresholds)
        .front();
  });
  bundle.distribution =
      Stage("distribution", [&] { return Distribution(corpus, word); });
  bundle.examples = Stage("examples", [&] {
    return SampleExamples(corpus, word, config.examples_per_side, config.seed);
  });
  bundle.patterns_pos = ExplainPatterns(corpus, word, Sentiment::kPositive,
                                        scorer, embedder, config);
  bundle.patterns_neg = ExplainPatterns(corpus, word, Sentiment::kNegative,
                                        scorer, embedder, config);
  return bundle;
}

}  // namespace unintuit

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

// Contextual pattern mining.
//
// For an anchor word and a target sentiment, every review of that sentiment
// containing the anchor is scanned once: windows around the first anchor
// occurrence are tried shortest first, and the first one the zero-shot scorer
// rates above the threshold for the sentiment becomes a candidate pattern.
// Identical phrases merge and accumulate support. A greedy MMR-style pass
// then picks frequent phrases that are not near-duplicates of each other.

#ifndef UNINTUIT_MINER_H_
#define UNINTUIT_MINER_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "unintuit/corpus.h"
#include "unintuit/intuition.h"

namespace unintuit {

inline constexpr char kEmbedderUrlEnv[] = "UNINTUIT_EMBEDDER_URL";

struct MineConfig {
  int max_left = 5;
  int max_right = 5;
  // A window qualifies when P(sentiment | phrase) > threshold.
  double threshold = 0.8;
  // Also try the anchor on its own (window (0, 0)) before extending.
  bool include_bare_anchor = false;
  double lambda = 0.5;
  std::size_t max_patterns = 5;
  // Per (word, sentiment) cap on scanned reviews; larger sets are sampled.
  std::size_t doc_cap = 500;
  std::uint64_t seed = 7;
  // Worker threads for candidate growth. 1 = inline.
  unsigned threads = 1;
};

struct Window {
  int left = 0;
  int right = 0;

  friend bool operator==(const Window&, const Window&) = default;
};

// All windows in trial order: total length ascending, then left extension
// descending.
std::vector<Window> WindowOrder(const MineConfig& config);

struct CandidatePattern {
  std::vector<std::string> phrase;
  std::string anchor;
  Sentiment sentiment = Sentiment::kPositive;
  double p_score = 0.0;
  std::size_t support = 0;
  std::vector<std::string> source_doc_ids;  // Corpus order.

  std::string Text() const { return JoinTokens(phrase); }
};

// Tries windows around `doc.tokens[anchor_position]` in WindowOrder, skipping
// those that run past either end of the review, and returns the first whose
// score for `sentiment` exceeds the threshold. Throws UsageError when
// `anchor_position` is out of range.
std::optional<CandidatePattern> GrowCandidate(const Document& doc,
                                              std::size_t anchor_position,
                                              Sentiment sentiment,
                                              const IntuitionScorer& scorer,
                                              const MineConfig& config);

// Candidates from every `sentiment` review containing `word` (first
// occurrence per review), merged by exact token sequence. Sorted by support
// descending, then phrase text.
std::vector<CandidatePattern> Mine(const Corpus& corpus, std::string_view word,
                                   Sentiment sentiment,
                                   const IntuitionScorer& scorer,
                                   const MineConfig& config);

// Sparse unit vector: (coordinate, value) sorted by coordinate.
using Embedding = std::vector<std::pair<std::uint64_t, double>>;

double Cosine(const Embedding& a, const Embedding& b);

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string id() const = 0;
  // Unit-norm embedding of a non-empty phrase. Deterministic.
  virtual Embedding Embed(std::span<const std::string> phrase) const = 0;
};

// Offline provider: TF-IDF weighted bag of tokens. Coordinates are token
// hashes, so phrases with disjoint tokens are orthogonal. idf uses the
// smoothed document frequency over the corpus with stopwords included.
class BagOfTokensEmbedder : public EmbeddingProvider {
 public:
  // Uniform weights.
  BagOfTokensEmbedder();
  static BagOfTokensEmbedder FromCorpus(const Corpus& corpus);

  std::string id() const override { return id_; }
  Embedding Embed(std::span<const std::string> phrase) const override;

 private:
  std::unordered_map<std::string, double> idf_;
  double unseen_idf_ = 1.0;
  std::string id_;
};

// Client for an HTTP sentence encoder: POST {"sequence": ...} and expect
// {"embedding": [reals]}.
class RemoteEmbedder : public EmbeddingProvider {
 public:
  explicit RemoteEmbedder(std::string url, int attempts = 3);

  std::string id() const override { return "remote:" + url_; }
  Embedding Embed(std::span<const std::string> phrase) const override;

 private:
  std::string url_;
  int attempts_;
};

// RemoteEmbedder when UNINTUIT_EMBEDDER_URL is set, otherwise the bag of
// tokens fallback fitted on `corpus`.
std::shared_ptr<const EmbeddingProvider> MakeEmbedder(const Corpus& corpus);

struct PatternSet {
  std::vector<CandidatePattern> selected;  // Selection order.
  double lambda = 0.5;
  std::size_t max_patterns = 5;
};

// Greedy selection. The first pick is the most supported candidate (ties by
// phrase text). Each later pick maximizes
//   lambda * support / max_support - (1 - lambda) * max cosine to the picks
// with ties going to higher support, then phrase text.
PatternSet SelectDiverse(std::span<const CandidatePattern> candidates,
                         const EmbeddingProvider& provider, double lambda,
                         std::size_t max_patterns);

}  // namespace unintuit

#endif  // UNINTUIT_MINER_H_

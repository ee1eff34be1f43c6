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

#include "unintuit/miner.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <limits>
#include <map>
#include <sstream>

#include "http_client.h"
#include "json.hpp"
#include "unintuit/random.h"

namespace unintuit {
namespace {

Embedding Normalize(Embedding embedding) {
  double norm = 0.0;
  for (const auto& [coordinate, value] : embedding) norm += value * value;
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw BackendError("embedding has zero or non-finite norm",
                       /*retryable=*/false);
  }
  norm = std::sqrt(norm);
  for (auto& entry : embedding) entry.second /= norm;
  return embedding;
}

// Phrase text order used for every tie-break.
bool PhraseLess(const CandidatePattern& a, const CandidatePattern& b) {
  return a.Text() < b.Text();
}

}  // namespace

std::vector<Window> WindowOrder(const MineConfig& config) {
  std::vector<Window> order;
  const int first_total = config.include_bare_anchor ? 0 : 1;
  for (int total = first_total; total <= config.max_left + config.max_right;
       ++total) {
    for (int left = std::min(total, config.max_left); left >= 0; --left) {
      const int right = total - left;
      if (right > config.max_right) break;
      order.push_back({left, right});
    }
  }
  return order;
}

std::optional<CandidatePattern> GrowCandidate(const Document& doc,
                                              std::size_t anchor_position,
                                              Sentiment sentiment,
                                              const IntuitionScorer& scorer,
                                              const MineConfig& config) {
  if (anchor_position >= doc.tokens.size()) {
    throw UsageError("anchor position " + std::to_string(anchor_position) +
                     " is outside document '" + doc.id + "'");
  }
  const std::size_t room_left = anchor_position;
  const std::size_t room_right = doc.tokens.size() - anchor_position - 1;
  for (const Window& window : WindowOrder(config)) {
    if (static_cast<std::size_t>(window.left) > room_left ||
        static_cast<std::size_t>(window.right) > room_right) {
      continue;
    }
    const auto begin = doc.tokens.begin() + (anchor_position - window.left);
    const auto end = doc.tokens.begin() + (anchor_position + window.right + 1);
    std::vector<std::string> phrase(begin, end);
    const IntuitionScore score = scorer.ScorePhrase(phrase);
    const double p = score.ProbabilityOf(sentiment);
    if (p > config.threshold) {
      CandidatePattern candidate;
      candidate.phrase = std::move(phrase);
      candidate.anchor = doc.tokens[anchor_position];
      candidate.sentiment = sentiment;
      candidate.p_score = p;
      candidate.support = 1;
      candidate.source_doc_ids = {doc.id};
      return candidate;
    }
  }
  return std::nullopt;
}

std::vector<CandidatePattern> Mine(const Corpus& corpus, std::string_view word,
                                   Sentiment sentiment,
                                   const IntuitionScorer& scorer,
                                   const MineConfig& config) {
  const auto postings = corpus.Postings(word, sentiment);
  std::vector<std::size_t> documents(postings.begin(), postings.end());
  if (config.doc_cap > 0 && documents.size() > config.doc_cap) {
    Rng rng(DeriveSeed(config.seed, "mine/" + std::string(word) + "/" +
                                        std::string(SentimentName(sentiment))));
    std::vector<std::size_t> sampled;
    for (std::size_t pick : rng.SampleIndices(documents.size(), config.doc_cap)) {
      sampled.push_back(documents[pick]);
    }
    std::sort(sampled.begin(), sampled.end());
    documents = std::move(sampled);
  }

  auto grow = [&](std::size_t doc_index) -> std::optional<CandidatePattern> {
    const Document& doc = corpus.document(doc_index);
    const auto it = std::find(doc.tokens.begin(), doc.tokens.end(), word);
    if (it == doc.tokens.end()) return std::nullopt;
    return GrowCandidate(doc, static_cast<std::size_t>(it - doc.tokens.begin()),
                         sentiment, scorer, config);
  };

  std::vector<std::optional<CandidatePattern>> grown(documents.size());
  const unsigned threads =
      std::max(1u, std::min<unsigned>(config.threads, documents.size()));
  if (threads == 1) {
    for (std::size_t i = 0; i < documents.size(); ++i) {
      grown[i] = grow(documents[i]);
    }
  } else {
    std::vector<std::future<void>> workers;
    for (unsigned t = 0; t < threads; ++t) {
      workers.push_back(std::async(std::launch::async, [&, t] {
        for (std::size_t i = t; i < documents.size(); i += threads) {
          grown[i] = grow(documents[i]);
        }
      }));
    }
    for (auto& worker : workers) worker.get();
  }

  std::map<std::vector<std::string>, CandidatePattern> merged;
  for (auto& candidate : grown) {
    if (!candidate) continue;
    auto [it, inserted] = merged.try_emplace(candidate->phrase, *candidate);
    if (!inserted) {
      it->second.support += 1;
      it->second.source_doc_ids.push_back(candidate->source_doc_ids.front());
    }
  }
  std::vector<CandidatePattern> candidates;
  candidates.reserve(merged.size());
  for (auto& [phrase, candidate] : merged) {
    candidates.push_back(std::move(candidate));
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const CandidatePattern& a, const CandidatePattern& b) {
                     if (a.support != b.support) return a.support > b.support;
                     return PhraseLess(a, b);
                   });
  return candidates;
}

double Cosine(const Embedding& a, const Embedding& b) {
  double dot = 0.0, norm_a = 0.0, norm_b = 0.0;
  for (const auto& entry : a) norm_a += entry.second * entry.second;
  for (const auto& entry : b) norm_b += entry.second * entry.second;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) {
      ++i;
    } else if (b[j].first < a[i].first) {
      ++j;
    } else {
      dot += a[i].second * b[j].second;
      ++i;
      ++j;
    }
  }
  if (norm_a <= 0.0 || norm_b <= 0.0) return 0.0;
  return dot / std::sqrt(norm_a * norm_b);
}

BagOfTokensEmbedder::BagOfTokensEmbedder() : id_("bag-of-tokens/uniform") {}

BagOfTokensEmbedder BagOfTokensEmbedder::FromCorpus(const Corpus& corpus) {
  BagOfTokensEmbedder embedder;
  const double n = static_cast<double>(corpus.size());
  std::uint64_t fingerprint = Fnv1a64(corpus.category());
  for (const std::string& token : corpus.Tokens()) {
    const double df = static_cast<double>(corpus.DocumentFrequency(token));
    embedder.idf_[token] = std::log((1.0 + n) / (1.0 + df)) + 1.0;
    fingerprint = Fnv1a64(token, fingerprint);
    fingerprint = Fnv1a64(std::to_string(static_cast<long long>(df)),
                          fingerprint);
  }
  embedder.unseen_idf_ = std::log(1.0 + n) + 1.0;
  embedder.id_ = "bag-of-tokens/" + HexDigest(fingerprint);
  return embedder;
}

Embedding BagOfTokensEmbedder::Embed(std::span<const std::string> phrase) const {
  if (phrase.empty()) throw UsageError("cannot embed an empty phrase");
  std::map<std::uint64_t, double> weights;
  for (const std::string& token : phrase) {
    double idf = 1.0;
    if (!idf_.empty()) {
      auto it = idf_.find(token);
      idf = it == idf_.end() ? unseen_idf_ : it->second;
    }
    weights[Fnv1a64(token)] += idf;
  }
  return Normalize(Embedding(weights.begin(), weights.end()));
}

RemoteEmbedder::RemoteEmbedder(std::string url, int attempts)
    : url_(std::move(url)), attempts_(attempts) {
  SplitUrl(url_);  // Validates.
}

Embedding RemoteEmbedder::Embed(std::span<const std::string> phrase) const {
  if (phrase.empty()) throw UsageError("cannot embed an empty phrase");
  const nlohmann::json body = {{"sequence", JoinTokens(phrase)}};
  internal::PostOptions options;
  options.attempts = attempts_;
  const std::string response = internal::PostJson(url_, body.dump(), options);
  std::vector<double> dense;
  try {
    dense = nlohmann::json::parse(response).at("embedding")
                .get<std::vector<double>>();
  } catch (const std::exception& e) {
    throw BackendError("malformed embedder response (" + std::string(e.what()) +
                           "): " + response,
                       /*retryable=*/false);
  }
  Embedding embedding;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) embedding.emplace_back(i, dense[i]);
  }
  return Normalize(std::move(embedding));
}

std::shared_ptr<const EmbeddingProvider> MakeEmbedder(const Corpus& corpus) {
  if (const char* url = std::getenv(kEmbedderUrlEnv); url && *url) {
    return std::make_shared<RemoteEmbedder>(url);
  }
  return std::make_shared<BagOfTokensEmbedder>(
      BagOfTokensEmbedder::FromCorpus(corpus));
}

PatternSet SelectDiverse(std::span<const CandidatePattern> candidates,
                         const EmbeddingProvider& provider, double lambda,
                         std::size_t max_patterns) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw UsageError("lambda must be in [0, 1]");
  }
  if (max_patterns < 1) throw UsageError("max_patterns must be at least 1");
  PatternSet result;
  result.lambda = lambda;
  result.max_patterns = max_patterns;
  if (candidates.empty()) return result;

  std::size_t max_support = 0;
  for (const auto& candidate : candidates) {
    max_support = std::max(max_support, candidate.support);
  }
  std::vector<Embedding> embeddings;
  embeddings.reserve(candidates.size());
  for (const auto& candidate : candidates) {
    embeddings.push_back(provider.Embed(candidate.phrase));
  }

  std::vector<bool> taken(candidates.size(), false);
  // Running max similarity of each candidate to the selected set.
  std::vector<double> redundancy(candidates.size(),
                                 -std::numeric_limits<double>::infinity());
  std::vector<std::size_t> picks;

  auto better = [&](std::size_t a, double score_a, std::size_t b,
                    double score_b) {
    if (score_a != score_b) return score_a > score_b;
    if (candidates[a].support != candidates[b].support) {
      return candidates[a].support > candidates[b].support;
    }
    return PhraseLess(candidates[a], candidates[b]);
  };

  while (picks.size() < max_patterns) {
    std::optional<std::size_t> best;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (taken[i]) continue;
      double score;
      if (picks.empty()) {
        // Most frequent first.
        score = static_cast<double>(candidates[i].support);
      } else {
        const double relevance =
            max_support > 0 ? static_cast<double>(candidates[i].support) /
                                  static_cast<double>(max_support)
                            : 0.0;
        score = lambda * relevance - (1.0 - lambda) * redundancy[i];
      }
      if (!best || better(i, score, *best, best_score)) {
        best = i;
        best_score = score;
      }
    }
    if (!best) break;
    taken[*best] = true;
    picks.push_back(*best);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (taken[i]) continue;
      if (candidates[i].phrase == candidates[*best].phrase) {
        taken[i] = true;  // No duplicate phrases in the output.
        continue;
      }
      redundancy[i] =
          std::max(redundancy[i], Cosine(embeddings[i], embeddings[*best]));
    }
  }
  for (std::size_t pick : picks) result.selected.push_back(candidates[pick]);
  return result;
}

}  // namespace unintuit

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

// Zero-shot sentiment scoring of words and phrases: a probability that a
// human reader takes the text as positive, from a pluggable entailment
// backend, plus a content-addressed cache.

#ifndef UNINTUIT_INTUITION_H_
#define UNINTUIT_INTUITION_H_

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "unintuit/common.h"

namespace unintuit {

inline constexpr char kScorerUrlEnv[] = "UNINTUIT_SCORER_URL";

// One zero-shot classification call. `hypothesis_template` is optional; when
// set, the backend forms each hypothesis by substituting the label for "{}".
struct ScoreRequest {
  std::string sequence;
  std::vector<std::string> candidate_labels;
  std::string hypothesis_template;
};

class ScorerBackend {
 public:
  virtual ~ScorerBackend() = default;

  virtual std::string id() const = 0;

  // One probability per candidate label, aligned and summing to 1. Must be
  // deterministic for a given backend state and request, and safe to call
  // concurrently.
  virtual std::vector<double> Score(const ScoreRequest& request) const = 0;
};

// Offline stand-in for an entailment model.
//
// Each token carries a polarity weight in [-1, 1] (absent = 0). A negator
// among the two tokens before a polar token flips that token's sign. The
// summed contribution is divided by sqrt(token count), so neutral context
// dilutes polarity, and squashed with p_pos = 1 / (1 + exp(-gain * s)).
// Text with no polar tokens scores exactly 0.5.
class LexiconScorer : public ScorerBackend {
 public:
  static constexpr double kDefaultGain = 5.0;

  LexiconScorer(std::map<std::string, double> weights,
                double gain = kDefaultGain);

  // The table shipped in data/mock_lexicon.tsv.
  static LexiconScorer Default();

  // Line-delimited `token<TAB>weight`; blank lines and '#' comments ignored.
  static LexiconScorer FromFile(const std::filesystem::path& path);
  static LexiconScorer FromText(std::string_view text);

  std::string id() const override { return id_; }
  std::vector<double> Score(const ScoreRequest& request) const override;

  double PositiveProbability(std::span<const std::string> tokens) const;

  const std::map<std::string, double>& weights() const { return weights_; }

 private:
  std::map<std::string, double> weights_;
  double gain_;
  std::string id_;
};

// Tokens that flip the polarity of a following polar token.
bool IsNegator(std::string_view token);

// Client for an HTTP zero-shot service.
//
// POST <url> with {"sequence": ..., "candidate_labels": [...]} (plus
// "hypothesis_template" when set); expects {"labels": [...], "scores": [...]}.
class RemoteScorer : public ScorerBackend {
 public:
  struct Options {
    int attempts = 3;
    std::chrono::milliseconds timeout{10000};
    std::chrono::milliseconds backoff{200};
  };

  explicit RemoteScorer(std::string url) : RemoteScorer(std::move(url), {}) {}
  RemoteScorer(std::string url, Options options);

  std::string id() const override { return "remote:" + url_; }
  std::vector<double> Score(const ScoreRequest& request) const override;

 private:
  std::string url_;
  Options options_;
};

// Splits "http://host:port/path" into origin and path ("/" when absent).
std::pair<std::string, std::string> SplitUrl(const std::string& url);

// RemoteScorer when UNINTUIT_SCORER_URL is set, otherwise the lexicon mock
// (from `lexicon_path` when given, else the built-in table).
std::shared_ptr<const ScorerBackend> MakeScorer(
    const std::optional<std::filesystem::path>& lexicon_path);

// "In Amazon reviews of {category} products, word {word} is {label_name}".
std::string BuildWordPrompt(std::string_view category, std::string_view word,
                            std::string_view label_name);

// Non-fatal problems with a word prompt (empty category, empty word).
std::vector<std::string> LintWordPrompt(std::string_view category,
                                        std::string_view word);

struct IntuitionScore {
  std::string text;
  double p_pos = 0.5;
  double p_neg = 0.5;  // Always 1 - p_pos.
  std::string backend_id;
  std::string prompt;

  double ProbabilityOf(Sentiment sentiment) const {
    return sentiment == Sentiment::kPositive ? p_pos : p_neg;
  }
};

// Single-writer / multi-reader store of backend answers keyed by a content
// hash of (backend id, request). Optionally persisted as JSON lines.
class ScoreCache {
 public:
  static std::string KeyFor(std::string_view backend_id,
                            const ScoreRequest& request);

  std::optional<std::vector<double>> Lookup(const std::string& key) const;
  void Insert(const std::string& key, std::vector<double> scores);
  std::size_t size() const;

  // Missing file is not an error.
  void Load(const std::filesystem::path& path);
  // Sorted by key so identical caches serialize identically.
  void Save(const std::filesystem::path& path) const;

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::vector<double>> entries_;
};

// Word / phrase scoring with caching on top of a backend. Thread-safe.
class IntuitionScorer {
 public:
  explicit IntuitionScorer(std::shared_ptr<const ScorerBackend> backend,
                           std::shared_ptr<ScoreCache> cache = nullptr);

  // p_pos for `word` using the category word template.
  IntuitionScore ScoreWord(std::string_view category,
                           std::string_view word) const;

  // p_pos for the bare phrase (tokens joined by spaces). Throws UsageError
  // for an empty phrase.
  IntuitionScore ScorePhrase(std::span<const std::string> phrase) const;

  const ScorerBackend& backend() const { return *backend_; }
  ScoreCache& cache() const { return *cache_; }

  // Requests that reached the backend (cache misses).
  std::size_t backend_calls() const { return backend_calls_.load(); }

 private:
  IntuitionScore Run(const ScoreRequest& request, std::string text,
                     std::string prompt) const;

  std::shared_ptr<const ScorerBackend> backend_;
  std::shared_ptr<ScoreCache> cache_;
  mutable std::atomic<std::size_t> backend_calls_{0};
};

}  // namespace unintuit

#endif  // UNINTUIT_INTUITION_H_

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

#include "unintuit/intuition.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include "http_client.h"
#include "json.hpp"
#include "unintuit/corpus.h"

namespace unintuit {
namespace internal {
extern const char kDefaultLexiconText[];
}  // namespace internal

namespace {

std::string Lowered(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

// Reorders `scores` from the backend's label order into `wanted` order and
// renormalizes. Throws on any mismatch.
std::vector<double> AlignScores(const std::vector<std::string>& wanted,
                                const std::vector<std::string>& labels,
                                const std::vector<double>& scores) {
  if (labels.size() != scores.size() || labels.size() != wanted.size()) {
    throw std::invalid_argument("labels and scores are not aligned");
  }
  std::vector<double> aligned;
  double total = 0.0;
  for (const std::string& label : wanted) {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) {
      throw std::invalid_argument("missing label '" + label + "'");
    }
    const double score = scores[it - labels.begin()];
    if (!std::isfinite(score) || score < 0.0 || score > 1.0) {
      throw std::invalid_argument("score out of [0, 1]");
    }
    aligned.push_back(score);
    total += score;
  }
  if (std::abs(total - 1.0) > 1e-3) {
    throw std::invalid_argument("scores do not sum to 1");
  }
  for (double& score : aligned) score /= total;
  return aligned;
}

}  // namespace

bool IsNegator(std::string_view token) {
  static const std::set<std::string, std::less<>> kNegators = {
      "no",      "not",     "never",    "without", "none",     "nothing",
      "nor",     "hardly",  "cannot",   "can't",   "don't",    "doesn't",
      "didn't",  "isn't",   "wasn't",   "won't",   "wouldn't", "couldn't",
      "aren't",  "weren't", "haven't",  "hasn't",  "shouldn't"};
  return kNegators.contains(token);
}

LexiconScorer::LexiconScorer(std::map<std::string, double> weights,
                             double gain)
    : weights_(std::move(weights)), gain_(gain) {
  if (!(gain_ > 0.0) || !std::isfinite(gain_)) {
    throw UsageError("lexicon gain must be positive");
  }
  std::ostringstream canonical;
  canonical.precision(17);
  canonical << "gain=" << gain_ << '\n';
  for (const auto& [token, weight] : weights_) {
    if (!(weight >= -1.0 && weight <= 1.0)) {
      throw DataError("lexicon weight for '" + token + "' outside [-1, 1]");
    }
    canonical << token << '\t' << weight << '\n';
  }
  id_ = "lexicon-mock/" + HexDigest(Fnv1a64(canonical.str()));
}

LexiconScorer LexiconScorer::FromText(std::string_view text) {
  std::map<std::string, double> weights;
  std::istringstream input{std::string(text)};
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(input, line)) {
    ++line_number;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError("lexicon line " + std::to_string(line_number) +
                      ": expected token<TAB>weight");
    }
    const std::string token = line.substr(0, tab);
    char* end = nullptr;
    const std::string number = line.substr(tab + 1);
    const double weight = std::strtod(number.c_str(), &end);
    if (end == number.c_str() ||
        std::string_view(end).find_first_not_of(" \t\r") !=
            std::string_view::npos) {
      throw DataError("lexicon line " + std::to_string(line_number) +
                      ": bad weight '" + number + "'");
    }
    const auto tokens = Tokenize(token);
    if (tokens.size() != 1) {
      throw DataError("lexicon line " + std::to_string(line_number) +
                      ": token must be a single word");
    }
    weights[tokens.front()] = weight;
  }
  return LexiconScorer(std::move(weights));
}

LexiconScorer LexiconScorer::Default() {
  return FromText(internal::kDefaultLexiconText);
}

LexiconScorer LexiconScorer::FromFile(const std::filesystem::path& path) {
  std::ifstream input(path);
  if (!input) throw DataError("cannot open lexicon file " + path.string());
  std::stringstream buffer;
  buffer << input.rdbuf();
  try {
    return FromText(buffer.str());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

double LexiconScorer::PositiveProbability(
    std::span<const std::string> tokens) const {
  if (tokens.empty()) return 0.5;
  double sum = 0.0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto it = weights_.find(tokens[i]);
    if (it == weights_.end() || it->second == 0.0) continue;
    bool negated = false;
    for (std::size_t back = 1; back <= 2 && back <= i; ++back) {
      if (IsNegator(tokens[i - back])) negated = true;
    }
    sum += negated ? -it->second : it->second;
  }
  if (sum == 0.0) return 0.5;
  const double s = sum / std::sqrt(static_cast<double>(tokens.size()));
  return 1.0 / (1.0 + std::exp(-gain_ * s));
}

std::vector<double> LexiconScorer::Score(const ScoreRequest& request) const {
  const double p_pos = PositiveProbability(Tokenize(request.sequence));
  std::vector<double> scores;
  for (const std::string& label : request.candidate_labels) {
    const std::string lowered = Lowered(label);
    if (lowered == "positive") {
      scores.push_back(p_pos);
    } else if (lowered == "negative") {
      scores.push_back(1.0 - p_pos);
    } else {
      throw BackendError("lexicon scorer only knows the labels positive and "
                         "negative, got '" + label + "'",
                         /*retryable=*/false);
    }
  }
  return scores;
}

std::pair<std::string, std::string> SplitUrl(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw UsageError("backend URL must look like http://host:port/path, got '" +
                     url + "'");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

RemoteScorer::RemoteScorer(std::string url, Options options)
    : url_(std::move(url)), options_(options) {
  SplitUrl(url_);  // Validates.
  if (options_.attempts < 1) options_.attempts = 1;
}

std::vector<double> RemoteScorer::Score(const ScoreRequest& request) const {
  nlohmann::json body = {{"sequence", request.sequence},
                         {"candidate_labels", request.candidate_labels}};
  if (!request.hypothesis_template.empty()) {
    body["hypothesis_template"] = request.hypothesis_template;
  }
  const std::string response = internal::PostJson(
      url_, body.dump(),
      {options_.attempts, options_.timeout, options_.backoff});
  try {
    const nlohmann::json parsed = nlohmann::json::parse(response);
    return AlignScores(request.candidate_labels,
                       parsed.at("labels").get<std::vector<std::string>>(),
                       parsed.at("scores").get<std::vector<double>>());
  } catch (const std::exception& e) {
    throw BackendError("malformed scorer response (" + std::string(e.what()) +
                           "): " + response,
                       /*retryable=*/false);
  }
}

std::shared_ptr<const ScorerBackend> MakeScorer(
    const std::optional<std::filesystem::path>& lexicon_path) {
  if (const char* url = std::getenv(kScorerUrlEnv); url && *url) {
    return std::make_shared<RemoteScorer>(url);
  }
  if (lexicon_path) {
    return std::make_shared<LexiconScorer>(LexiconScorer::FromFile(*lexicon_path));
  }
  return std::make_shared<LexiconScorer>(LexiconScorer::Default());
}

std::string BuildWordPrompt(std::string_view category, std::string_view word,
                            std::string_view label_name) {
  std::string prompt = "In Amazon reviews of ";
  prompt += category;
  prompt += " products, word ";
  prompt += word;
  prompt += " is ";
  prompt += label_name;
  return prompt;
}

std::vector<std::string> LintWordPrompt(std::string_view category,
                                        std::string_view word) {
  std::vector<std::string> warnings;
  if (category.empty()) {
    warnings.push_back("empty product category in word prompt");
  }
  if (word.empty()) warnings.push_back("empty word in word prompt");
  return warnings;
}

std::string ScoreCache::KeyFor(std::string_view backend_id,
                               const ScoreRequest& request) {
  std::string canonical(backend_id);
  canonical += '\x1f';
  canonical += request.sequence;
  canonical += '\x1f';
  canonical += request.hypothesis_template;
  for (const std::string& label : request.candidate_labels) {
    canonical += '\x1e';
    canonical += label;
  }
  return HexDigest(Fnv1a64(canonical));
}

std::optional<std::vector<double>> ScoreCache::Lookup(
    const std::string& key) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ScoreCache::Insert(const std::string& key, std::vector<double> scores) {
  std::unique_lock lock(mutex_);
  entries_.insert_or_assign(key, std::move(scores));
}

std::size_t ScoreCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

void ScoreCache::Load(const std::filesystem::path& path) {
  std::ifstream input(path);
  if (!input) return;
  std::string line;
  std::size_t line_number = 0;
  std::unique_lock lock(mutex_);
  while (std::getline(input, line)) {
    ++line_number;
    if (line.empty()) continue;
    try {
      const auto entry = nlohmann::json::parse(line);
      entries_.insert_or_assign(entry.at("key").get<std::string>(),
                                entry.at("scores").get<std::vector<double>>());
    } catch (const nlohmann::json::exception&) {
      throw DataError(path.string() + ": line " + std::to_string(line_number) +
                      ": malformed cache entry");
    }
  }
}

void ScoreCache::Save(const std::filesystem::path& path) const {
  std::map<std::string, std::vector<double>> sorted;
  {
    std::shared_lock lock(mutex_);
    sorted.insert(entries_.begin(), entries_.end());
  }
  const auto temp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream output(temp, std::ios::trunc);
    if (!output) throw DataError("cannot write cache file " + temp.string());
    for (const auto& [key, scores] : sorted) {
      output << nlohmann::json{{"key", key}, {"scores", scores}}.dump() << '\n';
    }
    if (!output) throw DataError("failed writing " + temp.string());
  }
  std::filesystem::rename(temp, path);
}

IntuitionScorer::IntuitionScorer(std::shared_ptr<const ScorerBackend> backend,
                                 std::shared_ptr<ScoreCache> cache)
    : backend_(std::move(backend)),
      cache_(cache ? std::move(cache) : std::make_shared<ScoreCache>()) {
  if (!backend_) throw UsageError("scorer backend is required");
}

IntuitionScore IntuitionScorer::Run(const ScoreRequest& request,
                                    std::string text,
                                    std::string prompt) const {
  const std::string backend_id = backend_->id();
  const std::string key = ScoreCache::KeyFor(backend_id, request);
  std::optional<std::vector<double>> scores = cache_->Lookup(key);
  if (!scores) {
    ++backend_calls_;
    scores = backend_->Score(request);
    if (scores->size() != request.candidate_labels.size()) {
      throw BackendError("backend returned " + std::to_string(scores->size()) +
                             " scores for " +
                             std::to_string(request.candidate_labels.size()) +
                             " labels",
                         /*retryable=*/false);
    }
    cache_->Insert(key, *scores);
  }
  IntuitionScore score;
  score.text = std::move(text);
  score.p_pos = std::clamp((*scores)[0], 0.0, 1.0);
  score.p_neg = 1.0 - score.p_pos;
  score.backend_id = backend_id;
  score.prompt = std::move(prompt);
  return score;
}

IntuitionScore IntuitionScorer::ScoreWord(std::string_view category,
                                          std::string_view word) const {
  ScoreRequest request;
  request.sequence = std::string(word);
  request.candidate_labels = {"positive", "negative"};
  request.hypothesis_template = BuildWordPrompt(category, word, "{}");
  std::string prompt = request.hypothesis_template;
  return Run(request, std::string(word), std::move(prompt));
}

IntuitionScore IntuitionScorer::ScorePhrase(
    std::span<const std::string> phrase) const {
  if (phrase.empty()) throw UsageError("cannot score an empty phrase");
  ScoreRequest request;
  request.sequence = JoinTokens(phrase);
  request.candidate_labels = {"positive", "negative"};
  std::string text = request.sequence;
  std::string prompt = request.sequence;
  return Run(request, std::move(text), std::move(prompt));
}

}  // namespace unintuit

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

// Labeled review corpus: ingestion, tokenization, the (word, label) inverted
// index and the TF-IDF vectorizer.

#ifndef UNINTUIT_CORPUS_H_
#define UNINTUIT_CORPUS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "unintuit/common.h"

namespace unintuit {

// Lowercases ASCII letters, splits on whitespace and strips ASCII
// punctuation from both ends of every piece. Inner punctuation ("didn't",
// "5-star") is kept. Stopwords are not removed here.
std::vector<std::string> Tokenize(std::string_view text);

std::string JoinTokens(std::span<const std::string> tokens);

struct Document {
  std::string id;
  std::string text;
  Sentiment label = Sentiment::kNegative;
  std::vector<std::string> tokens;  // Tokenize(text).
};

// Star rating -> label. Unmapped ratings are discarded at ingestion.
struct StarMapping {
  std::array<std::optional<Sentiment>, 5> by_star;

  // 1 -> negative, 5 -> positive, 2..4 discarded.
  static StarMapping Default();

  // "1:neg,2:neg,4:pos,5:pos". Unlisted ratings are discarded.
  static StarMapping Parse(std::string_view rule);

  std::optional<Sentiment> Map(int stars) const;
};

enum class CorpusFormat { kJsonLines, kCsv };

// ".csv" -> kCsv, anything else -> kJsonLines.
CorpusFormat FormatFromPath(const std::filesystem::path& path);

class Corpus {
 public:
  // Throws DataError on duplicate ids.
  Corpus(std::string category, std::vector<Document> documents);

  const std::string& category() const { return category_; }
  const std::vector<Document>& documents() const { return documents_; }
  const Document& document(std::size_t index) const {
    return documents_[index];
  }
  std::size_t size() const { return documents_.size(); }
  std::size_t CountLabel(Sentiment label) const {
    return label_counts_[static_cast<int>(label)];
  }

  // Indices (ascending) of documents with `label` whose tokens contain
  // `word`.
  std::span<const std::size_t> Postings(std::string_view word,
                                        Sentiment label) const;

  std::set<std::string> DocsContaining(std::string_view word,
                                       Sentiment label) const;

  std::optional<std::size_t> FindById(std::string_view id) const;

  // Number of documents containing `token` (any label).
  std::size_t DocumentFrequency(std::string_view token) const;

  // Every distinct token, stopwords included.
  std::vector<std::string> Tokens() const;

 private:
  std::string category_;
  std::vector<Document> documents_;
  std::array<std::size_t, 2> label_counts_{};
  std::unordered_map<std::string, std::array<std::vector<std::size_t>, 2>>
      index_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

// Parses one corpus stream. Records are either JSON lines or CSV with a
// header row; each needs `text` and one of `stars` / `label`, and may carry
// `id`. Missing ids become "d<record number>".
Corpus ParseCorpus(std::istream& input, CorpusFormat format,
                   const StarMapping& label_rule, std::string category);

Corpus Ingest(const std::filesystem::path& path, CorpusFormat format,
              const StarMapping& label_rule, std::string category);

// Writes the normalized corpus as JSON lines with id / label / text.
void WriteCorpus(const Corpus& corpus, const std::filesystem::path& path);

// Sparse row: (feature index, value) sorted by index.
using SparseVector = std::vector<std::pair<std::uint32_t, double>>;

// Unigram TF-IDF over a fixed vocabulary.
//
// idf(t) = ln((1 + N) / (1 + df(t))) + 1. Rows are raw term counts times
// idf, then L2-normalized.
class Vectorizer {
 public:
  // Vocabulary = non-stopword tokens with df >= min_df, indexed in
  // lexicographic order. Throws DataError if that leaves nothing.
  static Vectorizer Fit(const Corpus& corpus,
                        const std::set<std::string>& stopwords,
                        std::size_t min_df);

  Vectorizer(std::vector<std::string> terms, std::vector<double> idf,
             std::set<std::string> stopwords);

  std::size_t size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::string& term(std::size_t index) const { return terms_[index]; }
  const std::vector<double>& idf() const { return idf_; }
  const std::set<std::string>& stopwords() const { return stopwords_; }
  std::optional<std::uint32_t> IndexOf(std::string_view token) const;

  SparseVector Transform(std::span<const std::string> tokens) const;

  // Copy with `token` dropped from the vocabulary; remaining indices are
  // re-densified and keep their idf.
  Vectorizer Without(std::string_view token) const;

 private:
  std::vector<std::string> terms_;
  std::vector<double> idf_;
  std::set<std::string> stopwords_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

// English stopword list shipped with the library (data/stopwords_en.txt).
const std::set<std::string>& DefaultStopwords();

// One token per line; '#' starts a comment.
std::set<std::string> LoadStopwords(const std::filesystem::path& path);

}  // namespace unintuit

#endif  // UNINTUIT_CORPUS_H_

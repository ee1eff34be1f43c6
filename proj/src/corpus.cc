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

#include "unintuit/corpus.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace unintuit {
namespace internal {
extern const char kDefaultStopwordsText[];
}  // namespace internal

namespace {

bool IsAsciiPunct(unsigned char c) { return c < 0x80 && std::ispunct(c); }

bool IsAsciiSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::string LineTag(std::size_t line) {
  return "line " + std::to_string(line) + ": ";
}

std::optional<int> ParseStars(const nlohmann::json& value) {
  if (value.is_number_integer()) return value.get<int>();
  if (value.is_number_float()) {
    const double stars = value.get<double>();
    if (stars != std::floor(stars)) return std::nullopt;
    return static_cast<int>(stars);
  }
  if (value.is_string()) {
    const std::string text = value.get<std::string>();
    int stars = 0;
    const auto [end, ec] =
        std::from_chars(text.data(), text.data() + text.size(), stars);
    if (ec != std::errc() || end != text.data() + text.size()) {
      return std::nullopt;
    }
    return stars;
  }
  return std::nullopt;
}

struct RawRecord {
  std::size_t line = 0;
  std::optional<std::string> id;
  std::optional<std::string> text;
  std::optional<nlohmann::json> stars;
  std::optional<std::string> label;
};

// Resolves a record to a document, or nullopt when its rating is discarded.
std::optional<Document> ResolveRecord(const RawRecord& record,
                                      const StarMapping& label_rule) {
  if (!record.text) {
    throw DataError(LineTag(record.line) + "record has no 'text' field");
  }
  Document doc;
  doc.text = *record.text;
  if (record.label) {
    try {
      doc.label = ParseSentiment(*record.label);
    } catch (const UsageError&) {
      throw DataError(LineTag(record.line) + "unknown label '" +
                      *record.label + "'");
    }
  } else if (record.stars) {
    const std::optional<int> stars = ParseStars(*record.stars);
    if (!stars || *stars < 1 || *stars > 5) {
      throw DataError(LineTag(record.line) + "'stars' must be an integer 1-5");
    }
    const std::optional<Sentiment> label = label_rule.Map(*stars);
    if (!label) return std::nullopt;
    doc.label = *label;
  } else {
    throw DataError(LineTag(record.line) +
                    "record needs either 'stars' or 'label'");
  }
  if (record.id) doc.id = *record.id;
  doc.tokens = Tokenize(doc.text);
  return doc;
}

std::vector<RawRecord> ReadJsonLines(std::istream& input) {
  std::vector<RawRecord> records;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(input, line)) {
    ++line_number;
    if (std::all_of(line.begin(), line.end(),
                    [](unsigned char c) { return IsAsciiSpace(c); })) {
      continue;
    }
    nlohmann::json object;
    try {
      object = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(LineTag(line_number) + "malformed JSON record (" +
                      e.what() + ")");
    }
    if (!object.is_object()) {
      throw DataError(LineTag(line_number) + "record is not a JSON object");
    }
    RawRecord record;
    record.line = line_number;
    try {
      if (auto it = object.find("text"); it != object.end()) {
        record.text = it->get<std::string>();
      }
      if (auto it = object.find("label"); it != object.end()) {
        record.label = it->get<std::string>();
      }
      if (auto it = object.find("id"); it != object.end()) {
        record.id = it->is_string() ? it->get<std::string>() : it->dump();
      }
    } catch (const nlohmann::json::exception&) {
      throw DataError(LineTag(line_number) + "field has the wrong type");
    }
    if (auto it = object.find("stars"); it != object.end()) {
      record.stars = *it;
    }
    records.push_back(std::move(record));
  }
  return records;
}

// RFC 4180 reader. Quoted fields may contain separators, doubled quotes and
// newlines. Returns rows with the line each one started on.
std::vector<std::pair<std::size_t, std::vector<std::string>>> ReadCsvRows(
    std::istream& input) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_quoted = false;
  std::size_t line = 1;
  std::size_t row_start = 1;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_quoted = false;
  };
  auto end_row = [&] {
    end_field();
    const bool blank = row.size() == 1 && row[0].empty();
    if (!blank) rows.emplace_back(row_start, std::move(row));
    row.clear();
  };
  char c;
  while (input.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (input.peek() == '"') {
          input.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_quoted) {
          throw DataError(LineTag(line) + "stray quote in CSV field");
        }
        in_quotes = true;
        field_quoted = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        ++line;
        row_start = line;
        break;
      default:
        field.push_back(c);
    }
  }
  if (in_quotes) {
    throw DataError(LineTag(row_start) + "unterminated quoted CSV field");
  }
  if (!field.empty() || !row.empty()) end_row();
  return rows;
}

std::vector<RawRecord> ReadCsv(std::istream& input) {
  auto rows = ReadCsvRows(input);
  std::vector<RawRecord> records;
  if (rows.empty()) return records;
  const auto& header = rows.front().second;
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) column[header[i]] = i;
  if (!column.contains("text")) {
    throw DataError("line 1: CSV header has no 'text' column");
  }
  if (!column.contains("stars") && !column.contains("label")) {
    throw DataError("line 1: CSV header needs a 'stars' or 'label' column");
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& [line, cells] = rows[r];
    if (cells.size() != header.size()) {
      throw DataError(LineTag(line) + "expected " +
                      std::to_string(header.size()) + " CSV fields, got " +
                      std::to_string(cells.size()));
    }
    RawRecord record;
    record.line = line;
    record.text = cells[column["text"]];
    if (auto it = column.find("label"); it != column.end() &&
                                        !cells[it->second].empty()) {
      record.label = cells[it->second];
    }
    if (auto it = column.find("stars"); it != column.end() &&
                                        !cells[it->second].empty()) {
      record.stars = nlohmann::json(cells[it->second]);
    }
    if (auto it = column.find("id"); it != column.end() &&
                                     !cells[it->second].empty()) {
      record.id = cells[it->second];
    }
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsAsciiSpace(text[i])) ++i;
    std::size_t begin = i;
    while (i < text.size() && !IsAsciiSpace(text[i])) ++i;
    std::size_t end = i;
    while (begin < end && IsAsciiPunct(text[begin])) ++begin;
    while (end > begin && IsAsciiPunct(text[end - 1])) --end;
    if (begin == end) continue;
    std::string token(text.substr(begin, end - begin));
    for (char& c : token) {
      if (static_cast<unsigned char>(c) < 0x80) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      }
    }
    tokens.push_back(std::move(token));
  }
  return tokens;
}

std::string JoinTokens(std::span<const std::string> tokens) {
  std::string joined;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) joined.push_back(' ');
    joined += tokens[i];
  }
  return joined;
}

StarMapping StarMapping::Default() {
  StarMapping mapping;
  mapping.by_star[0] = Sentiment::kNegative;
  mapping.by_star[4] = Sentiment::kPositive;
  return mapping;
}

StarMapping StarMapping::Parse(std::string_view rule) {
  StarMapping mapping;
  std::stringstream stream{std::string(rule)};
  std::string item;
  while (std::getline(stream, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos || colon == 0) {
      throw UsageError("bad star mapping entry '" + item +
                       "' (expected STARS:pos|neg)");
    }
    int stars = 0;
    const auto [end, ec] =
        std::from_chars(item.data(), item.data() + colon, stars);
    if (ec != std::errc() || end != item.data() + colon || stars < 1 ||
        stars > 5) {
      throw UsageError("bad star value in mapping entry '" + item + "'");
    }
    mapping.by_star[stars - 1] =
        ParseSentiment(std::string_view(item).substr(colon + 1));
  }
  return mapping;
}

std::optional<Sentiment> StarMapping::Map(int stars) const {
  if (stars < 1 || stars > 5) return std::nullopt;
  return by_star[stars - 1];
}

CorpusFormat FormatFromPath(const std::filesystem::path& path) {
  std::string extension = path.extension().string();
  std::transform(extension.begin(), extension.end(), extension.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return extension == ".csv" ? CorpusFormat::kCsv : CorpusFormat::kJsonLines;
}

Corpus::Corpus(std::string category, std::vector<Document> documents)
    : category_(std::move(category)), documents_(std::move(documents)) {
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    const Document& doc = documents_[i];
    if (!by_id_.emplace(doc.id, i).second) {
      throw DataError("duplicate document id '" + doc.id + "'");
    }
    const int label = static_cast<int>(doc.label);
    ++label_counts_[label];
    for (const std::string& token : doc.tokens) {
      auto& postings = index_[token][label];
      // Documents are visited in order, so a repeat can only be at the back.
      if (postings.empty() || postings.back() != i) postings.push_back(i);
    }
  }
}

std::span<const std::size_t> Corpus::Postings(std::string_view word,
                                              Sentiment label) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return {};
  return it->second[static_cast<int>(label)];
}

std::set<std::string> Corpus::DocsContaining(std::string_view word,
                                             Sentiment label) const {
  std::set<std::string> ids;
  for (std::size_t index : Postings(word, label)) {
    ids.insert(documents_[index].id);
  }
  return ids;
}

std::optional<std::size_t> Corpus::FindById(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::size_t Corpus::DocumentFrequency(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return 0;
  return it->second[0].size() + it->second[1].size();
}

std::vector<std::string> Corpus::Tokens() const {
  std::vector<std::string> tokens;
  tokens.reserve(index_.size());
  for (const auto& [token, postings] : index_) tokens.push_back(token);
  std::sort(tokens.begin(), tokens.end());
  return tokens;
}

Corpus ParseCorpus(std::istream& input, CorpusFormat format,
                   const StarMapping& label_rule, std::string category) {
  const std::vector<RawRecord> records = format == CorpusFormat::kCsv
                                             ? ReadCsv(input)
                                             : ReadJsonLines(input);
  std::vector<Document> documents;
  std::size_t record_number = 0;
  for (const RawRecord& record : records) {
    ++record_number;
    std::optional<Document> doc = ResolveRecord(record, label_rule);
    if (!doc) continue;
    if (doc->id.empty()) doc->id = "d" + std::to_string(record_number);
    documents.push_back(std::move(*doc));
  }
  if (documents.empty()) {
    throw DataError("zero retained documents");
  }
  return Corpus(std::move(category), std::move(documents));
}

Corpus Ingest(const std::filesystem::path& path, CorpusFormat format,
              const StarMapping& label_rule, std::string category) {
  std::ifstream input(path, std::ios::binary);
  if (!input) {
    throw DataError("cannot open corpus file " + path.string());
  }
  try {
    return ParseCorpus(input, format, label_rule, std::move(category));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void WriteCorpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream output(path, std::ios::binary | std::ios::trunc);
  if (!output) {
    throw DataError("cannot write corpus file " + path.string());
  }
  for (const Document& doc : corpus.documents()) {
    nlohmann::json record = {{"id", doc.id},
                             {"label", SentimentName(doc.label)},
                             {"text", doc.text}};
    output << record.dump() << '\n';
  }
  if (!output) throw DataError("failed writing " + path.string());
}

Vectorizer Vectorizer::Fit(const Corpus& corpus,
                           const std::set<std::string>& stopwords,
                           std::size_t min_df) {
  if (corpus.size() == 0) throw DataError("cannot fit on an empty corpus");
  std::vector<std::string> terms;
  std::vector<double> idf;
  const double n = static_cast<double>(corpus.size());
  for (const std::string& token : corpus.Tokens()) {
    if (stopwords.contains(token)) continue;
    const std::size_t df = corpus.DocumentFrequency(token);
    if (df < std::max<std::size_t>(min_df, 1)) continue;
    terms.push_back(token);
    idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(df))) +
                  1.0);
  }
  if (terms.empty()) {
    throw DataError("empty vocabulary after stopword and min_df filtering");
  }
  return Vectorizer(std::move(terms), std::move(idf), stopwords);
}

Vectorizer::Vectorizer(std::vector<std::string> terms, std::vector<double> idf,
                       std::set<std::string> stopwords)
    : terms_(std::move(terms)),
      idf_(std::move(idf)),
      stopwords_(std::move(stopwords)) {
  if (terms_.size() != idf_.size()) {
    throw DataError("vocabulary and idf sizes differ");
  }
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (stopwords_.contains(terms_[i])) {
      throw DataError("stopword '" + terms_[i] + "' in vocabulary");
    }
    if (!std::isfinite(idf_[i]) || idf_[i] < 0) {
      throw DataError("invalid idf for '" + terms_[i] + "'");
    }
    if (!index_.emplace(terms_[i], static_cast<std::uint32_t>(i)).second) {
      throw DataError("duplicate vocabulary term '" + terms_[i] + "'");
    }
  }
}

std::optional<std::uint32_t> Vectorizer::IndexOf(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SparseVector Vectorizer::Transform(std::span<const std::string> tokens) const {
  SparseVector row;
  for (const std::string& token : tokens) {
    if (auto index = IndexOf(token)) row.emplace_back(*index, 1.0);
  }
  std::sort(row.begin(), row.end());
  // Merge duplicates into counts.
  SparseVector merged;
  for (const auto& [index, count] : row) {
    if (!merged.empty() && merged.back().first == index) {
      merged.back().second += count;
    } else {
      merged.emplace_back(index, count);
    }
  }
  double norm = 0.0;
  for (auto& [index, value] : merged) {
    value *= idf_[index];
    norm += value * value;
  }
  if (norm > 0) {
    norm = std::sqrt(norm);
    for (auto& entry : merged) entry.second /= norm;
  }
  return merged;
}

Vectorizer Vectorizer::Without(std::string_view token) const {
  std::vector<std::string> terms;
  std::vector<double> idf;
  terms.reserve(terms_.size());
  idf.reserve(idf_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i] == token) continue;
    terms.push_back(terms_[i]);
    idf.push_back(idf_[i]);
  }
  return Vectorizer(std::move(terms), std::move(idf), stopwords_);
}

namespace {

std::set<std::string> ParseStopwords(std::istream& input) {
  std::set<std::string> words;
  std::string line;
  while (std::getline(input, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    for (std::string& token : Tokenize(line)) words.insert(std::move(token));
  }
  return words;
}

}  // namespace

const std::set<std::string>& DefaultStopwords() {
  static const std::set<std::string> words = [] {
    std::istringstream input(internal::kDefaultStopwordsText);
    return ParseStopwords(input);
  }();
  return words;
}

std::set<std::string> LoadStopwords(const std::filesystem::path& path) {
  std::ifstream input(path);
  if (!input) throw DataError("cannot open stopword file " + path.string());
  return ParseStopwords(input);
}

}  // namespace unintuit

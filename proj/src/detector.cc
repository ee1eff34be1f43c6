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

#include "unintuit/detector.h"

#include <charconv>
#include <fstream>
#include <sstream>

namespace unintuit {
namespace {

constexpr std::pair<FeatureCategory, std::string_view> kCategoryNames[] = {
    {FeatureCategory::kIntuitivePositive, "IntuitivePositive"},
    {FeatureCategory::kIntuitiveNegative, "IntuitiveNegative"},
    {FeatureCategory::kParadoxPositive, "ParadoxPositive"},
    {FeatureCategory::kParadoxNegative, "ParadoxNegative"},
    {FeatureCategory::kAmbiguous, "Ambiguous"},
};

int ParseCount(const std::string& cell, std::size_t line) {
  int value = 0;
  const auto [end, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || end != cell.data() + cell.size() || value < 0) {
    throw DataError("judgments line " + std::to_string(line) +
                    ": bad count '" + cell + "'");
  }
  return value;
}

}  // namespace

std::string_view CategoryName(FeatureCategory category) {
  for (const auto& [value, name] : kCategoryNames) {
    if (value == category) return name;
  }
  return "Ambiguous";
}

FeatureCategory ParseCategory(std::string_view name) {
  for (const auto& [value, known] : kCategoryNames) {
    if (known == name) return value;
  }
  throw UsageError("unknown feature category '" + std::string(name) + "'");
}

FeatureCategory Categorize(Sentiment model_sentiment, double p_pos,
                           const Thresholds& thresholds) {
  if (p_pos >= thresholds.low && p_pos <= thresholds.high) {
    return FeatureCategory::kAmbiguous;
  }
  if (model_sentiment == Sentiment::kPositive) {
    return p_pos < thresholds.low ? FeatureCategory::kParadoxPositive
                                  : FeatureCategory::kIntuitivePositive;
  }
  return p_pos > thresholds.high ? FeatureCategory::kParadoxNegative
                                 : FeatureCategory::kIntuitiveNegative;
}

std::vector<FeatureDiagnosis> Diagnose(std::span<const FeatureScore> features,
                                       std::span<const IntuitionScore> scores,
                                       const Thresholds& thresholds) {
  if (!(0.0 < thresholds.low && thresholds.low < thresholds.high &&
        thresholds.high < 1.0)) {
    throw UsageError("thresholds must satisfy 0 < low < high < 1");
  }
  if (features.size() != scores.size()) {
    throw DataError("diagnose: " + std::to_string(features.size()) +
                    " features but " + std::to_string(scores.size()) +
                    " intuition scores");
  }
  std::vector<FeatureDiagnosis> diagnoses;
  diagnoses.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (scores[i].text != features[i].word) {
      throw DataError("diagnose: score for '" + scores[i].text +
                      "' is aligned with feature '" + features[i].word + "'");
    }
    FeatureDiagnosis diagnosis;
    diagnosis.feature = features[i];
    diagnosis.intuition = scores[i];
    diagnosis.category = Categorize(features[i].model_sentiment,
                                    scores[i].p_pos, thresholds);
    diagnoses.push_back(std::move(diagnosis));
  }
  return diagnoses;
}

double AggregateJudgments(const JudgmentRecord& record, int panel_size) {
  if (panel_size <= 0) throw UsageError("panel size must be positive");
  if (record.n_pos < 0 || record.n_neg < 0 || record.n_ns < 0 ||
      record.n_pos + record.n_neg + record.n_ns != panel_size) {
    throw DataError("judgments for '" + record.word + "' do not add up to a " +
                    "panel of " + std::to_string(panel_size));
  }
  return (1.0 * record.n_pos + 0.5 * record.n_ns + 0.0 * record.n_neg) /
         static_cast<double>(panel_size);
}

std::vector<JudgmentRecord> LoadJudgments(const std::filesystem::path& path) {
  std::ifstream input(path);
  if (!input) throw DataError("cannot open judgments file " + path.string());
  std::vector<JudgmentRecord> records;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(input, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream stream(line);
    std::string cell;
    while (std::getline(stream, cell, ',')) cells.push_back(cell);
    if (line_number == 1) {
      if (cells != std::vector<std::string>{"word", "n_pos", "n_neg", "n_ns"}) {
        throw DataError(path.string() +
                        ": header must be word,n_pos,n_neg,n_ns");
      }
      continue;
    }
    if (cells.size() != 4) {
      throw DataError(path.string() + ": line " + std::to_string(line_number) +
                      ": expected 4 fields");
    }
    records.push_back({cells[0], ParseCount(cells[1], line_number),
                       ParseCount(cells[2], line_number),
                       ParseCount(cells[3], line_number)});
  }
  return records;
}

Correlation Correlate(std::span<const std::pair<double, double>> pairs) {
  return PearsonCorrelation(pairs);
}

}  // namespace unintuit

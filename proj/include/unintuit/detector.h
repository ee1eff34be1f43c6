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

#ifndef UNINTUIT_DETECTOR_H_
#define UNINTUIT_DETECTOR_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "unintuit/classifier.h"
#include "unintuit/intuition.h"
#include "unintuit/stats.h"

namespace unintuit {

enum class FeatureCategory {
  kIntuitivePositive,
  kIntuitiveNegative,
  kParadoxPositive,  // Model: positive. Intuition: p_pos < low.
  kParadoxNegative,  // Model: negative. Intuition: p_pos > high.
  kAmbiguous,        // low <= p_pos <= high.
};

std::string_view CategoryName(FeatureCategory category);
FeatureCategory ParseCategory(std::string_view name);

struct Thresholds {
  double low = 0.2;
  double high = 0.8;
};

// Pure rule table; the closed interval [low, high] is Ambiguous.
FeatureCategory Categorize(Sentiment model_sentiment, double p_pos,
                           const Thresholds& thresholds);

struct FeatureDiagnosis {
  FeatureScore feature;
  IntuitionScore intuition;
  FeatureCategory category = FeatureCategory::kAmbiguous;
  std::optional<bool> ablation_significant;
};

// `scores[i]` must describe `features[i]`. Requires 0 < low < high < 1.
std::vector<FeatureDiagnosis> Diagnose(std::span<const FeatureScore> features,
                                       std::span<const IntuitionScore> scores,
                                       const Thresholds& thresholds = {});

inline constexpr int kDefaultPanelSize = 5;

struct JudgmentRecord {
  std::string word;
  int n_pos = 0;
  int n_neg = 0;
  int n_ns = 0;  // "not sure"
};

// (1 * n_pos + 0.5 * n_ns + 0 * n_neg) / panel_size. Panels must be
// complete: counts sum to panel_size.
double AggregateJudgments(const JudgmentRecord& record,
                          int panel_size = kDefaultPanelSize);

// CSV with header `word,n_pos,n_neg,n_ns`.
std::vector<JudgmentRecord> LoadJudgments(const std::filesystem::path& path);

// Pearson correlation over (P_u, P_z) pairs.
Correlation Correlate(std::span<const std::pair<double, double>> pairs);

}  // namespace unintuit

#endif  // UNINTUIT_DETECTOR_H_

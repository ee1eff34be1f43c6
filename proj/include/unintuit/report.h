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

// Pipeline report: typed model, JSON mapping (see docs/report_schema.md) and
// the canonical byte-stable serialization.

#ifndef UNINTUIT_REPORT_H_
#define UNINTUIT_REPORT_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "unintuit/classifier.h"
#include "unintuit/detector.h"
#include "unintuit/explain.h"

namespace unintuit {

inline constexpr char kReportSchemaVersion[] = "unintuit.report/1";

struct PipelineConfig {
  std::string category;
  std::size_t min_df = 5;
  // "builtin" or the stopword file path.
  std::string stopwords = "builtin";
  TrainConfig train;
  std::size_t top_k = 200;
  Thresholds thresholds;
  // Run ablation screening on every non-intuitive diagnosed word.
  bool ablate = false;
  // Words to build bundles for. Empty: the `auto_bundles` non-intuitive
  // words with the largest |coefficient|.
  std::vector<std::string> words;
  std::size_t auto_bundles = 10;
  ExplainConfig explain;
};

struct CorpusSummary {
  std::size_t n_documents = 0;
  std::size_t n_positive = 0;
  std::size_t n_negative = 0;
};

struct PipelineReport {
  std::string schema_version = kReportSchemaVersion;
  std::string category;
  CorpusSummary corpus;
  EvalMetrics metrics;
  std::vector<FeatureDiagnosis> diagnoses;
  std::vector<ExplanationBundle> bundles;
  PipelineConfig config;
  std::string scorer_id;
  std::string embedder_id;

  const ExplanationBundle* FindBundle(std::string_view word) const;
};

nlohmann::json ToJson(const FeatureDiagnosis& diagnosis);
nlohmann::json ToJson(const ExplanationBundle& bundle);
nlohmann::json ToJson(const PipelineConfig& config);
nlohmann::json ToJson(const PipelineReport& report);

FeatureDiagnosis DiagnosisFromJson(const nlohmann::json& json);
ExplanationBundle BundleFromJson(const nlohmann::json& json);
PipelineConfig ConfigFromJson(const nlohmann::json& json);
// Throws DataError on schema mismatch.
PipelineReport ReportFromJson(const nlohmann::json& json);

// Sorted keys, two-space indentation, floats at 6 significant digits,
// trailing newline.
std::string CanonicalJson(const nlohmann::json& json);

// Throws DataError naming the path when it cannot be written.
void WriteReport(const PipelineReport& report,
                 const std::filesystem::path& path);
PipelineReport ReadReport(const std::filesystem::path& path);

}  // namespace unintuit

#endif  // UNINTUIT_REPORT_H_

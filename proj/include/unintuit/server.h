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

// Local read API over a pipeline report, plus on-demand bundle building.
//
//   GET  /api/health
//   GET  /api/report
//   GET  /api/diagnoses[?category=ParadoxPositive]
//   GET  /api/bundles/{word}
//   POST /api/bundles/{word}/compute
//   GET  /api/documents?ids=a,b,c
//
// Bodies use the report serialization. Errors are {"error": message}.

#ifndef UNINTUIT_SERVER_H_
#define UNINTUIT_SERVER_H_

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include "unintuit/classifier.h"
#include "unintuit/corpus.h"
#include "unintuit/intuition.h"
#include "unintuit/miner.h"
#include "unintuit/report.h"

namespace unintuit {

struct ApiResponse {
  int status = 200;
  std::string body;
  // Seconds, sent as Retry-After on 503.
  std::optional<int> retry_after;
};

inline constexpr int kRetryAfterSeconds = 5;

// Request handling without sockets. The report is never modified; bundles
// computed on demand are kept in memory only. Thread-safe.
class ReportService {
 public:
  ReportService(PipelineReport report, Corpus corpus, TrainedClassifier model,
                std::shared_ptr<const IntuitionScorer> scorer,
                std::shared_ptr<const EmbeddingProvider> embedder);

  ApiResponse Health() const;
  ApiResponse Report() const;
  ApiResponse Diagnoses(const std::optional<std::string>& category) const;
  ApiResponse Bundle(const std::string& word) const;
  // Comma-separated ids.
  ApiResponse Documents(const std::string& ids) const;
  // Builds the bundle for an in-vocabulary word with the report's explain
  // configuration. Concurrent requests for one word build it once.
  ApiResponse ComputeBundle(const std::string& word);

  const PipelineReport& report() const { return report_; }

 private:
  std::optional<ExplanationBundle> Cached(const std::string& word) const;
  std::shared_ptr<std::mutex> WordLock(const std::string& word);

  PipelineReport report_;
  Corpus corpus_;
  TrainedClassifier model_;
  std::shared_ptr<const IntuitionScorer> scorer_;
  std::shared_ptr<const EmbeddingProvider> embedder_;

  mutable std::shared_mutex computed_mutex_;
  std::map<std::string, ExplanationBundle> computed_;
  std::mutex locks_mutex_;
  std::map<std::string, std::shared_ptr<std::mutex>> word_locks_;
};

// HTTP front end for a ReportService.
class ApiServer {
 public:
  explicit ApiServer(ReportService& service);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws UsageError when
  // binding fails.
  int Bind(const std::string& host, int port);
  // Blocks until Stop().
  void Listen();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Splits "HOST:PORT"; throws UsageError when malformed.
std::pair<std::string, int> ParseBindAddress(const std::string& address);

}  // namespace unintuit

#endif  // UNINTUIT_SERVER_H_

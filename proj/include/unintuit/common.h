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

#ifndef UNINTUIT_COMMON_H_
#define UNINTUIT_COMMON_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace unintuit {

// Failure classes. The CLI maps each onto a process exit code.
enum class ErrorKind {
  kUsage,    // Bad arguments or configuration.
  kData,     // Malformed or insufficient input data, I/O failures.
  kBackend,  // Scorer / embedder unreachable or misbehaving.
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& message)
      : Error(ErrorKind::kUsage, message) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& message)
      : Error(ErrorKind::kData, message) {}
};

class BackendError : public Error {
 public:
  BackendError(const std::string& message, bool retryable)
      : Error(ErrorKind::kBackend, message), retryable_(retryable) {}

  bool retryable() const { return retryable_; }

 private:
  bool retryable_;
};

enum class Sentiment { kNegative = 0, kPositive = 1 };

inline constexpr Sentiment kBothSentiments[] = {Sentiment::kPositive,
                                                Sentiment::kNegative};

// "positive" / "negative".
std::string_view SentimentName(Sentiment sentiment);

// Accepts "positive", "pos", "negative", "neg" (case-insensitive).
Sentiment ParseSentiment(std::string_view text);

inline Sentiment Opposite(Sentiment sentiment) {
  return sentiment == Sentiment::kPositive ? Sentiment::kNegative
                                           : Sentiment::kPositive;
}

// 64-bit FNV-1a. Stable across platforms; used for cache keys, seeds and
// embedding coordinates.
std::uint64_t Fnv1a64(std::string_view data,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

std::string HexDigest(std::uint64_t value);

}  // namespace unintuit

#endif  // UNINTUIT_COMMON_H_

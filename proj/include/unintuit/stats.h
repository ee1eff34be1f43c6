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

#ifndef UNINTUIT_STATS_H_
#define UNINTUIT_STATS_H_

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace unintuit {

struct McNemarResult {
  // Discordant pairs: first right / second wrong, and the reverse.
  std::size_t only_first_correct = 0;
  std::size_t only_second_correct = 0;
  double statistic = 0.0;
  double p_value = 1.0;
  // "exact-binomial" below kMcNemarExactLimit discordant pairs, otherwise
  // "chi-square-cc" (continuity corrected, 1 dof).
  std::string method;
};

inline constexpr std::size_t kMcNemarExactLimit = 25;

// Paired test on per-item correctness of two classifiers over the same items.
// Identical correctness vectors give p = 1.
McNemarResult McNemarTest(const std::vector<bool>& first_correct,
                          const std::vector<bool>& second_correct);

struct Correlation {
  double rho = 0.0;
  double p_value = 1.0;  // Two-sided, Student t with n - 2 dof.
  std::size_t n = 0;
};

// Pearson correlation between the two coordinates of `pairs`. Requires at
// least 3 pairs and non-zero variance in both coordinates (DataError
// "undefined correlation" otherwise).
Correlation PearsonCorrelation(std::span<const std::pair<double, double>> pairs);

}  // namespace unintuit

#endif  // UNINTUIT_STATS_H_

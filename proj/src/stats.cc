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

#include "unintuit/stats.h"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "unintuit/common.h"

namespace unintuit {

McNemarResult McNemarTest(const std::vector<bool>& first_correct,
                          const std::vector<bool>& second_correct) {
  if (first_correct.size() != second_correct.size()) {
    throw DataError("McNemar test needs paired outcome vectors");
  }
  McNemarResult result;
  for (std::size_t i = 0; i < first_correct.size(); ++i) {
    if (first_correct[i] && !second_correct[i]) ++result.only_first_correct;
    if (!first_correct[i] && second_correct[i]) ++result.only_second_correct;
  }
  const std::size_t b = result.only_first_correct;
  const std::size_t c = result.only_second_correct;
  const std::size_t discordant = b + c;
  if (discordant == 0) {
    result.method = "exact-binomial";
    return result;
  }
  if (discordant < kMcNemarExactLimit) {
    // Two-sided exact test: 2 * P(X <= min(b, c)), X ~ Bin(b + c, 1/2).
    result.method = "exact-binomial";
    const boost::math::binomial_distribution<double> null_dist(
        static_cast<double>(discordant), 0.5);
    result.statistic = static_cast<double>(std::min(b, c));
    result.p_value = std::min(
        1.0, 2.0 * boost::math::cdf(null_dist, result.statistic));
    return result;
  }
  result.method = "chi-square-cc";
  const double diff =
      std::abs(static_cast<double>(b) - static_cast<double>(c)) - 1.0;
  result.statistic =
      std::max(diff, 0.0) * std::max(diff, 0.0) / static_cast<double>(discordant);
  const boost::math::chi_squared_distribution<double> null_dist(1.0);
  result.p_value = boost::math::cdf(boost::math::complement(null_dist,
                                                            result.statistic));
  return result;
}

Correlation PearsonCorrelation(
    std::span<const std::pair<double, double>> pairs) {
  if (pairs.size() < 3) {
    throw DataError("undefined correlation: need at least 3 pairs");
  }
  const double n = static_cast<double>(pairs.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& [x, y] : pairs) {
    mean_x += x;
    mean_y += y;
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (const auto& [x, y] : pairs) {
    const double dx = x - mean_x;
    const double dy = y - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) {
    throw DataError("undefined correlation: zero variance");
  }
  Correlation result;
  result.n = pairs.size();
  result.rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double dof = n - 2.0;
  if (dof <= 0.0) return result;
  const double denom = 1.0 - result.rho * result.rho;
  if (denom <= 0.0) {
    result.p_value = 0.0;
    return result;
  }
  const double t = std::abs(result.rho) * std::sqrt(dof / denom);
  const boost::math::students_t_distribution<double> null_dist(dof);
  result.p_value =
      2.0 * boost::math::cdf(boost::math::complement(null_dist, t));
  return result;
}

}  // namespace unintuit

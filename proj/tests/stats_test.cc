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

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.h"
#include "unintuit/common.h"
#include "unintuit/random.h"

namespace unintuit {
namespace {

using ::unintuit::testing::PearsonOracle;

// Two-sided exact McNemar p by direct summation of binomial terms.
double ExactOracle(int b, int c) {
  const int n = b + c;
  long double tail = 0.0L;
  for (int i = 0; i <= std::min(b, c); ++i) {
    tail += std::exp(std::lgamma(n + 1.0L) - std::lgamma(i + 1.0L) -
                     std::lgamma(n - i + 1.0L) - n * std::log(2.0L));
  }
  return static_cast<double>(std::min(1.0L, 2.0L * tail));
}

std::pair<std::vector<bool>, std::vector<bool>> Outcomes(int both, int b, int c,
                                                         int neither) {
  std::vector<bool> first, second;
  auto add = [&](int count, bool f, bool s) {
    for (int i = 0; i < count; ++i) {
      first.push_back(f);
      second.push_back(s);
    }
  };
  add(both, true, true);
  add(b, true, false);
  add(c, false, true);
  add(neither, false, false);
  return {first, second};
}

TEST(McNemarTest, IdenticalVectorsGivePOne) {
  const auto [first, second] = Outcomes(30, 0, 0, 7);
  const McNemarResult result = McNemarTest(first, first);
  EXPECT_EQ(result.p_value, 1.0);
  EXPECT_EQ(result.only_first_correct, 0u);
  EXPECT_EQ(McNemarTest({}, {}).p_value, 1.0);
}

TEST(McNemarTest, ExactBelowLimitMatchesOracle) {
  for (int b = 0; b <= 14; ++b) {
    for (int c = 0; c <= 10 && b + c < 25; ++c) {
      if (b + c == 0) continue;
      const auto [first, second] = Outcomes(5, b, c, 3);
      const McNemarResult result = McNemarTest(first, second);
      EXPECT_EQ(result.method, "exact-binomial");
      EXPECT_EQ(result.only_first_correct, static_cast<std::size_t>(b));
      EXPECT_EQ(result.only_second_correct, static_cast<std::size_t>(c));
      EXPECT_NEAR(result.p_value, ExactOracle(b, c), 1e-12) << b << "," << c;
    }
  }
  // 10 vs 0 discordant: 2 / 2^10.
  const auto [first, second] = Outcomes(0, 10, 0, 0);
  EXPECT_NEAR(McNemarTest(first, second).p_value, 2.0 / 1024.0, 1e-15);
}

TEST(McNemarTest, ChiSquareAboveLimit) {
  for (auto [b, c] : {std::pair{20, 5}, std::pair{13, 12}, std::pair{40, 2}}) {
    const auto [first, second] = Outcomes(10, b, c, 10);
    const McNemarResult result = McNemarTest(first, second);
    EXPECT_EQ(result.method, "chi-square-cc");
    const double x = std::pow(std::abs(b - c) - 1.0, 2) / (b + c);
    EXPECT_NEAR(result.statistic, x, 1e-12);
    // Chi-square(1) survival function.
    EXPECT_NEAR(result.p_value, std::erfc(std::sqrt(x / 2.0)), 1e-12);
  }
}

TEST(McNemarTest, RejectsUnpairedInput) {
  EXPECT_THROW(McNemarTest({true}, {true, false}), DataError);
}

TEST(PearsonTest, PerfectLines) {
  const std::vector<std::pair<double, double>> up = {{0, 1}, {1, 3}, {2, 5}};
  EXPECT_DOUBLE_EQ(PearsonCorrelation(up).rho, 1.0);
  EXPECT_EQ(PearsonCorrelation(up).p_value, 0.0);
  const std::vector<std::pair<double, double>> down = {
      {0, 1}, {1, 0}, {0.5, 0.5}};
  EXPECT_DOUBLE_EQ(PearsonCorrelation(down).rho, -1.0);
}

TEST(PearsonTest, MatchesDirectSummation) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < 20; ++i) {
      const double x = rng.UniformReal();
      pairs.push_back({x, 0.6 * x + 0.4 * rng.UniformReal()});
    }
    EXPECT_NEAR(PearsonCorrelation(pairs).rho, PearsonOracle(pairs), 1e-9);
  }
}

TEST(PearsonTest, PValueMatchesTwoDofClosedForm) {
  // With 4 pairs, t has 2 dof and P(|T| > t) = 1 - t / sqrt(2 + t^2).
  const std::vector<std::pair<double, double>> pairs = {
      {0, 0.1}, {1, 0.5}, {2, 0.3}, {3, 0.9}};
  const Correlation result = PearsonCorrelation(pairs);
  const double r = result.rho;
  const double t = std::abs(r) * std::sqrt(2.0 / (1.0 - r * r));
  EXPECT_NEAR(result.p_value, 1.0 - t / std::sqrt(2.0 + t * t), 1e-12);
  EXPECT_EQ(result.n, 4u);
}

TEST(PearsonTest, UndefinedCases) {
  const std::vector<std::pair<double, double>> flat = {{1, 0}, {1, 1}, {1, 2}};
  const std::vector<std::pair<double, double>> short_list = {{0, 1}, {1, 0}};
  for (const auto* pairs : {&flat, &short_list}) {
    try {
      PearsonCorrelation(*pairs);
      FAIL() << "expected DataError";
    } catch (const DataError& e) {
      EXPECT_NE(std::string(e.what()).find("undefined correlation"),
                std::string::npos);
    }
  }
}

}  // namespace
}  // namespace unintuit

// Copyright 2026 The rmcredit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rmcredit/merton.hpp"
#include "rmcredit/monte_carlo.hpp"

namespace rmcredit {

/// Two non-overlapping books of equal size on one simulated market.
struct TwoPortfolioSpec {
  std::vector<Contract> assets;  // one contract per market asset
  double maturity = 252.0;
  MarketCorrelation market;      // over all assets
  DriftConvention drift = DriftConvention::kLogReturn;
  std::vector<std::size_t> first;
  std::vector<std::size_t> second;
};

struct JointLossSamples {
  std::vector<double> first;
  std::vector<double> second;
  double nondefault_first = 0.0;
  double nondefault_second = 0.0;
  double correlation = 0.0;  // Pearson correlation of the two loss samples
  std::uint64_t seed = 0;
};

JointLossSamples joint_loss_samples(const TwoPortfolioSpec& spec, std::size_t trials, std::uint64_t seed,
                                    std::size_t workers = 0);

double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y);

enum class TieMode { kJitter, kMidRank };

/// density(i, j): first-portfolio quantile bin i, second-portfolio bin j, normalized so
/// that sum(density) / B^2 = 1.
struct CopulaHistogram {
  std::size_t bins = 0;
  Eigen::MatrixXd density;
  std::size_t sample_count = 0;

  double total_mass() const { return density.sum() / static_cast<double>(bins * bins); }
};

inline constexpr std::size_t kDefaultCopulaBins = 20;

/// Pseudo-observations (rank - 1/2) / n of one margin. Ties are broken at
/// random within the tied block (kJitter, seeded) or share their mean rank.
std::vector<double> pseudo_observations(const std::vector<double>& values, TieMode ties, std::uint64_t seed,
                                        std::uint64_t margin);

CopulaHistogram empirical_copula(const std::vector<double>& first, const std::vector<double>& second,
                                 std::size_t bins = kDefaultCopulaBins, TieMode ties = TieMode::kJitter,
                                 std::uint64_t seed = 0);

/// Bin masses of the Gaussian copula with the given correlation, as a density.
CopulaHistogram gaussian_copula_histogram(double correlation, std::size_t bins = kDefaultCopulaBins);

inline constexpr double kCornerQuantile = 0.1;

struct CornerStatistic {
  std::string name;  // "(0,0)", "(0,1)", "(1,0)", "(1,1)"
  double empirical = 0.0;
  double gaussian = 0.0;
  double deviation = 0.0;
  double standard_error = 0.0;
};

struct DeviationMap {
  Eigen::MatrixXd difference;  // empirical - gaussian density per bin
  double loss_correlation = 0.0;
  std::array<CornerStatistic, 4> corners;
};

/// Corner boxes [0, q]^2 etc. are read off the histograms (q a multiple of 1/B);
/// the standard error is binomial in the box mass with `sample_count` draws.
DeviationMap deviation_map(const CopulaHistogram& empirical, const CopulaHistogram& gaussian, double loss_correlation);

struct ScenarioOptions {
  std::uint64_t seed = 0;
  std::size_t trials = 0;       // per repetition; 0 selects the scenario default
  std::size_t repetitions = 0;  // 0 selects the scenario default
  std::size_t portfolio_size = 50;
  std::size_t bins = kDefaultCopulaBins;
  TieMode ties = TieMode::kJitter;
  std::size_t workers = 0;
};

struct ScenarioReport {
  std::string name;
  std::map<std::string, double> parameters;
  std::size_t repetitions = 0;
  std::size_t trials = 0;
  CopulaHistogram empirical;  // averaged over repetitions
  CopulaHistogram gaussian;   // average of the per-repetition Gaussian references
  DeviationMap deviation;
  double loss_correlation = 0.0;  // mean over repetitions
  double loss_correlation_sd = 0.0;
  double nondefault_first = 0.0;
  double nondefault_second = 0.0;
  double nondefault_sd = 0.0;
  std::vector<double> correlations;
};

/// c0-gaussian, c0-mixture, drift-high, drift-mid, drift-neg, hetero-vol, two-market.
std::vector<std::string> scenario_names();
ScenarioReport scenario_suite(const std::string& name, const ScenarioOptions& options);

/// One trading year in trading days.
inline constexpr double kTradingDaysPerYear = 252.0;

}  // namespace rmcredit

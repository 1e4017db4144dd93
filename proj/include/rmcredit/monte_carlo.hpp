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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rmcredit/market_data.hpp"
#include "rmcredit/merton.hpp"
#include "rmcredit/rng.hpp"
#include "rmcredit/wishart.hpp"

namespace rmcredit {

/// How a contract's drift enters ln V(T): kIto uses (mu - rho^2 / 2) T,
/// kLogReturn treats mu as the mean log return per time unit.
enum class DriftConvention { kIto, kLogReturn };

/// Correlation structure of the simulated market.
struct MarketCorrelation {
  /// Full correlation matrix; when empty the equicorrelation `c` is used.
  std::optional<CorrelationMatrix> matrix;
  double c = 0.0;
  /// Mixture parameter; kStationary gives fixed-covariance dynamics.
  double n = kStationary;
};

/// Draws terminal log-value shocks X with Cov(X) = T diag(vol) C diag(vol),
/// scaled by sqrt(z / N), z ~ chi2_N, under mixture dynamics.
class TerminalValueSampler {
 public:
  TerminalValueSampler(const MarketCorrelation& market, const Eigen::VectorXd& vols, double maturity);

  Eigen::Index dim() const noexcept { return scale_.size(); }
  /// Fills `shocks`; the normals are drawn before the mixture variable so
  /// fixed and mixture runs share their Gaussian part trial by trial.
  void draw(RandomStream& rng, Eigen::VectorXd& shocks) const;

 private:
  Eigen::VectorXd scale_;  // vol_k sqrt(T)
  double c_ = 0.0;
  bool one_factor_ = true;
  Eigen::MatrixXd factor_;  // Cholesky factor of the correlation matrix
  double n_ = kStationary;
};

struct SimulationConfig {
  explicit SimulationConfig(PortfolioSpec portfolio_spec) : portfolio(std::move(portfolio_spec)) {}

  PortfolioSpec portfolio;
  MarketCorrelation market;
  std::size_t trials = 100000;
  std::uint64_t seed = 0;
  DriftConvention drift = DriftConvention::kIto;
  std::size_t workers = 0;  // 0: hardware concurrency
};

/// Terminal asset values V(T_M) of one trial.
Eigen::VectorXd simulate_terminal_values(const SimulationConfig& config, RandomStream& rng);

struct LossSamples {
  std::vector<double> losses;
  double nondefault_ratio = 0.0;
  std::uint64_t seed = 0;
};

/// Trial i uses the counter-based stream (seed, trial i); output is identical for any worker count.
LossSamples run_losses(const SimulationConfig& config);

struct RiskEntry {
  double alpha = 0.0;
  double var = 0.0;
  double etl = 0.0;
  double var_se = 0.0;
  double etl_se = 0.0;
  std::size_t tail_count = 0;
  std::string warning;
};

struct RiskReport {
  std::vector<RiskEntry> entries;
  double mean_loss = 0.0;
  double mean_se = 0.0;
  std::size_t trials = 0;
};

inline constexpr std::size_t kMinTailSamples = 20;

/// VaR = sorted[ceil(alpha n) - 1]; ETL = mean of the samples above that
/// order statistic (VaR itself when there are none).
RiskReport var_etl(const LossSamples& samples, const std::vector<double>& alphas);

struct Deviation {
  double alpha = 0.0;
  double var = 0.0;  // relative deviation
  double var_se = 0.0;
  double etl = 0.0;
  double etl_se = 0.0;
};

struct DeviationRow {
  std::string label;
  double n = kStationary;
  std::vector<Deviation> deviations;
};

/// (VaR_N - VaR_inf) / VaR_N and likewise for ETL, for each finite N in `ns`.
/// `config.market.n` is ignored.
std::vector<DeviationRow> compare_var_underestimation(const SimulationConfig& config, const std::vector<double>& ns,
                                                      const std::vector<double>& alphas);

/// (risk_effective - risk_empirical) / risk_empirical for the effective
/// correlation with heterogeneous vols and drifts ("effective-heterogeneous")
/// and with their averages ("effective-homogeneous"). `config.market.matrix` must be set.
std::vector<DeviationRow> compare_effective_vs_empirical(const SimulationConfig& config,
                                                         const std::vector<double>& alphas);

}  // namespace rmcredit

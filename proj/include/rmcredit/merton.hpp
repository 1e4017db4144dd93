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

// Merton structural credit model on a correlated market: contract and
// portfolio losses, the conditional loss moments given the mixture factor
// z and the common market factor u, and the averaged loss density with its
// infinite-portfolio limit.

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace rmcredit {

struct Contract {
  double face = 75.0;      // F
  double initial = 100.0;  // V0
  double drift = 0.0;      // mu per time unit
  double vol = 0.0;        // rho per sqrt time unit
};

/// Contracts sharing identical parameters, with their summed weights.
struct ContractGroup {
  Contract contract;
  double weight = 0.0;          // sum f_k
  double weight_squared = 0.0;  // sum f_k^2
  std::size_t count = 0;
};

class PortfolioSpec {
 public:
  PortfolioSpec(std::vector<Contract> contracts, double maturity);
  static PortfolioSpec homogeneous(std::size_t k, const Contract& contract, double maturity);

  const std::vector<Contract>& contracts() const noexcept { return contracts_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<ContractGroup>& groups() const noexcept { return groups_; }
  double maturity() const noexcept { return maturity_; }
  std::size_t size() const noexcept { return contracts_.size(); }
  bool is_homogeneous() const noexcept { return groups_.size() == 1; }

 private:
  std::vector<Contract> contracts_;
  std::vector<double> weights_;
  std::vector<ContractGroup> groups_;
  double maturity_;
};

/// (F - V) / F when V < F, else 0.
double contract_loss(double terminal_value, double face);
/// sum f_k L_k.
double portfolio_loss(const std::vector<double>& losses, const PortfolioSpec& spec);

/// Merton default probability under geometric Brownian motion.
double default_probability(const Contract& contract, double maturity);

/// Largest admissible average correlation (c must stay below 1 by this margin).
inline constexpr double kMaxCorrelation = 1.0 - 1e-6;

/// j-th conditional loss moment E[L_k^j | z, u] of one contract, with z the
/// chi-squared(N) mixture variable and u ~ Normal(0, 1/N) the common factor.
double moment_mjk(int j, const Contract& contract, double maturity, double z, double u, double c, double n);
/// d m_1 / d u at (z, u); strictly positive whenever c > 0 and vol > 0.
double moment_m1_derivative(const Contract& contract, double maturity, double z, double u, double c, double n);

struct PortfolioMoments {
  double m1 = 0.0;
  double m2 = 0.0;
};

/// M1 = sum f_k m_1k, M2 = sum f_k^2 (m_2k - m_1k^2), clipped at 0.
PortfolioMoments portfolio_moments(double z, double u, const PortfolioSpec& spec, double c, double n);

struct LossDensityCurve {
  std::vector<double> grid;     // ascending L values
  std::vector<double> density;  // averaged density at the grid points
  /// P(L <= grid[i]) including the mass the Gaussian kernel places below 0
  /// (empty if not available; then risk measures use the trapezoid CDF).
  std::vector<double> cdf;

  double c = 0.0;
  double n = 0.0;
  std::size_t portfolio_size = 0;  // 0 for the infinite-portfolio limit
  std::string method;
  std::size_t z_nodes = 0;
  std::size_t u_nodes = 0;
  double z_step = 0.0;  // step in ln z (trapezoid) or 0 (Gauss rule)
  double u_step = 0.0;

  double mass_unit_interval = 0.0;  // exact P(0 <= L <= 1) of the expansion
  double mass_below_zero = 0.0;
  double mass_above_one = 0.0;
  /// |1 - (exact mass up to grid[1] + trapezoid over the remaining cells + exact mass above the grid)|.
  double normalization_defect = 0.0;
  std::size_t skipped_nodes = 0;
};

struct LossQuadratureOptions {
  /// Largest admissible change of M1 between neighbouring nodes, in units of sqrt(M2).
  double resolution = 0.5;
  /// M1 below this is ignored by the resolution check (the no-default region).
  double active_threshold = 1e-4;
  /// Nodes whose log weight is this far below the peak are dropped.
  double log_weight_cutoff = 36.0;
  /// Standard deviations of each Gaussian kernel spread onto the grid.
  double kernel_width = 9.0;
  std::size_t max_nodes = 40'000'000;
};

/// Averaged loss density of a finite portfolio.
LossDensityCurve avg_loss_density(const std::vector<double>& grid, const PortfolioSpec& spec, double c, double n,
                                  const LossQuadratureOptions& options = {});

struct LimitingOptions {
  std::size_t z_nodes = 64;
  double root_tolerance = 1e-12;
  double accept_tolerance = 1e-10;
  double min_derivative = 1e-14;
};

/// K -> infinity density of a homogeneous portfolio.
LossDensityCurve limiting_loss_density(const std::vector<double>& grid, const PortfolioSpec& spec, double c, double n,
                                       const LimitingOptions& options = {});

/// Root of m_1(z, u) = level in u; returns false if no root lies in the expanded bracket.
bool solve_common_factor(const Contract& contract, double maturity, double z, double c, double n, double level,
                         double* u, double tolerance = 1e-12);

std::vector<double> uniform_loss_grid(std::size_t points = 512);
/// 0 followed by `points - 1` values log-spaced on [smallest, 1].
std::vector<double> log_loss_grid(std::size_t points, double smallest);

struct CurveRisk {
  double alpha = 0.0;
  double var = 0.0;
  double etl = 0.0;
};

std::vector<CurveRisk> risk_measures_from_curve(const LossDensityCurve& curve, const std::vector<double>& alphas);

/// Trapezoid integral of the density over [lower, upper] (clipped to the grid).
double curve_mass(const LossDensityCurve& curve, double lower, double upper);
double curve_mean(const LossDensityCurve& curve);

/// max |a - b| / max b over grid points in [lower, upper]; grids must match.
double curve_sup_distance(const LossDensityCurve& a, const LossDensityCurve& b, double lower, double upper);

}  // namespace rmcredit

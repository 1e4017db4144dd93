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

#include "rmcredit/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "rmcredit/error.hpp"
#include "rmcredit/parallel.hpp"

namespace rmcredit {

namespace {

Eigen::VectorXd portfolio_vols(const PortfolioSpec& portfolio) {
  Eigen::VectorXd vols(static_cast<Eigen::Index>(portfolio.size()));
  for (std::size_t k = 0; k < portfolio.size(); ++k) vols(static_cast<Eigen::Index>(k)) = portfolio.contracts()[k].vol;
  return vols;
}

// ln(V0 / F) plus the deterministic part of ln V(T) / V0; default iff shock < -offset.
std::vector<double> default_offsets(const PortfolioSpec& portfolio, DriftConvention drift) {
  std::vector<double> out;
  out.reserve(portfolio.size());
  const double t = portfolio.maturity();
  for (const auto& k : portfolio.contracts()) {
    const double mean_log = drift == DriftConvention::kIto ? (k.drift - 0.5 * k.vol * k.vol) * t : k.drift * t;
    out.push_back(std::log(k.initial / k.face) + mean_log);
  }
  return out;
}

double relative_se(double num, double num_se, double den, double den_se) {
  // Delta method for num / den with independent errors.
  const double a = num_se / den;
  const double b = num * den_se / (den * den);
  return std::sqrt(a * a + b * b);
}

}  // namespace

TerminalValueSampler::TerminalValueSampler(const MarketCorrelation& market, const Eigen::VectorXd& vols,
                                           double maturity)
    : scale_(vols * std::sqrt(maturity)), c_(market.c), one_factor_(!market.matrix), n_(market.n) {
  require(maturity > 0.0, "sampler: maturity must be positive");
  require(market.n > 0.0, "sampler: N must be positive");
  if (market.matrix) {
    require(market.matrix->dim() == vols.size(), "sampler: correlation matrix does not match the number of assets");
    factor_ = covariance_factor(market.matrix->entries());
  } else {
    require(market.c >= 0.0 && market.c <= 1.0, "sampler: equicorrelation c must lie in [0, 1]");
  }
}

void TerminalValueSampler::draw(RandomStream& rng, Eigen::VectorXd& shocks) const {
  const Eigen::Index k = dim();
  shocks.resize(k);
  if (one_factor_) {
    const double common = std::sqrt(c_) * rng.normal();
    const double idio = std::sqrt(1.0 - c_);
    for (Eigen::Index i = 0; i < k; ++i) shocks(i) = scale_(i) * (common + idio * rng.normal());
  } else {
    Eigen::VectorXd eps(k);
    for (Eigen::Index i = 0; i < k; ++i) eps(i) = rng.normal();
    shocks.noalias() = factor_ * eps;
    shocks.array() *= scale_.array();
  }
  if (n_ != kStationary) shocks *= std::sqrt(rng.chi_squared(n_) / n_);
}

Eigen::VectorXd simulate_terminal_values(const SimulationConfig& config, RandomStream& rng) {
  const TerminalValueSampler sampler(config.market, portfolio_vols(config.portfolio), config.portfolio.maturity());
  Eigen::VectorXd shocks;
  sampler.draw(rng, shocks);
  const auto offsets = default_offsets(config.portfolio, config.drift);
  Eigen::VectorXd values(shocks.size());
  for (Eigen::Index i = 0; i < shocks.size(); ++i) {
    const auto& k = config.portfolio.contracts()[static_cast<std::size_t>(i)];
    values(i) = k.face * std::exp(offsets[static_cast<std::size_t>(i)] + shocks(i));
  }
  return values;
}

LossSamples run_losses(const SimulationConfig& config) {
  require(config.trials >= 1, "run_losses: need at least one trial");
  const auto& portfolio = config.portfolio;
  const TerminalValueSampler sampler(config.market, portfolio_vols(portfolio), portfolio.maturity());
  const auto offsets = default_offsets(portfolio, config.drift);
  const auto& weights = portfolio.weights();

  LossSamples out;
  out.seed = config.seed;
  out.losses.assign(config.trials, 0.0);
  parallel_for(config.trials, config.workers, [&](std::size_t begin, std::size_t end) {
    Eigen::VectorXd shocks;
    for (std::size_t trial = begin; trial < end; ++trial) {
      RandomStream rng(config.seed, stream_id(StreamTag::kTrial, trial));
      sampler.draw(rng, shocks);
      double loss = 0.0;
      for (std::size_t k = 0; k < offsets.size(); ++k) {
        const double log_ratio = offsets[k] + shocks(static_cast<Eigen::Index>(k));
        if (log_ratio < 0.0) loss -= weights[k] * std::expm1(log_ratio);
      }
      out.losses[trial] = std::clamp(loss, 0.0, 1.0);
    }
  });
  const auto zero = std::count(out.losses.begin(), out.losses.end(), 0.0);
  out.nondefault_ratio = static_cast<double>(zero) / static_cast<double>(config.trials);
  return out;
}

RiskReport var_etl(const LossSamples& samples, const std::vector<double>& alphas) {
  require(!samples.losses.empty(), "var_etl: no samples");
  std::vector<double> sorted = samples.losses;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double count = static_cast<double>(n);

  RiskReport report;
  report.trials = n;
  const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / count;
  double sq = 0.0;
  for (const double x : sorted) sq += (x - mean) * (x - mean);
  report.mean_loss = mean;
  report.mean_se = std::sqrt(sq / count / count);

  for (const double alpha : alphas) {
    require(alpha > 0.0 && alpha < 1.0, "var_etl: alpha must lie in (0, 1)");
    RiskEntry e;
    e.alpha = alpha;
    // ceil(alpha n) with a guard against alpha n landing just above an integer by rounding.
    const auto rank = static_cast<std::size_t>(std::max(1.0, std::ceil(alpha * count - 1e-9)));
    const std::size_t index = std::min(rank, n) - 1;
    e.var = sorted[index];
    e.tail_count = n - 1 - index;
    if (e.tail_count > 0) {
      double tail = 0.0;
      for (std::size_t i = index + 1; i < n; ++i) tail += sorted[i];
      e.etl = tail / static_cast<double>(e.tail_count);
      double tail_sq = 0.0;
      for (std::size_t i = index + 1; i < n; ++i) tail_sq += (sorted[i] - e.etl) * (sorted[i] - e.etl);
      e.etl_se = std::sqrt(tail_sq / static_cast<double>(e.tail_count)) / std::sqrt(static_cast<double>(e.tail_count));
    } else {
      e.etl = e.var;
    }
    const auto spread = static_cast<std::size_t>(std::ceil(std::sqrt(count * alpha * (1.0 - alpha))));
    const std::size_t hi = std::min(n - 1, index + spread);
    const std::size_t lo = index >= spread ? index - spread : 0;
    e.var_se = 0.5 * (sorted[hi] - sorted[lo]);
    if (e.tail_count < kMinTailSamples)
      e.warning = "only " + std::to_string(e.tail_count) + " samples beyond VaR; tail estimate is wide";
    report.entries.push_back(e);
  }
  return report;
}

namespace {

Deviation relative_deviation(const RiskEntry& target, const RiskEntry& reference, bool relative_to_target) {
  // relative_to_target: (target - reference) / target; else (target - reference) / reference.
  Deviation d;
  d.alpha = target.alpha;
  if (relative_to_target) {
    d.var = target.var > 0.0 ? (target.var - reference.var) / target.var : 0.0;
    d.var_se = target.var > 0.0 ? relative_se(reference.var, reference.var_se, target.var, target.var_se) : 0.0;
    d.etl = target.etl > 0.0 ? (target.etl - reference.etl) / target.etl : 0.0;
    d.etl_se = target.etl > 0.0 ? relative_se(reference.etl, reference.etl_se, target.etl, target.etl_se) : 0.0;
  } else {
    d.var = reference.var > 0.0 ? (target.var - reference.var) / reference.var : 0.0;
    d.var_se = reference.var > 0.0 ? relative_se(target.var, target.var_se, reference.var, reference.var_se) : 0.0;
    d.etl = reference.etl > 0.0 ? (target.etl - reference.etl) / reference.etl : 0.0;
    d.etl_se = reference.etl > 0.0 ? relative_se(target.etl, target.etl_se, reference.etl, reference.etl_se) : 0.0;
  }
  return d;
}

}  // namespace

std::vector<DeviationRow> compare_var_underestimation(const SimulationConfig& config, const std::vector<double>& ns,
                                                      const std::vector<double>& alphas) {
  SimulationConfig fixed = config;
  fixed.market.n = kStationary;
  const RiskReport stationary = var_etl(run_losses(fixed), alphas);
  std::vector<DeviationRow> rows;
  for (const double n : ns) {
    require(n > 0.0, "compare_var_underestimation: N must be positive");
    SimulationConfig mixture = config;
    mixture.market.n = n;
    const RiskReport fluctuating = n == kStationary ? stationary : var_etl(run_losses(mixture), alphas);
    DeviationRow row;
    char label[32];
    std::snprintf(label, sizeof label, "N=%g", n);
    row.label = label;
    row.n = n;
    for (std::size_t a = 0; a < alphas.size(); ++a)
      row.deviations.push_back(relative_deviation(fluctuating.entries[a], stationary.entries[a], true));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<DeviationRow> compare_effective_vs_empirical(const SimulationConfig& config,
                                                         const std::vector<double>& alphas) {
  require(config.market.matrix.has_value(), "compare_effective_vs_empirical: an empirical correlation matrix is required");
  const RiskReport empirical = var_etl(run_losses(config), alphas);

  SimulationConfig effective = config;
  effective.market.matrix.reset();
  effective.market.c = effective_correlation(*config.market.matrix).c;
  require(effective.market.c >= 0.0, "compare_effective_vs_empirical: negative average correlation");

  std::vector<Contract> averaged = config.portfolio.contracts();
  double vol = 0.0, drift = 0.0;
  for (const auto& k : averaged) {
    vol += k.vol;
    drift += k.drift;
  }
  vol /= static_cast<double>(averaged.size());
  drift /= static_cast<double>(averaged.size());
  for (auto& k : averaged) {
    k.vol = vol;
    k.drift = drift;
  }
  SimulationConfig homogeneous = effective;
  homogeneous.portfolio = PortfolioSpec(std::move(averaged), config.portfolio.maturity());

  std::vector<DeviationRow> rows;
  for (const auto& [label, variant] : {std::pair<const char*, const SimulationConfig*>{"effective-heterogeneous", &effective},
                                       std::pair<const char*, const SimulationConfig*>{"effective-homogeneous", &homogeneous}}) {
    const RiskReport report = var_etl(run_losses(*variant), alphas);
    DeviationRow row;
    row.label = label;
    row.n = config.market.n;
    for (std::size_t a = 0; a < alphas.size(); ++a)
      row.deviations.push_back(relative_deviation(report.entries[a], empirical.entries[a], false));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace rmcredit

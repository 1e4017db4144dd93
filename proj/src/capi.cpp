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

#include "rmcredit/rmcredit.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "rmcredit/copula.hpp"
#include "rmcredit/error.hpp"
#include "rmcredit/market_data.hpp"
#include "rmcredit/merton.hpp"
#include "rmcredit/monte_carlo.hpp"
#include "rmcredit/wishart.hpp"

using namespace rmcredit;

struct rmc_market {
  std::vector<PriceSeries> series;
};

struct rmc_returns {
  ReturnMatrix matrix;
};

struct rmc_portfolio {
  PortfolioSpec spec;
};

struct rmc_loss_curve {
  LossDensityCurve curve;
};

struct rmc_losses {
  LossSamples samples;
};

struct rmc_scenario {
  ScenarioReport report;
  std::vector<std::pair<std::string, double>> parameters;
};

namespace {

thread_local std::string last_error;

template <class F>
rmc_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return RMC_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return static_cast<rmc_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return RMC_ERR_NUMERIC;
  } catch (const std::exception& e) {
    last_error = e.what();
    return RMC_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return RMC_ERR_INTERNAL;
  }
}

void check_out(const void* out, const char* what) {
  require(out != nullptr, std::string(what) + ": null output pointer");
}

Contract to_contract(const rmc_contract& c) { return Contract{c.face, c.initial, c.drift, c.vol}; }

void copy_text(char* dst, std::size_t capacity, const std::string& src) {
  const std::size_t n = std::min(capacity - 1, src.size());
  std::memcpy(dst, src.data(), n);
  dst[n] = '\0';
}

}  // namespace

extern "C" {

const char* rmc_version(void) { return "1.0.0"; }

const char* rmc_last_error(void) { return last_error.c_str(); }

const char* rmc_status_name(rmc_status status) {
  if (status == RMC_OK) return "ok";
  if (status == RMC_ERR_INTERNAL) return "internal";
  if (status < RMC_OK || status > RMC_ERR_INTERNAL) return "unknown";
  return to_string(static_cast<ErrorCode>(status));
}

void rmc_synthetic_params_default(rmc_synthetic_params* params) {
  if (!params) return;
  const SyntheticMarketSpec d;
  *params = rmc_synthetic_params{d.assets, d.observations, d.correlation, d.volatility, d.drift,
                                 d.fluctuation_n, d.regime_length, d.seed, nullptr, nullptr};
}

rmc_status rmc_market_synthetic(const rmc_synthetic_params* params, rmc_market** out) {
  return guarded([&] {
    check_out(out, "rmc_market_synthetic");
    require(params != nullptr, "rmc_market_synthetic: null parameters");
    SyntheticMarketSpec spec;
    spec.assets = params->assets;
    spec.observations = params->observations;
    spec.correlation = params->correlation;
    spec.volatility = params->volatility;
    spec.drift = params->drift;
    spec.fluctuation_n = params->fluctuation_n;
    spec.regime_length = params->regime_length;
    spec.seed = params->seed;
    if (params->volatilities) spec.volatilities.assign(params->volatilities, params->volatilities + params->assets);
    if (params->drifts) spec.drifts.assign(params->drifts, params->drifts + params->assets);
    *out = new rmc_market{generate_synthetic_market(spec)};
  });
}

rmc_status rmc_market_load_csv(const char* path, rmc_market** out) {
  return guarded([&] {
    check_out(out, "rmc_market_load_csv");
    require(path != nullptr, "rmc_market_load_csv: null path");
    *out = new rmc_market{load_csv(path)};
  });
}

rmc_status rmc_market_write_csv(const rmc_market* market, const char* path, const char* comment) {
  return guarded([&] {
    require(market != nullptr && path != nullptr, "rmc_market_write_csv: null argument");
    write_csv(market->series, path, comment ? comment : "");
  });
}

size_t rmc_market_assets(const rmc_market* market) { return market ? market->series.size() : 0; }

size_t rmc_market_observations(const rmc_market* market) {
  if (!market || market->series.empty()) return 0;
  return market->series.front().prices.size();
}

const char* rmc_market_asset_id(const rmc_market* market, size_t index) {
  if (!market || index >= market->series.size()) return nullptr;
  return market->series[index].asset_id.c_str();
}

void rmc_market_free(rmc_market* market) { delete market; }

rmc_status rmc_returns_compute(const rmc_market* market, int delta_t, rmc_returns** out) {
  return guarded([&] {
    check_out(out, "rmc_returns_compute");
    require(market != nullptr, "rmc_returns_compute: null market");
    *out = new rmc_returns{compute_returns(align_on_common_dates(market->series), delta_t)};
  });
}

size_t rmc_returns_assets(const rmc_returns* returns) {
  return returns ? static_cast<size_t>(returns->matrix.assets()) : 0;
}

size_t rmc_returns_observations(const rmc_returns* returns) {
  return returns ? static_cast<size_t>(returns->matrix.observations()) : 0;
}

const char* rmc_returns_asset_id(const rmc_returns* returns, size_t index) {
  if (!returns || index >= returns->matrix.asset_ids.size()) return nullptr;
  return returns->matrix.asset_ids[index].c_str();
}

void rmc_returns_free(rmc_returns* returns) { delete returns; }

rmc_status rmc_estimate_moments(const rmc_returns* returns, double maturity, double* mu, double* sigma,
                                double* rho) {
  return guarded([&] {
    require(returns != nullptr, "rmc_estimate_moments: null returns");
    const MomentEstimates m = estimate_drift_vol(returns->matrix, maturity);
    for (Eigen::Index k = 0; k < m.mu.size(); ++k) {
      if (mu) mu[k] = m.mu(k);
      if (sigma) sigma[k] = m.sigma(k);
      if (rho) rho[k] = m.rho(k);
    }
  });
}

rmc_status rmc_correlation(const rmc_returns* returns, double* matrix) {
  return guarded([&] {
    require(returns != nullptr, "rmc_correlation: null returns");
    check_out(matrix, "rmc_correlation");
    const CorrelationMatrix c = correlation_matrix(normalize_series(returns->matrix));
    const Eigen::Index k = c.dim();
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j) matrix[i * k + j] = c(i, j);
  });
}

rmc_status rmc_effective_correlation(const rmc_returns* returns, double* c) {
  return guarded([&] {
    require(returns != nullptr, "rmc_effective_correlation: null returns");
    check_out(c, "rmc_effective_correlation");
    *c = effective_correlation(correlation_matrix(normalize_series(returns->matrix))).c;
  });
}

rmc_status rmc_sliding_windows(const rmc_returns* returns, size_t window, size_t stride,
                               rmc_window_summary* summaries, size_t capacity, size_t* count, size_t* skipped) {
  return guarded([&] {
    require(returns != nullptr, "rmc_sliding_windows: null returns");
    const auto ensemble = sliding_correlation_ensemble(returns->matrix, static_cast<Eigen::Index>(window),
                                                       static_cast<Eigen::Index>(stride == 0 ? window : stride));
    if (count) *count = ensemble.matrices.size();
    if (skipped) *skipped = ensemble.skipped.size();
    for (std::size_t i = 0; i < ensemble.matrices.size() && i < capacity && summaries; ++i) {
      summaries[i].start = static_cast<size_t>(ensemble.window_starts[i]);
      summaries[i].effective_c = effective_correlation(ensemble.matrices[i]).c;
      summaries[i].min_eigenvalue = ensemble.matrices[i].min_eigenvalue();
    }
  });
}

void rmc_fit_options_default(rmc_fit_options* options) {
  if (!options) return;
  const FitOptions d;
  *options = rmc_fit_options{d.n_min, d.n_max, d.resolution, static_cast<size_t>(kDefaultAggregationWindow)};
}

rmc_status rmc_fit_n(const rmc_returns* returns, const rmc_fit_options* options, rmc_fit_result* result) {
  return guarded([&] {
    require(returns != nullptr, "rmc_fit_n: null returns");
    check_out(result, "rmc_fit_n");
    FitOptions fit;
    std::size_t window = static_cast<std::size_t>(kDefaultAggregationWindow);
    if (options) {
      fit.n_min = options->n_min;
      fit.n_max = options->n_max;
      fit.resolution = options->resolution;
      window = options->window;
    }
    const AggregatedSample sample =
        window == 0 ? aggregate_returns(returns->matrix, covariance_matrix(returns->matrix))
                    : aggregate_returns(returns->matrix, static_cast<Eigen::Index>(window));
    const FitReport report = fit_n(sample, fit);
    result->n_hat = report.n_hat;
    result->log_likelihood = report.log_likelihood;
    result->ks = report.ks;
    result->sample_size = report.sample_size;
    result->windows = sample.windows;
    result->dropped_components = sample.dropped_components;
    result->at_upper_bound = report.at_upper_bound ? 1 : 0;
    result->monotone_likelihood = report.monotone_likelihood ? 1 : 0;
    result->printed_prefactor_mass = report.printed_prefactor_mass;
    copy_text(result->warning, sizeof(result->warning), report.warning);
  });
}

rmc_status rmc_aggregated_density(double x, double n, double* density, double* cdf) {
  return guarded([&] {
    if (density) *density = univariate_aggregated_density(x, n);
    if (cdf) *cdf = univariate_aggregated_cdf(x, n);
  });
}

rmc_status rmc_portfolio_homogeneous(size_t size, rmc_contract contract, double maturity, rmc_portfolio** out) {
  return guarded([&] {
    check_out(out, "rmc_portfolio_homogeneous");
    *out = new rmc_portfolio{PortfolioSpec::homogeneous(size, to_contract(contract), maturity)};
  });
}

rmc_status rmc_portfolio_create(const rmc_contract* contracts, size_t size, double maturity, rmc_portfolio** out) {
  return guarded([&] {
    check_out(out, "rmc_portfolio_create");
    require(contracts != nullptr || size == 0, "rmc_portfolio_create: null contracts");
    std::vector<Contract> list;
    list.reserve(size);
    for (size_t i = 0; i < size; ++i) list.push_back(to_contract(contracts[i]));
    *out = new rmc_portfolio{PortfolioSpec(std::move(list), maturity)};
  });
}

size_t rmc_portfolio_size(const rmc_portfolio* portfolio) { return portfolio ? portfolio->spec.size() : 0; }

void rmc_portfolio_free(rmc_portfolio* portfolio) { delete portfolio; }

rmc_status rmc_default_probability(rmc_contract contract, double maturity, double* probability) {
  return guarded([&] {
    check_out(probability, "rmc_default_probability");
    *probability = default_probability(to_contract(contract), maturity);
  });
}

rmc_status rmc_loss_grid(size_t points, double smallest, double* grid) {
  return guarded([&] {
    check_out(grid, "rmc_loss_grid");
    const auto values = smallest == 0.0 ? uniform_loss_grid(points) : log_loss_grid(points, smallest);
    std::copy(values.begin(), values.end(), grid);
  });
}

rmc_status rmc_loss_density(const rmc_portfolio* portfolio, double c, double n, const double* grid, size_t points,
                            rmc_loss_method method, rmc_loss_curve** out) {
  return guarded([&] {
    check_out(out, "rmc_loss_density");
    require(portfolio != nullptr, "rmc_loss_density: null portfolio");
    require(grid != nullptr && points >= 2, "rmc_loss_density: need at least two grid points");
    const std::vector<double> values(grid, grid + points);
    LossDensityCurve curve = method == RMC_LOSS_LIMIT ? limiting_loss_density(values, portfolio->spec, c, n)
                                                      : avg_loss_density(values, portfolio->spec, c, n);
    *out = new rmc_loss_curve{std::move(curve)};
  });
}

rmc_status rmc_curve_info_get(const rmc_loss_curve* curve, rmc_curve_info* info) {
  return guarded([&] {
    require(curve != nullptr, "rmc_curve_info_get: null curve");
    check_out(info, "rmc_curve_info_get");
    const LossDensityCurve& c = curve->curve;
    *info = rmc_curve_info{c.grid.size(),      c.normalization_defect, c.mass_unit_interval,
                           c.mass_below_zero,  c.mass_above_one,       c.skipped_nodes,
                           c.z_nodes,          c.u_nodes};
  });
}

const char* rmc_curve_method(const rmc_loss_curve* curve) { return curve ? curve->curve.method.c_str() : nullptr; }

rmc_status rmc_curve_values(const rmc_loss_curve* curve, double* grid, double* density, double* cdf) {
  return guarded([&] {
    require(curve != nullptr, "rmc_curve_values: null curve");
    const LossDensityCurve& c = curve->curve;
    if (grid) std::copy(c.grid.begin(), c.grid.end(), grid);
    if (density) std::copy(c.density.begin(), c.density.end(), density);
    if (cdf) {
      require(!c.cdf.empty(), "rmc_curve_values: curve carries no CDF");
      std::copy(c.cdf.begin(), c.cdf.end(), cdf);
    }
  });
}

rmc_status rmc_curve_risk_measures(const rmc_loss_curve* curve, const double* alphas, size_t count,
                                   rmc_curve_risk* out) {
  return guarded([&] {
    require(curve != nullptr && alphas != nullptr, "rmc_curve_risk_measures: null argument");
    check_out(out, "rmc_curve_risk_measures");
    const auto risks = risk_measures_from_curve(curve->curve, std::vector<double>(alphas, alphas + count));
    for (size_t i = 0; i < risks.size(); ++i) out[i] = rmc_curve_risk{risks[i].alpha, risks[i].var, risks[i].etl};
  });
}

rmc_status rmc_curve_mass(const rmc_loss_curve* curve, double lower, double upper, double* mass) {
  return guarded([&] {
    require(curve != nullptr, "rmc_curve_mass: null curve");
    check_out(mass, "rmc_curve_mass");
    *mass = curve_mass(curve->curve, lower, upper);
  });
}

rmc_status rmc_curve_mean(const rmc_loss_curve* curve, double* mean) {
  return guarded([&] {
    require(curve != nullptr, "rmc_curve_mean: null curve");
    check_out(mean, "rmc_curve_mean");
    *mean = curve_mean(curve->curve);
  });
}

void rmc_curve_free(rmc_loss_curve* curve) { delete curve; }

void rmc_simulation_default(rmc_simulation* simulation) {
  if (!simulation) return;
  *simulation = rmc_simulation{0.0, INFINITY, nullptr, 100000, 0, RMC_DRIFT_ITO, 0};
}

rmc_status rmc_simulate_losses(const rmc_portfolio* portfolio, const rmc_simulation* simulation, rmc_losses** out) {
  return guarded([&] {
    check_out(out, "rmc_simulate_losses");
    require(portfolio != nullptr && simulation != nullptr, "rmc_simulate_losses: null argument");
    SimulationConfig config(portfolio->spec);
    config.market.c = simulation->c;
    config.market.n = simulation->n;
    if (simulation->correlation) {
      const auto k = static_cast<Eigen::Index>(portfolio->spec.size());
      Eigen::MatrixXd m(k, k);
      for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) m(i, j) = simulation->correlation[i * k + j];
      config.market.matrix = CorrelationMatrix(m);
    }
    config.trials = simulation->trials;
    config.seed = simulation->seed;
    config.drift = simulation->drift == RMC_DRIFT_LOG_RETURN ? DriftConvention::kLogReturn : DriftConvention::kIto;
    config.workers = simulation->workers;
    *out = new rmc_losses{run_losses(config)};
  });
}

size_t rmc_losses_count(const rmc_losses* losses) { return losses ? losses->samples.losses.size() : 0; }

const double* rmc_losses_data(const rmc_losses* losses) { return losses ? losses->samples.losses.data() : nullptr; }

rmc_status rmc_losses_risk(const rmc_losses* losses, const double* alphas, size_t count, rmc_risk_entry* entries,
                           rmc_risk_summary* summary) {
  return guarded([&] {
    require(losses != nullptr, "rmc_losses_risk: null losses");
    require(alphas != nullptr || count == 0, "rmc_losses_risk: null alphas");
    const RiskReport report = var_etl(losses->samples, std::vector<double>(alphas, alphas + count));
    if (entries) {
      for (size_t i = 0; i < report.entries.size(); ++i) {
        const RiskEntry& e = report.entries[i];
        entries[i] = rmc_risk_entry{e.alpha, e.var, e.etl, e.var_se, e.etl_se, e.tail_count, e.warning.empty() ? 0 : 1};
      }
    }
    if (summary) {
      *summary = rmc_risk_summary{report.mean_loss, report.mean_se, losses->samples.nondefault_ratio, report.trials,
                                  losses->samples.seed};
    }
  });
}

void rmc_losses_free(rmc_losses* losses) { delete losses; }

size_t rmc_scenario_count(void) { return scenario_names().size(); }

const char* rmc_scenario_name(size_t index) {
  static const std::vector<std::string> names = scenario_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

void rmc_scenario_options_default(rmc_scenario_options* options) {
  if (!options) return;
  const ScenarioOptions d;
  *options = rmc_scenario_options{d.seed, d.trials, d.repetitions, d.portfolio_size, d.bins, RMC_TIES_JITTER, d.workers};
}

rmc_status rmc_scenario_run(const char* name, const rmc_scenario_options* options, rmc_scenario** out) {
  return guarded([&] {
    check_out(out, "rmc_scenario_run");
    require(name != nullptr && options != nullptr, "rmc_scenario_run: null argument");
    ScenarioOptions o;
    o.seed = options->seed;
    o.trials = options->trials;
    o.repetitions = options->repetitions;
    o.portfolio_size = options->portfolio_size;
    o.bins = options->bins;
    o.ties = options->ties == RMC_TIES_MIDRANK ? TieMode::kMidRank : TieMode::kJitter;
    o.workers = options->workers;
    auto* scenario = new rmc_scenario{scenario_suite(name, o), {}};
    for (const auto& [key, value] : scenario->report.parameters) scenario->parameters.emplace_back(key, value);
    *out = scenario;
  });
}

rmc_status rmc_scenario_summary_get(const rmc_scenario* scenario, rmc_scenario_summary* summary) {
  return guarded([&] {
    require(scenario != nullptr, "rmc_scenario_summary_get: null scenario");
    check_out(summary, "rmc_scenario_summary_get");
    const ScenarioReport& r = scenario->report;
    summary->bins = r.empirical.bins;
    summary->trials = r.trials;
    summary->repetitions = r.repetitions;
    summary->loss_correlation = r.loss_correlation;
    summary->loss_correlation_sd = r.loss_correlation_sd;
    summary->nondefault_first = r.nondefault_first;
    summary->nondefault_second = r.nondefault_second;
    summary->nondefault_sd = r.nondefault_sd;
    for (std::size_t i = 0; i < 4; ++i) {
      const CornerStatistic& c = r.deviation.corners[i];
      copy_text(summary->corners[i].name, sizeof(summary->corners[i].name), c.name);
      summary->corners[i].empirical = c.empirical;
      summary->corners[i].gaussian = c.gaussian;
      summary->corners[i].deviation = c.deviation;
      summary->corners[i].standard_error = c.standard_error;
    }
  });
}

rmc_status rmc_scenario_layer(const rmc_scenario* scenario, rmc_copula_layer layer, double* values) {
  return guarded([&] {
    require(scenario != nullptr, "rmc_scenario_layer: null scenario");
    check_out(values, "rmc_scenario_layer");
    const ScenarioReport& r = scenario->report;
    const Eigen::MatrixXd& m = layer == RMC_COPULA_EMPIRICAL  ? r.empirical.density
                               : layer == RMC_COPULA_GAUSSIAN ? r.gaussian.density
                                                              : r.deviation.difference;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) values[i * m.cols() + j] = m(i, j);
  });
}

size_t rmc_scenario_parameter_count(const rmc_scenario* scenario) {
  return scenario ? scenario->parameters.size() : 0;
}

rmc_status rmc_scenario_parameter(const rmc_scenario* scenario, size_t index, const char** key, double* value) {
  return guarded([&] {
    require(scenario != nullptr && index < scenario->parameters.size(), "rmc_scenario_parameter: index out of range");
    if (key) *key = scenario->parameters[index].first.c_str();
    if (value) *value = scenario->parameters[index].second;
  });
}

void rmc_scenario_free(rmc_scenario* scenario) { delete scenario; }

}  // extern "C"

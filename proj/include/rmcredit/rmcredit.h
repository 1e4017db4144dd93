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

#ifndef RMCREDIT_RMCREDIT_H
#define RMCREDIT_RMCREDIT_H

/*
 * C interface to the rmcredit library. All objects are opaque handles owned
 * by the caller and released with the matching *_free function. Every call
 * that can fail returns an rmc_status; the message of the last failure on the
 * calling thread is available from rmc_last_error().
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RMC_API __declspec(dllexport)
#else
#define RMC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rmc_status {
  RMC_OK = 0,
  RMC_ERR_ARGUMENT = 1,
  RMC_ERR_DOMAIN = 2,
  RMC_ERR_ALIGNMENT = 3,
  RMC_ERR_DEGENERATE = 4,
  RMC_ERR_NUMERIC = 5,
  RMC_ERR_PARSE = 6,
  RMC_ERR_IO = 7,
  RMC_ERR_INTERNAL = 8
} rmc_status;

RMC_API const char* rmc_version(void);
RMC_API const char* rmc_last_error(void);
RMC_API const char* rmc_status_name(rmc_status status);

/* Market data ------------------------------------------------------------- */

typedef struct rmc_market rmc_market;
typedef struct rmc_returns rmc_returns;

typedef struct rmc_synthetic_params {
  size_t assets;
  size_t observations;
  double correlation;
  double volatility;
  double drift;
  double fluctuation_n; /* INFINITY: fixed correlation */
  size_t regime_length;
  uint64_t seed;
  const double* volatilities; /* optional, length assets */
  const double* drifts;       /* optional, length assets */
} rmc_synthetic_params;

RMC_API void rmc_synthetic_params_default(rmc_synthetic_params* params);
RMC_API rmc_status rmc_market_synthetic(const rmc_synthetic_params* params, rmc_market** out);
RMC_API rmc_status rmc_market_load_csv(const char* path, rmc_market** out);
/* comment may be NULL; otherwise it is written as a leading '#' line. */
RMC_API rmc_status rmc_market_write_csv(const rmc_market* market, const char* path, const char* comment);
RMC_API size_t rmc_market_assets(const rmc_market* market);
RMC_API size_t rmc_market_observations(const rmc_market* market);
RMC_API const char* rmc_market_asset_id(const rmc_market* market, size_t index);
RMC_API void rmc_market_free(rmc_market* market);

/* Aligns the series on common dates and forms simple returns over delta_t steps. */
RMC_API rmc_status rmc_returns_compute(const rmc_market* market, int delta_t, rmc_returns** out);
RMC_API size_t rmc_returns_assets(const rmc_returns* returns);
RMC_API size_t rmc_returns_observations(const rmc_returns* returns);
RMC_API const char* rmc_returns_asset_id(const rmc_returns* returns, size_t index);
RMC_API void rmc_returns_free(rmc_returns* returns);

/* Each output array holds one entry per asset. */
RMC_API rmc_status rmc_estimate_moments(const rmc_returns* returns, double maturity, double* mu, double* sigma,
                                        double* rho);
/* Row-major K x K correlation matrix of the full sample. */
RMC_API rmc_status rmc_correlation(const rmc_returns* returns, double* matrix);
RMC_API rmc_status rmc_effective_correlation(const rmc_returns* returns, double* c);

typedef struct rmc_window_summary {
  size_t start;
  double effective_c;
  double min_eigenvalue;
} rmc_window_summary;

/* Writes up to capacity summaries; *count receives the number of windows used. */
RMC_API rmc_status rmc_sliding_windows(const rmc_returns* returns, size_t window, size_t stride,
                                       rmc_window_summary* summaries, size_t capacity, size_t* count,
                                       size_t* skipped);

/* Wishart ensemble -------------------------------------------------------- */

typedef struct rmc_fit_options {
  double n_min;
  double n_max;
  double resolution;
  size_t window; /* 0: one covariance for the whole sample */
} rmc_fit_options;

typedef struct rmc_fit_result {
  double n_hat;
  double log_likelihood;
  double ks;
  size_t sample_size;
  size_t windows;
  size_t dropped_components;
  int at_upper_bound;
  int monotone_likelihood;
  double printed_prefactor_mass;
  char warning[256];
} rmc_fit_result;

RMC_API void rmc_fit_options_default(rmc_fit_options* options);
RMC_API rmc_status rmc_fit_n(const rmc_returns* returns, const rmc_fit_options* options, rmc_fit_result* result);
/* Density and CDF of a rotated, rescaled return under the averaged model. */
RMC_API rmc_status rmc_aggregated_density(double x, double n, double* density, double* cdf);

/* Merton portfolio -------------------------------------------------------- */

typedef struct rmc_contract {
  double face;
  double initial;
  double drift;
  double vol;
} rmc_contract;

typedef struct rmc_portfolio rmc_portfolio;

RMC_API rmc_status rmc_portfolio_homogeneous(size_t size, rmc_contract contract, double maturity,
                                             rmc_portfolio** out);
RMC_API rmc_status rmc_portfolio_create(const rmc_contract* contracts, size_t size, double maturity,
                                        rmc_portfolio** out);
RMC_API size_t rmc_portfolio_size(const rmc_portfolio* portfolio);
RMC_API void rmc_portfolio_free(rmc_portfolio* portfolio);
RMC_API rmc_status rmc_default_probability(rmc_contract contract, double maturity, double* probability);

typedef enum rmc_loss_method { RMC_LOSS_FINITE = 0, RMC_LOSS_LIMIT = 1 } rmc_loss_method;

typedef struct rmc_loss_curve rmc_loss_curve;

typedef struct rmc_curve_info {
  size_t points;
  double normalization_defect;
  double mass_unit_interval;
  double mass_below_zero;
  double mass_above_one;
  size_t skipped_nodes;
  size_t factor_nodes;
  size_t shift_nodes;
} rmc_curve_info;

typedef struct rmc_curve_risk {
  double alpha;
  double var;
  double etl;
} rmc_curve_risk;

/* Uniform grid on [0, 1] when smallest is 0, else 0 followed by log-spaced points from smallest to 1. */
RMC_API rmc_status rmc_loss_grid(size_t points, double smallest, double* grid);
/* n is the fluctuation strength; INFINITY gives a fixed correlation. */
RMC_API rmc_status rmc_loss_density(const rmc_portfolio* portfolio, double c, double n, const double* grid,
                                    size_t points, rmc_loss_method method, rmc_loss_curve** out);
RMC_API rmc_status rmc_curve_info_get(const rmc_loss_curve* curve, rmc_curve_info* info);
RMC_API const char* rmc_curve_method(const rmc_loss_curve* curve);
RMC_API rmc_status rmc_curve_values(const rmc_loss_curve* curve, double* grid, double* density, double* cdf);
RMC_API rmc_status rmc_curve_risk_measures(const rmc_loss_curve* curve, const double* alphas, size_t count,
                                           rmc_curve_risk* out);
RMC_API rmc_status rmc_curve_mass(const rmc_loss_curve* curve, double lower, double upper, double* mass);
RMC_API rmc_status rmc_curve_mean(const rmc_loss_curve* curve, double* mean);
RMC_API void rmc_curve_free(rmc_loss_curve* curve);

/* Monte Carlo ------------------------------------------------------------- */

typedef enum rmc_drift_convention { RMC_DRIFT_ITO = 0, RMC_DRIFT_LOG_RETURN = 1 } rmc_drift_convention;

typedef struct rmc_simulation {
  double c;
  double n;
  const double* correlation; /* optional row-major K x K, overrides c */
  size_t trials;
  uint64_t seed;
  rmc_drift_convention drift;
  size_t workers; /* 0: all hardware threads */
} rmc_simulation;

typedef struct rmc_losses rmc_losses;

typedef struct rmc_risk_entry {
  double alpha;
  double var;
  double etl;
  double var_se;
  double etl_se;
  size_t tail_count;
  int low_tail_count;
} rmc_risk_entry;

typedef struct rmc_risk_summary {
  double mean_loss;
  double mean_se;
  double nondefault_ratio;
  size_t trials;
  uint64_t seed;
} rmc_risk_summary;

RMC_API void rmc_simulation_default(rmc_simulation* simulation);
RMC_API rmc_status rmc_simulate_losses(const rmc_portfolio* portfolio, const rmc_simulation* simulation,
                                       rmc_losses** out);
RMC_API size_t rmc_losses_count(const rmc_losses* losses);
RMC_API const double* rmc_losses_data(const rmc_losses* losses);
RMC_API rmc_status rmc_losses_risk(const rmc_losses* losses, const double* alphas, size_t count,
                                   rmc_risk_entry* entries, rmc_risk_summary* summary);
RMC_API void rmc_losses_free(rmc_losses* losses);

/* Copula scenarios -------------------------------------------------------- */

typedef enum rmc_tie_mode { RMC_TIES_JITTER = 0, RMC_TIES_MIDRANK = 1 } rmc_tie_mode;

typedef struct rmc_scenario_options {
  uint64_t seed;
  size_t trials;      /* 0: scenario default */
  size_t repetitions; /* 0: scenario default */
  size_t portfolio_size;
  size_t bins;
  rmc_tie_mode ties;
  size_t workers;
} rmc_scenario_options;

typedef struct rmc_corner {
  char name[8];
  double empirical;
  double gaussian;
  double deviation;
  double standard_error;
} rmc_corner;

typedef struct rmc_scenario_summary {
  size_t bins;
  size_t trials;
  size_t repetitions;
  double loss_correlation;
  double loss_correlation_sd;
  double nondefault_first;
  double nondefault_second;
  double nondefault_sd;
  rmc_corner corners[4];
} rmc_scenario_summary;

typedef enum rmc_copula_layer {
  RMC_COPULA_EMPIRICAL = 0,
  RMC_COPULA_GAUSSIAN = 1,
  RMC_COPULA_DEVIATION = 2
} rmc_copula_layer;

typedef struct rmc_scenario rmc_scenario;

RMC_API size_t rmc_scenario_count(void);
RMC_API const char* rmc_scenario_name(size_t index);
RMC_API void rmc_scenario_options_default(rmc_scenario_options* options);
RMC_API rmc_status rmc_scenario_run(const char* name, const rmc_scenario_options* options, rmc_scenario** out);
RMC_API rmc_status rmc_scenario_summary_get(const rmc_scenario* scenario, rmc_scenario_summary* summary);
/* Row-major bins x bins density; rows index the first portfolio. */
RMC_API rmc_status rmc_scenario_layer(const rmc_scenario* scenario, rmc_copula_layer layer, double* values);
RMC_API size_t rmc_scenario_parameter_count(const rmc_scenario* scenario);
RMC_API rmc_status rmc_scenario_parameter(const rmc_scenario* scenario, size_t index, const char** key,
                                          double* value);
RMC_API void rmc_scenario_free(rmc_scenario* scenario);

#ifdef __cplusplus
}
#endif

#endif

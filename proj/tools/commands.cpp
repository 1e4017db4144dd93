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

#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "json_output.hpp"

namespace rmcredit::cli {

namespace {

void check(rmc_status status, const char* call) {
  if (status == RMC_OK) return;
  const std::string message = rmc_last_error();
  throw LibraryError(status, message.empty() ? std::string(call) + " failed" : message);
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Market = std::unique_ptr<rmc_market, Deleter<rmc_market, rmc_market_free>>;
using Returns = std::unique_ptr<rmc_returns, Deleter<rmc_returns, rmc_returns_free>>;
using Portfolio = std::unique_ptr<rmc_portfolio, Deleter<rmc_portfolio, rmc_portfolio_free>>;
using Curve = std::unique_ptr<rmc_loss_curve, Deleter<rmc_loss_curve, rmc_curve_free>>;
using Losses = std::unique_ptr<rmc_losses, Deleter<rmc_losses, rmc_losses_free>>;
using Scenario = std::unique_ptr<rmc_scenario, Deleter<rmc_scenario, rmc_scenario_free>>;

class Outputs {
 public:
  explicit Outputs(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void text(const std::string& name, const std::string& content) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    out.close();
    if (!out) throw IoError(path.string(), "cannot write " + path.string());
    names_.push_back(name);
  }
  void json(const std::string& name, const Json& value) { text(name, dump_json(value)); }
  void record(const std::string& name) { names_.push_back(name); }
  std::filesystem::path path(const std::string& name) const { return dir_ / name; }
  std::vector<std::string> names() const { return names_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> names_;
};

std::string num(double v) { return format_number(v); }

std::string seed_comment(const RunConfig& config) { return "# seed=" + config.text("seed") + "\n"; }

Json resolved(const RunConfig& config) {
  Json out = Json::object();
  for (const auto& [key, value] : config.values) out[key] = value;
  return out;
}

Json number_or_text(double v) { return std::isfinite(v) ? Json(v) : Json(format_number(v)); }

Returns load_returns(const RunConfig& config) {
  rmc_market* market = nullptr;
  check(rmc_market_load_csv(config.text("input").c_str(), &market), "load prices");
  Market owned(market);
  rmc_returns* returns = nullptr;
  check(rmc_returns_compute(market, static_cast<int>(config.count("delta_t")), &returns), "compute returns");
  return Returns(returns);
}

std::vector<std::string> asset_ids(const rmc_returns* returns) {
  std::vector<std::string> ids;
  for (size_t i = 0; i < rmc_returns_assets(returns); ++i) ids.emplace_back(rmc_returns_asset_id(returns, i));
  return ids;
}

rmc_contract contract_from(const RunConfig& config) {
  return rmc_contract{config.real("face"), config.real("initial"), config.real("mu"), config.real("rho")};
}

std::vector<std::string> run_estimate(const RunConfig& config, Outputs& out) {
  const Returns returns = load_returns(config);
  const auto ids = asset_ids(returns.get());
  const size_t k = ids.size();
  std::vector<double> mu(k), sigma(k), rho(k), corr(k * k);
  check(rmc_estimate_moments(returns.get(), config.real("maturity"), mu.data(), sigma.data(), rho.data()),
        "estimate moments");
  check(rmc_correlation(returns.get(), corr.data()), "correlation matrix");
  double c = 0.0;
  check(rmc_effective_correlation(returns.get(), &c), "effective correlation");

  std::ostringstream moments;
  moments << "asset_id,mu,sigma,rho\n";
  for (size_t i = 0; i < k; ++i) moments << ids[i] << ',' << num(mu[i]) << ',' << num(sigma[i]) << ',' << num(rho[i]) << '\n';
  out.text("moments.csv", moments.str());

  std::ostringstream matrix;
  matrix << "asset_id";
  for (const auto& id : ids) matrix << ',' << id;
  matrix << '\n';
  for (size_t i = 0; i < k; ++i) {
    matrix << ids[i];
    for (size_t j = 0; j < k; ++j) matrix << ',' << num(corr[i * k + j]);
    matrix << '\n';
  }
  out.text("correlation.csv", matrix.str());

  Json meta = {{"observations", rmc_returns_observations(returns.get())},
               {"delta_t", config.count("delta_t")},
               {"effective_correlation", c}};
  if (const auto window = config.count("window"); window > 0) {
    const size_t stride = config.count("stride") ? config.count("stride") : window;
    size_t count = 0, skipped = 0;
    check(rmc_sliding_windows(returns.get(), window, stride, nullptr, 0, &count, &skipped), "sliding windows");
    std::vector<rmc_window_summary> windows(count);
    check(rmc_sliding_windows(returns.get(), window, stride, windows.data(), windows.size(), &count, &skipped),
          "sliding windows");
    std::ostringstream table;
    table << "window_start,effective_correlation,min_eigenvalue\n";
    for (const auto& w : windows) table << w.start << ',' << num(w.effective_c) << ',' << num(w.min_eigenvalue) << '\n';
    out.text("windows.csv", table.str());
    meta["window"] = window;
    meta["stride"] = stride;
    meta["windows_used"] = count;
    meta["windows_skipped"] = skipped;
  }
  Json doc = {{"dim", k}, {"asset_ids", ids}, {"entries", corr}, {"metadata", meta}};
  out.json("correlation.json", doc);
  return out.names();
}

std::vector<std::string> run_fit(const RunConfig& config, Outputs& out) {
  const Returns returns = load_returns(config);
  rmc_fit_options options;
  rmc_fit_options_default(&options);
  options.n_min = config.real("n_min");
  options.n_max = config.real("n_max");
  options.resolution = config.real("resolution");
  options.window = config.count("window");
  rmc_fit_result fit{};
  check(rmc_fit_n(returns.get(), &options, &fit), "fit fluctuation strength");

  const size_t points = config.count("density_points");
  const double range = config.real("density_range");
  std::ostringstream table;
  table << "x,density,cdf,gaussian_density\n";
  for (size_t i = 0; i < points; ++i) {
    const double x = -range + 2.0 * range * static_cast<double>(i) / static_cast<double>(points - 1);
    double p = 0.0, cdf = 0.0;
    check(rmc_aggregated_density(x, fit.n_hat, &p, &cdf), "aggregated density");
    const double gauss = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    table << num(x) << ',' << num(p) << ',' << num(cdf) << ',' << num(gauss) << '\n';
  }
  out.text("fit_density.csv", table.str());

  Json report = {{"N_hat", fit.n_hat},
                 {"loglik", fit.log_likelihood},
                 {"ks", fit.ks},
                 {"sample_size", fit.sample_size},
                 {"windows", fit.windows},
                 {"dropped_components", fit.dropped_components},
                 {"at_upper_bound", fit.at_upper_bound != 0},
                 {"monotone_likelihood", fit.monotone_likelihood != 0},
                 {"printed_prefactor_mass", fit.printed_prefactor_mass},
                 {"warning", std::string(fit.warning)}};
  out.json("fit.json", report);
  return out.names();
}

std::vector<std::string> run_loss_dist(const RunConfig& config, Outputs& out) {
  const bool limit = config.text("k") == "inf";
  const size_t k = limit ? 1 : config.count("k");
  rmc_portfolio* portfolio = nullptr;
  check(rmc_portfolio_homogeneous(k, contract_from(config), config.real("maturity"), &portfolio), "portfolio");
  const Portfolio owned(portfolio);

  const size_t points = config.count("grid_points");
  std::vector<double> grid(points);
  const double smallest = config.text("grid") == "log" ? config.real("grid_smallest") : 0.0;
  check(rmc_loss_grid(points, smallest, grid.data()), "loss grid");
  rmc_loss_curve* curve = nullptr;
  check(rmc_loss_density(portfolio, config.real("c"), config.real("n"), grid.data(), grid.size(),
                         limit ? RMC_LOSS_LIMIT : RMC_LOSS_FINITE, &curve),
        "loss density");
  const Curve owned_curve(curve);
  rmc_curve_info info{};
  check(rmc_curve_info_get(curve, &info), "curve info");
  std::vector<double> density(points), cdf(points);
  check(rmc_curve_values(curve, nullptr, density.data(), cdf.data()), "curve values");

  std::ostringstream table;
  table << "loss,density,cdf\n";
  for (size_t i = 0; i < points; ++i) table << num(grid[i]) << ',' << num(density[i]) << ',' << num(cdf[i]) << '\n';
  out.text("loss_density.csv", table.str());

  const auto alphas = config.reals("alphas");
  std::vector<rmc_curve_risk> risks(alphas.size());
  check(rmc_curve_risk_measures(curve, alphas.data(), alphas.size(), risks.data()), "risk measures");
  double mean = 0.0;
  check(rmc_curve_mean(curve, &mean), "mean loss");
  Json risk = Json::array();
  for (const auto& r : risks) risk.push_back({{"alpha", r.alpha}, {"var", r.var}, {"etl", r.etl}});
  Json report = {{"method", rmc_curve_method(curve)},
                 {"portfolio_size", limit ? Json("inf") : Json(k)},
                 {"c", config.real("c")},
                 {"n", number_or_text(config.real("n"))},
                 {"mean_loss", mean},
                 {"normalization_defect", info.normalization_defect},
                 {"mass_unit_interval", info.mass_unit_interval},
                 {"mass_below_zero", info.mass_below_zero},
                 {"mass_above_one", info.mass_above_one},
                 {"factor_nodes", info.factor_nodes},
                 {"shift_nodes", info.shift_nodes},
                 {"skipped_nodes", info.skipped_nodes},
                 {"risk", risk}};
  out.json("loss_risk.json", report);
  return out.names();
}

std::vector<std::string> run_var(const RunConfig& config, Outputs& out) {
  rmc_portfolio* portfolio = nullptr;
  check(rmc_portfolio_homogeneous(config.count("k"), contract_from(config), config.real("maturity"), &portfolio),
        "portfolio");
  const Portfolio owned(portfolio);
  rmc_simulation sim;
  rmc_simulation_default(&sim);
  sim.c = config.real("c");
  sim.n = config.real("n");
  sim.trials = config.count("trials");
  sim.seed = config.seed();
  sim.drift = config.text("drift") == "log_return" ? RMC_DRIFT_LOG_RETURN : RMC_DRIFT_ITO;
  sim.workers = config.count("workers");
  rmc_losses* losses = nullptr;
  check(rmc_simulate_losses(portfolio, &sim, &losses), "simulate losses");
  const Losses owned_losses(losses);

  const auto alphas = config.reals("alphas");
  std::vector<rmc_risk_entry> entries(alphas.size());
  rmc_risk_summary summary{};
  check(rmc_losses_risk(losses, alphas.data(), alphas.size(), entries.data(), &summary), "risk report");
  Json rows = Json::array();
  for (const auto& e : entries) {
    Json row = {{"alpha", e.alpha}, {"var", e.var},       {"var_se", e.var_se},
                {"etl", e.etl},     {"etl_se", e.etl_se}, {"tail_count", e.tail_count}};
    if (e.low_tail_count) row["warning"] = "fewer than 20 samples beyond the VaR";
    rows.push_back(row);
  }
  Json report = {{"seed", config.seed()},
                 {"trials", summary.trials},
                 {"mean_loss", summary.mean_loss},
                 {"mean_loss_se", summary.mean_se},
                 {"nondefault_ratio", summary.nondefault_ratio},
                 {"entries", rows},
                 {"config", resolved(config)}};
  out.json("risk.json", report);

  if (config.flag("dump_losses")) {
    const double* data = rmc_losses_data(losses);
    std::string table = seed_comment(config) + "loss\n";
    for (size_t i = 0; i < rmc_losses_count(losses); ++i) table += num(data[i]) + '\n';
    out.text("losses.csv", table);
  }
  return out.names();
}

std::vector<std::string> run_copula(const RunConfig& config, Outputs& out) {
  rmc_scenario_options options;
  rmc_scenario_options_default(&options);
  options.seed = config.seed();
  options.trials = config.count("trials");
  options.repetitions = config.count("repetitions");
  options.portfolio_size = config.count("portfolio_size");
  options.bins = config.count("bins");
  options.ties = config.text("ties") == "midrank" ? RMC_TIES_MIDRANK : RMC_TIES_JITTER;
  options.workers = config.count("workers");
  rmc_scenario* scenario = nullptr;
  check(rmc_scenario_run(config.text("scenario").c_str(), &options, &scenario), "copula scenario");
  const Scenario owned(scenario);
  rmc_scenario_summary summary{};
  check(rmc_scenario_summary_get(scenario, &summary), "scenario summary");

  const size_t bins = summary.bins;
  const std::pair<rmc_copula_layer, const char*> layers[] = {{RMC_COPULA_EMPIRICAL, "copula_empirical.csv"},
                                                             {RMC_COPULA_GAUSSIAN, "copula_gaussian.csv"},
                                                             {RMC_COPULA_DEVIATION, "copula_deviation.csv"}};
  std::vector<double> values(bins * bins);
  for (const auto& [layer, name] : layers) {
    check(rmc_scenario_layer(scenario, layer, values.data()), "copula layer");
    std::string table = seed_comment(config) + "u_center,v_center,density\n";
    for (size_t i = 0; i < bins; ++i)
      for (size_t j = 0; j < bins; ++j)
        table += num((static_cast<double>(i) + 0.5) / static_cast<double>(bins)) + ',' +
                 num((static_cast<double>(j) + 0.5) / static_cast<double>(bins)) + ',' + num(values[i * bins + j]) + '\n';
    out.text(name, table);
  }

  Json parameters = Json::object();
  for (size_t i = 0; i < rmc_scenario_parameter_count(scenario); ++i) {
    const char* key = nullptr;
    double value = 0.0;
    check(rmc_scenario_parameter(scenario, i, &key, &value), "scenario parameter");
    parameters[key] = number_or_text(value);
  }
  Json corners = Json::array();
  for (const auto& c : summary.corners)
    corners.push_back({{"corner", c.name},
                       {"empirical", c.empirical},
                       {"gaussian", c.gaussian},
                       {"deviation", c.deviation},
                       {"standard_error", c.standard_error}});
  Json report = {{"scenario", config.text("scenario")},
                 {"seed", config.seed()},
                 {"correlation", summary.loss_correlation},
                 {"correlation_sd", summary.loss_correlation_sd},
                 {"correlation_measure", "pearson"},
                 {"nondefault_ratio_first", summary.nondefault_first},
                 {"nondefault_ratio_second", summary.nondefault_second},
                 {"nondefault_ratio_sd", summary.nondefault_sd},
                 {"repetitions", summary.repetitions},
                 {"trials", summary.trials},
                 {"bins", bins},
                 {"ties", config.text("ties")},
                 {"corners", corners},
                 {"parameters", parameters}};
  out.json("copula_summary.json", report);
  return out.names();
}

std::vector<std::string> run_synth(const RunConfig& config, Outputs& out) {
  rmc_synthetic_params params;
  rmc_synthetic_params_default(&params);
  params.assets = config.count("assets");
  params.observations = config.count("observations");
  params.correlation = config.real("c");
  params.volatility = config.real("vol");
  params.drift = config.real("mu");
  params.fluctuation_n = config.real("n");
  params.regime_length = config.count("regime_length");
  params.seed = config.seed();
  rmc_market* market = nullptr;
  check(rmc_market_synthetic(&params, &market), "synthetic market");
  const Market owned(market);
  const std::string comment = "seed=" + config.text("seed");
  check(rmc_market_write_csv(market, out.path("market.csv").string().c_str(), comment.c_str()), "write prices");
  out.record("market.csv");
  return out.names();
}

}  // namespace

int exit_code(rmc_status status) noexcept {
  switch (status) {
    case RMC_OK: return kExitOk;
    case RMC_ERR_ARGUMENT:
    case RMC_ERR_DOMAIN: return kExitUsage;
    case RMC_ERR_PARSE:
    case RMC_ERR_IO: return kExitIo;
    default: return kExitNumeric;
  }
}

std::vector<std::string> run_command(const RunConfig& config) {
  Outputs out(config.output_dir);
  const std::string& name = config.subcommand;
  if (name == "estimate") return run_estimate(config, out);
  if (name == "fit-n") return run_fit(config, out);
  if (name == "loss-dist") return run_loss_dist(config, out);
  if (name == "var") return run_var(config, out);
  if (name == "copula") return run_copula(config, out);
  if (name == "synth") return run_synth(config, out);
  throw UsageError("", "unknown subcommand '" + name + "'");
}

}  // namespace rmcredit::cli

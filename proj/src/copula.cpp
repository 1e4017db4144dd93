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

#include "rmcredit/copula.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "rmcredit/error.hpp"
#include "rmcredit/parallel.hpp"
#include "rmcredit/special.hpp"

namespace rmcredit {

namespace {

struct Book {
  std::vector<Eigen::Index> columns;  // positions in the simulated sub-market
  std::vector<double> weights;
};

std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t index) {
  RandomStream rng(seed, stream_id(StreamTag::kSample, index));
  const std::uint64_t hi = rng();
  return (hi << 32) | rng();
}

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

double sd_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (const double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "pearson_correlation: need two samples of equal length");
  const double mx = mean_of(x), my = mean_of(y);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) fail(ErrorCode::kDegenerate, "pearson_correlation: a sample has zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

JointLossSamples joint_loss_samples(const TwoPortfolioSpec& spec, std::size_t trials, std::uint64_t seed,
                                    std::size_t workers) {
  require(trials >= 2, "joint_loss_samples: need at least two trials");
  require(!spec.first.empty() && spec.first.size() == spec.second.size(),
          "joint_loss_samples: portfolios must be non-empty and of equal size");
  std::set<std::size_t> seen_first(spec.first.begin(), spec.first.end());
  std::set<std::size_t> seen_second(spec.second.begin(), spec.second.end());
  require(seen_first.size() == spec.first.size() && seen_second.size() == spec.second.size(),
          "joint_loss_samples: repeated contract within a portfolio");
  for (const auto i : spec.second)
    require(!seen_first.count(i), "joint_loss_samples: portfolios overlap in asset " + std::to_string(i));
  for (const auto i : seen_first) require(i < spec.assets.size(), "joint_loss_samples: asset index out of range");
  for (const auto i : seen_second) require(i < spec.assets.size(), "joint_loss_samples: asset index out of range");

  // Simulate only the assets held by either book.
  std::vector<std::size_t> held(spec.first);
  held.insert(held.end(), spec.second.begin(), spec.second.end());
  const auto k = static_cast<Eigen::Index>(held.size());
  Eigen::VectorXd vols(k);
  std::vector<double> offsets(held.size());
  for (std::size_t i = 0; i < held.size(); ++i) {
    const Contract& c = spec.assets[held[i]];
    vols(static_cast<Eigen::Index>(i)) = c.vol;
    const double mean_log =
        spec.drift == DriftConvention::kIto ? (c.drift - 0.5 * c.vol * c.vol) * spec.maturity : c.drift * spec.maturity;
    offsets[i] = std::log(c.initial / c.face) + mean_log;
  }
  MarketCorrelation market = spec.market;
  if (market.matrix) {
    require(market.matrix->dim() == static_cast<Eigen::Index>(spec.assets.size()),
            "joint_loss_samples: correlation matrix does not match the market");
    Eigen::MatrixXd sub(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = (*market.matrix)(held[i], held[j]);
    market.matrix = CorrelationMatrix(sub);
  }
  const TerminalValueSampler sampler(market, vols, spec.maturity);

  Book books[2];
  const std::size_t size = spec.first.size();
  for (int b = 0; b < 2; ++b) {
    double total = 0.0;
    for (std::size_t i = 0; i < size; ++i) total += spec.assets[held[b * size + i]].face;
    for (std::size_t i = 0; i < size; ++i) {
      books[b].columns.push_back(static_cast<Eigen::Index>(b * size + i));
      books[b].weights.push_back(spec.assets[held[b * size + i]].face / total);
    }
  }

  JointLossSamples out;
  out.seed = seed;
  out.first.assign(trials, 0.0);
  out.second.assign(trials, 0.0);
  parallel_for(trials, workers, [&](std::size_t begin, std::size_t end) {
    Eigen::VectorXd shocks;
    for (std::size_t trial = begin; trial < end; ++trial) {
      RandomStream rng(seed, stream_id(StreamTag::kTrial, trial));
      sampler.draw(rng, shocks);
      for (int b = 0; b < 2; ++b) {
        double loss = 0.0;
        for (std::size_t i = 0; i < size; ++i) {
          const Eigen::Index col = books[b].columns[i];
          const double log_ratio = offsets[static_cast<std::size_t>(col)] + shocks(col);
          if (log_ratio < 0.0) loss -= books[b].weights[i] * std::expm1(log_ratio);
        }
        (b == 0 ? out.first : out.second)[trial] = std::clamp(loss, 0.0, 1.0);
      }
    }
  });
  const auto zeros = [](const std::vector<double>& v) {
    return static_cast<double>(std::count(v.begin(), v.end(), 0.0)) / static_cast<double>(v.size());
  };
  out.nondefault_first = zeros(out.first);
  out.nondefault_second = zeros(out.second);
  out.correlation = pearson_correlation(out.first, out.second);
  return out;
}

std::vector<double> pseudo_observations(const std::vector<double>& values, TieMode ties, std::uint64_t seed,
                                        std::uint64_t margin) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  RandomStream rng(seed, stream_id(StreamTag::kTies, margin));
  std::vector<double> u(n);
  const double count = static_cast<double>(n);
  for (std::size_t start = 0; start < n;) {
    std::size_t stop = start + 1;
    while (stop < n && values[order[stop]] == values[order[start]]) ++stop;
    if (ties == TieMode::kJitter && stop - start > 1) {
      // Fisher-Yates within the tied block.
      for (std::size_t i = stop - 1; i > start; --i) {
        const auto j = start + static_cast<std::size_t>(rng.uniform() * static_cast<double>(i - start + 1));
        std::swap(order[i], order[std::min(j, i)]);
      }
    }
    for (std::size_t r = start; r < stop; ++r) {
      const double rank = ties == TieMode::kMidRank ? 0.5 * static_cast<double>(start + stop - 1) : static_cast<double>(r);
      u[order[r]] = (rank + 0.5) / count;
    }
    start = stop;
  }
  return u;
}

CopulaHistogram empirical_copula(const std::vector<double>& first, const std::vector<double>& second, std::size_t bins,
                                 TieMode ties, std::uint64_t seed) {
  require(first.size() == second.size() && !first.empty(), "empirical_copula: samples must be non-empty and paired");
  require(bins >= 1, "empirical_copula: need at least one bin");
  const auto flat = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  if (flat(first)) fail(ErrorCode::kDegenerate, "empirical_copula: first margin is constant");
  if (flat(second)) fail(ErrorCode::kDegenerate, "empirical_copula: second margin is constant");
  const auto u = pseudo_observations(first, ties, seed, 1);
  const auto v = pseudo_observations(second, ties, seed, 2);
  CopulaHistogram h;
  h.bins = bins;
  h.sample_count = first.size();
  h.density = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(bins), static_cast<Eigen::Index>(bins));
  const double b = static_cast<double>(bins);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto row = std::min(bins - 1, static_cast<std::size_t>(u[i] * b));
    const auto col = std::min(bins - 1, static_cast<std::size_t>(v[i] * b));
    h.density(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += 1.0;
  }
  h.density *= b * b / static_cast<double>(u.size());
  return h;
}

CopulaHistogram gaussian_copula_histogram(double correlation, std::size_t bins) {
  require(bins >= 1, "gaussian_copula_histogram: need at least one bin");
  if (!(std::fabs(correlation) < 1.0)) fail(ErrorCode::kDegenerate, "gaussian_copula_histogram: |correlation| must be below 1");
  const double b = static_cast<double>(bins);
  std::vector<double> edge(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) edge[i] = special::normal_quantile(static_cast<double>(i) / b);
  // cdf(i, j) = Phi2(edge_i, edge_j); bin masses by inclusion-exclusion.
  Eigen::MatrixXd cdf(static_cast<Eigen::Index>(bins + 1), static_cast<Eigen::Index>(bins + 1));
  for (std::size_t i = 0; i <= bins; ++i)
    for (std::size_t j = 0; j <= bins; ++j)
      cdf(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          special::bivariate_normal_cdf(edge[i], edge[j], correlation);
  CopulaHistogram h;
  h.bins = bins;
  h.density.resize(static_cast<Eigen::Index>(bins), static_cast<Eigen::Index>(bins));
  for (Eigen::Index i = 0; i < h.density.rows(); ++i)
    for (Eigen::Index j = 0; j < h.density.cols(); ++j)
      h.density(i, j) = std::max(0.0, cdf(i + 1, j + 1) - cdf(i, j + 1) - cdf(i + 1, j) + cdf(i, j)) * b * b;
  return h;
}

DeviationMap deviation_map(const CopulaHistogram& empirical, const CopulaHistogram& gaussian, double loss_correlation) {
  require(empirical.bins == gaussian.bins, "deviation_map: bin counts differ");
  DeviationMap out;
  out.difference = empirical.density - gaussian.density;
  out.loss_correlation = loss_correlation;
  const auto bins = static_cast<Eigen::Index>(empirical.bins);
  const Eigen::Index box = std::max<Eigen::Index>(1, std::llround(kCornerQuantile * static_cast<double>(bins)));
  const double scale = 1.0 / static_cast<double>(bins * bins);
  const std::array<std::pair<const char*, std::pair<bool, bool>>, 4> corners{{
      {"(0,0)", {false, false}}, {"(0,1)", {false, true}}, {"(1,0)", {true, false}}, {"(1,1)", {true, true}}}};
  for (std::size_t c = 0; c < corners.size(); ++c) {
    const Eigen::Index row = corners[c].second.first ? bins - box : 0;
    const Eigen::Index col = corners[c].second.second ? bins - box : 0;
    CornerStatistic& s = out.corners[c];
    s.name = corners[c].first;
    s.empirical = empirical.density.block(row, col, box, box).sum() * scale;
    s.gaussian = gaussian.density.block(row, col, box, box).sum() * scale;
    s.deviation = s.empirical - s.gaussian;
    const double n = static_cast<double>(std::max<std::size_t>(1, empirical.sample_count));
    s.standard_error = std::sqrt(std::max(s.gaussian, s.empirical) * (1.0 - std::min(1.0, std::max(s.gaussian, s.empirical))) / n);
  }
  return out;
}

namespace {

struct ScenarioDefinition {
  double c = 0.0;
  double n = kStationary;
  double drift = 0.0;
  double vol = 0.0;
  bool random_vols = false;   // U(0, 0.25) per contract
  bool block_market = false;  // two blocks, heterogeneous parameters
  std::size_t default_trials = 100000;
  std::size_t default_repetitions = 1;
};

constexpr double kLeverage = 0.75;
constexpr double kInitialValue = 100.0;
constexpr double kMaxRandomVol = 0.25;
constexpr std::size_t kBlockAssets = 100;
constexpr double kIntraBlockCorrelation = 0.4;
constexpr double kInterBlockCorrelation = 0.15;

ScenarioDefinition definition(const std::string& name) {
  ScenarioDefinition d;
  if (name == "c0-gaussian" || name == "c0-mixture") {
    d.c = 0.0;
    d.n = name == "c0-mixture" ? 5.0 : kStationary;
    d.drift = 1e-3;
    d.vol = 0.03;
  } else if (name == "drift-high" || name == "drift-mid" || name == "drift-neg") {
    d.c = 0.3;
    d.vol = 0.02;
    d.drift = name == "drift-high" ? 1e-3 : name == "drift-mid" ? 3e-4 : -3e-3;
  } else if (name == "hetero-vol") {
    d.c = 0.3;
    d.drift = -3e-3;
    d.random_vols = true;
    d.default_trials = 10000;
    d.default_repetitions = 1000;
  } else if (name == "two-market") {
    d.block_market = true;
    d.default_trials = 10000;
    d.default_repetitions = 1000;
  } else {
    fail(ErrorCode::kArgument, "unknown copula scenario '" + name + "'");
  }
  return d;
}

TwoPortfolioSpec build_repetition(const ScenarioDefinition& d, std::size_t k, RandomStream& rng) {
  TwoPortfolioSpec spec;
  spec.maturity = kTradingDaysPerYear;
  spec.drift = DriftConvention::kLogReturn;
  spec.market.n = d.n;
  const Contract base{kLeverage * kInitialValue, kInitialValue, d.drift, d.vol};
  if (!d.block_market) {
    spec.market.c = d.c;
    spec.assets.assign(2 * k, base);
    if (d.random_vols)
      for (auto& a : spec.assets) a.vol = kMaxRandomVol * rng.uniform();
    for (std::size_t i = 0; i < k; ++i) {
      spec.first.push_back(i);
      spec.second.push_back(k + i);
    }
    return spec;
  }
  require(k <= kBlockAssets, "two-market scenario: portfolio size exceeds the block size");
  const auto m = static_cast<Eigen::Index>(2 * kBlockAssets);
  Eigen::MatrixXd corr = Eigen::MatrixXd::Constant(m, m, kInterBlockCorrelation);
  const auto block = static_cast<Eigen::Index>(kBlockAssets);
  corr.topLeftCorner(block, block).setConstant(kIntraBlockCorrelation);
  corr.bottomRightCorner(block, block).setConstant(kIntraBlockCorrelation);
  corr.diagonal().setOnes();
  spec.market.matrix = CorrelationMatrix(corr);
  spec.assets.resize(2 * kBlockAssets);
  for (auto& a : spec.assets) {
    a = base;
    a.vol = 0.01 + 0.02 * rng.uniform();
    a.drift = -5e-4 + 1.5e-3 * rng.uniform();
  }
  // k distinct assets from each block by a partial Fisher-Yates draw.
  for (int b = 0; b < 2; ++b) {
    std::vector<std::size_t> pool(kBlockAssets);
    std::iota(pool.begin(), pool.end(), static_cast<std::size_t>(b) * kBlockAssets);
    for (std::size_t i = 0; i < k; ++i) {
      const auto j = i + std::min(kBlockAssets - i - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(kBlockAssets - i)));
      std::swap(pool[i], pool[j]);
      (b == 0 ? spec.first : spec.second).push_back(pool[i]);
    }
  }
  return spec;
}

}  // namespace

std::vector<std::string> scenario_names() {
  return {"c0-gaussian", "c0-mixture", "drift-high", "drift-mid", "drift-neg", "hetero-vol", "two-market"};
}

ScenarioReport scenario_suite(const std::string& name, const ScenarioOptions& options) {
  const ScenarioDefinition d = definition(name);
  require(options.portfolio_size >= 1, "scenario: portfolio size must be positive");
  ScenarioReport report;
  report.name = name;
  report.trials = options.trials ? options.trials : d.default_trials;
  report.repetitions = options.repetitions ? options.repetitions : d.default_repetitions;
  report.parameters = {{"portfolio_size", static_cast<double>(options.portfolio_size)},
                       {"maturity_days", kTradingDaysPerYear},
                       {"leverage", kLeverage},
                       {"bins", static_cast<double>(options.bins)}};
  if (d.block_market) {
    report.parameters["intra_block_correlation"] = kIntraBlockCorrelation;
    report.parameters["inter_block_correlation"] = kInterBlockCorrelation;
    report.parameters["block_assets"] = static_cast<double>(kBlockAssets);
  } else {
    report.parameters["c"] = d.c;
    report.parameters["drift_per_day"] = d.drift;
    if (d.random_vols) report.parameters["max_vol_per_sqrt_day"] = kMaxRandomVol;
    else report.parameters["vol_per_sqrt_day"] = d.vol;
  }
  report.parameters["n"] = d.n;

  const auto bins = static_cast<Eigen::Index>(options.bins);
  report.empirical.bins = report.gaussian.bins = options.bins;
  report.empirical.density = Eigen::MatrixXd::Zero(bins, bins);
  report.gaussian.density = Eigen::MatrixXd::Zero(bins, bins);
  std::vector<double> nondefault;
  std::array<std::vector<double>, 4> corner_deviations;
  for (std::size_t r = 0; r < report.repetitions; ++r) {
    RandomStream parameter_rng(options.seed, stream_id(StreamTag::kParameters, r));
    const TwoPortfolioSpec spec = build_repetition(d, options.portfolio_size, parameter_rng);
    const std::uint64_t seed = report.repetitions == 1 ? options.seed : derived_seed(options.seed, r);
    const JointLossSamples joint = joint_loss_samples(spec, report.trials, seed, options.workers);
    const CopulaHistogram empirical = empirical_copula(joint.first, joint.second, options.bins, options.ties, seed);
    const CopulaHistogram gaussian = gaussian_copula_histogram(joint.correlation, options.bins);
    const DeviationMap single = deviation_map(empirical, gaussian, joint.correlation);
    for (std::size_t c = 0; c < 4; ++c) corner_deviations[c].push_back(single.corners[c].deviation);
    report.empirical.density += empirical.density;
    report.gaussian.density += gaussian.density;
    report.correlations.push_back(joint.correlation);
    nondefault.push_back(joint.nondefault_first);
    nondefault.push_back(joint.nondefault_second);
    report.nondefault_first += joint.nondefault_first;
    report.nondefault_second += joint.nondefault_second;
  }
  const double reps = static_cast<double>(report.repetitions);
  report.empirical.density /= reps;
  report.gaussian.density /= reps;
  report.empirical.sample_count = report.trials * report.repetitions;
  report.gaussian.sample_count = 0;
  report.nondefault_first /= reps;
  report.nondefault_second /= reps;
  report.nondefault_sd = sd_of(nondefault);
  report.loss_correlation = mean_of(report.correlations);
  report.loss_correlation_sd = sd_of(report.correlations);
  report.deviation = deviation_map(report.empirical, report.gaussian, report.loss_correlation);
  if (report.repetitions > 1) {
    for (std::size_t c = 0; c < 4; ++c)
      report.deviation.corners[c].standard_error = sd_of(corner_deviations[c]) / std::sqrt(reps - 1.0);
  }
  return report;
}

}  // namespace rmcredit

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

#include "rmcredit/merton.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "rmcredit/rng.hpp"
#include "rmcredit/special.hpp"
#include "rmcredit/wishart.hpp"
#include "test_support.hpp"

namespace rmcredit {
namespace {

using rmcredit::testing::throws_code;

const Contract kYear{75.0, 100.0, 0.17, 0.35};
const Contract kMonth{75.0, 100.0, 0.013, 0.1};

double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Simpson rule over the idiosyncratic normal of E[L^j | z, u], up to the default boundary.
double moment_oracle(int j, const Contract& k, double t, double z, double u, double c, double n) {
  const double scale = std::sqrt(z / n) * k.vol * std::sqrt(t);
  const double common = -std::sqrt(c) * u * std::sqrt(n);
  const double drift = (k.drift - 0.5 * k.vol * k.vol) * t;
  const double lo = -14.0;
  const double boundary = ((std::log(k.face / k.initial) - drift) / scale - common) / std::sqrt(1.0 - c);
  if (boundary <= lo) return 0.0;
  const int steps = 20000;
  const double h = (boundary - lo) / steps;
  double sum = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double e = lo + i * h;
    const double v = k.initial * std::exp(drift + scale * (common + std::sqrt(1.0 - c) * e));
    const double loss = v < k.face ? (k.face - v) / k.face : 0.0;
    const double f = std::pow(loss, j) * std::exp(-0.5 * e * e) / std::sqrt(2.0 * M_PI);
    sum += f * (i == 0 || i == steps ? 1.0 : (i % 2 ? 4.0 : 2.0));
  }
  return sum * h / 3.0;
}

TEST(ContractLoss, Examples) {
  EXPECT_EQ(contract_loss(75.0, 75.0), 0.0);
  EXPECT_EQ(contract_loss(0.0, 75.0), 1.0);
  EXPECT_NEAR(contract_loss(60.0, 75.0), 0.2, 1e-15);
  EXPECT_EQ(contract_loss(120.0, 75.0), 0.0);
  EXPECT_TRUE(throws_code(ErrorCode::kArgument, [] { contract_loss(1.0, 0.0); }));
}

TEST(PortfolioLoss, WeightsAndSums) {
  const PortfolioSpec two({kYear, kYear}, 1.0);
  EXPECT_NEAR(portfolio_loss({0.2, 0.4}, two), 0.3, 1e-15);
  EXPECT_EQ(portfolio_loss({0.0, 0.0}, two), 0.0);
  EXPECT_NEAR(portfolio_loss({1.0, 1.0}, two), 1.0, 1e-15);
  const PortfolioSpec mixed({Contract{10.0, 20.0, 0.0, 0.2}, Contract{30.0, 20.0, 0.0, 0.2}, kYear}, 1.0);
  double total = 0.0;
  for (double w : mixed.weights()) total += w;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_NEAR(mixed.weights()[0], 10.0 / 115.0, 1e-15);
  EXPECT_EQ(mixed.groups().size(), 3u);
  EXPECT_TRUE(PortfolioSpec::homogeneous(5, kYear, 1.0).is_homogeneous());
  EXPECT_TRUE(throws_code(ErrorCode::kArgument, [&] { portfolio_loss({0.1}, two); }));
}

TEST(DefaultProbability, Examples) {
  Contract median = kYear;
  median.face = median.initial * std::exp((median.drift - 0.5 * median.vol * median.vol) * 2.0);
  EXPECT_NEAR(default_probability(median, 2.0), 0.5, 1e-15);
  const double expected = phi((std::log(0.75) - 0.10875) / 0.35);
  EXPECT_NEAR(default_probability(kYear, 1.0), expected, 1e-15);
  EXPECT_NEAR(expected, 0.1287, 5e-5);
  Contract tiny = kYear;
  tiny.face = 1e-8;
  EXPECT_LT(default_probability(tiny, 1.0), 1e-30);
  Contract flat = kYear;
  flat.vol = 0.0;
  EXPECT_EQ(default_probability(flat, 1.0), 0.0);
  flat.drift = -1.0;
  EXPECT_EQ(default_probability(flat, 1.0), 1.0);
}

TEST(DefaultProbability, MatchesGbmSimulation) {
  RandomStream rng(31, 1);
  const int draws = 400000;
  int defaults = 0;
  for (int i = 0; i < draws; ++i) {
    const double v = 100.0 * std::exp(0.17 - 0.5 * 0.35 * 0.35 + 0.35 * rng.normal());
    defaults += v < 75.0;
  }
  const double p = default_probability(kYear, 1.0);
  EXPECT_NEAR(static_cast<double>(defaults) / draws, p, 5.0 * std::sqrt(p * (1 - p) / draws));
}

TEST(ConditionalMoments, MatchQuadratureOracle) {
  RandomStream rng(32, 2);
  for (int draw = 0; draw < 100; ++draw) {
    Contract k;
    k.face = 50.0 + 40.0 * rng.uniform();
    k.initial = 100.0;
    k.drift = -0.1 + 0.3 * rng.uniform();
    k.vol = 0.1 + 0.4 * rng.uniform();
    const double t = 0.25 + rng.uniform();
    const double n = 2.0 + 12.0 * rng.uniform();
    const double c = 0.9 * rng.uniform();
    const double z = n * (0.3 + 2.0 * rng.uniform());
    const double u = (rng.uniform() - 0.5) * 6.0 / std::sqrt(n);
    for (int j : {1, 2}) {
      EXPECT_NEAR(moment_mjk(j, k, t, z, u, c, n), moment_oracle(j, k, t, z, u, c, n), 1e-8)
          << "draw " << draw << " j " << j;
    }
  }
}

TEST(ConditionalMoments, YearParametersAtCentre) {
  for (int j : {1, 2, 3}) {
    EXPECT_NEAR(moment_mjk(j, kYear, 1.0, 6.0, 0.0, 0.28, 6.0), moment_oracle(j, kYear, 1.0, 6.0, 0.0, 0.28, 6.0),
                1e-8);
  }
}

TEST(ConditionalMoments, Limits) {
  Contract safe = kYear;
  safe.face = 1e-6;
  EXPECT_LT(moment_mjk(1, safe, 1.0, 6.0, 0.0, 0.28, 6.0), 1e-300);
  Contract doomed = kYear;
  doomed.face = 1e12;
  EXPECT_NEAR(moment_mjk(1, doomed, 1.0, 6.0, 0.0, 0.28, 6.0), 1.0, 1e-9);
  EXPECT_NEAR(moment_mjk(2, doomed, 1.0, 6.0, 0.0, 0.28, 6.0), 1.0, 1e-9);
  EXPECT_TRUE(throws_code(ErrorCode::kDegenerate, [] { moment_mjk(1, kYear, 1.0, 6.0, 0.0, 1.0, 6.0); }));
  EXPECT_TRUE(throws_code(ErrorCode::kArgument, [] { moment_mjk(1, kYear, 1.0, 0.0, 0.0, 0.2, 6.0); }));
  EXPECT_TRUE(throws_code(ErrorCode::kArgument, [] { moment_mjk(1, kYear, 1.0, 6.0, 0.0, -0.1, 6.0); }));
}

TEST(ConditionalMoments, DerivativeMatchesFiniteDifference) {
  for (double u : {-0.6, 0.0, 0.3, 0.9}) {
    const double h = 1e-6;
    const double fd = (moment_mjk(1, kYear, 1.0, 5.0, u + h, 0.28, 6.0) -
                       moment_mjk(1, kYear, 1.0, 5.0, u - h, 0.28, 6.0)) / (2 * h);
    const double exact = moment_m1_derivative(kYear, 1.0, 5.0, u, 0.28, 6.0);
    EXPECT_GT(exact, 0.0);
    EXPECT_NEAR(exact, fd, 1e-6 * std::max(1.0, std::fabs(fd)));
  }
}

TEST(PortfolioMoments, HomogeneousScaling) {
  const int k = 40;
  const auto spec = PortfolioSpec::homogeneous(k, kYear, 1.0);
  const double m1 = moment_mjk(1, kYear, 1.0, 7.0, 0.2, 0.28, 6.0);
  const double m2 = moment_mjk(2, kYear, 1.0, 7.0, 0.2, 0.28, 6.0);
  const auto m = portfolio_moments(7.0, 0.2, spec, 0.28, 6.0);
  EXPECT_NEAR(m.m1, m1, 1e-15);
  EXPECT_NEAR(m.m2, (m2 - m1 * m1) / k, 1e-15);
  const auto larger = portfolio_moments(7.0, 0.2, PortfolioSpec::homogeneous(400, kYear, 1.0), 0.28, 6.0);
  EXPECT_NEAR(larger.m2 / m.m2, 0.1, 1e-12);
  Contract safe = kYear;
  safe.face = 1e-6;
  const auto none = portfolio_moments(6.0, 0.0, PortfolioSpec::homogeneous(10, safe, 1.0), 0.28, 6.0);
  EXPECT_EQ(none.m1, 0.0);
  EXPECT_EQ(none.m2, 0.0);
}

TEST(PortfolioMoments, HeterogeneousSums) {
  const Contract other{60.0, 100.0, 0.05, 0.25};
  const PortfolioSpec spec({kYear, other, other}, 1.0);
  const double f0 = 75.0 / 195.0, f1 = 60.0 / 195.0;
  const double a1 = moment_mjk(1, kYear, 1.0, 4.0, -0.1, 0.3, 5.0);
  const double a2 = moment_mjk(2, kYear, 1.0, 4.0, -0.1, 0.3, 5.0);
  const double b1 = moment_mjk(1, other, 1.0, 4.0, -0.1, 0.3, 5.0);
  const double b2 = moment_mjk(2, other, 1.0, 4.0, -0.1, 0.3, 5.0);
  const auto m = portfolio_moments(4.0, -0.1, spec, 0.3, 5.0);
  EXPECT_NEAR(m.m1, f0 * a1 + 2 * f1 * b1, 1e-15);
  EXPECT_NEAR(m.m2, f0 * f0 * (a2 - a1 * a1) + 2 * f1 * f1 * (b2 - b1 * b1), 1e-15);
}

TEST(LossGrids, Shapes) {
  const auto u = uniform_loss_grid(5);
  ASSERT_EQ(u.size(), 5u);
  EXPECT_EQ(u.front(), 0.0);
  EXPECT_EQ(u.back(), 1.0);
  EXPECT_NEAR(u[1], 0.25, 1e-15);
  const auto g = log_loss_grid(6, 1e-4);
  ASSERT_EQ(g.size(), 6u);
  EXPECT_EQ(g[0], 0.0);
  EXPECT_NEAR(g[1], 1e-4, 1e-18);
  EXPECT_NEAR(g[2], 1e-3, 1e-15);
  EXPECT_NEAR(g[4], 1e-1, 1e-15);
  EXPECT_NEAR(g[5], 1.0, 1e-15);
  EXPECT_TRUE(throws_code(ErrorCode::kArgument, [] { log_loss_grid(2, 1e-4); }));
}

TEST(AveragedLossDensity, NormalizedOnLogGrid) {
  const auto grid = log_loss_grid(512, 1e-6);
  for (std::size_t k : {10u, 50u, 100u}) {
    const auto curve = avg_loss_density(grid, PortfolioSpec::homogeneous(k, kYear, 1.0), 0.28, 6.0);
    EXPECT_LT(curve.normalization_defect, 1e-3) << k;
    for (double p : curve.density) EXPECT_GE(p, 0.0);
    EXPECT_EQ(curve.portfolio_size, k);
  }
}

TEST(AveragedLossDensity, IndependentMeanMatchesClosedForm) {
  // E[L] = Phi(d) - (V0 / F) e^{mu T} Phi(d - rho sqrt(T)) for a single contract.
  const double d = (std::log(0.75) - 0.10875) / 0.35;
  const double expected = phi(d) - (100.0 / 75.0) * std::exp(0.17) * phi(d - 0.35);
  const auto curve =
      avg_loss_density(log_loss_grid(2048, 1e-7), PortfolioSpec::homogeneous(100, kYear, 1.0), 0.0, kStationary);
  EXPECT_NEAR(curve_mean(curve), expected, 1e-3);

  RandomStream rng(33, 3);
  const int draws = 1000000;
  double sum = 0.0;
  for (int i = 0; i < draws; ++i)
    sum += contract_loss(100.0 * std::exp(0.10875 + 0.35 * rng.normal()), 75.0);
  EXPECT_NEAR(sum / draws, expected, 5e-4);
}

TEST(AveragedLossDensity, TailGrowsWithCorrelation) {
  const auto grid = log_loss_grid(512, 1e-6);
  const auto spec = PortfolioSpec::homogeneous(100, kYear, 1.0);
  double previous = -1.0;
  for (double c : {0.26, 0.36, 0.46}) {
    const auto curve = avg_loss_density(grid, spec, c, 6.0);
    const double tail = curve_mass(curve, 0.3, 1.0);
    EXPECT_GT(tail, previous) << c;
    previous = tail;
  }
}

TEST(AveragedLossDensity, TailShrinksWithN) {
  const auto grid = log_loss_grid(512, 1e-6);
  const auto spec = PortfolioSpec::homogeneous(100, kYear, 1.0);
  std::vector<LossDensityCurve> curves;
  for (double n : {3.0, 6.0, 12.0, 40.0}) curves.push_back(avg_loss_density(grid, spec, 0.28, n));
  for (double threshold : {0.2, 0.3, 0.45}) {
    for (std::size_t i = 1; i < curves.size(); ++i)
      EXPECT_LE(curve_mass(curves[i], threshold, 1.0), curve_mass(curves[i - 1], threshold, 1.0) + 1e-12)
          << threshold << ' ' << i;
  }
}

TEST(AveragedLossDensity, RejectsBadInput) {
  const auto spec = PortfolioSpec::homogeneous(10, kYear, 1.0);
  EXPECT_TRUE(throws_code(ErrorCode::kDegenerate, [&] { avg_loss_density(uniform_loss_grid(), spec, 1.0, 6.0); }));
  EXPECT_TRUE(throws_code(ErrorCode::kArgument, [&] { avg_loss_density({0.5, 0.2}, spec, 0.2, 6.0); }));
  EXPECT_TRUE(throws_code(ErrorCode::kArgument, [&] { avg_loss_density({0.0, 1.5}, spec, 0.2, 6.0); }));
  EXPECT_TRUE(throws_code(ErrorCode::kArgument, [&] { avg_loss_density(uniform_loss_grid(), spec, 0.2, 0.0); }));
}

TEST(LimitingDensity, ConvergenceInPortfolioSize) {
  const auto grid = log_loss_grid(512, 1e-6);
  const auto limit = limiting_loss_density(grid, PortfolioSpec::homogeneous(1, kYear, 1.0), 0.28, 6.0);
  EXPECT_LT(limit.normalization_defect, 1e-3);
  const auto k10 = avg_loss_density(grid, PortfolioSpec::homogeneous(10, kYear, 1.0), 0.28, 6.0);
  const auto k100 = avg_loss_density(grid, PortfolioSpec::homogeneous(100, kYear, 1.0), 0.28, 6.0);
  const double far = curve_sup_distance(k10, limit, 0.05, 0.6);
  const double near = curve_sup_distance(k100, limit, 0.05, 0.6);
  EXPECT_LT(near, far);
  EXPECT_LT(near, 0.05);
}

TEST(LimitingDensity, LargePortfolioAgreesWithinOnePercent) {
  std::vector<double> grid{0.0};
  for (int i = 0; i <= 55; ++i) grid.push_back(0.05 + 0.01 * i);
  grid.push_back(1.0);
  const auto limit = limiting_loss_density(grid, PortfolioSpec::homogeneous(1, kYear, 1.0), 0.28, 6.0);
  const auto big = avg_loss_density(grid, PortfolioSpec::homogeneous(10000, kYear, 1.0), 0.28, 6.0);
  EXPECT_LT(curve_sup_distance(big, limit, 0.05, 0.6), 0.01);
}

TEST(LimitingDensity, MonthParametersHaveDecreasingTail) {
  const auto grid = uniform_loss_grid(512);
  const auto curve = limiting_loss_density(grid, PortfolioSpec::homogeneous(1, kMonth, 1.0), 0.26, 4.2);
  std::size_t start = 0;
  while (grid[start] < 0.05) ++start;
  for (std::size_t i = start + 1; i < grid.size(); ++i) {
    if (curve.density[i - 1] < 1e-12) break;
    EXPECT_LE(curve.density[i], curve.density[i - 1] * (1.0 + 1e-9)) << grid[i];
  }
  EXPECT_GT(curve_mass(curve, 0.2, 1.0), 0.0);
}

TEST(LimitingDensity, RejectsHeterogeneousPortfolio) {
  const PortfolioSpec mixed({kYear, kMonth}, 1.0);
  EXPECT_TRUE(throws_code(ErrorCode::kArgument, [&] { limiting_loss_density(uniform_loss_grid(), mixed, 0.28, 6.0); }));
}

TEST(CommonFactorRoot, ResidualBelowTolerance) {
  for (double z : {1.0, 6.0, 15.0}) {
    for (double level : {1e-3, 0.05, 0.2, 0.5}) {
      double u = 0.0;
      ASSERT_TRUE(solve_common_factor(kYear, 1.0, z, 0.28, 6.0, level, &u)) << z << ' ' << level;
      EXPECT_LT(std::fabs(moment_mjk(1, kYear, 1.0, z, u, 0.28, 6.0) - level), 1e-10);
    }
  }
  double u = 0.0;
  EXPECT_FALSE(solve_common_factor(kYear, 1.0, 6.0, 0.28, 6.0, 1.5, &u));
}

LossDensityCurve tabulated(std::vector<double> grid, std::vector<double> density) {
  LossDensityCurve curve;
  curve.grid = std::move(grid);
  curve.density = std::move(density);
  return curve;
}

TEST(CurveRiskMeasures, UniformDensity) {
  std::vector<double> grid;
  for (int i = 0; i <= 1000; ++i) grid.push_back(i / 1000.0);
  const auto risk = risk_measures_from_curve(tabulated(grid, std::vector<double>(grid.size(), 1.0)), {0.99, 0.5});
  ASSERT_EQ(risk.size(), 2u);
  EXPECT_NEAR(risk[0].var, 0.99, 1e-9);
  EXPECT_NEAR(risk[0].etl, 0.995, 1e-9);
  EXPECT_NEAR(risk[1].var, 0.5, 1e-9);
  EXPECT_NEAR(risk[1].etl, 0.75, 1e-9);
}

TEST(CurveRiskMeasures, NarrowDensity) {
  std::vector<double> grid, density;
  for (int i = 0; i <= 10000; ++i) {
    const double l = i / 10000.0;
    grid.push_back(l);
    density.push_back(std::exp(-0.5 * std::pow((l - 0.3) / 1e-3, 2)) / (1e-3 * std::sqrt(2.0 * M_PI)));
  }
  for (const auto& r : risk_measures_from_curve(tabulated(grid, density), {0.5, 0.9, 0.999})) {
    EXPECT_NEAR(r.var, 0.3, 4e-3);
    EXPECT_NEAR(r.etl, 0.3, 4e-3);
  }
}

TEST(CurveRiskMeasures, RejectsBadLevels) {
  const auto curve = tabulated({0.0, 1.0}, {1.0, 1.0});
  EXPECT_TRUE(throws_code(ErrorCode::kArgument, [&] { risk_measures_from_curve(curve, {1.0}); }));
  EXPECT_TRUE(throws_code(ErrorCode::kArgument, [&] { risk_measures_from_curve(curve, {0.0}); }));
}

}  // namespace
}  // namespace rmcredit

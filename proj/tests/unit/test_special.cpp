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

#include "rmcredit/special.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace rmcredit::special {
namespace {

// Simpson integration of phi(x) Phi((k - r x) / sqrt(1 - r^2)) over (-inf, h].
double bivariate_by_quadrature(double h, double k, double r) {
  const double lo = -12.0;
  const double hi = std::min(h, 12.0);
  const int n = 20000;
  const double step = (hi - lo) / n;
  const double s = std::sqrt(1.0 - r * r);
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + i * step;
    const double f = normal_pdf(x) * normal_cdf((k - r * x) / s);
    sum += f * (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0));
  }
  return sum * step / 3.0;
}

TEST(Normal, ReferenceValues) {
  EXPECT_NEAR(normal_cdf(0.0), 0.5, 1e-16);
  EXPECT_NEAR(normal_cdf(1.96), 0.97500210485177952, 1e-15);
  EXPECT_NEAR(normal_cdf(-1.0), 0.15865525393145707, 1e-15);
  EXPECT_NEAR(normal_pdf(1.0), std::exp(-0.5) / std::sqrt(2.0 * M_PI), 1e-16);
}

TEST(Normal, CdfMatchesErfc) {
  for (double x = -30.0; x <= 8.0; x += 0.37) {
    const double expected = 0.5 * std::erfc(-x / std::sqrt(2.0));
    EXPECT_NEAR(normal_cdf(x) / expected, 1.0, 1e-15 * (4.0 + x * x)) << x;
  }
}

TEST(Normal, LogCdfDeepTail) {
  // Asymptotic series of the Mills ratio, accurate to O(x^-8) at x = 40.
  for (double x : {40.0, 80.0, 300.0}) {
    const double series = 1.0 - 1.0 / (x * x) + 3.0 / std::pow(x, 4) - 15.0 / std::pow(x, 6);
    const double expected = -0.5 * x * x - std::log(x) - 0.5 * std::log(2.0 * M_PI) + std::log(series);
    EXPECT_NEAR(log_normal_cdf(-x), expected, 1e-9 * std::fabs(expected)) << x;
  }
  EXPECT_NEAR(log_normal_cdf(-2.0), std::log(normal_cdf(-2.0)), 1e-14);
  EXPECT_NEAR(log_normal_cdf(5.0), std::log1p(-normal_cdf(-5.0)), 1e-16);
}

TEST(Normal, QuantileInvertsCdf) {
  for (double p : {1e-300, 1e-12, 1e-5, 0.01, 0.2, 0.5, 0.75, 0.975, 0.999999}) {
    const double x = normal_quantile(p);
    EXPECT_NEAR(normal_cdf(x) / p, 1.0, 1e-12) << p;
  }
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-14);
  EXPECT_EQ(normal_quantile(0.0), -INFINITY);
  EXPECT_EQ(normal_quantile(1.0), INFINITY);
}

TEST(Bivariate, IndependentCaseFactorizes) {
  for (double h : {-2.0, -0.3, 0.0, 1.1})
    for (double k : {-1.5, 0.4, 2.2}) EXPECT_NEAR(bivariate_normal_cdf(h, k, 0.0), normal_cdf(h) * normal_cdf(k), 1e-15);
}

TEST(Bivariate, OrthantProbability) {
  for (double r : {-0.95, -0.5, -0.1, 0.2, 0.6, 0.99})
    EXPECT_NEAR(bivariate_normal_cdf(0.0, 0.0, r), 0.25 + std::asin(r) / (2.0 * M_PI), 1e-15) << r;
}

TEST(Bivariate, DegenerateCorrelations) {
  EXPECT_NEAR(bivariate_normal_cdf(0.3, -0.7, 1.0), normal_cdf(-0.7), 1e-15);
  EXPECT_NEAR(bivariate_normal_cdf(0.3, 0.7, -1.0), normal_cdf(0.3) + normal_cdf(0.7) - 1.0, 1e-15);
  EXPECT_NEAR(bivariate_normal_cdf(-0.3, -0.7, -1.0), 0.0, 1e-15);
}

TEST(Bivariate, MatchesOneDimensionalQuadrature) {
  for (double r : {-0.8, -0.3, 0.45, 0.75, 0.92})
    for (double h : {-2.5, -0.6, 0.8})
      for (double k : {-1.2, 0.1, 1.9})
        EXPECT_NEAR(bivariate_normal_cdf(h, k, r), bivariate_by_quadrature(h, k, r), 1e-10) << h << ' ' << k << ' ' << r;
}

TEST(Bivariate, Symmetric) {
  EXPECT_DOUBLE_EQ(bivariate_normal_cdf(0.2, -1.3, 0.7), bivariate_normal_cdf(-1.3, 0.2, 0.7));
}

TEST(Bessel, MatchesStandardLibrary) {
  for (double nu : {0.0, 0.5, 1.0, 1.5, 2.5, 4.0, 7.5, 20.0})
    for (double x : {0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 40.0, 150.0}) {
      const double expected = std::cyl_bessel_k(nu, x);
      if (!std::isfinite(expected) || expected == 0.0) continue;
      EXPECT_NEAR(bessel_k(nu, x) / expected, 1.0, 1e-12) << nu << ' ' << x;
    }
}

TEST(Bessel, NegativeOrderIsSymmetric) {
  for (double x : {0.2, 2.0, 9.0}) EXPECT_NEAR(bessel_k(-2.5, x) / bessel_k(2.5, x), 1.0, 1e-14);
}

TEST(Bessel, HalfOrderClosedForm) {
  for (double x : {0.3, 1.0, 5.0, 25.0})
    EXPECT_NEAR(bessel_k(0.5, x) / (std::sqrt(M_PI / (2.0 * x)) * std::exp(-x)), 1.0, 1e-13);
}

TEST(Bessel, LogFormBeyondDoubleRange) {
  // K_{1/2}(x) = sqrt(pi / 2x) e^{-x} holds for all x.
  for (double x : {800.0, 5000.0}) EXPECT_NEAR(log_bessel_k(0.5, x), 0.5 * std::log(M_PI / (2.0 * x)) - x, 1e-10 * x);
  // Small-argument limit K_nu(x) ~ Gamma(nu) / 2 (2 / x)^nu.
  const double nu = 30.0, x = 1e-3;
  EXPECT_NEAR(log_bessel_k(nu, x), std::lgamma(nu) - std::log(2.0) + nu * std::log(2.0 / x), 1e-6);
}

TEST(ChiSquared, LogDensity) {
  EXPECT_NEAR(log_chi_squared_pdf(1.0, 2.0), std::log(0.5 * std::exp(-0.5)), 1e-15);
  const double z = 3.7, k = 5.0;
  const double expected = (0.5 * k - 1.0) * std::log(z) - 0.5 * z - 0.5 * k * std::log(2.0) - std::lgamma(0.5 * k);
  EXPECT_NEAR(log_chi_squared_pdf(z, k), expected, 1e-14);
}

}  // namespace
}  // namespace rmcredit::special

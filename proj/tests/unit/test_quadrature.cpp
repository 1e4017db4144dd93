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

#include "rmcredit/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

namespace rmcredit::quadrature {
namespace {

double apply(const GaussRule& rule, double (*f)(double, int), int m) {
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * f(rule.nodes[i], m);
  return s;
}

double power(double x, int m) { return std::pow(x, m); }

TEST(GaussLegendre, ExactForPolynomials) {
  const auto rule = gauss_legendre(12);
  for (int m = 0; m <= 23; ++m) {
    const double expected = m % 2 ? 0.0 : 2.0 / (m + 1);
    EXPECT_NEAR(apply(rule, power, m), expected, 1e-14) << m;
  }
}

TEST(GaussHermite, GaussianMoments) {
  const auto rule = gauss_hermite(20);
  EXPECT_NEAR(apply(rule, power, 0), std::sqrt(M_PI), 1e-13);
  EXPECT_NEAR(apply(rule, power, 2), std::sqrt(M_PI) / 2.0, 1e-13);
  EXPECT_NEAR(apply(rule, power, 4), 3.0 * std::sqrt(M_PI) / 4.0, 1e-13);
  EXPECT_NEAR(apply(rule, power, 7), 0.0, 1e-13);
}

TEST(GaussLaguerre, GeneralizedWeight) {
  const double alpha = 1.5;
  const auto rule = gauss_laguerre(16, alpha);
  for (int m = 0; m <= 8; ++m) {
    const double expected = std::tgamma(alpha + m + 1.0);
    EXPECT_NEAR(apply(rule, power, m) / expected, 1.0, 1e-12) << m;
  }
}

class ChiSquaredRule : public ::testing::TestWithParam<double> {};

TEST_P(ChiSquaredRule, Moments) {
  const double k = GetParam();
  const auto rule = chi_squared_rule(64, k);
  EXPECT_NEAR(std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0), 1.0, 1e-13);
  EXPECT_NEAR(apply(rule, power, 1) / k, 1.0, 1e-12);
  EXPECT_NEAR(apply(rule, power, 2) / (k * (k + 2.0)), 1.0, 1e-12);
  EXPECT_NEAR(apply(rule, power, 3) / (k * (k + 2.0) * (k + 4.0)), 1.0, 1e-11);
  for (double z : rule.nodes) EXPECT_GT(z, 0.0);
}

INSTANTIATE_TEST_SUITE_P(Dof, ChiSquaredRule, ::testing::Values(1.0, 2.0, 4.0, 6.0, 14.0, 60.0));

TEST(NormalRule, Moments) {
  const double var = 2.5;
  const auto rule = normal_rule(24, var);
  EXPECT_NEAR(apply(rule, power, 0), 1.0, 1e-14);
  EXPECT_NEAR(apply(rule, power, 2), var, 1e-13);
  EXPECT_NEAR(apply(rule, power, 4), 3.0 * var * var, 1e-12);
}

TEST(Rules, RejectEmpty) {
  EXPECT_ANY_THROW(gauss_legendre(0));
  EXPECT_ANY_THROW(gauss_laguerre(4, -1.5));
}

}  // namespace
}  // namespace rmcredit::quadrature

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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "rmcredit/error.hpp"

namespace rmcredit::quadrature {

namespace {

// Three-term recurrence of the orthonormal polynomials:
//   b[j+1] p_{j+1}(x) = (x - a[j]) p_j(x) - b[j] p_{j-1}(x),  p_0 = 1 / sqrt(mu0).
struct Jacobi {
  std::vector<double> a;  // size n
  std::vector<double> b;  // size n + 1, b[0] unused, b[n] needed for p_n
  double mu0;
};

// Golub-Welsch for initial nodes, then Newton polishing on p_n and weights
// from the Christoffel function 1 / sum_j p_j(x)^2.
GaussRule solve(const Jacobi& jac) {
  const std::size_t n = jac.a.size();
  Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    tri(j, j) = jac.a[j];
    if (j + 1 < n) tri(j, j + 1) = tri(j + 1, j) = jac.b[j + 1];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(tri, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) fail(ErrorCode::kNumeric, "Gauss rule: tridiagonal eigensolver failed");

  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double p0 = 1.0 / std::sqrt(jac.mu0);
  for (std::size_t i = 0; i < n; ++i) {
    double x = eig.eigenvalues()[static_cast<Eigen::Index>(i)];
    double sum_sq = 0.0;
    for (int newton = 0; newton < 4; ++newton) {
      double p_prev = 0.0, p = p0, dp_prev = 0.0, dp = 0.0;
      sum_sq = p * p;
      for (std::size_t j = 0; j < n; ++j) {
        const double p_next = ((x - jac.a[j]) * p - jac.b[j] * p_prev) / jac.b[j + 1];
        const double dp_next = (p + (x - jac.a[j]) * dp - jac.b[j] * dp_prev) / jac.b[j + 1];
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
        if (j + 1 < n) sum_sq += p * p;
      }
      if (dp == 0.0 || !std::isfinite(p / dp)) break;
      const double step = p / dp;
      x -= step;
      if (std::fabs(step) <= 1e-15 * std::max(1.0, std::fabs(x))) break;
    }
    // Recompute the Christoffel sum at the polished node.
    double p_prev = 0.0, p = p0;
    sum_sq = p * p;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const double p_next = ((x - jac.a[j]) * p - jac.b[j] * p_prev) / jac.b[j + 1];
      p_prev = p;
      p = p_next;
      sum_sq += p * p;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 1.0 / sum_sq;
  }
  return rule;
}

void check_size(std::size_t n) {
  require(n >= 1, "Gauss rule: need at least one node");
}

}  // namespace

GaussRule gauss_legendre(std::size_t n) {
  check_size(n);
  Jacobi jac{std::vector<double>(n, 0.0), std::vector<double>(n + 1, 0.0), 2.0};
  for (std::size_t j = 1; j <= n; ++j) {
    const double jj = static_cast<double>(j);
    jac.b[j] = jj / std::sqrt(4.0 * jj * jj - 1.0);
  }
  return solve(jac);
}

GaussRule gauss_hermite(std::size_t n) {
  check_size(n);
  Jacobi jac{std::vector<double>(n, 0.0), std::vector<double>(n + 1, 0.0), std::sqrt(std::numbers::pi)};
  for (std::size_t j = 1; j <= n; ++j) jac.b[j] = std::sqrt(0.5 * static_cast<double>(j));
  return solve(jac);
}

GaussRule gauss_laguerre(std::size_t n, double alpha) {
  check_size(n);
  require(alpha > -1.0, "Gauss-Laguerre: alpha must exceed -1");
  Jacobi jac{std::vector<double>(n), std::vector<double>(n + 1, 0.0), std::exp(std::lgamma(alpha + 1.0))};
  for (std::size_t j = 0; j < n; ++j) jac.a[j] = 2.0 * static_cast<double>(j) + alpha + 1.0;
  for (std::size_t j = 1; j <= n; ++j) {
    const double jj = static_cast<double>(j);
    jac.b[j] = std::sqrt(jj * (jj + alpha));
  }
  return solve(jac);
}

GaussRule chi_squared_rule(std::size_t n, double dof) {
  require(dof > 0.0, "chi-squared rule: dof must be positive");
  // z = 2x turns z^{dof/2-1} e^{-z/2} into the Laguerre weight with alpha = dof/2 - 1.
  GaussRule rule = gauss_laguerre(n, 0.5 * dof - 1.0);
  const double total = std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    rule.nodes[i] *= 2.0;
    rule.weights[i] /= total;
  }
  return rule;
}

GaussRule normal_rule(std::size_t n, double variance) {
  require(variance > 0.0, "normal rule: variance must be positive");
  GaussRule rule = gauss_hermite(n);
  const double scale = std::sqrt(2.0 * variance);
  const double total = std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    rule.nodes[i] *= scale;
    rule.weights[i] /= total;
  }
  return rule;
}

}  // namespace rmcredit::quadrature

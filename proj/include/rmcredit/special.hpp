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

namespace rmcredit::special {

double normal_pdf(double x) noexcept;
double normal_cdf(double x) noexcept;
/// log Phi(x), accurate deep into the lower tail.
double log_normal_cdf(double x) noexcept;
/// Inverse of normal_cdf on (0, 1); returns -inf / +inf at 0 / 1 (Wichura, AS241).
double normal_quantile(double p) noexcept;

/// P(X <= h, Y <= k) for a standard bivariate normal with correlation r.
/// Genz' adaptation of Drezner & Wesolowsky; absolute accuracy ~1e-15.
double bivariate_normal_cdf(double h, double k, double r) noexcept;

/// log K_nu(x) for x > 0. Evaluated from the integral representation
///   K_nu(x) = e^{-x} * int_0^inf exp(-x (cosh t - 1)) cosh(nu t) dt
/// accumulated in log space so large x or large nu neither under- nor overflows.
double log_bessel_k(double nu, double x);
double bessel_k(double nu, double x);

/// log of the chi-squared(dof) density at z > 0.
double log_chi_squared_pdf(double z, double dof) noexcept;

}  // namespace rmcredit::special

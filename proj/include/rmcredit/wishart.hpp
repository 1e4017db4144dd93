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

// Random-matrix model of non-stationary covariances.
//
// Random K x N data matrices A with independent N(0, Sigma0) columns give
// fluctuating covariances A A^T / N around the mean Sigma0; N acts as an
// inverse fluctuation strength. Averaging the multivariate normal return
// density over this ensemble yields a chi-squared variance mixture
//
//   <g>(r | Sigma0, N) = int chi2_N(z) Normal(r; 0, (z/N) Sigma0) dz,
//
// which depends on r only through b = r^T Sigma0^{-1} r and has a closed
// form in the modified Bessel function K_{(N-K)/2}(sqrt(N b)).

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rmcredit/market_data.hpp"
#include "rmcredit/rng.hpp"

namespace rmcredit {

/// N = infinity freezes the covariance at Sigma0.
inline constexpr double kStationary = std::numeric_limits<double>::infinity();

class EnsembleSpec {
 public:
  EnsembleSpec(CovarianceMatrix sigma0, double n);
  /// Sigma0 = diag(vols) C(c) diag(vols) with C(c) the equicorrelation matrix.
  static EnsembleSpec effective(double c, const Eigen::VectorXd& vols, double n);

  const CovarianceMatrix& sigma0() const noexcept { return sigma0_; }
  double n() const noexcept { return n_; }
  bool stationary() const noexcept { return n_ == kStationary; }
  Eigen::Index dim() const noexcept { return sigma0_.dim(); }
  bool positive_definite() const noexcept { return positive_definite_; }

  /// L with L L^T = Sigma0 (Cholesky, or eigenvalue square root for semidefinite input).
  const Eigen::MatrixXd& factor() const noexcept { return factor_; }
  /// log det Sigma0; throws kDegenerate when Sigma0 is singular.
  double log_det() const;
  /// r^T Sigma0^{-1} r; throws kDegenerate when Sigma0 is singular.
  double bilinear_form(const Eigen::VectorXd& r) const;

 private:
  CovarianceMatrix sigma0_;
  double n_;
  bool positive_definite_ = false;
  Eigen::MatrixXd factor_;
  double log_det_ = 0.0;
};

/// Lower-triangular (or symmetric) L with L L^T = sigma; eigenvalue fallback
/// clips eigenvalues in [-1e-10 * scale, 0) to zero and rejects anything lower.
Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& sigma, bool* positive_definite = nullptr);

/// log w(A | Sigma0) = -(N/2) log det(2 pi Sigma0) - tr(A^T Sigma0^{-1} A) / 2 for a K x N matrix A.
double wishart_log_density(const Eigen::MatrixXd& data, const EnsembleSpec& spec);

/// A A^T / N for integer N; (z/N) Sigma0 with z ~ chi2_N for non-integer N; Sigma0 for N = infinity.
CovarianceMatrix sample_random_covariance(const EnsembleSpec& spec, RandomStream& rng);

/// Ensemble-averaged return density, evaluated as the chi-squared mixture integral.
double averaged_return_density(const Eigen::VectorXd& r, const EnsembleSpec& spec);
double log_averaged_return_density(const Eigen::VectorXd& r, const EnsembleSpec& spec);

/// Same density through the modified Bessel closed form (properly normalized).
double bessel_return_density(const Eigen::VectorXd& r, const EnsembleSpec& spec);

/// The Bessel form with the prefactor 1 / (2^{N/2+1} Gamma(N/2) sqrt(det(2 pi Sigma0 / N))).
/// Kept only to measure how far that constant is from a normalized density.
double printed_prefactor_density(const Eigen::VectorXd& r, const EnsembleSpec& spec);

/// log of the mixture kernel
///   int chi2_N(z) z^{-K/2} exp(-N b / (2 z)) dz
/// so that density = kernel / sqrt(det(2 pi Sigma0 / N)). Returns +inf when the
/// integral diverges (b = 0 and N <= K).
double log_mixture_kernel(double bilinear, Eigen::Index dim, double n);

/// Draw r = sqrt(z/N) L eps with z ~ chi2_N and eps ~ N(0, 1_K).
Eigen::VectorXd mixture_sample(const EnsembleSpec& spec, RandomStream& rng);

struct AggregatedSample {
  std::vector<double> values;
  Eigen::MatrixXd rotation_basis;  // eigenvectors of the (last) covariance used, columns
  Eigen::VectorXd eigenvalues;
  std::size_t dropped_components = 0;
  std::size_t windows = 0;
};

inline constexpr double kEigenRelativeCutoff = 1e-12;

/// Rotate every return vector into the eigenbasis of `cov` and scale by 1/sqrt(lambda).
AggregatedSample aggregate_returns(const ReturnMatrix& returns, const CovarianceMatrix& cov);
/// Same, with the covariance re-estimated in each non-overlapping window of
/// `window` observations (returns demeaned per window).
AggregatedSample aggregate_returns(const ReturnMatrix& returns, Eigen::Index window);

inline constexpr Eigen::Index kDefaultAggregationWindow = 25;

/// Univariate aggregated density int chi2_N(z) Normal(x; 0, z/N) dz (unit variance for every N).
double univariate_aggregated_density(double x, double n);
double univariate_aggregated_cdf(double x, double n);

struct FitOptions {
  double n_min = 1.0;
  double n_max = 64.0;
  double resolution = 0.1;
  double ks_warning = 0.1;
};

struct FitReport {
  double n_hat = 0.0;
  double log_likelihood = 0.0;
  double ks = 0.0;
  std::size_t sample_size = 0;
  std::vector<double> grid_n;
  std::vector<double> grid_log_likelihood;
  bool at_upper_bound = false;
  bool monotone_likelihood = false;
  std::string warning;
  /// Integral over x of the printed-prefactor Bessel form at n_hat (1 if the constant were right).
  double printed_prefactor_mass = 0.0;
};

/// Maximum-likelihood N for pooled aggregated components, treated as i.i.d.
FitReport fit_n(const AggregatedSample& sample, const FitOptions& options = {});

}  // namespace rmcredit

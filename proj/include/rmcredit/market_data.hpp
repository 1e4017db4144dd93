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

// Price ingestion, returns, and estimation of correlation structure.
//
// Conventions used throughout:
//  * returns are simple returns (S(t + dt) - S(t)) / S(t);
//  * standard deviations use the population denominator n, so that a
//    normalized row has sum of squares exactly T and C = M M^T / T has a
//    unit diagonal;
//  * series with missing dates are inner-joined on their common dates.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rmcredit {

struct PriceSeries {
  std::string asset_id;
  std::vector<std::int64_t> timestamps;  // trading days, strictly increasing
  std::vector<double> prices;            // strictly positive

  /// Throws kDomain / kArgument if the invariants do not hold.
  void validate() const;
};

struct ReturnMatrix {
  std::vector<std::string> asset_ids;
  std::vector<std::int64_t> timestamps;  // start date of each return interval
  Eigen::MatrixXd values;                // K x T
  int delta_t = 1;

  Eigen::Index assets() const noexcept { return values.rows(); }
  Eigen::Index observations() const noexcept { return values.cols(); }
};

struct MomentEstimates {
  Eigen::VectorXd mu;     // mean return per delta_t
  Eigen::VectorXd sigma;  // standard deviation over the sample
  Eigen::VectorXd rho;    // sigma / sqrt(maturity)
};

class CorrelationMatrix {
 public:
  /// Checks symmetry, unit diagonal (1e-12) and entries in [-1, 1].
  explicit CorrelationMatrix(Eigen::MatrixXd entries);

  static CorrelationMatrix identity(Eigen::Index dim);
  /// Unit diagonal and `c` everywhere else.
  static CorrelationMatrix equicorrelated(Eigen::Index dim, double c);

  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  Eigen::Index dim() const noexcept { return entries_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

  /// Smallest eigenvalue; the matrix is considered PSD if this is >= -1e-10.
  double min_eigenvalue() const;

 private:
  Eigen::MatrixXd entries_;
};

class CovarianceMatrix {
 public:
  /// Checks symmetry and a nonnegative diagonal.
  explicit CovarianceMatrix(Eigen::MatrixXd entries);

  /// Sigma = diag(vols) C diag(vols).
  static CovarianceMatrix from_correlation(const CorrelationMatrix& correlation, const Eigen::VectorXd& vols);

  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  Eigen::Index dim() const noexcept { return entries_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }
  Eigen::VectorXd volatilities() const { return entries_.diagonal().cwiseSqrt(); }
  CorrelationMatrix correlation() const;
  double min_eigenvalue() const;

 private:
  Eigen::MatrixXd entries_;
};

inline constexpr double kPsdTolerance = 1e-10;

struct IndexWindow {
  Eigen::Index begin = 0;
  Eigen::Index length = 0;
};

struct SkippedWindow {
  Eigen::Index window_start = 0;
  std::string asset_id;  // first zero-variance asset found
};

struct SlidingWindowEnsemble {
  Eigen::Index window_length = 0;
  Eigen::Index stride = 0;
  std::vector<CorrelationMatrix> matrices;
  std::vector<Eigen::Index> window_starts;
  std::vector<SkippedWindow> skipped;
};

struct RollingVolatility {
  Eigen::Index window_length = 0;
  Eigen::Index stride = 0;
  std::vector<Eigen::Index> window_starts;
  Eigen::MatrixXd sigma;  // K x windows
};

struct EffectiveCorrelation {
  double c = 0.0;
  CorrelationMatrix matrix = CorrelationMatrix::identity(1);
};

/// Inner join of the series on their common timestamps.
std::vector<PriceSeries> align_on_common_dates(const std::vector<PriceSeries>& series);

ReturnMatrix compute_returns(const std::vector<PriceSeries>& series, int delta_t);

/// The window slice of `returns`, each row shifted to mean 0 and scaled to unit (population) variance.
ReturnMatrix normalize_series(const ReturnMatrix& returns, IndexWindow window);
ReturnMatrix normalize_series(const ReturnMatrix& returns);

/// C = M M^T / T for normalized input M.
CorrelationMatrix correlation_matrix(const ReturnMatrix& normalized);

/// Sigma = A A^T / T with A = sigma M over the full sample.
CovarianceMatrix covariance_matrix(const ReturnMatrix& returns);

RollingVolatility rolling_volatility(const ReturnMatrix& returns, Eigen::Index window, Eigen::Index stride);

/// Windows are normalized independently; windows with a zero-variance asset are skipped and recorded.
SlidingWindowEnsemble sliding_correlation_ensemble(const ReturnMatrix& returns, Eigen::Index window,
                                                   Eigen::Index stride);
/// Non-overlapping windows (stride = window).
SlidingWindowEnsemble sliding_correlation_ensemble(const ReturnMatrix& returns, Eigen::Index window);

EffectiveCorrelation effective_correlation(const CorrelationMatrix& correlation);

MomentEstimates estimate_drift_vol(const ReturnMatrix& returns, double maturity);

/// Reads `date,asset_id,close` rows (ISO-8601 dates). One series per asset, sorted by date.
/// Lines starting with '#' are skipped.
std::vector<PriceSeries> load_csv(const std::filesystem::path& path);
/// A non-empty comment is written as a leading '# ' line.
void write_csv(const std::vector<PriceSeries>& series, const std::filesystem::path& path,
               const std::string& comment = {});

std::int64_t parse_iso_date(const std::string& text);
std::string format_iso_date(std::int64_t day);

struct SyntheticMarketSpec {
  std::size_t assets = 10;
  std::size_t observations = 1000;  // number of prices per asset (T_tot + 1 returns' worth)
  double correlation = 0.0;         // equicorrelation c in [0, 1)
  double volatility = 0.02;         // per step^{1/2}
  double drift = 0.0;               // per step, GBM drift mu
  std::uint64_t seed = 0;

  /// Optional per-asset overrides of volatility and drift.
  std::vector<double> volatilities;
  std::vector<double> drifts;
  /// Optional full correlation structure; replaces `correlation` when set.
  std::optional<CorrelationMatrix> correlation_matrix;

  /// Finite N: the covariance is redrawn from the Wishart ensemble every
  /// `regime_length` steps (integer N: exact A A^T / N; otherwise the
  /// chi-squared scalar mixture).
  double fluctuation_n = std::numeric_limits<double>::infinity();
  std::size_t regime_length = 25;

  double initial_price = 100.0;
  std::int64_t first_day = 10957;  // 2000-01-01
};

std::vector<PriceSeries> generate_synthetic_market(const SyntheticMarketSpec& spec);

}  // namespace rmcredit

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

#include "rmcredit/market_data.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "rmcredit/error.hpp"
#include "rmcredit/wishart.hpp"

namespace rmcredit {

namespace {

constexpr double kUnitDiagonalContract = 1e-6;
constexpr double kSymmetryTolerance = 1e-12;

struct RowMoments {
  double mean = 0.0;
  double sd = 0.0;
  bool degenerate = false;
};

RowMoments row_moments(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  RowMoments m;
  const double n = static_cast<double>(row.size());
  m.mean = row.sum() / n;
  m.sd = std::sqrt((row.array() - m.mean).square().sum() / n);
  const double scale = row.cwiseAbs().maxCoeff();
  m.degenerate = row.maxCoeff() == row.minCoeff() || m.sd <= 1e-13 * scale;
  return m;
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

void check_square_symmetric(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) fail(ErrorCode::kArgument, std::string(what) + ": matrix must be square and non-empty");
  if (!m.allFinite()) fail(ErrorCode::kDomain, std::string(what) + ": non-finite entry");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale)
    fail(ErrorCode::kArgument, std::string(what) + ": matrix is not symmetric");
}

double smallest_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) fail(ErrorCode::kNumeric, "eigenvalue decomposition failed");
  return eig.eigenvalues()(0);
}

ReturnMatrix slice(const ReturnMatrix& returns, IndexWindow window) {
  ReturnMatrix out;
  out.asset_ids = returns.asset_ids;
  out.delta_t = returns.delta_t;
  out.values = returns.values.middleCols(window.begin, window.length);
  if (!returns.timestamps.empty())
    out.timestamps.assign(returns.timestamps.begin() + window.begin,
                          returns.timestamps.begin() + window.begin + window.length);
  return out;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

void PriceSeries::validate() const {
  if (timestamps.size() != prices.size())
    fail(ErrorCode::kArgument, "price series '" + asset_id + "': timestamps and prices differ in length");
  if (prices.size() < 2) fail(ErrorCode::kArgument, "price series '" + asset_id + "': need at least two prices");
  for (std::size_t i = 0; i < prices.size(); ++i) {
    if (!(prices[i] > 0.0) || !std::isfinite(prices[i]))
      fail(ErrorCode::kDomain, "price series '" + asset_id + "': nonpositive price at index " + std::to_string(i));
    if (i > 0 && timestamps[i] <= timestamps[i - 1])
      fail(ErrorCode::kArgument, "price series '" + asset_id + "': timestamps not strictly increasing");
  }
}

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  check_square_symmetric(entries_, "correlation matrix");
  for (Eigen::Index i = 0; i < dim(); ++i) {
    if (std::fabs(entries_(i, i) - 1.0) > 1e-12) fail(ErrorCode::kArgument, "correlation matrix: diagonal must be 1");
  }
  if (entries_.cwiseAbs().maxCoeff() > 1.0 + 1e-12) fail(ErrorCode::kArgument, "correlation matrix: entry outside [-1, 1]");
}

CorrelationMatrix CorrelationMatrix::identity(Eigen::Index dim) {
  return CorrelationMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

CorrelationMatrix CorrelationMatrix::equicorrelated(Eigen::Index dim, double c) {
  require(c >= -1.0 && c <= 1.0, "equicorrelated: c must lie in [-1, 1]");
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(dim, dim, c);
  m.diagonal().setOnes();
  return CorrelationMatrix(std::move(m));
}

double CorrelationMatrix::min_eigenvalue() const { return smallest_eigenvalue(entries_); }

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  check_square_symmetric(entries_, "covariance matrix");
  if (entries_.diagonal().minCoeff() < 0.0) fail(ErrorCode::kArgument, "covariance matrix: negative variance");
}

CovarianceMatrix CovarianceMatrix::from_correlation(const CorrelationMatrix& correlation, const Eigen::VectorXd& vols) {
  require(vols.size() == correlation.dim(), "covariance: volatility vector does not match dimension");
  require(vols.minCoeff() >= 0.0, "covariance: volatilities must be nonnegative");
  Eigen::MatrixXd m = vols.asDiagonal() * correlation.entries() * vols.asDiagonal();
  return CovarianceMatrix(symmetrized(m));
}

CorrelationMatrix CovarianceMatrix::correlation() const {
  const Eigen::VectorXd vols = volatilities();
  if (vols.minCoeff() <= 0.0) fail(ErrorCode::kDegenerate, "covariance: zero variance, correlation undefined");
  const Eigen::VectorXd inv = vols.cwiseInverse();
  Eigen::MatrixXd c = symmetrized(inv.asDiagonal() * entries_ * inv.asDiagonal());
  c.diagonal().setOnes();
  c = c.cwiseMax(-1.0).cwiseMin(1.0);
  return CorrelationMatrix(std::move(c));
}

double CovarianceMatrix::min_eigenvalue() const { return smallest_eigenvalue(entries_); }

std::vector<PriceSeries> align_on_common_dates(const std::vector<PriceSeries>& series) {
  require(!series.empty(), "align: no series");
  std::set<std::int64_t> common(series.front().timestamps.begin(), series.front().timestamps.end());
  for (std::size_t k = 1; k < series.size(); ++k) {
    std::set<std::int64_t> next;
    for (const auto t : series[k].timestamps)
      if (common.count(t)) next.insert(t);
    common.swap(next);
  }
  std::vector<PriceSeries> out;
  out.reserve(series.size());
  for (const auto& s : series) {
    PriceSeries aligned;
    aligned.asset_id = s.asset_id;
    for (std::size_t i = 0; i < s.timestamps.size(); ++i) {
      if (common.count(s.timestamps[i])) {
        aligned.timestamps.push_back(s.timestamps[i]);
        aligned.prices.push_back(s.prices[i]);
      }
    }
    out.push_back(std::move(aligned));
  }
  return out;
}

ReturnMatrix compute_returns(const std::vector<PriceSeries>& series, int delta_t) {
  require(!series.empty(), "compute_returns: no series");
  require(delta_t >= 1, "compute_returns: delta_t must be at least 1");
  const auto& grid = series.front().timestamps;
  for (const auto& s : series) {
    s.validate();
    if (s.timestamps != grid)
      fail(ErrorCode::kAlignment, "compute_returns: series '" + s.asset_id + "' is not on the common timestamp grid");
  }
  const auto length = static_cast<Eigen::Index>(grid.size());
  if (length <= delta_t) fail(ErrorCode::kArgument, "compute_returns: series shorter than delta_t + 1");

  ReturnMatrix out;
  out.delta_t = delta_t;
  out.values.resize(static_cast<Eigen::Index>(series.size()), length - delta_t);
  for (std::size_t k = 0; k < series.size(); ++k) {
    out.asset_ids.push_back(series[k].asset_id);
    const auto& p = series[k].prices;
    for (Eigen::Index t = 0; t + delta_t < length; ++t)
      out.values(static_cast<Eigen::Index>(k), t) = (p[t + delta_t] - p[t]) / p[t];
  }
  out.timestamps.assign(grid.begin(), grid.end() - delta_t);
  return out;
}

ReturnMatrix normalize_series(const ReturnMatrix& returns, IndexWindow window) {
  require(window.length >= 2, "normalize_series: window length must be at least 2");
  require(window.begin >= 0 && window.begin + window.length <= returns.observations(),
          "normalize_series: window outside the return matrix");
  ReturnMatrix out = slice(returns, window);
  for (Eigen::Index k = 0; k < out.assets(); ++k) {
    const RowMoments m = row_moments(out.values.row(k));
    if (m.degenerate) {
      const std::string id = k < static_cast<Eigen::Index>(out.asset_ids.size()) ? out.asset_ids[k] : std::to_string(k);
      fail(ErrorCode::kDegenerate, "normalize_series: asset '" + id + "' has zero variance in the window");
    }
    out.values.row(k) = (out.values.row(k).array() - m.mean) / m.sd;
  }
  return out;
}

ReturnMatrix normalize_series(const ReturnMatrix& returns) {
  return normalize_series(returns, IndexWindow{0, returns.observations()});
}

CorrelationMatrix correlation_matrix(const ReturnMatrix& normalized) {
  require(normalized.observations() >= 2, "correlation_matrix: need at least two observations");
  const double t = static_cast<double>(normalized.observations());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(normalized.assets(), normalized.assets());
  c.selfadjointView<Eigen::Lower>().rankUpdate(normalized.values, 1.0 / t);
  c = c.selfadjointView<Eigen::Lower>();
  for (Eigen::Index k = 0; k < c.rows(); ++k) {
    if (std::fabs(c(k, k) - 1.0) > kUnitDiagonalContract)
      fail(ErrorCode::kArgument, "correlation_matrix: input rows are not normalized (diagonal " +
                                     std::to_string(c(k, k)) + ")");
    c(k, k) = 1.0;
  }
  return CorrelationMatrix(c.cwiseMax(-1.0).cwiseMin(1.0));
}

CovarianceMatrix covariance_matrix(const ReturnMatrix& returns) {
  require(returns.observations() >= 2, "covariance_matrix: need at least two observations");
  const double t = static_cast<double>(returns.observations());
  const Eigen::VectorXd mean = returns.values.rowwise().mean();
  const Eigen::MatrixXd centered = returns.values.colwise() - mean;
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(returns.assets(), returns.assets());
  sigma.selfadjointView<Eigen::Lower>().rankUpdate(centered, 1.0 / t);
  return CovarianceMatrix(sigma.selfadjointView<Eigen::Lower>());
}

RollingVolatility rolling_volatility(const ReturnMatrix& returns, Eigen::Index window, Eigen::Index stride) {
  require(window >= 2, "rolling_volatility: window must be at least 2");
  require(stride >= 1, "rolling_volatility: stride must be positive");
  require(window <= returns.observations(), "rolling_volatility: window longer than the data");
  RollingVolatility out;
  out.window_length = window;
  out.stride = stride;
  const Eigen::Index count = (returns.observations() - window) / stride + 1;
  out.sigma.resize(returns.assets(), count);
  for (Eigen::Index w = 0; w < count; ++w) {
    const Eigen::Index start = w * stride;
    out.window_starts.push_back(start);
    for (Eigen::Index k = 0; k < returns.assets(); ++k)
      out.sigma(k, w) = row_moments(returns.values.row(k).segment(start, window)).sd;
  }
  return out;
}

SlidingWindowEnsemble sliding_correlation_ensemble(const ReturnMatrix& returns, Eigen::Index window,
                                                   Eigen::Index stride) {
  require(window >= 2, "sliding_correlation_ensemble: window must be at least 2");
  require(stride >= 1, "sliding_correlation_ensemble: stride must be positive");
  require(window <= returns.observations(), "sliding_correlation_ensemble: window longer than the data");
  SlidingWindowEnsemble out;
  out.window_length = window;
  out.stride = stride;
  const Eigen::Index count = (returns.observations() - window) / stride + 1;
  for (Eigen::Index w = 0; w < count; ++w) {
    const Eigen::Index start = w * stride;
    std::optional<std::string> zero_variance;
    for (Eigen::Index k = 0; k < returns.assets() && !zero_variance; ++k) {
      if (row_moments(returns.values.row(k).segment(start, window)).degenerate)
        zero_variance = k < static_cast<Eigen::Index>(returns.asset_ids.size()) ? returns.asset_ids[k] : std::to_string(k);
    }
    if (zero_variance) {
      out.skipped.push_back({start, *zero_variance});
      continue;
    }
    out.matrices.push_back(correlation_matrix(normalize_series(returns, IndexWindow{start, window})));
    out.window_starts.push_back(start);
  }
  return out;
}

SlidingWindowEnsemble sliding_correlation_ensemble(const ReturnMatrix& returns, Eigen::Index window) {
  return sliding_correlation_ensemble(returns, window, window);
}

EffectiveCorrelation effective_correlation(const CorrelationMatrix& correlation) {
  const Eigen::Index k = correlation.dim();
  require(k >= 2, "effective_correlation: need at least two assets");
  const double off_sum = correlation.entries().sum() - correlation.entries().trace();
  const double c = off_sum / static_cast<double>(k * (k - 1));
  return EffectiveCorrelation{c, CorrelationMatrix::equicorrelated(k, std::clamp(c, -1.0, 1.0))};
}

MomentEstimates estimate_drift_vol(const ReturnMatrix& returns, double maturity) {
  require(returns.observations() >= 2, "estimate_drift_vol: need at least two observations");
  require(maturity > 0.0, "estimate_drift_vol: maturity must be positive");
  MomentEstimates out;
  out.mu.resize(returns.assets());
  out.sigma.resize(returns.assets());
  for (Eigen::Index k = 0; k < returns.assets(); ++k) {
    const RowMoments m = row_moments(returns.values.row(k));
    out.mu(k) = m.mean;
    out.sigma(k) = m.degenerate ? 0.0 : m.sd;
  }
  out.rho = out.sigma / std::sqrt(maturity);
  return out;
}

std::int64_t parse_iso_date(const std::string& text) {
  int y = 0;
  unsigned m = 0, d = 0;
  char dash1 = 0, dash2 = 0;
  std::istringstream in(text);
  if (!(in >> y >> dash1 >> m >> dash2 >> d) || dash1 != '-' || dash2 != '-' || in.peek() != EOF)
    fail(ErrorCode::kParse, "invalid ISO-8601 date '" + text + "'");
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) fail(ErrorCode::kParse, "invalid calendar date '" + text + "'");
  return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

std::string format_iso_date(std::int64_t day) {
  const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{day}}};
  char buffer[16];
  std::snprintf(buffer, sizeof buffer, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buffer;
}

std::vector<PriceSeries> load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::string line;
  std::size_t line_no = 0;
  const auto next_row = [&](std::string& row) {
    while (std::getline(in, line)) {
      ++line_no;
      row = trim(line);
      if (!row.empty() && row.front() != '#') return true;
    }
    return false;
  };
  std::string row;
  if (!next_row(row) || row != "date,asset_id,close")
    fail(ErrorCode::kParse, path.string() + ":" + std::to_string(std::max<std::size_t>(line_no, 1)) +
                                ": expected header 'date,asset_id,close'");

  std::vector<PriceSeries> series;
  std::unordered_map<std::string, std::size_t> index;
  std::set<std::pair<std::int64_t, std::string>> seen;
  while (next_row(row)) {
    const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
    const auto c1 = row.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : row.find(',', c1 + 1);
    if (c2 == std::string::npos || row.find(',', c2 + 1) != std::string::npos)
      fail(ErrorCode::kParse, where + "expected three comma-separated fields");
    const std::string date = trim(std::string_view(row).substr(0, c1));
    const std::string asset = trim(std::string_view(row).substr(c1 + 1, c2 - c1 - 1));
    const std::string close = trim(std::string_view(row).substr(c2 + 1));
    if (asset.empty()) fail(ErrorCode::kParse, where + "empty asset_id");
    std::int64_t day = 0;
    try {
      day = parse_iso_date(date);
    } catch (const Error& e) {
      fail(ErrorCode::kParse, where + e.what());
    }
    double price = 0.0;
    const auto [ptr, ec] = std::from_chars(close.data(), close.data() + close.size(), price);
    if (ec != std::errc() || ptr != close.data() + close.size() || !std::isfinite(price))
      fail(ErrorCode::kParse, where + "invalid close '" + close + "'");
    if (!(price > 0.0)) fail(ErrorCode::kDomain, where + "nonpositive close");
    if (!seen.emplace(day, asset).second) fail(ErrorCode::kParse, where + "duplicate (date, asset_id) " + date + "," + asset);

    auto [it, inserted] = index.emplace(asset, series.size());
    if (inserted) series.push_back(PriceSeries{asset, {}, {}});
    series[it->second].timestamps.push_back(day);
    series[it->second].prices.push_back(price);
  }
  for (auto& s : series) {
    std::vector<std::size_t> order(s.timestamps.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s.timestamps[a] < s.timestamps[b]; });
    PriceSeries sorted{s.asset_id, {}, {}};
    for (const auto i : order) {
      sorted.timestamps.push_back(s.timestamps[i]);
      sorted.prices.push_back(s.prices[i]);
    }
    s = std::move(sorted);
  }
  return series;
}

void write_csv(const std::vector<PriceSeries>& series, const std::filesystem::path& path, const std::string& comment) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "date,asset_id,close\n";
  char buffer[64];
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.prices.size(); ++i) {
      std::snprintf(buffer, sizeof buffer, "%.17g", s.prices[i]);
      out << format_iso_date(s.timestamps[i]) << ',' << s.asset_id << ',' << buffer << '\n';
    }
  }
  if (!out) fail(ErrorCode::kIo, "failed writing '" + path.string() + "'");
}

std::vector<PriceSeries> generate_synthetic_market(const SyntheticMarketSpec& spec) {
  require(spec.assets >= 1, "synthetic market: need at least one asset");
  require(spec.observations >= 2, "synthetic market: need at least two observations");
  require(spec.initial_price > 0.0, "synthetic market: initial price must be positive");
  require(spec.fluctuation_n > 0.0, "synthetic market: N must be positive");
  require(spec.regime_length >= 1, "synthetic market: regime length must be positive");
  const auto k_assets = static_cast<Eigen::Index>(spec.assets);

  Eigen::VectorXd vols = Eigen::VectorXd::Constant(k_assets, spec.volatility);
  Eigen::VectorXd drifts = Eigen::VectorXd::Constant(k_assets, spec.drift);
  if (!spec.volatilities.empty()) {
    require(spec.volatilities.size() == spec.assets, "synthetic market: volatilities size mismatch");
    vols = Eigen::Map<const Eigen::VectorXd>(spec.volatilities.data(), k_assets);
  }
  if (!spec.drifts.empty()) {
    require(spec.drifts.size() == spec.assets, "synthetic market: drifts size mismatch");
    drifts = Eigen::Map<const Eigen::VectorXd>(spec.drifts.data(), k_assets);
  }
  require(vols.minCoeff() >= 0.0, "synthetic market: volatilities must be nonnegative");

  const CorrelationMatrix correlation = spec.correlation_matrix
                                            ? *spec.correlation_matrix
                                            : CorrelationMatrix::equicorrelated(k_assets, spec.correlation);
  require(correlation.dim() == k_assets, "synthetic market: correlation matrix dimension mismatch");
  if (!spec.correlation_matrix)
    require(spec.correlation >= 0.0 && spec.correlation < 1.0, "synthetic market: c must lie in [0, 1)");
  const EnsembleSpec ensemble(CovarianceMatrix::from_correlation(correlation, vols), spec.fluctuation_n);
  const bool integer_n = !ensemble.stationary() && spec.fluctuation_n == std::floor(spec.fluctuation_n);

  std::vector<PriceSeries> out(spec.assets);
  Eigen::VectorXd log_price = Eigen::VectorXd::Constant(k_assets, std::log(spec.initial_price));
  const Eigen::VectorXd log_drift = drifts - 0.5 * vols.cwiseAbs2();
  for (std::size_t k = 0; k < spec.assets; ++k) {
    out[k].asset_id = "A" + std::to_string(k + 1);
    out[k].timestamps.reserve(spec.observations);
    out[k].prices.reserve(spec.observations);
  }

  Eigen::MatrixXd regime_data;   // A (K x N) for integer N
  double regime_scale = 1.0;     // sqrt(z / N) otherwise
  Eigen::VectorXd shock(k_assets);
  for (std::size_t t = 0; t < spec.observations; ++t) {
    for (std::size_t k = 0; k < spec.assets; ++k) {
      out[k].timestamps.push_back(spec.first_day + static_cast<std::int64_t>(t));
      out[k].prices.push_back(std::exp(log_price(static_cast<Eigen::Index>(k))));
    }
    if (t + 1 == spec.observations) break;

    if (!ensemble.stationary() && t % spec.regime_length == 0) {
      RandomStream regime_rng(spec.seed, stream_id(StreamTag::kMarket, (std::uint64_t{1} << 40) + t / spec.regime_length));
      if (integer_n) {
        const auto n = static_cast<Eigen::Index>(spec.fluctuation_n);
        Eigen::MatrixXd g(k_assets, n);
        for (Eigen::Index j = 0; j < n; ++j)
          for (Eigen::Index i = 0; i < k_assets; ++i) g(i, j) = regime_rng.normal();
        regime_data = ensemble.factor() * g;
      } else {
        regime_scale = std::sqrt(regime_rng.chi_squared(spec.fluctuation_n) / spec.fluctuation_n);
      }
    }

    RandomStream rng(spec.seed, stream_id(StreamTag::kMarket, t));
    if (integer_n) {
      Eigen::VectorXd xi(regime_data.cols());
      for (Eigen::Index j = 0; j < xi.size(); ++j) xi(j) = rng.normal();
      shock = regime_data * xi / std::sqrt(spec.fluctuation_n);
    } else if (!spec.correlation_matrix) {
      const double common = rng.normal();
      const double a = std::sqrt(spec.correlation);
      const double b = std::sqrt(1.0 - spec.correlation);
      for (Eigen::Index k = 0; k < k_assets; ++k) shock(k) = vols(k) * (a * common + b * rng.normal());
      shock *= regime_scale;
    } else {
      Eigen::VectorXd eps(k_assets);
      for (Eigen::Index k = 0; k < k_assets; ++k) eps(k) = rng.normal();
      shock = regime_scale * (ensemble.factor() * eps);
    }
    log_price += log_drift + shock;
  }
  return out;
}

}  // namespace rmcredit

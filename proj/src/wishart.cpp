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

#include "rmcredit/wishart.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rmcredit/error.hpp"
#include "rmcredit/parallel.hpp"
#include "rmcredit/special.hpp"

namespace rmcredit {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTailCutoff = 40.0;

bool is_integer(double n) { return std::isfinite(n) && n == std::floor(n); }

// Trapezoid of exp(g(s)) over the real line, walking out from `start` with
// step h until g falls kTailCutoff below the largest value seen.
template <class LogIntegrand>
double log_trapezoid(const LogIntegrand& g, double start, double h) {
  const double g0 = g(start);
  double g_max = g0;
  double sum = 1.0;  // relative to exp(g0)
  for (const double direction : {1.0, -1.0}) {
    for (int i = 1;; ++i) {
      const double v = g(start + direction * i * h);
      if (v > g_max) g_max = v;
      sum += std::exp(v - g0);
      if (v < g_max - kTailCutoff) break;
      if (i > 1000000) fail(ErrorCode::kNumeric, "mixture integral did not converge");
    }
  }
  return g0 + std::log(sum * h);
}

double gaussian_log_density(double bilinear, Eigen::Index dim, double log_det) {
  return -0.5 * (bilinear + static_cast<double>(dim) * kLogTwoPi + log_det);
}

}  // namespace

Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& sigma, bool* positive_definite) {
  if (positive_definite) *positive_definite = false;
  if (sigma.rows() == 0) return sigma;
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() == Eigen::Success) {
    Eigen::MatrixXd l = llt.matrixL();
    if (l.diagonal().minCoeff() > 0.0) {
      if (positive_definite) *positive_definite = true;
      return l;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma);
  if (eig.info() != Eigen::Success) fail(ErrorCode::kNumeric, "covariance factor: eigendecomposition failed");
  Eigen::VectorXd lambda = eig.eigenvalues();
  const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
  if (lambda.minCoeff() < -kPsdTolerance * scale)
    fail(ErrorCode::kDegenerate, "covariance factor: matrix is not positive semidefinite (smallest eigenvalue " +
                                     std::to_string(lambda.minCoeff()) + ")");
  lambda = lambda.cwiseMax(0.0);
  return eig.eigenvectors() * lambda.cwiseSqrt().asDiagonal() * eig.eigenvectors().transpose();
}

EnsembleSpec::EnsembleSpec(CovarianceMatrix sigma0, double n) : sigma0_(std::move(sigma0)), n_(n) {
  require(n > 0.0, "ensemble: N must be positive");
  factor_ = covariance_factor(sigma0_.entries(), &positive_definite_);
  if (positive_definite_) log_det_ = 2.0 * factor_.diagonal().array().log().sum();
}

EnsembleSpec EnsembleSpec::effective(double c, const Eigen::VectorXd& vols, double n) {
  return EnsembleSpec(CovarianceMatrix::from_correlation(CorrelationMatrix::equicorrelated(vols.size(), c), vols), n);
}

double EnsembleSpec::log_det() const {
  if (!positive_definite_) fail(ErrorCode::kDegenerate, "ensemble: Sigma0 is singular");
  return log_det_;
}

double EnsembleSpec::bilinear_form(const Eigen::VectorXd& r) const {
  if (!positive_definite_) fail(ErrorCode::kDegenerate, "ensemble: Sigma0 is singular");
  require(r.size() == dim(), "ensemble: return vector dimension mismatch");
  return factor_.triangularView<Eigen::Lower>().solve(r).squaredNorm();
}

double wishart_log_density(const Eigen::MatrixXd& data, const EnsembleSpec& spec) {
  require(!spec.stationary(), "wishart density: N must be finite");
  require(data.rows() == spec.dim(), "wishart density: row count must equal K");
  require(static_cast<double>(data.cols()) == spec.n(), "wishart density: column count must equal N");
  const double log_det = spec.log_det();
  const double trace = spec.factor().triangularView<Eigen::Lower>().solve(data).squaredNorm();
  const double n = spec.n();
  return -0.5 * n * (static_cast<double>(spec.dim()) * kLogTwoPi + log_det) - 0.5 * trace;
}

CovarianceMatrix sample_random_covariance(const EnsembleSpec& spec, RandomStream& rng) {
  if (spec.stationary()) return spec.sigma0();
  const double n = spec.n();
  if (is_integer(n)) {
    const auto cols = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd g(spec.dim(), cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < spec.dim(); ++i) g(i, j) = rng.normal();
    const Eigen::MatrixXd a = spec.factor() * g;
    Eigen::MatrixXd s = (a * a.transpose()) / n;
    return CovarianceMatrix(0.5 * (s + s.transpose()));
  }
  return CovarianceMatrix(spec.sigma0().entries() * (rng.chi_squared(n) / n));
}

double log_mixture_kernel(double bilinear, Eigen::Index dim, double n) {
  require(n > 0.0 && std::isfinite(n), "mixture kernel: N must be positive and finite");
  require(bilinear >= 0.0, "mixture kernel: bilinear form must be nonnegative");
  const double a = 0.5 * (n - static_cast<double>(dim));
  const double c = 0.5 * n * bilinear;
  if (c == 0.0 && a <= 0.0) return kInf;
  // z = e^s: int exp(a s - e^s / 2 - c e^{-s}) ds, peaked at e^s = a + sqrt(a^2 + 2c).
  const double root = std::sqrt(a * a + 2.0 * c);
  const double peak_z = a > 0.0 ? a + root : 2.0 * c / (root - a);
  const double peak = std::log(peak_z);
  const double curvature = 0.5 * peak_z + c / peak_z;
  const double h = std::min(0.2, 0.25 / std::sqrt(curvature));
  const auto g = [a, c](double s) { return a * s - 0.5 * std::exp(s) - c * std::exp(-s); };
  return log_trapezoid(g, peak, h) - 0.5 * n * std::numbers::ln2 - std::lgamma(0.5 * n);
}

double log_averaged_return_density(const Eigen::VectorXd& r, const EnsembleSpec& spec) {
  const double b = spec.bilinear_form(r);
  if (spec.stationary()) return gaussian_log_density(b, spec.dim(), spec.log_det());
  const double k = static_cast<double>(spec.dim());
  return log_mixture_kernel(b, spec.dim(), spec.n()) -
         0.5 * (k * (kLogTwoPi - std::log(spec.n())) + spec.log_det());
}

double averaged_return_density(const Eigen::VectorXd& r, const EnsembleSpec& spec) {
  return std::exp(log_averaged_return_density(r, spec));
}

double bessel_return_density(const Eigen::VectorXd& r, const EnsembleSpec& spec) {
  const double b = spec.bilinear_form(r);
  if (spec.stationary() || b == 0.0) return averaged_return_density(r, spec);
  const double n = spec.n();
  const double k = static_cast<double>(spec.dim());
  const double nb = n * b;
  const double log_value = std::numbers::ln2 + 0.25 * (n - k) * std::log(nb) +
                           special::log_bessel_k(0.5 * (n - k), std::sqrt(nb)) - 0.5 * n * std::numbers::ln2 -
                           std::lgamma(0.5 * n) - 0.5 * (k * (kLogTwoPi - std::log(n)) + spec.log_det());
  return std::exp(log_value);
}

double printed_prefactor_density(const Eigen::VectorXd& r, const EnsembleSpec& spec) {
  return 0.25 * bessel_return_density(r, spec);
}

Eigen::VectorXd mixture_sample(const EnsembleSpec& spec, RandomStream& rng) {
  const double scale = spec.stationary() ? 1.0 : std::sqrt(rng.chi_squared(spec.n()) / spec.n());
  Eigen::VectorXd eps(spec.dim());
  for (Eigen::Index i = 0; i < eps.size(); ++i) eps(i) = rng.normal();
  return scale * (spec.factor() * eps);
}

namespace {

struct Eigenbasis {
  Eigen::MatrixXd vectors;
  Eigen::VectorXd values;
  std::vector<Eigen::Index> kept;
};

Eigenbasis eigenbasis(const Eigen::MatrixXd& cov) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) fail(ErrorCode::kNumeric, "aggregate: eigendecomposition failed");
  Eigenbasis out{eig.eigenvectors(), eig.eigenvalues(), {}};
  const double max_value = out.values.maxCoeff();
  for (Eigen::Index i = 0; i < out.values.size(); ++i)
    if (max_value > 0.0 && out.values(i) >= kEigenRelativeCutoff * max_value) out.kept.push_back(i);
  return out;
}

void rotate_into(const Eigenbasis& basis, const Eigen::MatrixXd& returns, AggregatedSample& out) {
  Eigen::VectorXd inv_sqrt(static_cast<Eigen::Index>(basis.kept.size()));
  Eigen::MatrixXd projector(returns.rows(), inv_sqrt.size());
  for (std::size_t j = 0; j < basis.kept.size(); ++j) {
    projector.col(static_cast<Eigen::Index>(j)) = basis.vectors.col(basis.kept[j]);
    inv_sqrt(static_cast<Eigen::Index>(j)) = 1.0 / std::sqrt(basis.values(basis.kept[j]));
  }
  const Eigen::MatrixXd rotated = inv_sqrt.asDiagonal() * (projector.transpose() * returns);
  for (Eigen::Index t = 0; t < rotated.cols(); ++t)
    for (Eigen::Index i = 0; i < rotated.rows(); ++i) out.values.push_back(rotated(i, t));
  out.dropped_components += (static_cast<std::size_t>(returns.rows()) - basis.kept.size()) *
                            static_cast<std::size_t>(returns.cols());
  out.rotation_basis = basis.vectors;
  out.eigenvalues = basis.values;
  ++out.windows;
}

}  // namespace

AggregatedSample aggregate_returns(const ReturnMatrix& returns, const CovarianceMatrix& cov) {
  require(cov.dim() == returns.assets(), "aggregate: covariance dimension mismatch");
  AggregatedSample out;
  out.values.reserve(static_cast<std::size_t>(returns.values.size()));
  rotate_into(eigenbasis(cov.entries()), returns.values, out);
  return out;
}

AggregatedSample aggregate_returns(const ReturnMatrix& returns, Eigen::Index window) {
  require(window >= 2, "aggregate: window must be at least 2");
  require(window <= returns.observations(), "aggregate: window longer than the data");
  AggregatedSample out;
  out.values.reserve(static_cast<std::size_t>(returns.values.size()));
  for (Eigen::Index start = 0; start + window <= returns.observations(); start += window) {
    const Eigen::MatrixXd block = returns.values.middleCols(start, window);
    const Eigen::MatrixXd centered = block.colwise() - block.rowwise().mean();
    const Eigen::MatrixXd cov = centered * centered.transpose() / static_cast<double>(window);
    rotate_into(eigenbasis(0.5 * (cov + cov.transpose())), centered, out);
  }
  return out;
}

double univariate_aggregated_density(double x, double n) {
  require(n > 0.0, "aggregated density: N must be positive");
  if (n == kInf) return special::normal_pdf(x);
  return std::exp(log_mixture_kernel(x * x, 1, n) + 0.5 * (std::log(n) - kLogTwoPi));
}

double univariate_aggregated_cdf(double x, double n) {
  require(n > 0.0, "aggregated cdf: N must be positive");
  if (n == kInf) return special::normal_cdf(x);
  if (x == 0.0) return 0.5;
  if (x > 0.0) return 1.0 - univariate_aggregated_cdf(-x, n);
  // E_z[Phi(x sqrt(N / z))] with the chi-squared weight written in s = ln z.
  const double half = 0.5 * n;
  const double log_norm = half * std::numbers::ln2 + std::lgamma(half);
  const auto log_weight = [half, log_norm](double s) { return half * s - 0.5 * std::exp(s) - log_norm; };
  const double peak = std::log(n);
  const double h = std::min(0.2, 0.25 / std::sqrt(half));
  const double w_max = log_weight(peak);
  const double root_n = std::sqrt(n);
  double sum = 0.0;
  for (const double direction : {1.0, -1.0}) {
    for (int i = direction > 0.0 ? 0 : 1;; ++i) {
      const double s = peak + direction * i * h;
      const double w = log_weight(s);
      sum += std::exp(w + special::log_normal_cdf(x * root_n * std::exp(-0.5 * s)));
      if (w < w_max - kTailCutoff) break;
    }
  }
  return std::clamp(sum * h, 0.0, 0.5);
}

namespace {

constexpr std::size_t kBlock = kParallelChunk;

double pooled_log_likelihood(const std::vector<double>& values, double n) {
  std::vector<double> partial((values.size() + kBlock - 1) / kBlock, 0.0);
  parallel_for(values.size(), 0, [&](std::size_t begin, std::size_t end) {
    double sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) sum += std::log(univariate_aggregated_density(values[i], n));
    partial[begin / kBlock] = sum;
  });
  double total = 0.0;
  for (const double p : partial) total += p;
  return total;
}

double ks_statistic(std::vector<double> values, double n) {
  std::sort(values.begin(), values.end());
  const double count = static_cast<double>(values.size());
  std::vector<double> partial((values.size() + kBlock - 1) / kBlock, 0.0);
  parallel_for(values.size(), 0, [&](std::size_t begin, std::size_t end) {
    double d = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const double f = univariate_aggregated_cdf(values[i], n);
      d = std::max({d, f - static_cast<double>(i) / count, static_cast<double>(i + 1) / count - f});
    }
    partial[begin / kBlock] = d;
  });
  return partial.empty() ? 0.0 : *std::max_element(partial.begin(), partial.end());
}

double printed_mass(double n) {
  const EnsembleSpec unit(CovarianceMatrix(Eigen::MatrixXd::Identity(1, 1)), n);
  // x = e^t on the half line, doubled by symmetry.
  constexpr double kStep = 0.01;
  double mass = 0.0;
  Eigen::VectorXd r(1);
  for (double t = -40.0; t <= 6.0; t += kStep) {
    r(0) = std::exp(t);
    mass += printed_prefactor_density(r, unit) * r(0);
  }
  return 2.0 * mass * kStep;
}

}  // namespace

FitReport fit_n(const AggregatedSample& sample, const FitOptions& options) {
  require(!sample.values.empty(), "fit_n: empty sample");
  require(options.n_min > 0.0 && options.n_max > options.n_min, "fit_n: invalid N range");
  require(options.resolution > 0.0, "fit_n: resolution must be positive");
  for (const double x : sample.values)
    if (!std::isfinite(x)) fail(ErrorCode::kDomain, "fit_n: non-finite sample value");

  FitReport report;
  report.sample_size = sample.values.size();
  for (double n = options.n_min; n <= options.n_max + 1e-9; n += 1.0) {
    report.grid_n.push_back(n);
    report.grid_log_likelihood.push_back(pooled_log_likelihood(sample.values, n));
  }
  const auto& ll = report.grid_log_likelihood;
  const std::size_t best = static_cast<std::size_t>(std::max_element(ll.begin(), ll.end()) - ll.begin());
  report.monotone_likelihood = std::is_sorted(ll.begin(), ll.end());
  report.at_upper_bound = best + 1 == ll.size();

  double n_hat = report.grid_n[best];
  double best_ll = ll[best];
  if (!report.at_upper_bound) {
    double lo = best == 0 ? options.n_min : report.grid_n[best - 1];
    double hi = report.grid_n[best + 1];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = pooled_log_likelihood(sample.values, x1);
    double f2 = pooled_log_likelihood(sample.values, x2);
    while (hi - lo > options.resolution) {
      if (f1 >= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = pooled_log_likelihood(sample.values, x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = pooled_log_likelihood(sample.values, x2);
      }
    }
    const double x_mid = 0.5 * (lo + hi);
    const double f_mid = pooled_log_likelihood(sample.values, x_mid);
    for (const auto& [x, f] : {std::pair{x1, f1}, std::pair{x2, f2}, std::pair{x_mid, f_mid}}) {
      if (f > best_ll) {
        best_ll = f;
        n_hat = x;
      }
    }
  }
  report.n_hat = n_hat;
  report.log_likelihood = best_ll;
  report.ks = ks_statistic(sample.values, n_hat);
  report.printed_prefactor_mass = printed_mass(n_hat);
  if (report.at_upper_bound) {
    report.warning = "likelihood maximal at the upper bound of the N range; data consistent with N -> infinity";
  }
  if (report.ks > options.ks_warning) {
    if (!report.warning.empty()) report.warning += "; ";
    report.warning += "poor fit: KS distance " + std::to_string(report.ks) + " exceeds " +
                      std::to_string(options.ks_warning);
  }
  return report;
}

}  // namespace rmcredit

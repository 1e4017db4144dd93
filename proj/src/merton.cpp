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

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

#include "rmcredit/error.hpp"
#include "rmcredit/quadrature.hpp"
#include "rmcredit/special.hpp"

namespace rmcredit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Kernels narrower than 1e-10 in L are booked as point masses.
constexpr double kPointMassVariance = 1e-20;

void check_contract(const Contract& k) {
  require(k.face > 0.0 && std::isfinite(k.face), "contract: face value must be positive");
  require(k.initial > 0.0 && std::isfinite(k.initial), "contract: initial value must be positive");
  require(std::isfinite(k.drift), "contract: drift must be finite");
  require(k.vol >= 0.0 && std::isfinite(k.vol), "contract: volatility must be nonnegative");
}

void check_market(double c, double n) {
  require(c >= 0.0 && std::isfinite(c), "average correlation must lie in [0, 1)");
  if (c > kMaxCorrelation) fail(ErrorCode::kDegenerate, "average correlation c = 1 makes the idiosyncratic part singular");
  require(n > 0.0, "N must be positive");
}

// Log terminal value relative to its drift, ln(V/V0) - (mu - rho^2/2) T, is
// sqrt(w) Y with w = z / N and Y ~ Normal(mean, sd^2) given the common factor
// xi = u sqrt(N) ~ Normal(0, 1).
struct Conditional {
  double log_a = 0.0;  // ln(V0 / F) + (mu - rho^2 / 2) T
  double t = 1.0;      // sqrt(w)
  double mean = 0.0;
  double sd = 0.0;
  double alpha = 0.0;  // standardized default boundary
};

Conditional conditional(const Contract& k, double maturity, double w, double xi, double c) {
  Conditional out;
  out.log_a = std::log(k.initial / k.face) + (k.drift - 0.5 * k.vol * k.vol) * maturity;
  out.t = std::sqrt(w);
  out.mean = -std::sqrt(c * maturity) * k.vol * xi;
  out.sd = std::sqrt(maturity * (1.0 - c)) * k.vol;
  if (out.sd > 0.0) out.alpha = (-out.log_a / out.t - out.mean) / out.sd;
  return out;
}

double binomial(int j, int i) {
  double b = 1.0;
  for (int m = 1; m <= i; ++m) b = b * (j - i + m) / m;
  return b;
}

// E[(1 - a e^{tY})^j 1{Y <= boundary}] by binomial expansion into normal CDFs.
double moment(int j, const Conditional& q) {
  if (q.sd == 0.0) {
    const double loss = std::max(0.0, -std::expm1(q.log_a + q.t * q.mean));
    return std::pow(loss, j);
  }
  const double log_phi = special::log_normal_cdf(q.alpha);
  if (log_phi == -kInf) return 0.0;
  const double ts = q.t * q.sd;
  const auto log_ratio = [&](int i) {
    return i * q.log_a + i * q.t * q.mean + 0.5 * i * i * ts * ts + special::log_normal_cdf(q.alpha - i * ts) - log_phi;
  };
  double bracket;
  if (j == 1) {
    bracket = -std::expm1(log_ratio(1));
  } else {
    bracket = 1.0;
    for (int i = 1; i <= j; ++i) bracket += binomial(j, i) * ((i % 2) ? -1.0 : 1.0) * std::exp(log_ratio(i));
  }
  return std::clamp(std::exp(log_phi) * bracket, 0.0, 1.0);
}

// d m_1 / d xi.
double moment_derivative(const Conditional& q, double c, double maturity, double vol) {
  if (q.sd == 0.0) return 0.0;
  const double ts = q.t * q.sd;
  const double log_value =
      q.log_a + q.t * q.mean + 0.5 * ts * ts + special::log_normal_cdf(q.alpha - ts);
  return std::sqrt(c * maturity) * vol * q.t * std::exp(log_value);
}

PortfolioMoments moments_at(double w, double xi, const PortfolioSpec& spec, double c) {
  PortfolioMoments out;
  for (const auto& g : spec.groups()) {
    const Conditional q = conditional(g.contract, spec.maturity(), w, xi, c);
    const double m1 = moment(1, q);
    const double m2 = moment(2, q);
    out.m1 += g.weight * m1;
    out.m2 += g.weight_squared * (m2 - m1 * m1);
  }
  out.m2 = std::max(out.m2, 0.0);
  return out;
}

double m1_at(const Contract& k, double maturity, double w, double xi, double c) {
  return moment(1, conditional(k, maturity, w, xi, c));
}

struct FactorRoot {
  enum Status { kFound, kBelowRange, kAboveRange } status = kFound;
  double xi = 0.0;
  double residual = 0.0;
};

// Solves m_1(w, xi) = level by safeguarded Newton on a bracket that starts at
// [-12, 12] and is doubled up to four times on either side.
FactorRoot common_factor_root(const Contract& k, double maturity, double w, double c, double level, double tolerance) {
  const auto f = [&](double x) { return m1_at(k, maturity, w, x, c) - level; };
  double lo = -12.0, hi = 12.0;
  double f_lo = f(lo), f_hi = f(hi);
  if (f_lo > f_hi) fail(ErrorCode::kNumeric, "common-factor root: m_1 is not increasing in u");
  for (int expand = 0; expand < 4 && f_lo > 0.0; ++expand) {
    lo *= 2.0;
    f_lo = f(lo);
  }
  for (int expand = 0; expand < 4 && f_hi < 0.0; ++expand) {
    hi *= 2.0;
    f_hi = f(hi);
  }
  FactorRoot root;
  if (f_lo > 0.0) {
    root.status = FactorRoot::kBelowRange;
    return root;
  }
  if (f_hi < 0.0) {
    root.status = FactorRoot::kAboveRange;
    return root;
  }
  double x = 0.5 * (lo + hi);
  double fx = f(x);
  for (int it = 0; it < 200 && std::fabs(fx) > tolerance; ++it) {
    if (fx < 0.0) lo = x; else hi = x;
    if (hi - lo < 1e-15 * (1.0 + std::fabs(x))) break;
    const double d = moment_derivative(conditional(k, maturity, w, x, c), c, maturity, k.vol);
    double next = d > 0.0 ? x - fx / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
    fx = f(x);
  }
  root.xi = x;
  root.residual = fx;
  return root;
}

void check_grid(const std::vector<double>& grid) {
  require(!grid.empty(), "loss grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require(std::isfinite(grid[i]), "loss grid contains a non-finite value");
    require(grid[i] >= 0.0 && grid[i] <= 1.0, "loss grid must lie in [0, 1]");
    if (i > 0) require(grid[i] > grid[i - 1], "loss grid must be strictly ascending");
  }
}

// Trapezoid mass of the tabulated density against the exact CDF. The first
// cell holds the no-default spike near L = 0 and is taken from the CDF.
double trapezoid_defect(const LossDensityCurve& curve) {
  const auto& x = curve.grid;
  const auto& y = curve.density;
  if (x.size() < 2) return 0.0;
  double sum = curve.cdf[1] + (1.0 - curve.cdf.back());
  for (std::size_t i = 2; i < x.size(); ++i) sum += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
  return std::fabs(1.0 - sum);
}

// Nodes of the trapezoid in s = ln z for the chi-squared(N) weight, normalized.
void log_chi_nodes(double n, double step, double cutoff, std::vector<double>& w, std::vector<double>& weight) {
  w.clear();
  weight.clear();
  if (n == kInf) {
    w.push_back(1.0);
    weight.push_back(1.0);
    return;
  }
  const double peak = std::log(n);
  const auto log_weight = [n](double s) { return 0.5 * n * s - 0.5 * std::exp(s); };
  const double top = log_weight(peak);
  int lo = 0, hi = 0;
  while (log_weight(peak + (lo - 1) * step) >= top - cutoff) --lo;
  while (log_weight(peak + (hi + 1) * step) >= top - cutoff) ++hi;
  double total = 0.0;
  for (int i = lo; i <= hi; ++i) {
    const double s = peak + i * step;
    w.push_back(std::exp(s) / n);
    weight.push_back(std::exp(log_weight(s) - top));
    total += weight.back();
  }
  for (auto& v : weight) v /= total;
}

void normal_nodes(double step, double cutoff, std::vector<double>& xi, std::vector<double>& weight) {
  xi.clear();
  weight.clear();
  const int half = static_cast<int>(std::floor(std::sqrt(2.0 * cutoff) / step));
  double total = 0.0;
  for (int i = -half; i <= half; ++i) {
    xi.push_back(i * step);
    weight.push_back(std::exp(-0.5 * xi.back() * xi.back()));
    total += weight.back();
  }
  for (auto& v : weight) v /= total;
}

}  // namespace

PortfolioSpec::PortfolioSpec(std::vector<Contract> contracts, double maturity)
    : contracts_(std::move(contracts)), maturity_(maturity) {
  require(!contracts_.empty(), "portfolio: no contracts");
  require(maturity > 0.0 && std::isfinite(maturity), "portfolio: maturity must be positive");
  double total_face = 0.0;
  for (const auto& k : contracts_) {
    check_contract(k);
    total_face += k.face;
  }
  weights_.reserve(contracts_.size());
  std::map<std::tuple<double, double, double, double>, std::size_t> index;
  for (const auto& k : contracts_) {
    const double f = k.face / total_face;
    weights_.push_back(f);
    auto [it, inserted] = index.emplace(std::make_tuple(k.face, k.initial, k.drift, k.vol), groups_.size());
    if (inserted) groups_.push_back(ContractGroup{k, 0.0, 0.0, 0});
    auto& g = groups_[it->second];
    g.weight += f;
    g.weight_squared += f * f;
    ++g.count;
  }
}

PortfolioSpec PortfolioSpec::homogeneous(std::size_t k, const Contract& contract, double maturity) {
  require(k >= 1, "portfolio: need at least one contract");
  return PortfolioSpec(std::vector<Contract>(k, contract), maturity);
}

double contract_loss(double terminal_value, double face) {
  require(face > 0.0, "contract_loss: face value must be positive");
  return terminal_value < face ? (face - terminal_value) / face : 0.0;
}

double portfolio_loss(const std::vector<double>& losses, const PortfolioSpec& spec) {
  require(losses.size() == spec.size(), "portfolio_loss: one loss per contract required");
  double total = 0.0;
  for (std::size_t k = 0; k < losses.size(); ++k) total += spec.weights()[k] * losses[k];
  return total;
}

double default_probability(const Contract& contract, double maturity) {
  check_contract(contract);
  require(maturity > 0.0, "default_probability: maturity must be positive");
  const double boundary =
      std::log(contract.face / contract.initial) - (contract.drift - 0.5 * contract.vol * contract.vol) * maturity;
  if (contract.vol == 0.0) return boundary > 0.0 ? 1.0 : 0.0;
  return special::normal_cdf(boundary / (contract.vol * std::sqrt(maturity)));
}

double moment_mjk(int j, const Contract& contract, double maturity, double z, double u, double c, double n) {
  require(j >= 1, "moment_mjk: j must be at least 1");
  require(z > 0.0 && std::isfinite(z), "moment_mjk: z must be positive");
  require(std::isfinite(n), "moment_mjk: N must be finite");
  check_contract(contract);
  check_market(c, n);
  return moment(j, conditional(contract, maturity, z / n, u * std::sqrt(n), c));
}

double moment_m1_derivative(const Contract& contract, double maturity, double z, double u, double c, double n) {
  require(z > 0.0 && std::isfinite(z), "moment derivative: z must be positive");
  require(std::isfinite(n), "moment derivative: N must be finite");
  check_contract(contract);
  check_market(c, n);
  const Conditional q = conditional(contract, maturity, z / n, u * std::sqrt(n), c);
  return std::sqrt(n) * moment_derivative(q, c, maturity, contract.vol);
}

PortfolioMoments portfolio_moments(double z, double u, const PortfolioSpec& spec, double c, double n) {
  require(z > 0.0 && std::isfinite(z), "portfolio_moments: z must be positive");
  require(std::isfinite(n), "portfolio_moments: N must be finite");
  check_market(c, n);
  return moments_at(z / n, u * std::sqrt(n), spec, c);
}

LossDensityCurve avg_loss_density(const std::vector<double>& grid, const PortfolioSpec& spec, double c, double n,
                                  const LossQuadratureOptions& options) {
  check_grid(grid);
  check_market(c, n);
  require(options.resolution > 0.0, "avg_loss_density: resolution must be positive");

  std::vector<double> w_nodes, w_weights, xi_nodes, xi_weights;
  std::vector<double> m1, m2;
  double s_step = n == kInf ? 0.0 : 0.5 * std::sqrt(2.0 / n);
  double xi_step = 0.5;
  for (;;) {
    log_chi_nodes(n, s_step, options.log_weight_cutoff, w_nodes, w_weights);
    normal_nodes(xi_step, options.log_weight_cutoff, xi_nodes, xi_weights);
    const std::size_t nw = w_nodes.size();
    const std::size_t nx = xi_nodes.size();
    if (nw * nx > options.max_nodes)
      fail(ErrorCode::kNumeric, "avg_loss_density: quadrature did not resolve the kernel within " +
                                    std::to_string(options.max_nodes) + " nodes (ln z step " + std::to_string(s_step) +
                                    ", u step " + std::to_string(xi_step / std::sqrt(n)) + ")");
    m1.assign(nw * nx, 0.0);
    m2.assign(nw * nx, 0.0);
    for (std::size_t i = 0; i < nw; ++i) {
      for (std::size_t j = 0; j < nx; ++j) {
        const PortfolioMoments pm = moments_at(w_nodes[i], xi_nodes[j], spec, c);
        m1[i * nx + j] = pm.m1;
        m2[i * nx + j] = pm.m2;
      }
    }
    const double weight_floor = 1e-13;
    const auto violation = [&](std::size_t a, std::size_t b, double weight) {
      if (weight < weight_floor) return 0.0;
      if (std::max(m1[a], m1[b]) < options.active_threshold) return 0.0;
      const double width = std::sqrt(std::max(m2[a], m2[b]));
      if (width == 0.0) return 0.0;
      return std::fabs(m1[a] - m1[b]) / (options.resolution * width);
    };
    double ratio_s = 0.0, ratio_xi = 0.0;
    for (std::size_t i = 0; i < nw; ++i) {
      for (std::size_t j = 0; j < nx; ++j) {
        const std::size_t a = i * nx + j;
        const double wa = w_weights[i] * xi_weights[j];
        if (i + 1 < nw) ratio_s = std::max(ratio_s, violation(a, a + nx, std::max(wa, w_weights[i + 1] * xi_weights[j])));
        if (j + 1 < nx) ratio_xi = std::max(ratio_xi, violation(a, a + 1, std::max(wa, w_weights[i] * xi_weights[j + 1])));
      }
    }
    if (ratio_s <= 1.0 && ratio_xi <= 1.0) break;
    const auto shrink = [](double ratio) { return std::min(8.0, std::exp2(std::ceil(std::log2(ratio)))); };
    if (ratio_s > 1.0 && n != kInf) s_step /= shrink(ratio_s);
    if (ratio_xi > 1.0) xi_step /= shrink(ratio_xi);
    if (ratio_s > 1.0 && n == kInf && ratio_xi <= 1.0) fail(ErrorCode::kNumeric, "avg_loss_density: unresolvable kernel");
  }

  LossDensityCurve curve;
  curve.grid = grid;
  curve.density.assign(grid.size(), 0.0);
  curve.cdf.assign(grid.size(), 0.0);
  curve.c = c;
  curve.n = n;
  curve.portfolio_size = spec.size();
  curve.method = "trapezoid-lnz-u";
  curve.z_nodes = w_nodes.size();
  curve.u_nodes = xi_nodes.size();
  curve.z_step = s_step;
  curve.u_step = n == kInf ? 0.0 : xi_step / std::sqrt(n);

  std::vector<double> step_mass(grid.size() + 1, 0.0);  // mass entering the CDF at index i
  double below_zero = 0.0, above_one = 0.0;
  const std::size_t nx = xi_nodes.size();
  for (std::size_t i = 0; i < w_nodes.size(); ++i) {
    for (std::size_t j = 0; j < nx; ++j) {
      const double weight = w_weights[i] * xi_weights[j];
      const double mean = m1[i * nx + j];
      const double var = m2[i * nx + j];
      if (!(var > kPointMassVariance)) {
        const auto at = std::lower_bound(grid.begin(), grid.end(), mean) - grid.begin();
        step_mass[static_cast<std::size_t>(at)] += weight;
        if (mean > 1.0) above_one += weight;
        continue;
      }
      const double sd = std::sqrt(var);
      below_zero += weight * special::normal_cdf(-mean / sd);
      above_one += weight * special::normal_cdf((mean - 1.0) / sd);
      const double reach = options.kernel_width * sd;
      const auto first = static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), mean - reach) - grid.begin());
      const auto last = static_cast<std::size_t>(std::upper_bound(grid.begin(), grid.end(), mean + reach) - grid.begin());
      const double scale = weight / sd;
      for (std::size_t g = first; g < last; ++g) {
        const double x = (grid[g] - mean) / sd;
        curve.density[g] += scale * special::normal_pdf(x);
        curve.cdf[g] += weight * special::normal_cdf(x);
      }
      step_mass[last] += weight;
    }
  }
  double running = 0.0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    running += step_mass[g];
    curve.cdf[g] = std::min(1.0, curve.cdf[g] + running);
  }
  curve.mass_below_zero = below_zero;
  curve.mass_above_one = above_one;
  curve.mass_unit_interval = std::max(0.0, 1.0 - below_zero - above_one);
  curve.normalization_defect = trapezoid_defect(curve);
  return curve;
}

bool solve_common_factor(const Contract& contract, double maturity, double z, double c, double n, double level,
                         double* u, double tolerance) {
  require(std::isfinite(n) && n > 0.0, "solve_common_factor: N must be positive and finite");
  require(z > 0.0, "solve_common_factor: z must be positive");
  check_contract(contract);
  check_market(c, n);
  const FactorRoot root = common_factor_root(contract, maturity, z / n, c, level, tolerance);
  if (root.status != FactorRoot::kFound) return false;
  *u = root.xi / std::sqrt(n);
  return true;
}

LossDensityCurve limiting_loss_density(const std::vector<double>& grid, const PortfolioSpec& spec, double c, double n,
                                       const LimitingOptions& options) {
  check_grid(grid);
  check_market(c, n);
  require(spec.is_homogeneous(), "limiting_loss_density: portfolio must be homogeneous");
  const Contract& k = spec.groups().front().contract;
  const double maturity = spec.maturity();

  std::vector<double> w_nodes, w_weights;
  if (n == kInf) {
    w_nodes = {1.0};
    w_weights = {1.0};
  } else {
    const auto rule = quadrature::chi_squared_rule(options.z_nodes, n);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      w_nodes.push_back(rule.nodes[i] / n);
      w_weights.push_back(rule.weights[i]);
    }
  }

  LossDensityCurve curve;
  curve.grid = grid;
  curve.density.assign(grid.size(), 0.0);
  curve.cdf.assign(grid.size(), 0.0);
  curve.c = c;
  curve.n = n;
  curve.portfolio_size = 0;
  curve.method = "gauss-laguerre-root";
  curve.z_nodes = w_nodes.size();

  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double level = grid[g];
    if (level <= 0.0) continue;
    if (level >= 1.0) {
      curve.cdf[g] = 1.0;
      continue;
    }
    for (std::size_t i = 0; i < w_nodes.size(); ++i) {
      const FactorRoot root = common_factor_root(k, maturity, w_nodes[i], c, level, options.root_tolerance);
      if (root.status == FactorRoot::kBelowRange) continue;
      if (root.status == FactorRoot::kAboveRange) {
        curve.cdf[g] += w_weights[i];
        continue;
      }
      const double x = root.xi;
      curve.cdf[g] += w_weights[i] * special::normal_cdf(x);
      const double d = moment_derivative(conditional(k, maturity, w_nodes[i], x, c), c, maturity, k.vol);
      if (std::fabs(root.residual) > options.accept_tolerance || !(d > options.min_derivative)) {
        ++curve.skipped_nodes;
        continue;
      }
      curve.density[g] += w_weights[i] * special::normal_pdf(x) / d;
    }
  }
  curve.mass_unit_interval = 1.0;
  curve.normalization_defect = trapezoid_defect(curve);
  return curve;
}

std::vector<double> uniform_loss_grid(std::size_t points) {
  require(points >= 2, "loss grid needs at least two points");
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) grid[i] = static_cast<double>(i) / static_cast<double>(points - 1);
  return grid;
}

std::vector<double> log_loss_grid(std::size_t points, double smallest) {
  require(points >= 3, "log grid needs at least three points");
  require(smallest > 0.0 && smallest < 1.0, "log grid: smallest value must lie in (0, 1)");
  std::vector<double> grid{0.0};
  const double step = -std::log(smallest) / static_cast<double>(points - 2);
  for (std::size_t i = 0; i + 1 < points; ++i) grid.push_back(smallest * std::exp(step * static_cast<double>(i)));
  grid.back() = 1.0;
  return grid;
}

namespace {

double interpolate(const std::vector<double>& x, const std::vector<double>& y, double at) {
  if (at <= x.front()) return y.front();
  if (at >= x.back()) return y.back();
  const auto hi = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), at) - x.begin());
  const std::size_t lo = hi - 1;
  const double t = (at - x[lo]) / (x[hi] - x[lo]);
  return y[lo] + t * (y[hi] - y[lo]);
}

// Trapezoid of y * x^power over [lower, upper] with linear interpolation at the ends.
double partial_integral(const std::vector<double>& x, const std::vector<double>& y, double lower, double upper,
                        int power) {
  lower = std::max(lower, x.front());
  upper = std::min(upper, x.back());
  if (!(upper > lower)) return 0.0;
  std::vector<double> xs{lower};
  for (const double v : x)
    if (v > lower && v < upper) xs.push_back(v);
  xs.push_back(upper);
  double sum = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double a = interpolate(x, y, xs[i - 1]) * (power ? xs[i - 1] : 1.0);
    const double b = interpolate(x, y, xs[i]) * (power ? xs[i] : 1.0);
    sum += 0.5 * (a + b) * (xs[i] - xs[i - 1]);
  }
  return sum;
}

}  // namespace

std::vector<CurveRisk> risk_measures_from_curve(const LossDensityCurve& curve, const std::vector<double>& alphas) {
  require(curve.grid.size() >= 2 && curve.density.size() == curve.grid.size(), "risk measures: malformed curve");
  if (!(curve.normalization_defect < 1e-2))
    fail(ErrorCode::kNumeric, "risk measures: curve normalization defect " +
                                  std::to_string(curve.normalization_defect) + " exceeds 1e-2; refine the grid");
  std::vector<double> cdf = curve.cdf;
  if (cdf.size() != curve.grid.size()) {
    cdf.assign(curve.grid.size(), 0.0);
    for (std::size_t i = 1; i < cdf.size(); ++i)
      cdf[i] = cdf[i - 1] + 0.5 * (curve.density[i] + curve.density[i - 1]) * (curve.grid[i] - curve.grid[i - 1]);
  }
  std::vector<CurveRisk> out;
  for (const double alpha : alphas) {
    require(alpha > 0.0 && alpha < 1.0, "risk measures: alpha must lie in (0, 1)");
    CurveRisk r;
    r.alpha = alpha;
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), alpha);
    if (it == cdf.end()) {
      r.var = curve.grid.back();
    } else if (it == cdf.begin()) {
      r.var = curve.grid.front();
    } else {
      const auto i = static_cast<std::size_t>(it - cdf.begin());
      const double t = (alpha - cdf[i - 1]) / (cdf[i] - cdf[i - 1]);
      r.var = curve.grid[i - 1] + t * (curve.grid[i] - curve.grid[i - 1]);
    }
    const double mass = partial_integral(curve.grid, curve.density, r.var, curve.grid.back(), 0);
    const double first = partial_integral(curve.grid, curve.density, r.var, curve.grid.back(), 1);
    r.etl = mass > 0.0 ? std::max(r.var, first / mass) : r.var;
    out.push_back(r);
  }
  return out;
}

double curve_mass(const LossDensityCurve& curve, double lower, double upper) {
  return partial_integral(curve.grid, curve.density, lower, upper, 0);
}

double curve_mean(const LossDensityCurve& curve) {
  return partial_integral(curve.grid, curve.density, curve.grid.front(), curve.grid.back(), 1);
}

double curve_sup_distance(const LossDensityCurve& a, const LossDensityCurve& b, double lower, double upper) {
  require(a.grid == b.grid, "curve distance: grids differ");
  double diff = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < a.grid.size(); ++i) {
    if (a.grid[i] < lower || a.grid[i] > upper) continue;
    diff = std::max(diff, std::fabs(a.density[i] - b.density[i]));
    peak = std::max(peak, b.density[i]);
  }
  require(peak > 0.0, "curve distance: reference curve vanishes on the interval");
  return diff / peak;
}

}  // namespace rmcredit

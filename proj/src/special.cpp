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

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "rmcredit/error.hpp"

namespace rmcredit::special {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

double normal_pdf(double x) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x * kInvSqrt2); }

double log_normal_cdf(double x) noexcept {
  if (x > -30.0) return std::log(normal_cdf(x));
  // Asymptotic Mills-ratio series; relative error below 1e-12 for x <= -30.
  const double x2 = x * x;
  const double inv = 1.0 / x2;
  const double series = 1.0 - inv * (1.0 - 3.0 * inv * (1.0 - 5.0 * inv * (1.0 - 7.0 * inv)));
  return -0.5 * x2 - std::log(-x) - kLogSqrt2Pi + std::log(series);
}

double normal_quantile(double p) noexcept {
  if (!(p > 0.0)) return p == 0.0 ? -kInf : std::numeric_limits<double>::quiet_NaN();
  if (!(p < 1.0)) return p == 1.0 ? kInf : std::numeric_limits<double>::quiet_NaN();
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r + 67265.770927008700853) * r +
                45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((r * 5226.495278852545925 + 28729.085735721942674) * r + 39307.89580009271061) * r +
                21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((r * 7.7454501427834140764e-4 + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
                 1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
              4.6303378461565452959) * r + 1.42343711074968357734) /
            (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
                 0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
              2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
                 0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
              5.4637849111641143699) * r + 6.6579046435011037772) /
            (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
                 7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
              0.59983220655588793769) * r + 1.0);
  }
  return q < 0.0 ? -value : value;
}

namespace {

// Upper orthant probability P(X > dh, Y > dk).
double bivariate_normal_upper(double dh, double dk, double r) noexcept {
  if (dh == kInf || dk == kInf) return 0.0;
  if (dh == -kInf) return dk == -kInf ? 1.0 : normal_cdf(-dk);
  if (dk == -kInf) return normal_cdf(-dh);
  if (r == 0.0) return normal_cdf(-dh) * normal_cdf(-dk);

  static constexpr std::array<double, 3> w6{0.1713244923791705, 0.3607615730481384, 0.4679139345726904};
  static constexpr std::array<double, 3> x6{0.9324695142031522, 0.6612093864662647, 0.2386191860831970};
  static constexpr std::array<double, 6> w12{0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
                                             0.2031674267230659,  0.2334925365383547, 0.2491470458134029};
  static constexpr std::array<double, 6> x12{0.9815606342467191, 0.9041172563704750, 0.7699026741943050,
                                             0.5873179542866171, 0.3678314989981802, 0.1252334085114692};
  static constexpr std::array<double, 10> w20{0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
                                              0.08327674157670475, 0.1019301198172404,  0.1181945319615184,
                                              0.1316886384491766,  0.1420961093183821,  0.1491729864726037,
                                              0.1527533871307259};
  static constexpr std::array<double, 10> x20{0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
                                              0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
                                              0.5108670019508271, 0.3737060887154196, 0.2277858511416451,
                                              0.07652652113349733};
  const double* w;
  const double* x;
  int half;
  const double abs_r = std::fabs(r);
  if (abs_r < 0.3) {
    w = w6.data(); x = x6.data(); half = 3;
  } else if (abs_r < 0.75) {
    w = w12.data(); x = x12.data(); half = 6;
  } else {
    w = w20.data(); x = x20.data(); half = 10;
  }
  // Nodes mapped to [0, 2]: 1 - x and 1 + x, both with weight w.
  constexpr double tp = 2.0 * std::numbers::pi;
  double h = dh;
  double k = dk;
  double hk = h * k;
  double bvn = 0.0;
  if (abs_r < 0.925) {
    const double hs = 0.5 * (h * h + k * k);
    const double asr = 0.5 * std::asin(r);
    for (int i = 0; i < half; ++i) {
      for (const double node : {1.0 - x[i], 1.0 + x[i]}) {
        const double sn = std::sin(asr * node);
        bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
      }
    }
    bvn = bvn * asr / tp + normal_cdf(-h) * normal_cdf(-k);
  } else {
    if (r < 0.0) {
      k = -k;
      hk = -hk;
    }
    if (abs_r < 1.0) {
      const double as = 1.0 - r * r;
      double a = std::sqrt(as);
      const double bs = (h - k) * (h - k);
      const double c = (4.0 - hk) / 8.0;
      const double d = (12.0 - hk) / 80.0;
      double asr = -0.5 * (bs / as + hk);
      if (asr > -100.0) bvn = a * std::exp(asr) * (1.0 - c * (bs - as) * (1.0 - d * bs) / 3.0 + c * d * as * as);
      if (hk > -100.0) {
        const double b = std::sqrt(bs);
        const double sp = std::sqrt(tp) * normal_cdf(-b / a);
        bvn -= std::exp(-0.5 * hk) * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0);
      }
      a *= 0.5;
      double sum = 0.0;
      for (int i = 0; i < half; ++i) {
        for (const double node : {1.0 - x[i], 1.0 + x[i]}) {
          const double xs = (a * node) * (a * node);
          asr = -0.5 * (bs / xs + hk);
          if (asr <= -100.0) continue;
          const double sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs);
          const double rs = std::sqrt(1.0 - xs);
          const double ep = std::exp(-0.5 * hk * xs / ((1.0 + rs) * (1.0 + rs))) / rs;
          sum += w[i] * std::exp(asr) * (sp - ep);
        }
      }
      bvn = (a * sum - bvn) / tp;
    }
    if (r > 0.0) {
      bvn += normal_cdf(-std::max(h, k));
    } else if (h >= k) {
      bvn = -bvn;
    } else {
      const double span = h < 0.0 ? normal_cdf(k) - normal_cdf(h) : normal_cdf(-h) - normal_cdf(-k);
      bvn = span - bvn;
    }
  }
  return std::clamp(bvn, 0.0, 1.0);
}

}  // namespace

double bivariate_normal_cdf(double h, double k, double r) noexcept {
  return bivariate_normal_upper(-h, -k, r);
}

double log_bessel_k(double nu, double x) {
  if (!(x > 0.0)) fail(ErrorCode::kDomain, "log_bessel_k: argument must be positive");
  nu = std::fabs(nu);
  // Integrand exponent g(t) = -x (cosh t - 1) + log cosh(nu t); even in t, so
  // the half-line trapezoid with a halved t = 0 term converges spectrally.
  const auto exponent = [nu, x](double t) {
    const double nt = nu * t;
    const double log_cosh = nt + std::log1p(std::exp(-2.0 * nt)) - std::numbers::ln2;
    return -x * (std::cosh(t) - 1.0) + log_cosh;
  };
  // Peak: x sinh t = nu tanh(nu t); for nu^2 <= x the maximum is at t = 0.
  double peak = 0.0;
  if (nu * nu > x) {
    peak = std::asinh(nu / x);
    for (int it = 0; it < 50; ++it) {
      const double f = x * std::sinh(peak) - nu * std::tanh(nu * peak);
      const double df = x * std::cosh(peak) - nu * nu / std::pow(std::cosh(nu * peak), 2);
      const double step = f / df;
      peak = std::max(0.5 * peak, peak - step);
      if (std::fabs(step) < 1e-14 * (1.0 + peak)) break;
    }
  }
  const double curvature = x * std::cosh(peak) + nu * nu;  // upper bound on |g''| near the peak
  const double h = std::min(0.1, 0.25 / std::sqrt(curvature));
  const double g_max = exponent(peak);
  constexpr double kCutoff = 46.0;  // e^-46 ~ 1e-20 relative contribution

  double sum = 0.5 * std::exp(exponent(0.0) - g_max);
  for (int i = 1;; ++i) {
    const double t = i * h;
    const double g = exponent(t);
    sum += std::exp(g - g_max);
    if (t > peak && g < g_max - kCutoff) break;
    if (i > 2000000) fail(ErrorCode::kNumeric, "log_bessel_k: integration did not terminate");
  }
  return -x + g_max + std::log(sum * h);
}

double bessel_k(double nu, double x) { return std::exp(log_bessel_k(nu, x)); }

double log_chi_squared_pdf(double z, double dof) noexcept {
  if (!(z > 0.0)) return -kInf;
  const double k = 0.5 * dof;
  return (k - 1.0) * std::log(z) - 0.5 * z - k * std::numbers::ln2 - std::lgamma(k);
}

}  // namespace rmcredit::special

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

#include <cstddef>
#include <vector>

namespace rmcredit::quadrature {

/// Nodes and weights of an n-point Gauss rule: int w(x) f(x) dx ~ sum_i weights[i] f(nodes[i]).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const noexcept { return nodes.size(); }
};

/// Weight 1 on [-1, 1].
GaussRule gauss_legendre(std::size_t n);
/// Weight exp(-x^2) on the real line.
GaussRule gauss_hermite(std::size_t n);
/// Weight x^alpha exp(-x) on (0, inf), alpha > -1.
GaussRule gauss_laguerre(std::size_t n, double alpha);

/// Rule for E[f(Z)] with Z ~ chi-squared(dof): weights sum to one.
GaussRule chi_squared_rule(std::size_t n, double dof);
/// Rule for E[f(U)] with U ~ Normal(0, variance): weights sum to one.
GaussRule normal_rule(std::size_t n, double variance);

}  // namespace rmcredit::quadrature

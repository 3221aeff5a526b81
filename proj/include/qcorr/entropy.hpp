// Copyright 2026 The qcorr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Entropies in bits.

#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "qcorr/qstate.hpp"

namespace qcorr {

/// Eigenvalues below this contribute nothing to x log x sums (0 log 0 := 0).
inline constexpr double kEntropyFloor = 1e-12;

inline double xlog2x(double x) { return x < kEntropyFloor ? 0.0 : x * std::log2(x); }

/// H(p) = -sum p log2 p
inline double shannon_entropy(std::span<const double> p) {
  double total = 0.0;
  double h = 0.0;
  for (double x : p) {
    if (x < -kInvariantTol) throw ArgumentError("shannon_entropy: negative probability");
    total += x;
    h -= xlog2x(std::max(0.0, x));
  }
  if (std::abs(total - 1.0) > kProjectorTol) throw ArgumentError("shannon_entropy: probabilities do not sum to 1");
  return std::max(0.0, h);
}

/// Binary entropy h(p).
inline double binary_entropy(double p) { return -xlog2x(p) - xlog2x(1.0 - p); }

inline double spectrum_entropy(std::span<const double> eigs) {
  double h = 0.0;
  for (double x : eigs) h -= xlog2x(x);
  return std::max(0.0, h);
}

/// S(rho) = -tr rho log2 rho
inline double von_neumann_entropy(const QuantumState& rho) { return spectrum_entropy(eigenvalues(rho)); }

/// One eigenvalue with its multiplicity.
struct SpectralLevel {
  double value;
  double multiplicity;
};

namespace detail {
/// (1+x) ln(1+x) - x, accurate for small |x|.
inline double one_plus_x_log_minus_x(double x) {
  if (std::abs(x) < 1e-3) {
    const double x2 = x * x;
    return x2 * (0.5 - x / 6.0 + x2 / 12.0 - x2 * x / 20.0 + x2 * x2 / 30.0);
  }
  if (x <= -1.0) return 1.0;  // x = -1: 0 log 0 + 1
  return (1.0 + x) * std::log1p(x) - x;
}
}  // namespace detail

/// log2(d) - S for a spectrum given as levels on a d-dimensional space.
/// Written as sum (1+x_i) ln(1+x_i) - x_i with x_i = d*lambda_i - 1, which
/// avoids cancellation when the state is close to maximally mixed.
inline double entropy_deficit(std::span<const SpectralLevel> levels, double dim) {
  double acc = 0.0;
  for (const auto& l : levels) acc += l.multiplicity * detail::one_plus_x_log_minus_x(dim * l.value - 1.0);
  return acc / (dim * std::numbers::ln2);
}

}  // namespace qcorr

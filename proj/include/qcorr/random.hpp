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

// Seeded random states and unitaries. Every stochastic component derives its
// own child seed from a root seed and a task label, so results do not depend
// on how work is scheduled.

#pragma once

#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

#include "qcorr/qstate.hpp"

namespace qcorr {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stable child seed for (root, label).
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(root ^ splitmix64(h));
}

inline Rng make_rng(std::uint64_t root, std::string_view label) { return Rng(derive_seed(root, label)); }

/// Complex Ginibre matrix with unit-variance entries.
inline Matrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  Matrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = Complex(gauss(rng), gauss(rng));
  return g;
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of R's
/// diagonal folded back into Q.
inline Unitary haar_unitary(int n_qubits, Rng& rng) {
  const auto d = static_cast<Eigen::Index>(detail::dim_of(n_qubits));
  Eigen::HouseholderQR<Matrix> qr(ginibre(d, d, rng));
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    q.col(j) *= (mag > 0 ? rjj / mag : Complex(1.0));
  }
  return Unitary(n_qubits, std::move(q));
}

/// Uniformly random pure state.
inline PureState random_pure_state(int n_qubits, Rng& rng) {
  const auto d = static_cast<Eigen::Index>(detail::dim_of(n_qubits));
  Vector v = ginibre(d, 1, rng).col(0);
  return PureState::normalized(n_qubits, std::move(v));
}

/// Random mixed state G G^dagger / tr, G a d x rank Ginibre matrix.
inline QuantumState random_density(int n_qubits, Rng& rng, int rank = 0) {
  const auto d = static_cast<Eigen::Index>(detail::dim_of(n_qubits));
  const Eigen::Index k = rank > 0 ? rank : d;
  const Matrix g = ginibre(d, k, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return QuantumState::from_trusted(n_qubits, std::move(rho));
}

/// Random single-qubit pure state as (theta, phi) uniform on the sphere.
inline Eigen::Vector2cd random_qubit_ket(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double theta = std::acos(1.0 - 2.0 * u(rng));
  const double phi = 2.0 * std::numbers::pi * u(rng);
  return bloch_ket(theta, phi);
}

}  // namespace qcorr

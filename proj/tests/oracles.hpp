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

// Reference implementations used as test oracles. They share no code with
// the library beyond the Eigen types: plain index loops, a general
// (non-Hermitian) eigensolver and brute-force grids.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using C = std::complex<double>;
using M = Eigen::MatrixXcd;
using V = Eigen::VectorXcd;

inline int bit(std::size_t x, int q, int n) { return static_cast<int>((x >> (n - 1 - q)) & 1U); }

/// Sum over basis indices that agree on the traced qubits.
inline M partial_trace(const M& rho, int n, const std::vector<int>& keep) {
  const std::size_t d = std::size_t{1} << n;
  const std::size_t dk = std::size_t{1} << keep.size();
  M out = M::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  auto kept_index = [&](std::size_t x) {
    std::size_t k = 0;
    for (int q : keep) k = (k << 1) | static_cast<std::size_t>(bit(x, q, n));
    return k;
  };
  auto traced_equal = [&](std::size_t x, std::size_t y) {
    for (int q = 0; q < n; ++q) {
      if (std::find(keep.begin(), keep.end(), q) != keep.end()) continue;
      if (bit(x, q, n) != bit(y, q, n)) return false;
    }
    return true;
  };
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (traced_equal(i, j))
        out(static_cast<Eigen::Index>(kept_index(i)), static_cast<Eigen::Index>(kept_index(j))) +=
            rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return out;
}

/// Eigenvalues through the general complex eigensolver, real parts sorted
/// descending.
inline std::vector<double> eigenvalues(const M& m) {
  Eigen::ComplexEigenSolver<M> es(m);
  std::vector<double> v;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) v.push_back(es.eigenvalues()(i).real());
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

inline double entropy(const M& rho) {
  double s = 0.0;
  for (double x : eigenvalues(rho))
    if (x > 1e-13) s -= x * std::log(x) / std::numbers::ln2;
  return s;
}

inline double mutual_information(const M& rho, int n, const std::vector<int>& a, const std::vector<int>& b) {
  return entropy(partial_trace(rho, n, a)) + entropy(partial_trace(rho, n, b)) - entropy(rho);
}

/// Partial transpose over the listed qubits, by swapping their bits in the
/// row and column indices.
inline M partial_transpose(const M& rho, int n, const std::vector<int>& qubits) {
  const std::size_t d = std::size_t{1} << n;
  M out(rho.rows(), rho.cols());
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      std::size_t ii = i, jj = j;
      for (int q : qubits) {
        const std::size_t m = std::size_t{1} << (n - 1 - q);
        if (((i & m) != 0) != ((j & m) != 0)) {
          ii ^= m;
          jj ^= m;
        }
      }
      out(static_cast<Eigen::Index>(ii), static_cast<Eigen::Index>(jj)) =
          rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  return out;
}

inline M kron(const M& a, const M& b) {
  M out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Eigen::Vector2cd ket(double theta, double phi) {
  return Eigen::Vector2cd(std::cos(theta / 2), std::polar(1.0, phi) * std::sin(theta / 2));
}

/// max over a (theta, phi) grid of S(B) - sum_i p_i S(B|i) for qubit 0 of a
/// two-qubit state measured by the projectors onto ket(theta, phi) and its
/// orthogonal complement.
inline double classical_correlations_grid(const M& rho, int steps) {
  const M rho_b = partial_trace(rho, 2, {1});
  const double sb = entropy(rho_b);
  double best = 0.0;
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j < 2 * steps; ++j) {
      const double th = std::numbers::pi * i / steps;
      const double ph = std::numbers::pi * j / steps;
      const Eigen::Vector2cd k0 = ket(th, ph);
      const Eigen::Vector2cd k1 = ket(std::numbers::pi - th, ph + std::numbers::pi);
      double cond = 0.0;
      for (const auto& k : {k0, k1}) {
        const M p = kron(k * k.adjoint(), M::Identity(2, 2));
        const M post = p * rho * p;
        const double prob = post.trace().real();
        if (prob < 1e-14) continue;
        cond += prob * entropy(partial_trace(post / prob, 2, {1}));
      }
      best = std::max(best, sb - cond);
    }
  }
  return best;
}

inline V basis(int n, std::size_t index) {
  V v = V::Zero(static_cast<Eigen::Index>(std::size_t{1} << n));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return v;
}

}  // namespace oracle

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

// pseudopure.hpp
// States (1-eps) I/2^n + eps |psi><psi|: closed-form spectra and entropies,
// the fully-separable ball around the maximally mixed state, and the
// two-qubit state obtained by locally projecting sum_x |x>|f(x)>.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcorr/entropy.hpp"
#include "qcorr/qstate.hpp"

namespace qcorr {

class PseudopureState {
 public:
  PseudopureState(double epsilon, PureState pure_part) : epsilon_(epsilon), pure_part_(std::move(pure_part)) {
    if (!(epsilon_ >= 0.0 && epsilon_ <= 1.0)) throw ArgumentError("PseudopureState: epsilon must lie in [0, 1]");
  }

  int n_qubits() const { return pure_part_.n_qubits(); }
  double epsilon() const { return epsilon_; }
  const PureState& pure_part() const { return pure_part_; }

  /// Noise eigenvalue (1-eps)/2^n, multiplicity 2^n - 1.
  double background() const { return (1.0 - epsilon_) / static_cast<double>(pure_part_.dim()); }
  /// Eigenvalue on the pure part, eps + (1-eps)/2^n.
  double peak() const { return epsilon_ + background(); }

 private:
  double epsilon_;
  PureState pure_part_;
};

inline QuantumState assemble(const PseudopureState& p) {
  const auto d = static_cast<Eigen::Index>(p.pure_part().dim());
  Matrix m = p.background() * Matrix::Identity(d, d) + p.epsilon() * p.pure_part().projector();
  return QuantumState::from_trusted(p.n_qubits(), std::move(m));
}

/// Descending spectrum from the closed form.
inline std::vector<double> exact_spectrum(const PseudopureState& p) {
  std::vector<double> ev(p.pure_part().dim(), p.background());
  ev.front() = p.peak();
  return ev;
}

/// n - S(rho), evaluated without cancellation for small eps.
inline double exact_entropy_deficit(const PseudopureState& p) {
  const double d = static_cast<double>(p.pure_part().dim());
  const std::array<SpectralLevel, 2> levels{{{p.peak(), 1.0}, {p.background(), d - 1.0}}};
  return entropy_deficit(levels, d);
}

/// S(rho) from the two-level spectrum.
inline double exact_entropy(const PseudopureState& p) {
  const double d = static_cast<double>(p.pure_part().dim());
  const double s = -xlog2x(p.peak()) - (d - 1.0) * xlog2x(p.background());
  return std::max(0.0, s);
}

/// Exact rational value together with its double.
struct Rational {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;
  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
};

/// Pure fraction below which an n-qubit pseudopure state stays fully
/// separable under every unitary: 1/(2^{2n-1} + 1).
struct BraunsteinThreshold {
  double value = 0.0;
  std::optional<Rational> exact;  // absent once the denominator overflows 64 bits
};

inline BraunsteinThreshold braunstein_threshold(int n_qubits) {
  if (n_qubits < 1) throw ArgumentError("braunstein_threshold: n must be >= 1");
  const int e = 2 * n_qubits - 1;
  BraunsteinThreshold t;
  t.value = 1.0 / (std::ldexp(1.0, e) + 1.0);
  if (e < 64) t.exact = Rational{1, (std::uint64_t{1} << e) + 1};
  return t;
}

// ---------------------------------------------------------------------------
// Projected two-qubit state

/// (1-delta) I/4 + delta |phi><phi|, |phi> = (|0 f0> + |1 f1>)/sqrt2 with
/// f0 != f1 single bits.
struct ProjectedTwoQubit {
  double delta = 0.0;
  int f0 = 0;
  int f1 = 1;
  QuantumState matrix;
};

/// Two-qubit mixture of white noise and (|0 f0> + |1 f1>)/sqrt2.
inline QuantumState werner_form(double delta, int f0, int f1) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw ArgumentError("werner_form: delta must lie in [0, 1]");
  if ((f0 != 0 && f0 != 1) || (f1 != 0 && f1 != 1)) throw ArgumentError("werner_form: f0, f1 must be bits");
  Vector phi = Vector::Zero(4);
  phi(f0) += 1.0 / std::sqrt(2.0);
  phi(2 + f1) += 1.0 / std::sqrt(2.0);
  Matrix m = (1.0 - delta) / 4.0 * Matrix::Identity(4, 4) + delta * phi * phi.adjoint();
  return QuantumState::from_trusted(2, std::move(m));
}

/// Mixing weight of the projected state. Restricting the first register to
/// span{|0>,|1>} and the second to span{|f(0)>,|f(1)>} keeps weight
/// 2 eps / 2^{n1} of the pure part and 4 (1-eps)/2^{n} of the noise, so
/// delta = eps / (eps + (1-eps) 2^{1-n2}), independent of n1.
inline double projected_delta(int n2, double epsilon) {
  if (n2 < 1) throw ArgumentError("projected_delta: n2 must be >= 1");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ArgumentError("projected_delta: epsilon must lie in [0, 1]");
  if (epsilon == 0.0) return 0.0;
  return epsilon / (epsilon + (1.0 - epsilon) * std::ldexp(1.0, 1 - n2));
}

/// Effective two-qubit state of an (n1 + n2)-qubit pseudopure register whose
/// pure part is 2^{-n1/2} sum_x |x>|f(x)>. `f0`, `f1` are the second-register
/// values f(0), f(1); the second-register span is mapped to a qubit with the
/// smaller value as |0>.
inline ProjectedTwoQubit project_to_two_qubit(int n1, int n2, double epsilon, std::uint64_t f0, std::uint64_t f1) {
  if (n1 < 1 || n2 < 1) throw ArgumentError("project_to_two_qubit: register sizes must be >= 1");
  if (n2 < 63 && (f0 >> n2 || f1 >> n2)) throw ArgumentError("project_to_two_qubit: f value out of range");
  if (f0 == f1) throw PreconditionError("project_to_two_qubit: f(0) == f(1), the second-register span is degenerate");
  const double delta = projected_delta(n2, epsilon);
  const int b0 = f0 > f1 ? 1 : 0;
  const int b1 = 1 - b0;
  return ProjectedTwoQubit{delta, b0, b1, werner_form(delta, b0, b1)};
}

/// Pure fraction at which the projected state reaches delta = 1/3, i.e.
/// eps = 1/(2^{n2} + 1). Above it the projected state is entangled.
inline double entanglement_threshold_epsilon(int n2) {
  if (n2 < 1) throw ArgumentError("entanglement_threshold_epsilon: n2 must be >= 1");
  return 1.0 / (std::ldexp(1.0, n2) + 1.0);
}

// ---------------------------------------------------------------------------
// Separability audit

struct AuditEntry {
  std::size_t unitary_index = 0;
  std::string cut;
  double min_ppt_eigenvalue = 0.0;
};

struct SeparabilityAudit {
  std::vector<AuditEntry> entries;
  double epsilon = 0.0;
  double braunstein_threshold = 0.0;
  /// True when every (unitary, cut) pair passed the PPT test.
  bool all_ppt = true;
  std::size_t violations = 0;
};

/// PPT test of U rho U^dagger across every bipartition, for every U.
inline SeparabilityAudit separability_audit(const PseudopureState& p, std::span<const Unitary> unitaries) {
  const int n = p.n_qubits();
  if (n < 2 || n > 5) throw PreconditionError("separability_audit: requires 2 <= n <= 5");
  const QuantumState rho = assemble(p);
  const auto cuts = Bipartition::all(n);
  SeparabilityAudit audit;
  audit.epsilon = p.epsilon();
  audit.braunstein_threshold = braunstein_threshold(n).value;
  for (std::size_t u = 0; u < unitaries.size(); ++u) {
    const QuantumState out = evolve(rho, unitaries[u]);
    for (const auto& cut : cuts) {
      const PptResult r = ppt_check(out, cut);
      audit.entries.push_back({u, cut.to_string(), r.min_eigenvalue});
      if (!r.is_ppt) {
        audit.all_ppt = false;
        ++audit.violations;
      }
    }
  }
  return audit;
}

}  // namespace qcorr

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

// algorithms.hpp
// Deutsch-Jozsa with a pseudopure input, DQC1 trace estimation and Grover
// search with a pseudopure input.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "qcorr/correlations.hpp"
#include "qcorr/pseudopure.hpp"
#include "qcorr/qstate.hpp"
#include "qcorr/random.hpp"

namespace qcorr {

// ---------------------------------------------------------------------------
// Deutsch-Jozsa

enum class OracleKind { Constant0, Constant1, Balanced };

inline const char* to_string(OracleKind k) {
  switch (k) {
    case OracleKind::Constant0: return "constant-0";
    case OracleKind::Constant1: return "constant-1";
    case OracleKind::Balanced: return "balanced";
  }
  return "balanced";
}

/// f : {0,1}^n -> {0,1} under the constant-or-balanced promise, evaluated as
/// the phase (-1)^{f(x)}.
class PhaseOracle {
 public:
  /// Infers the kind; throws if the table breaks the promise.
  PhaseOracle(int n_qubits, std::vector<std::uint8_t> truth_table) : n_qubits_(n_qubits), table_(std::move(truth_table)) {
    detail::check_qubit_count(n_qubits_, Limits{}.max_pure_qubits, "PhaseOracle");
    if (table_.size() != detail::dim_of(n_qubits_)) throw ArgumentError("PhaseOracle: truth table length must be 2^n");
    std::size_t ones = 0;
    for (auto& b : table_) {
      if (b > 1) throw ArgumentError("PhaseOracle: truth table entries must be 0 or 1");
      ones += b;
    }
    if (ones == 0) {
      kind_ = OracleKind::Constant0;
    } else if (ones == table_.size()) {
      kind_ = OracleKind::Constant1;
    } else if (2 * ones == table_.size()) {
      kind_ = OracleKind::Balanced;
    } else {
      throw ArgumentError("PhaseOracle: function is neither constant nor balanced");
    }
  }

  static PhaseOracle constant(int n_qubits, std::uint8_t value) {
    detail::check_qubit_count(n_qubits, Limits{}.max_pure_qubits, "PhaseOracle");
    return PhaseOracle(n_qubits, std::vector<std::uint8_t>(detail::dim_of(n_qubits), value));
  }

  /// Uniformly random balanced table from a seeded shuffle.
  static PhaseOracle random_balanced(int n_qubits, Rng& rng) {
    detail::check_qubit_count(n_qubits, Limits{}.max_pure_qubits, "PhaseOracle");
    std::vector<std::uint8_t> t(detail::dim_of(n_qubits), 0);
    std::fill(t.begin() + static_cast<std::ptrdiff_t>(t.size() / 2), t.end(), 1);
    std::shuffle(t.begin(), t.end(), rng);
    return PhaseOracle(n_qubits, std::move(t));
  }

  int n_qubits() const { return n_qubits_; }
  OracleKind kind() const { return kind_; }
  const std::vector<std::uint8_t>& truth_table() const { return table_; }

  /// Diagonal entries (-1)^{f(x)}.
  Eigen::VectorXd signs() const {
    Eigen::VectorXd s(static_cast<Eigen::Index>(table_.size()));
    for (std::size_t x = 0; x < table_.size(); ++x) s(static_cast<Eigen::Index>(x)) = table_[x] ? -1.0 : 1.0;
    return s;
  }

  Unitary unitary() const { return Unitary::diagonal(n_qubits_, signs().cast<Complex>()); }

 private:
  int n_qubits_;
  std::vector<std::uint8_t> table_;
  OracleKind kind_ = OracleKind::Constant0;
};

/// S rho S for a diagonal sign matrix S.
inline QuantumState conjugate_by_signs(const QuantumState& rho, const Eigen::VectorXd& signs) {
  Matrix m = signs.asDiagonal() * rho.matrix() * signs.asDiagonal();
  return QuantumState::from_trusted(rho.n_qubits(), std::move(m));
}

/// (1-eps) I/2^n + eps |+><+|^{(x) n}
inline PseudopureState dj_input(int n_qubits, double epsilon) {
  return PseudopureState(epsilon, PureState::plus(n_qubits));
}

struct DjResult {
  QuantumState oracle_output;
  QuantumState constant_output;
  /// {(p, oracle_output), (1-p, constant_output)}
  Ensemble ensemble;
  double holevo = 0.0;
};

/// Runs the oracle on the pseudopure input and compares its output with the
/// output of the constant-0 function, prepared with prior probability
/// 1 - prior_balanced.
inline DjResult dj_run(const PhaseOracle& oracle, double epsilon, double prior_balanced) {
  if (!(prior_balanced >= 0.0 && prior_balanced <= 1.0)) throw ArgumentError("dj_run: prior must lie in [0, 1]");
  const QuantumState input = assemble(dj_input(oracle.n_qubits(), epsilon));
  QuantumState out_b = conjugate_by_signs(input, oracle.signs());
  QuantumState out_c = input;
  Ensemble ens{{prior_balanced, out_b}, {1.0 - prior_balanced, out_c}};
  const double chi = holevo_information(ens);
  return DjResult{std::move(out_b), std::move(out_c), std::move(ens), chi};
}

/// Information about constant-vs-balanced available from one classical query.
/// A single value f(x) says nothing about the others, so this is always 0.
inline double dj_classical_baseline(double prior_balanced) {
  if (!(prior_balanced >= 0.0 && prior_balanced <= 1.0))
    throw ArgumentError("dj_classical_baseline: prior must lie in [0, 1]");
  return 0.0;
}

// ---------------------------------------------------------------------------
// DQC1

/// One control qubit (I + alpha X)/2 and an n-qubit maximally mixed register;
/// `target` is applied to the register when the control is |1>.
struct Dqc1Instance {
  int n_register = 1;
  double alpha = 1.0;
  Unitary target = Unitary::identity(1);

  Dqc1Instance(int n, double control_purity, Unitary u) : n_register(n), alpha(control_purity), target(std::move(u)) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ArgumentError("Dqc1Instance: control purity must lie in [0, 1]");
    if (target.n_qubits() != n_register) throw ArgumentError("Dqc1Instance: unitary does not act on the register");
    detail::check_qubit_count(n_register + 1, Limits{}.max_density_qubits, "Dqc1Instance");
  }
};

inline QuantumState dqc1_input_state(const Dqc1Instance& inst) {
  Eigen::Matrix2cd control = 0.5 * (Eigen::Matrix2cd::Identity() + inst.alpha * pauli_x());
  const QuantumState c = QuantumState::from_trusted(1, Matrix(control));
  return tensor(c, QuantumState::maximally_mixed(inst.n_register));
}

/// |0><0| (x) I + |1><1| (x) U
inline Unitary dqc1_controlled_unitary(const Dqc1Instance& inst) {
  const auto d = static_cast<Eigen::Index>(inst.target.dim());
  Matrix cu = Matrix::Zero(2 * d, 2 * d);
  cu.topLeftCorner(d, d) = Matrix::Identity(d, d);
  cu.bottomRightCorner(d, d) = inst.target.matrix();
  return Unitary(inst.n_register + 1, std::move(cu));
}

/// 2^{-(n+1)} [ I + alpha |0><1| (x) U^dagger + alpha |1><0| (x) U ]
inline QuantumState dqc1_output_state(const Dqc1Instance& inst) {
  const auto d = static_cast<Eigen::Index>(inst.target.dim());
  const double norm = 1.0 / static_cast<double>(2 * d);
  Matrix m = Matrix::Identity(2 * d, 2 * d) * norm;
  m.topRightCorner(d, d) = inst.alpha * norm * inst.target.matrix().adjoint();
  m.bottomLeftCorner(d, d) = inst.alpha * norm * inst.target.matrix();
  return QuantumState::from_trusted(inst.n_register + 1, std::move(m));
}

/// tr(U)/2^n from the control qubit: (<X> + i<Y>)/alpha.
inline Complex dqc1_estimate_trace(const Dqc1Instance& inst) {
  if (inst.alpha == 0.0) throw PreconditionError("dqc1_estimate_trace: control purity 0 carries no signal");
  const QuantumState control = partial_trace(dqc1_output_state(inst), std::vector<int>{0});
  const Complex r01 = control.matrix()(0, 1);
  const double x = 2.0 * r01.real();
  const double y = -2.0 * r01.imag();
  return Complex(x, y) / inst.alpha;
}

/// S(output with a pure control || I/2^{n+1}). The output has n+1 qubits and
/// entropy n, so this is 1 bit for every U.
inline double dqc1_distinguishability(const Dqc1Instance& inst) {
  const Dqc1Instance pure(inst.n_register, 1.0, inst.target);
  return relative_entropy(dqc1_output_state(pure), QuantumState::maximally_mixed(inst.n_register + 1));
}

// ---------------------------------------------------------------------------
// Grover

inline constexpr int kGroverIterationBudget = 10000;
/// Largest register evolved as a full density matrix; beyond it the
/// pseudopure success probability is obtained by linearity.
inline constexpr int kGroverDensityQubits = 10;

struct GroverInstance {
  int n_qubits = 2;
  std::uint64_t target = 0;
  int iterations = 0;

  GroverInstance(int n, std::uint64_t marked, std::optional<int> iters = std::nullopt)
      : n_qubits(n), target(marked) {
    detail::check_qubit_count(n_qubits, Limits{}.max_pure_qubits, "GroverInstance");
    if (target >= detail::dim_of(n_qubits)) throw ArgumentError("GroverInstance: target out of range");
    iterations = iters ? *iters : default_iterations(n_qubits);
    if (iterations < 0) throw ArgumentError("GroverInstance: negative iteration count");
  }

  /// round(pi/4 sqrt(2^n))
  static int default_iterations(int n) {
    return static_cast<int>(std::lround(std::numbers::pi / 4.0 * std::sqrt(std::ldexp(1.0, n))));
  }
};

struct GroverRun {
  /// Success probability before any iteration (index 0) and after each one.
  std::vector<double> success;
  /// The same for the pure-state run.
  std::vector<double> pure_success;
  bool density_matrix = false;
};

namespace detail {
inline void check_grover_budget(const GroverInstance& inst) {
  if (inst.iterations > kGroverIterationBudget) throw BudgetError("grover: iteration count exceeds the budget of 10^4");
}
}  // namespace detail

/// Target amplitude after each iteration of the textbook pure-state search.
inline std::vector<Complex> grover_pure_amplitudes(const GroverInstance& inst, std::vector<double>* success = nullptr) {
  detail::check_grover_budget(inst);
  const std::size_t dim = detail::dim_of(inst.n_qubits);
  Vector v = Vector::Constant(static_cast<Eigen::Index>(dim), 1.0 / std::sqrt(static_cast<double>(dim)));
  const auto w = static_cast<Eigen::Index>(inst.target);
  std::vector<Complex> target_amp{v(w)};
  if (success) success->assign(1, std::norm(v(w)));
  for (int t = 0; t < inst.iterations; ++t) {
    v(w) = -v(w);
    const Complex mean = v.mean();
    v = (2.0 * mean - v.array()).matrix();
    target_amp.push_back(v(w));
    if (success) success->push_back(std::norm(v(w)));
  }
  return target_amp;
}

/// Density-matrix Grover on (1-eps) I/N + eps |s><s|, exploiting the
/// structure of the oracle (diagonal) and diffusion (rank-one update).
inline std::vector<double> grover_density_success(const GroverInstance& inst, double epsilon) {
  detail::check_grover_budget(inst);
  if (inst.n_qubits > kGroverDensityQubits) throw ResourceError("grover_density_success: register too large");
  const auto d = static_cast<Eigen::Index>(detail::dim_of(inst.n_qubits));
  const auto w = static_cast<Eigen::Index>(inst.target);
  const Vector s = Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
  Matrix rho = (1.0 - epsilon) / static_cast<double>(d) * Matrix::Identity(d, d) + epsilon * s * s.adjoint();
  std::vector<double> out{rho(w, w).real()};
  for (int t = 0; t < inst.iterations; ++t) {
    rho.row(w) *= -1.0;
    rho.col(w) *= -1.0;
    // (2|s><s| - I) rho (2|s><s| - I) = rho - 2 s u^dag - 2 u s^dag + 4 c s s^dag, u = rho s
    const Vector u = rho * s;
    const Complex c = s.dot(u);
    rho += -2.0 * s * u.adjoint() - 2.0 * u * s.adjoint() + 4.0 * c * s * s.adjoint();
    out.push_back(rho(w, w).real());
  }
  return out;
}

/// Success probabilities with a pseudopure input. Registers up to 10 qubits
/// are evolved as density matrices; larger ones use eps p_pure + (1-eps)/N.
inline GroverRun grover_run(const GroverInstance& inst, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ArgumentError("grover_run: epsilon must lie in [0, 1]");
  detail::check_grover_budget(inst);
  GroverRun run;
  grover_pure_amplitudes(inst, &run.pure_success);
  if (inst.n_qubits <= kGroverDensityQubits) {
    run.success = grover_density_success(inst, epsilon);
    run.density_matrix = true;
  } else {
    const double floor = (1.0 - epsilon) / std::ldexp(1.0, inst.n_qubits);
    for (double p : run.pure_success) run.success.push_back(epsilon * p + floor);
  }
  return run;
}

struct GroverAuditStep {
  int iteration = 0;
  double delta = 0.0;
  double target_amplitude = 0.0;  // |a|
  double rest_amplitude = 0.0;    // |b| sqrt(N-1)
  double min_ppt_eigenvalue = 0.0;
  bool entangled = false;
};

struct GroverAudit {
  std::vector<GroverAuditStep> steps;
  std::optional<int> first_entangled_iteration;
  int optimal_iteration = 0;
  bool entangled_before_optimal = false;
  /// 1/log2 N: pure fraction above which the pseudopure search still beats
  /// classical search.
  double efficiency_threshold = 0.0;
  bool meets_efficiency_threshold = false;
};

/// Entanglement along a pseudopure Grover run. At the query of iteration k
/// the pure part, with the oracle bit written to an ancilla, reads
/// a |w>|1> + b sqrt(N-1) |r>|0> where |r> is the uniform superposition of
/// non-targets. Projecting the search register onto span{|r>, |w>} keeps the
/// whole pure part and leaves the two-qubit state
/// (1-delta) I/4 + delta |phi><phi|, delta = eps/(eps + (1-eps) 2^{1-n}),
/// which is tested with the PPT criterion.
inline GroverAudit grover_entanglement_audit(const GroverInstance& inst, double epsilon) {
  if (inst.n_qubits > 10) throw PreconditionError("grover_entanglement_audit: requires n <= 10");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ArgumentError("grover_entanglement_audit: epsilon must lie in [0, 1]");
  const auto amps = grover_pure_amplitudes(inst);
  const double delta = projected_delta(inst.n_qubits, epsilon);
  const Bipartition cut = Bipartition::first_vs_rest(2);
  GroverAudit audit;
  audit.optimal_iteration = inst.iterations;
  audit.efficiency_threshold = 1.0 / inst.n_qubits;
  audit.meets_efficiency_threshold = epsilon >= audit.efficiency_threshold;
  for (int k = 1; k <= inst.iterations; ++k) {
    const double a = std::abs(amps[static_cast<std::size_t>(k - 1)]);
    const double rest = std::sqrt(std::max(0.0, 1.0 - a * a));
    Vector phi = Vector::Zero(4);
    phi(0) = rest;
    phi(3) = a;
    Matrix m = (1.0 - delta) / 4.0 * Matrix::Identity(4, 4) + delta * phi * phi.adjoint();
    const PptResult ppt = ppt_check(QuantumState::from_trusted(2, std::move(m)), cut);
    audit.steps.push_back({k, delta, a, rest, ppt.min_eigenvalue, !ppt.is_ppt});
    if (!ppt.is_ppt && !audit.first_entangled_iteration) audit.first_entangled_iteration = k;
  }
  audit.entangled_before_optimal =
      audit.first_entangled_iteration && *audit.first_entangled_iteration <= audit.optimal_iteration;
  return audit;
}

}  // namespace qcorr

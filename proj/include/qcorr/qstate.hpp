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

// qstate.hpp
// Dense pure states, density matrices and unitaries on small qubit registers.
//
// Ordering convention: qubit 0 is the most significant bit of the
// computational-basis index, matrices are indexed (row, col) = (ket, bra).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qcorr/errors.hpp"

namespace qcorr {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Tolerance used for the structural invariants of states and unitaries.
inline constexpr double kInvariantTol = 1e-10;
/// Tolerance for projector completeness and outcome probabilities.
inline constexpr double kProjectorTol = 1e-8;
/// Outcomes below this probability are reported as null outcomes.
inline constexpr double kNullOutcome = 1e-14;

/// Hard caps on register sizes. Dense 2^n x 2^n storage grows quickly, so
/// every constructor refuses anything larger than the configured cap.
struct Limits {
  int max_density_qubits = 12;
  int max_pure_qubits = 24;
};

namespace detail {

inline std::size_t dim_of(int n_qubits) { return std::size_t{1} << n_qubits; }

inline void check_qubit_count(int n_qubits, int cap, const char* what) {
  if (n_qubits < 1) throw ArgumentError(std::string(what) + ": qubit count must be >= 1");
  if (n_qubits > cap) {
    std::ostringstream os;
    os << what << ": " << n_qubits << " qubits exceeds the configured cap of " << cap;
    throw ResourceError(os.str());
  }
}

/// Max |A_ij - conj(A_ji)|.
inline double hermiticity_defect(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Full-register index bits for each local index of an ordered qubit list.
inline std::vector<std::size_t> scatter_table(int n_qubits, std::span<const int> qubits) {
  const std::size_t m = qubits.size();
  std::vector<std::size_t> table(std::size_t{1} << m, 0);
  for (std::size_t local = 0; local < table.size(); ++local) {
    std::size_t full = 0;
    for (std::size_t l = 0; l < m; ++l) {
      if ((local >> (m - 1 - l)) & 1U) full |= std::size_t{1} << (n_qubits - 1 - qubits[l]);
    }
    table[local] = full;
  }
  return table;
}

inline std::size_t mask_of(int n_qubits, std::span<const int> qubits) {
  std::size_t mask = 0;
  for (int q : qubits) mask |= std::size_t{1} << (n_qubits - 1 - q);
  return mask;
}

}  // namespace detail

/// Normalized state vector on n qubits.
class PureState {
 public:
  PureState(int n_qubits, Vector amplitudes, const Limits& limits = {})
      : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    detail::check_qubit_count(n_qubits_, limits.max_pure_qubits, "PureState");
    if (static_cast<std::size_t>(amplitudes_.size()) != detail::dim_of(n_qubits_))
      throw ArgumentError("PureState: amplitude vector length must be 2^n");
    const double norm2 = amplitudes_.squaredNorm();
    if (std::abs(norm2 - 1.0) > kInvariantTol) {
      std::ostringstream os;
      os << "PureState: squared norm " << norm2 << " differs from 1";
      throw ValidationError(os.str());
    }
  }

  /// Rescales `amplitudes` to unit norm before construction.
  static PureState normalized(int n_qubits, Vector amplitudes, const Limits& limits = {}) {
    const double norm = amplitudes.norm();
    if (norm == 0.0) throw ArgumentError("PureState: zero vector cannot be normalized");
    amplitudes /= norm;
    return PureState(n_qubits, std::move(amplitudes), limits);
  }

  static PureState basis(int n_qubits, std::uint64_t index, const Limits& limits = {}) {
    detail::check_qubit_count(n_qubits, limits.max_pure_qubits, "PureState");
    if (index >= detail::dim_of(n_qubits)) throw ArgumentError("PureState: basis index out of range");
    Vector v = Vector::Zero(static_cast<Eigen::Index>(detail::dim_of(n_qubits)));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return PureState(n_qubits, std::move(v), limits);
  }

  /// |+>^{(x) n}
  static PureState plus(int n_qubits, const Limits& limits = {}) {
    detail::check_qubit_count(n_qubits, limits.max_pure_qubits, "PureState");
    const auto d = static_cast<Eigen::Index>(detail::dim_of(n_qubits));
    return PureState(n_qubits, Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d))), limits);
  }

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex amplitude(std::size_t index) const { return amplitudes_(static_cast<Eigen::Index>(index)); }

  /// <this|other>
  Complex inner(const PureState& other) const {
    if (other.n_qubits_ != n_qubits_) throw ArgumentError("PureState::inner: qubit count mismatch");
    return amplitudes_.dot(other.amplitudes_);
  }

  Matrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  int n_qubits_;
  Vector amplitudes_;
};

/// Density operator on n qubits: Hermitian, unit trace, positive semidefinite.
class QuantumState {
 public:
  /// Validates every invariant, including positivity via an eigensolve.
  QuantumState(int n_qubits, Matrix matrix, const Limits& limits = {})
      : n_qubits_(n_qubits), matrix_(std::move(matrix)) {
    check_shape(limits);
    check_hermitian_trace();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("QuantumState: eigensolver failed during validation");
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -kInvariantTol) {
      std::ostringstream os;
      os << "QuantumState: negative eigenvalue " << min_eig;
      throw ValidationError(os.str());
    }
  }

  /// For matrices produced by positivity-preserving maps of valid states
  /// (conjugation, partial trace, tensor, convex mixing). Shape, Hermiticity
  /// and trace are still checked; positivity is assumed.
  static QuantumState from_trusted(int n_qubits, Matrix matrix, const Limits& limits = {}) {
    return QuantumState(Trusted{}, n_qubits, std::move(matrix), limits);
  }

  static QuantumState from_pure(const PureState& psi, const Limits& limits = {}) {
    return from_trusted(psi.n_qubits(), psi.projector(), limits);
  }

  static QuantumState maximally_mixed(int n_qubits, const Limits& limits = {}) {
    detail::check_qubit_count(n_qubits, limits.max_density_qubits, "QuantumState");
    const auto d = static_cast<Eigen::Index>(detail::dim_of(n_qubits));
    return from_trusted(n_qubits, Matrix::Identity(d, d) / static_cast<double>(d), limits);
  }

  /// Convex combination sum_i w_i rho_i; weights must be a probability vector.
  static QuantumState mixture(std::span<const std::pair<double, QuantumState>> terms) {
    if (terms.empty()) throw ArgumentError("QuantumState::mixture: no terms");
    const int n = terms.front().second.n_qubits();
    const auto d = static_cast<Eigen::Index>(detail::dim_of(n));
    Matrix acc = Matrix::Zero(d, d);
    double total = 0.0;
    for (const auto& [w, rho] : terms) {
      if (rho.n_qubits() != n) throw ArgumentError("QuantumState::mixture: qubit count mismatch");
      if (w < -kInvariantTol) throw ArgumentError("QuantumState::mixture: negative weight");
      acc += w * rho.matrix();
      total += w;
    }
    if (std::abs(total - 1.0) > kProjectorTol) throw ArgumentError("QuantumState::mixture: weights do not sum to 1");
    return from_trusted(n, std::move(acc));
  }

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }

  double purity() const { return (matrix_ * matrix_).trace().real(); }

 private:
  struct Trusted {};
  QuantumState(Trusted, int n_qubits, Matrix matrix, const Limits& limits)
      : n_qubits_(n_qubits), matrix_(std::move(matrix)) {
    check_shape(limits);
    check_hermitian_trace();
  }

  void check_shape(const Limits& limits) const {
    detail::check_qubit_count(n_qubits_, limits.max_density_qubits, "QuantumState");
    const auto d = static_cast<Eigen::Index>(detail::dim_of(n_qubits_));
    if (matrix_.rows() != d || matrix_.cols() != d) throw ArgumentError("QuantumState: matrix must be 2^n x 2^n");
  }

  void check_hermitian_trace() const {
    const double herm = detail::hermiticity_defect(matrix_);
    if (herm > kInvariantTol) {
      std::ostringstream os;
      os << "QuantumState: not Hermitian (defect " << herm << ")";
      throw ValidationError(os.str());
    }
    const Complex tr = matrix_.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > kInvariantTol) {
      std::ostringstream os;
      os << "QuantumState: trace " << tr.real() << " differs from 1";
      throw ValidationError(os.str());
    }
  }

  int n_qubits_;
  Matrix matrix_;
};

/// Unitary operator on n qubits.
class Unitary {
 public:
  Unitary(int n_qubits, Matrix matrix, const Limits& limits = {})
      : n_qubits_(n_qubits), matrix_(std::move(matrix)) {
    detail::check_qubit_count(n_qubits_, limits.max_density_qubits, "Unitary");
    const auto d = static_cast<Eigen::Index>(detail::dim_of(n_qubits_));
    if (matrix_.rows() != d || matrix_.cols() != d) throw ArgumentError("Unitary: matrix must be 2^n x 2^n");
    const double defect = (matrix_ * matrix_.adjoint() - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (defect > kInvariantTol) {
      std::ostringstream os;
      os << "Unitary: U U^dagger deviates from identity by " << defect;
      throw ValidationError(os.str());
    }
  }

  static Unitary identity(int n_qubits) {
    const auto d = static_cast<Eigen::Index>(detail::dim_of(n_qubits));
    return Unitary(n_qubits, Matrix::Identity(d, d));
  }

  /// Diagonal unitary with the given unit-modulus entries.
  static Unitary diagonal(int n_qubits, const Vector& phases) {
    return Unitary(n_qubits, phases.asDiagonal().toDenseMatrix());
  }

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }

  Unitary adjoint() const { return Unitary(n_qubits_, matrix_.adjoint()); }

  /// this * other (other acts first).
  Unitary compose(const Unitary& other) const {
    if (other.n_qubits_ != n_qubits_) throw ArgumentError("Unitary::compose: qubit count mismatch");
    return Unitary(n_qubits_, matrix_ * other.matrix_);
  }

 private:
  int n_qubits_;
  Matrix matrix_;
};

enum class Side { A, B };

/// A split of {0..n-1} into two non-empty, disjoint, sorted index sets.
class Bipartition {
 public:
  Bipartition(int n_qubits, std::vector<int> side_a) : n_qubits_(n_qubits), side_a_(std::move(side_a)) {
    if (n_qubits_ < 2) throw ArgumentError("Bipartition: need at least 2 qubits");
    std::sort(side_a_.begin(), side_a_.end());
    if (std::adjacent_find(side_a_.begin(), side_a_.end()) != side_a_.end())
      throw ArgumentError("Bipartition: duplicate qubit index");
    for (int q : side_a_) {
      if (q < 0 || q >= n_qubits_) throw ArgumentError("Bipartition: qubit index out of range");
    }
    if (side_a_.empty() || static_cast<int>(side_a_.size()) == n_qubits_)
      throw ArgumentError("Bipartition: both sides must be non-empty");
    for (int q = 0; q < n_qubits_; ++q) {
      if (!std::binary_search(side_a_.begin(), side_a_.end(), q)) side_b_.push_back(q);
    }
  }

  /// {0} | {1..n-1}
  static Bipartition first_vs_rest(int n_qubits) { return Bipartition(n_qubits, {0}); }

  /// Parses "0|rest", "0,2|rest" or "0,2|1,3".
  static Bipartition parse(const std::string& text, int n_qubits) {
    const auto bar = text.find('|');
    if (bar == std::string::npos) throw ArgumentError("Bipartition: cut must look like '0|rest' or '0,1|2,3'");
    auto parse_list = [](const std::string& s) {
      std::vector<int> out;
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        int v = 0;
        try {
          v = std::stoi(item, &pos);
        } catch (const std::exception&) {
          throw ArgumentError("Bipartition: bad qubit index '" + item + "'");
        }
        if (pos != item.size()) throw ArgumentError("Bipartition: bad qubit index '" + item + "'");
        out.push_back(v);
      }
      return out;
    };
    Bipartition cut(n_qubits, parse_list(text.substr(0, bar)));
    const std::string rhs = text.substr(bar + 1);
    if (rhs != "rest") {
      auto b = parse_list(rhs);
      std::sort(b.begin(), b.end());
      if (b != cut.side_b_) throw ArgumentError("Bipartition: right-hand side is not the complement of the left");
    }
    return cut;
  }

  int n_qubits() const { return n_qubits_; }
  const std::vector<int>& side_a() const { return side_a_; }
  const std::vector<int>& side_b() const { return side_b_; }
  const std::vector<int>& side(Side s) const { return s == Side::A ? side_a_ : side_b_; }
  const std::vector<int>& other(Side s) const { return s == Side::A ? side_b_ : side_a_; }

  std::string to_string() const {
    std::ostringstream os;
    auto put = [&os](const std::vector<int>& v) {
      for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    };
    put(side_a_);
    os << '|';
    put(side_b_);
    return os.str();
  }

  /// All bipartitions of n qubits up to swapping sides (side A holds qubit 0).
  static std::vector<Bipartition> all(int n_qubits) {
    std::vector<Bipartition> cuts;
    const std::size_t full = detail::dim_of(n_qubits) - 1;
    for (std::size_t mask = 1; mask < full; ++mask) {
      if (!((mask >> (n_qubits - 1)) & 1U)) continue;
      std::vector<int> a;
      for (int q = 0; q < n_qubits; ++q) {
        if ((mask >> (n_qubits - 1 - q)) & 1U) a.push_back(q);
      }
      cuts.emplace_back(n_qubits, std::move(a));
    }
    return cuts;
  }

 private:
  int n_qubits_;
  std::vector<int> side_a_;
  std::vector<int> side_b_;
};

// ---------------------------------------------------------------------------
// Operations

/// Kronecker product; the qubits of `a` occupy the leading indices.
inline QuantumState tensor(const QuantumState& a, const QuantumState& b, const Limits& limits = {}) {
  const int n = a.n_qubits() + b.n_qubits();
  detail::check_qubit_count(n, limits.max_density_qubits, "tensor");
  const auto da = a.matrix().rows();
  const auto db = b.matrix().rows();
  Matrix out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
  }
  return QuantumState::from_trusted(n, std::move(out), limits);
}

inline PureState tensor(const PureState& a, const PureState& b, const Limits& limits = {}) {
  const int n = a.n_qubits() + b.n_qubits();
  detail::check_qubit_count(n, limits.max_pure_qubits, "tensor");
  const auto db = static_cast<Eigen::Index>(b.dim());
  Vector out(static_cast<Eigen::Index>(a.dim()) * db);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(a.dim()); ++i)
    out.segment(i * db, db) = a.amplitudes()(i) * b.amplitudes();
  return PureState::normalized(n, std::move(out), limits);
}

/// Reduced state on `keep` (any order-insensitive set of qubit indices; the
/// result orders them ascending).
inline QuantumState partial_trace(const QuantumState& rho, std::vector<int> keep) {
  const int n = rho.n_qubits();
  std::sort(keep.begin(), keep.end());
  if (keep.empty()) throw ArgumentError("partial_trace: keep set is empty");
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) throw ArgumentError("partial_trace: duplicate index");
  for (int q : keep) {
    if (q < 0 || q >= n) throw ArgumentError("partial_trace: qubit index out of range");
  }
  if (static_cast<int>(keep.size()) == n) return rho;
  std::vector<int> traced;
  for (int q = 0; q < n; ++q) {
    if (!std::binary_search(keep.begin(), keep.end(), q)) traced.push_back(q);
  }
  const auto kept = detail::scatter_table(n, keep);
  const auto gone = detail::scatter_table(n, traced);
  const auto dk = static_cast<Eigen::Index>(kept.size());
  Matrix out = Matrix::Zero(dk, dk);
  const Matrix& m = rho.matrix();
  for (Eigen::Index i = 0; i < dk; ++i) {
    for (Eigen::Index j = 0; j < dk; ++j) {
      Complex acc = 0.0;
      for (std::size_t t : gone) acc += m(static_cast<Eigen::Index>(kept[i] | t), static_cast<Eigen::Index>(kept[j] | t));
      out(i, j) = acc;
    }
  }
  return QuantumState::from_trusted(static_cast<int>(keep.size()), std::move(out));
}

inline QuantumState partial_trace(const QuantumState& rho, const Bipartition& cut, Side keep) {
  if (cut.n_qubits() != rho.n_qubits()) throw ArgumentError("partial_trace: cut does not match state");
  return partial_trace(rho, cut.side(keep));
}

/// U rho U^dagger
inline QuantumState evolve(const QuantumState& rho, const Unitary& u) {
  if (u.n_qubits() != rho.n_qubits()) throw ArgumentError("evolve: dimension mismatch");
  Matrix out = u.matrix() * rho.matrix() * u.matrix().adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return QuantumState::from_trusted(rho.n_qubits(), std::move(out));
}

inline PureState evolve(const PureState& psi, const Unitary& u) {
  if (u.n_qubits() != psi.n_qubits()) throw ArgumentError("evolve: dimension mismatch");
  return PureState::normalized(psi.n_qubits(), u.matrix() * psi.amplitudes());
}

/// Result of one projector in a projective measurement. `state` is empty for
/// outcomes whose probability is below kNullOutcome.
struct MeasurementOutcome {
  double probability = 0.0;
  std::optional<QuantumState> state;
};

inline std::vector<MeasurementOutcome> measure_projective(const QuantumState& rho, std::span<const Matrix> projectors) {
  const auto d = static_cast<Eigen::Index>(rho.dim());
  if (projectors.empty()) throw ArgumentError("measure_projective: empty projector set");
  Matrix sum = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < projectors.size(); ++i) {
    const Matrix& p = projectors[i];
    if (p.rows() != d || p.cols() != d) throw ArgumentError("measure_projective: projector dimension mismatch");
    if (detail::hermiticity_defect(p) > kProjectorTol) throw ArgumentError("measure_projective: projector not Hermitian");
    if ((p * p - p).cwiseAbs().maxCoeff() > kProjectorTol) throw ArgumentError("measure_projective: projector not idempotent");
    for (std::size_t j = 0; j < i; ++j) {
      if ((p * projectors[j]).cwiseAbs().maxCoeff() > kProjectorTol)
        throw ArgumentError("measure_projective: projectors not pairwise orthogonal");
    }
    sum += p;
  }
  if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > kProjectorTol)
    throw ArgumentError("measure_projective: projectors do not sum to identity");

  std::vector<MeasurementOutcome> out;
  out.reserve(projectors.size());
  for (const Matrix& p : projectors) {
    Matrix post = p * rho.matrix() * p;
    const double prob = std::max(0.0, post.trace().real());
    MeasurementOutcome o;
    o.probability = prob;
    if (prob >= kNullOutcome) {
      post /= prob;
      post = 0.5 * (post + post.adjoint()).eval();
      o.state = QuantumState::from_trusted(rho.n_qubits(), std::move(post));
    }
    out.push_back(std::move(o));
  }
  return out;
}

/// Embeds a single-qubit operator acting on `qubit` into an n-qubit register.
inline Matrix embed_single(const Eigen::Matrix2cd& op, int qubit, int n_qubits) {
  if (qubit < 0 || qubit >= n_qubits) throw ArgumentError("embed_single: qubit index out of range");
  const auto d = static_cast<Eigen::Index>(detail::dim_of(n_qubits));
  const int shift = n_qubits - 1 - qubit;
  const std::size_t bit = std::size_t{1} << shift;
  Matrix out = Matrix::Zero(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const auto rb = static_cast<int>((static_cast<std::size_t>(r) >> shift) & 1U);
    for (int cb = 0; cb < 2; ++cb) {
      const auto c = static_cast<Eigen::Index>(cb ? (static_cast<std::size_t>(r) | bit) : (static_cast<std::size_t>(r) & ~bit));
      out(r, c) = op(rb, cb);
    }
  }
  return out;
}

/// Spectrum in descending order, tiny negatives clamped to zero and
/// renormalized to sum 1.
inline std::vector<double> eigenvalues(const QuantumState& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "eigenvalues: eigensolver did not converge (dim " << rho.dim()
       << ", max |entry| " << rho.matrix().cwiseAbs().maxCoeff() << ", hermiticity defect "
       << detail::hermiticity_defect(rho.matrix()) << ")";
    throw NumericalError(os.str());
  }
  const Eigen::VectorXd& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::reverse(out.begin(), out.end());
  double total = 0.0;
  for (double& x : out) {
    if (x < -kInvariantTol) {
      std::ostringstream os;
      os << "eigenvalues: eigenvalue " << x << " is below the positivity floor";
      throw NumericalError(os.str());
    }
    x = std::max(0.0, x);
    total += x;
  }
  for (double& x : out) x /= total;
  return out;
}

/// Partial transpose over the given qubits.
inline Matrix partial_transpose(const Matrix& m, int n_qubits, std::span<const int> qubits) {
  const std::size_t mask = detail::mask_of(n_qubits, qubits);
  const auto d = m.rows();
  Matrix out(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      const auto ur = static_cast<std::size_t>(r);
      const auto uc = static_cast<std::size_t>(c);
      const auto r2 = static_cast<Eigen::Index>((ur & ~mask) | (uc & mask));
      const auto c2 = static_cast<Eigen::Index>((uc & ~mask) | (ur & mask));
      out(r2, c2) = m(r, c);
    }
  }
  return out;
}

struct PptResult {
  bool is_ppt = true;
  double min_eigenvalue = 0.0;
};

/// Positivity of the partial transpose over side B of `cut`. For two qubits
/// a negative result is equivalent to entanglement.
inline PptResult ppt_check(const QuantumState& rho, const Bipartition& cut) {
  if (cut.n_qubits() != rho.n_qubits()) throw ArgumentError("ppt_check: cut does not match state");
  const Matrix pt = partial_transpose(rho.matrix(), rho.n_qubits(), cut.side_b());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(pt, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("ppt_check: eigensolver did not converge");
  const double min_eig = solver.eigenvalues().minCoeff();
  return {min_eig >= -kInvariantTol, min_eig};
}

// ---------------------------------------------------------------------------
// Single-qubit helpers

inline Eigen::Matrix2cd pauli_x() { return (Eigen::Matrix2cd() << 0, 1, 1, 0).finished(); }
inline Eigen::Matrix2cd pauli_y() {
  return (Eigen::Matrix2cd() << 0, Complex(0, -1), Complex(0, 1), 0).finished();
}
inline Eigen::Matrix2cd pauli_z() { return (Eigen::Matrix2cd() << 1, 0, 0, -1).finished(); }
inline Eigen::Matrix2cd hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  return (Eigen::Matrix2cd() << s, s, s, -s).finished();
}

/// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>
inline Eigen::Vector2cd bloch_ket(double theta, double phi) {
  return Eigen::Vector2cd(std::cos(theta / 2), std::polar(std::sin(theta / 2), phi));
}

/// Tensor power of a single-qubit operator.
inline Matrix kron_power(const Eigen::Matrix2cd& op, int n) {
  Matrix out = Matrix::Identity(1, 1);
  for (int k = 0; k < n; ++k) {
    Matrix next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      for (Eigen::Index j = 0; j < out.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = out(i, j) * op;
    out = std::move(next);
  }
  return out;
}

}  // namespace qcorr

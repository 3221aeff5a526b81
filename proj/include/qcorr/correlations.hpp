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

// correlations.hpp
// Bipartite correlation and distinguishability measures, all in bits:
// mutual information, classical correlations (optimized over projective
// measurements of one qubit), discord, relative entropy, relative entropy of
// entanglement (numerical, two qubits) and Holevo information.
//
// Discord follows the convention I = E + C + D: it is what remains of the
// mutual information after removing classical correlations and entanglement,
// so it vanishes on pure states.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qcorr/entropy.hpp"
#include "qcorr/nelder_mead.hpp"
#include "qcorr/parallel.hpp"
#include "qcorr/pseudopure.hpp"
#include "qcorr/qstate.hpp"
#include "qcorr/random.hpp"

namespace qcorr {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Mutual information I = S(A) + S(B) - S(AB).
inline double mutual_information(const QuantumState& rho, const Bipartition& cut) {
  return von_neumann_entropy(partial_trace(rho, cut, Side::A)) + von_neumann_entropy(partial_trace(rho, cut, Side::B)) -
         von_neumann_entropy(rho);
}

// ---------------------------------------------------------------------------
// Classical correlations

/// Rank-1 projective measurement of a qubit along the Bloch direction
/// (sin t cos p, sin t sin p, cos t).
struct BlochMeasurement {
  double theta = 0.0;
  double phi = 0.0;

  /// Folds arbitrary angles into theta in [0, pi], phi in [0, 2 pi).
  static BlochMeasurement canonical(double theta, double phi) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    theta = std::fmod(theta, two_pi);
    if (theta < 0) theta += two_pi;
    if (theta > std::numbers::pi) {
      theta = two_pi - theta;
      phi += std::numbers::pi;
    }
    phi = std::fmod(phi, two_pi);
    if (phi < 0) phi += two_pi;
    if (phi >= two_pi) phi = 0.0;
    return {theta, phi};
  }

  /// Outcome kets: index 0 along +n, index 1 along -n.
  std::array<Eigen::Vector2cd, 2> kets() const {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    const Complex e = std::polar(1.0, phi);
    return {Eigen::Vector2cd(c, e * s), Eigen::Vector2cd(s, -e * c)};
  }

  /// (I +- n.sigma)/2
  std::array<Eigen::Matrix2cd, 2> projectors() const {
    const auto k = kets();
    return {k[0] * k[0].adjoint(), k[1] * k[1].adjoint()};
  }
};

struct ClassicalOptions {
  int grid = 64;
  int refine_seeds = 3;
  NelderMeadOptions simplex{4000, 1e-7};
};

struct ClassicalCorrelationResult {
  double value = 0.0;
  BlochMeasurement measurement;
  std::size_t evals = 0;
  bool converged = false;
};

namespace detail {

/// Blocks R_ab = <a|_q rho |b>_q on the unmeasured side, so that measuring
/// qubit q with ket m leaves the unnormalized state sum_ab m_b conj(m_a) R_ab.
class ConditionalStates {
 public:
  ConditionalStates(const QuantumState& rho, int measured_qubit, const std::vector<int>& other) {
    const int n = rho.n_qubits();
    const std::array<int, 1> q{measured_qubit};
    const auto sq = scatter_table(n, q);
    const auto so = scatter_table(n, other);
    const auto d = static_cast<Eigen::Index>(so.size());
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        Matrix r(d, d);
        for (Eigen::Index i = 0; i < d; ++i)
          for (Eigen::Index j = 0; j < d; ++j)
            r(i, j) = rho.matrix()(static_cast<Eigen::Index>(sq[a] | so[i]), static_cast<Eigen::Index>(sq[b] | so[j]));
        blocks_[a][b] = std::move(r);
      }
    }
    n_other_ = static_cast<int>(other.size());
    const Matrix reduced = blocks_[0][0] + blocks_[1][1];
    unmeasured_entropy_ = von_neumann_entropy(QuantumState::from_trusted(n_other_, 0.5 * (reduced + reduced.adjoint())));
  }

  double unmeasured_entropy() const { return unmeasured_entropy_; }

  /// Average post-measurement entropy sum_i p_i S(rho_i) on the unmeasured side.
  double average_conditional_entropy(const BlochMeasurement& m) const {
    double acc = 0.0;
    for (const auto& ket : m.kets()) {
      Matrix cond = Matrix::Zero(blocks_[0][0].rows(), blocks_[0][0].cols());
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) cond += (ket(b) * std::conj(ket(a))) * blocks_[a][b];
      const double p = cond.trace().real();
      if (p < kNullOutcome) continue;
      cond /= p;
      Eigen::SelfAdjointEigenSolver<Matrix> solver(cond, Eigen::EigenvaluesOnly);
      if (solver.info() != Eigen::Success) throw NumericalError("classical_correlations: eigensolver failed");
      const Eigen::VectorXd& ev = solver.eigenvalues();
      double s = 0.0;
      for (Eigen::Index i = 0; i < ev.size(); ++i) s -= xlog2x(std::max(0.0, ev(i)));
      acc += p * s;
    }
    return acc;
  }

 private:
  std::array<std::array<Matrix, 2>, 2> blocks_;
  int n_other_ = 0;
  double unmeasured_entropy_ = 0.0;
};

}  // namespace detail

/// C = max over measurements on `measured_side` of S(other) - sum_i p_i S(other | i).
/// The measured side must be a single qubit.
inline ClassicalCorrelationResult classical_correlations(const QuantumState& rho, const Bipartition& cut,
                                                         Side measured_side, const ClassicalOptions& opt = {}) {
  if (cut.n_qubits() != rho.n_qubits()) throw ArgumentError("classical_correlations: cut does not match state");
  const auto& measured = cut.side(measured_side);
  if (measured.size() != 1)
    throw UnsupportedError("classical_correlations: only single-qubit measured sides are supported");
  if (opt.grid < 2 || opt.refine_seeds < 1) throw ArgumentError("classical_correlations: bad optimizer options");

  const detail::ConditionalStates cond(rho, measured.front(), cut.other(measured_side));
  ClassicalCorrelationResult res;
  auto objective = [&](double theta, double phi) {
    ++res.evals;
    return cond.average_conditional_entropy({theta, phi});
  };

  struct GridPoint {
    double value, theta, phi;
  };
  std::vector<GridPoint> grid;
  grid.reserve(static_cast<std::size_t>(opt.grid) * static_cast<std::size_t>(opt.grid));
  const double dtheta = std::numbers::pi / (opt.grid - 1);
  const double dphi = 2.0 * std::numbers::pi / opt.grid;
  for (int i = 0; i < opt.grid; ++i) {
    for (int j = 0; j < opt.grid; ++j) {
      const double t = i * dtheta;
      const double p = j * dphi;
      grid.push_back({objective(t, p), t, p});
    }
  }
  const auto n_seeds = std::min<std::size_t>(static_cast<std::size_t>(opt.refine_seeds), grid.size());
  std::partial_sort(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(n_seeds), grid.end(),
                    [](const GridPoint& a, const GridPoint& b) { return a.value < b.value; });

  double best = grid.front().value;
  BlochMeasurement best_m{grid.front().theta, grid.front().phi};
  res.converged = true;
  const Eigen::Vector2d step(dtheta, dphi);
  for (std::size_t s = 0; s < n_seeds; ++s) {
    const Eigen::Vector2d x0(grid[s].theta, grid[s].phi);
    const NelderMeadResult nm =
        nelder_mead([&](const Eigen::VectorXd& x) { return objective(x(0), x(1)); }, x0, step, opt.simplex);
    res.converged = res.converged && nm.converged;
    if (nm.f < best) {
      best = nm.f;
      best_m = {nm.x(0), nm.x(1)};
    }
  }
  res.value = std::max(0.0, cond.unmeasured_entropy() - best);
  res.measurement = BlochMeasurement::canonical(best_m.theta, best_m.phi);
  return res;
}

// ---------------------------------------------------------------------------
// Relative entropy

/// Weight of rho outside the support of sigma above which S(rho||sigma) is infinite.
inline constexpr double kSupportTol = 1e-10;

/// S(rho||sigma) = tr rho log2 rho - tr rho log2 sigma; +infinity when the
/// support of rho is not contained in that of sigma.
inline double relative_entropy(const QuantumState& rho, const QuantumState& sigma) {
  if (rho.n_qubits() != sigma.n_qubits()) throw ArgumentError("relative_entropy: dimension mismatch");
  const double neg_entropy = -von_neumann_entropy(rho);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sigma.matrix());
  if (solver.info() != Eigen::Success) throw NumericalError("relative_entropy: eigensolver failed");
  const Matrix& vecs = solver.eigenvectors();
  const Eigen::VectorXd& vals = solver.eigenvalues();
  const Matrix rv = rho.matrix() * vecs;
  double cross = 0.0;
  for (Eigen::Index j = 0; j < vals.size(); ++j) {
    const double w = vecs.col(j).dot(rv.col(j)).real();
    if (vals(j) < kEntropyFloor) {
      if (w > kSupportTol) return kInfinity;
      continue;
    }
    cross += w * std::log2(vals(j));
  }
  return neg_entropy - cross;
}

/// 2^{-S(rho||sigma)}: probability of mistaking sigma for rho.
inline double confusion_probability(const QuantumState& rho, const QuantumState& sigma) {
  const double s = relative_entropy(rho, sigma);
  if (std::isinf(s)) return 0.0;
  return std::clamp(std::exp2(-s), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Holevo information

using Ensemble = std::vector<std::pair<double, QuantumState>>;

/// chi = S(sum_i p_i rho_i) - sum_i p_i S(rho_i)
inline double holevo_information(std::span<const std::pair<double, QuantumState>> ensemble) {
  const QuantumState mix = QuantumState::mixture(ensemble);
  double avg = 0.0;
  for (const auto& [p, rho] : ensemble) avg += p * von_neumann_entropy(rho);
  return von_neumann_entropy(mix) - avg;
}

// ---------------------------------------------------------------------------
// Relative entropy of entanglement

/// sum_k w_k |a_k><a_k| (x) |b_k><b_k| on two qubits.
struct SeparableAnsatz {
  std::vector<double> weights;
  std::vector<PureState> local_a;
  std::vector<PureState> local_b;

  std::size_t k_terms() const { return weights.size(); }
};

inline QuantumState assemble(const SeparableAnsatz& ansatz) {
  const std::size_t k = ansatz.weights.size();
  if (k == 0 || ansatz.local_a.size() != k || ansatz.local_b.size() != k)
    throw ArgumentError("SeparableAnsatz: inconsistent term counts");
  double total = 0.0;
  Matrix sigma = Matrix::Zero(4, 4);
  for (std::size_t i = 0; i < k; ++i) {
    if (ansatz.weights[i] < -kInvariantTol) throw ValidationError("SeparableAnsatz: negative weight");
    if (ansatz.local_a[i].n_qubits() != 1 || ansatz.local_b[i].n_qubits() != 1)
      throw ArgumentError("SeparableAnsatz: local states must be single-qubit");
    const Vector v = tensor(ansatz.local_a[i], ansatz.local_b[i]).amplitudes();
    sigma += ansatz.weights[i] * v * v.adjoint();
    total += ansatz.weights[i];
  }
  if (std::abs(total - 1.0) > kInvariantTol) throw ValidationError("SeparableAnsatz: weights do not sum to 1");
  return QuantumState::from_trusted(2, std::move(sigma));
}

struct ReeOptions {
  int terms = 16;
  int restarts = 20;
  std::uint64_t seed = 0x5eedULL;
  NelderMeadOptions simplex{40000, 1e-8, 1e-12, true, 8};
  unsigned workers = 1;
};

struct ReeResult {
  double value = 0.0;
  SeparableAnsatz ansatz;
  std::vector<double> restart_values;
  std::size_t evals = 0;
  bool converged = false;
};

namespace detail {

/// Parameter layout: K softmax logits, then (theta_a, phi_a, theta_b, phi_b) per term.
class ReeObjective {
 public:
  ReeObjective(const QuantumState& rho, int terms) : terms_(terms), rho_(rho.matrix()) {
    neg_entropy_ = -von_neumann_entropy(rho);
  }

  int dimension() const { return terms_ * 5; }

  std::vector<double> weights(const Eigen::VectorXd& x) const {
    std::vector<double> w(static_cast<std::size_t>(terms_));
    const double top = x.head(terms_).maxCoeff();
    double z = 0.0;
    for (int k = 0; k < terms_; ++k) z += w[static_cast<std::size_t>(k)] = std::exp(x(k) - top);
    for (double& v : w) v /= z;
    return w;
  }

  Eigen::Vector2cd local(const Eigen::VectorXd& x, int term, int side) const {
    const Eigen::Index base = terms_ + 4 * term + 2 * side;
    return bloch_ket(x(base), x(base + 1));
  }

  double operator()(const Eigen::VectorXd& x) const {
    const auto w = weights(x);
    Eigen::Matrix4cd sigma = Eigen::Matrix4cd::Zero();
    for (int k = 0; k < terms_; ++k) {
      const Eigen::Vector2cd a = local(x, k, 0);
      const Eigen::Vector2cd b = local(x, k, 1);
      Eigen::Vector4cd v;
      v << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
      sigma.noalias() += w[static_cast<std::size_t>(k)] * (v * v.adjoint());
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(sigma);
    const auto& vecs = solver.eigenvectors();
    const auto& vals = solver.eigenvalues();
    double cross = 0.0;
    for (int j = 0; j < 4; ++j) {
      const double wj = vecs.col(j).dot(rho_ * vecs.col(j)).real();
      if (vals(j) < kEntropyFloor) {
        if (wj > kSupportTol) return kInfinity;
        continue;
      }
      cross += wj * std::log2(vals(j));
    }
    return neg_entropy_ - cross;
  }

  SeparableAnsatz ansatz(const Eigen::VectorXd& x) const {
    SeparableAnsatz out;
    out.weights = weights(x);
    for (int k = 0; k < terms_; ++k) {
      out.local_a.push_back(PureState::normalized(1, local(x, k, 0)));
      out.local_b.push_back(PureState::normalized(1, local(x, k, 1)));
    }
    return out;
  }

 private:
  int terms_;
  Eigen::Matrix4cd rho_;
  double neg_entropy_ = 0.0;
};

}  // namespace detail

/// Minimum of S(rho||sigma) over separable sigma drawn from a K-term product
/// ansatz, by multi-start simplex search. The reported value is recomputed
/// from the returned ansatz, so it is an upper bound on the true quantity.
inline ReeResult relative_entropy_of_entanglement(const QuantumState& rho, const Bipartition& cut,
                                                  const ReeOptions& opt = {}) {
  if (rho.n_qubits() != 2 || cut.n_qubits() != 2)
    throw UnsupportedError("relative_entropy_of_entanglement: only two-qubit states are supported");
  if (opt.terms < 1 || opt.restarts < 1) throw ArgumentError("relative_entropy_of_entanglement: bad options");
  const detail::ReeObjective objective(rho, opt.terms);
  const int dim = objective.dimension();

  auto run_one = [&](std::size_t r) {
    Rng rng = make_rng(opt.seed, "ree/restart/" + std::to_string(r));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::VectorXd x0(dim);
    for (int k = 0; k < opt.terms; ++k) x0(k) = gauss(rng);
    for (int k = 0; k < opt.terms; ++k) {
      for (int s = 0; s < 2; ++s) {
        x0(opt.terms + 4 * k + 2 * s) = std::acos(1.0 - 2.0 * unit(rng));
        x0(opt.terms + 4 * k + 2 * s + 1) = 2.0 * std::numbers::pi * unit(rng);
      }
    }
    const Eigen::VectorXd step = Eigen::VectorXd::Constant(dim, 0.5);
    return nelder_mead(objective, x0, step, opt.simplex);
  };
  const auto runs = parallel_map(static_cast<std::size_t>(opt.restarts), opt.workers, run_one);

  ReeResult res;
  std::size_t best = 0;
  res.converged = false;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    res.restart_values.push_back(runs[r].f);
    res.evals += runs[r].evals;
    if (runs[r].f < runs[best].f) best = r;
  }
  res.converged = runs[best].converged;
  res.ansatz = objective.ansatz(runs[best].x);
  res.value = relative_entropy(rho, assemble(res.ansatz));
  return res;
}

// ---------------------------------------------------------------------------
// Discord and the full breakdown

struct CorrelationOptions {
  ClassicalOptions classical;
  ReeOptions ree;
  /// I - C below this marks the state classical on the measured side, hence
  /// separable.
  double zero_discord_tol = 1e-7;
  /// Purity treated as pure for the entanglement shortcut.
  double pure_tol = 1e-10;
};

/// How the entanglement term of the breakdown was obtained.
enum class EntanglementSource {
  PureState,         // entropy of entanglement of a pure state
  ClassicalQuantum,  // I - C vanished: classical on the measured side
  PptTwoQubit,       // two qubits with positive partial transpose
  PurityBall,        // tr rho^2 <= 1/(d-1) lies inside the separable ball
  Numerical,         // relative entropy of entanglement optimizer
  Unavailable,
};

inline const char* to_string(EntanglementSource s) {
  switch (s) {
    case EntanglementSource::PureState: return "pure-state";
    case EntanglementSource::ClassicalQuantum: return "classical-quantum";
    case EntanglementSource::PptTwoQubit: return "ppt-two-qubit";
    case EntanglementSource::PurityBall: return "purity-ball";
    case EntanglementSource::Numerical: return "numerical";
    case EntanglementSource::Unavailable: return "unavailable";
  }
  return "unavailable";
}

struct CorrelationReport {
  double mutual_information = 0.0;
  double classical_correlations = 0.0;
  /// I - C - E when E is known, otherwise I - C.
  double discord = 0.0;
  std::optional<double> entanglement_ree;
  EntanglementSource entanglement_source = EntanglementSource::Unavailable;
  BlochMeasurement measurement;
  std::string cut;
  std::string measured_side;
  std::size_t optimizer_evals = 0;
  bool optimizer_converged = false;
};

inline CorrelationReport correlation_report(const QuantumState& rho, const Bipartition& cut, Side measured_side,
                                            const CorrelationOptions& opt = {}) {
  CorrelationReport rep;
  rep.cut = cut.to_string();
  rep.measured_side = measured_side == Side::A ? "a" : "b";
  rep.mutual_information = mutual_information(rho, cut);
  const ClassicalCorrelationResult c = classical_correlations(rho, cut, measured_side, opt.classical);
  rep.classical_correlations = c.value;
  rep.measurement = c.measurement;
  rep.optimizer_evals = c.evals;
  rep.optimizer_converged = c.converged;
  const double one_way = rep.mutual_information - rep.classical_correlations;

  const double d = static_cast<double>(rho.dim());
  const double purity = rho.purity();
  if (purity > 1.0 - opt.pure_tol) {
    rep.entanglement_ree = von_neumann_entropy(partial_trace(rho, cut, Side::A));
    rep.entanglement_source = EntanglementSource::PureState;
  } else if (one_way <= opt.zero_discord_tol) {
    rep.entanglement_ree = 0.0;
    rep.entanglement_source = EntanglementSource::ClassicalQuantum;
  } else if (rho.n_qubits() == 2) {
    if (ppt_check(rho, cut).is_ppt) {
      rep.entanglement_ree = 0.0;
      rep.entanglement_source = EntanglementSource::PptTwoQubit;
    } else {
      const ReeResult ree = relative_entropy_of_entanglement(rho, cut, opt.ree);
      rep.entanglement_ree = ree.value;
      rep.entanglement_source = EntanglementSource::Numerical;
      rep.optimizer_evals += ree.evals;
      rep.optimizer_converged = rep.optimizer_converged && ree.converged;
    }
  } else if (purity <= 1.0 / (d - 1.0)) {
    rep.entanglement_ree = 0.0;
    rep.entanglement_source = EntanglementSource::PurityBall;
  }
  rep.discord = one_way - rep.entanglement_ree.value_or(0.0);
  return rep;
}

inline double discord(const QuantumState& rho, const Bipartition& cut, Side measured_side,
                      const CorrelationOptions& opt = {}) {
  return correlation_report(rho, cut, measured_side, opt).discord;
}

// ---------------------------------------------------------------------------
// Discord of the pseudopure output family

/// 1 - S(rho_n) + S(rho_{n-1}) for a pseudopure state whose pure part has a
/// maximally mixed first qubit, |0>|u0> + |1>|u1> with orthogonal u0, u1 of
/// equal norm. The marginal of the remaining n-1 qubits then has spectrum
/// {(1-eps)/2^{n-1} + eps/2 (x2), (1-eps)/2^{n-1} (x 2^{n-1}-2)}, so the
/// value depends on (n, eps) only.
inline double discord_formula_first_qubit(int n_qubits, double epsilon) {
  if (n_qubits < 2) throw ArgumentError("discord_formula_first_qubit: n must be >= 2");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ArgumentError("discord_formula_first_qubit: epsilon must lie in [0, 1]");
  const double d = std::ldexp(1.0, n_qubits);
  const double h = d / 2.0;
  const double bg_n = (1.0 - epsilon) / d;
  const double bg_h = (1.0 - epsilon) / h;
  const std::array<SpectralLevel, 2> full{{{bg_n + epsilon, 1.0}, {bg_n, d - 1.0}}};
  const std::array<SpectralLevel, 2> rest{{{bg_h + epsilon / 2.0, 2.0}, {bg_h, h - 2.0}}};
  // 1 - S_n + S_{n-1} = (n - S_n) - ((n-1) - S_{n-1})
  return entropy_deficit(full, d) - entropy_deficit(rest, h);
}

/// As above, after checking the first-qubit marginal of the pure part.
inline double discord_formula_first_qubit(const PseudopureState& p) {
  const int n = p.n_qubits();
  if (n < 2) throw ArgumentError("discord_formula_first_qubit: n must be >= 2");
  const auto half = static_cast<Eigen::Index>(p.pure_part().dim() / 2);
  const Vector& psi = p.pure_part().amplitudes();
  const double r00 = psi.head(half).squaredNorm();
  const Complex r01 = psi.tail(half).dot(psi.head(half));
  const double defect = std::max(std::abs(r00 - 0.5), std::abs(r01));
  if (defect > 1e-8)
    throw PreconditionError("discord_formula_first_qubit: first-qubit marginal of the pure part is not maximally mixed");
  return discord_formula_first_qubit(n, p.epsilon());
}

}  // namespace qcorr

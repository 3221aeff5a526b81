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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "oracles.hpp"
#include "qcorr/correlations.hpp"
#include "qcorr/pseudopure.hpp"
#include "qcorr/random.hpp"

using namespace qcorr;

namespace {

const Bipartition kCut2 = Bipartition::first_vs_rest(2);

QuantumState bell() {
  Vector v = Vector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return QuantumState::from_pure(PureState(2, v));
}

QuantumState bell_mixture(double p) {
  const double s = 1.0 / std::sqrt(2.0);
  Vector plus = Vector::Zero(4), minus = Vector::Zero(4);
  plus << 0, s, s, 0;
  minus << 0, s, -s, 0;
  return QuantumState::from_trusted(2, Matrix(p * plus * plus.adjoint() + (1 - p) * minus * minus.adjoint()));
}

QuantumState projector_state(const Eigen::Vector2cd& k) {
  return QuantumState::from_trusted(1, Matrix(k * k.adjoint()));
}

/// tr rho (log2 rho - log2 sigma) through the matrix logarithm; full rank only.
double relative_entropy_oracle(const Matrix& rho, const Matrix& sigma) {
  const Matrix lr = rho.log();
  const Matrix ls = sigma.log();
  return (rho * (lr - ls)).trace().real() / std::numbers::ln2;
}

/// sum_kl p_kl |k><k| (x) |l><l| with random orthonormal local bases.
QuantumState classical_state(Rng& rng, int n_b) {
  const Unitary ua = haar_unitary(1, rng);
  const Unitary ub = haar_unitary(n_b, rng);
  const auto db = static_cast<Eigen::Index>(detail::dim_of(n_b));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m = Matrix::Zero(2 * db, 2 * db);
  double total = 0.0;
  for (Eigen::Index k = 0; k < 2; ++k) {
    for (Eigen::Index l = 0; l < db; ++l) {
      const double w = u(rng);
      total += w;
      const Vector ka = ua.matrix().col(k);
      const Vector kb = ub.matrix().col(l);
      m += w * oracle::kron(ka * ka.adjoint(), kb * kb.adjoint());
    }
  }
  return QuantumState::from_trusted(n_b + 1, Matrix(m / total));
}

ReeOptions quick_ree() {
  ReeOptions o;
  o.restarts = 4;
  return o;
}

}  // namespace

TEST(MutualInformation, Examples) {
  Rng rng(1);
  EXPECT_NEAR(mutual_information(tensor(random_density(1, rng), random_density(1, rng)), kCut2), 0.0, 1e-10);
  EXPECT_NEAR(mutual_information(bell(), kCut2), 2.0, 1e-12);
  Matrix cl = Matrix::Zero(4, 4);
  cl(0, 0) = cl(3, 3) = 0.5;
  EXPECT_NEAR(mutual_information(QuantumState(2, cl), kCut2), 1.0, 1e-12);
}

TEST(MutualInformation, MatchesOracleAndBounds) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const QuantumState rho = random_density(3, rng);
    for (const auto& cut : Bipartition::all(3)) {
      const double i = mutual_information(rho, cut);
      EXPECT_NEAR(i, oracle::mutual_information(rho.matrix(), 3, cut.side_a(), cut.side_b()), 1e-9);
      EXPECT_GE(i, -1e-8);
      EXPECT_LE(i, 2.0 * static_cast<double>(std::min(cut.side_a().size(), cut.side_b().size())) + 1e-8);
    }
  }
}

TEST(BlochMeasurement, ProjectorsAreComplete) {
  for (double th : {0.0, 0.7, 2.0, std::numbers::pi}) {
    const auto m = BlochMeasurement::canonical(th, 1.3);
    const auto p = m.projectors();
    EXPECT_LT((p[0] + p[1] - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((p[0] * p[1]).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(ClassicalCorrelations, ProductStateIsZero) {
  Rng rng(3);
  const QuantumState rho = tensor(random_density(1, rng), random_density(2, rng));
  EXPECT_NEAR(classical_correlations(rho, Bipartition::first_vs_rest(3), Side::A).value, 0.0, 1e-9);
}

TEST(ClassicalCorrelations, PureStateEqualsReducedEntropy) {
  Rng rng(4);
  for (int n = 2; n <= 4; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const QuantumState rho = QuantumState::from_pure(random_pure_state(n, rng));
      const Bipartition cut = Bipartition::first_vs_rest(n);
      const double sa = von_neumann_entropy(partial_trace(rho, {0}));
      EXPECT_NEAR(classical_correlations(rho, cut, Side::A).value, sa, 1e-6);
    }
  }
}

TEST(ClassicalCorrelations, MixedConditionalExample) {
  // 1/2 (|0><0| (x) |0><0| + |1><1| (x) |+><+|), measuring A
  const Eigen::Vector2cd zero(1, 0), one(0, 1), plus(1 / std::sqrt(2.0), 1 / std::sqrt(2.0));
  const QuantumState a = tensor(projector_state(zero), projector_state(zero));
  const QuantumState b = tensor(projector_state(one), projector_state(plus));
  const std::vector<std::pair<double, QuantumState>> terms{{0.5, a}, {0.5, b}};
  const QuantumState rho = QuantumState::mixture(terms);
  const auto r = classical_correlations(rho, kCut2, Side::A);
  const double sb = von_neumann_entropy(partial_trace(rho, {1}));
  EXPECT_NEAR(sb, 0.6009, 1e-4);
  EXPECT_NEAR(r.value, sb, 1e-8);
  EXPECT_NEAR(std::sin(r.measurement.theta), 0.0, 1e-3);
  EXPECT_NEAR(r.value, oracle::classical_correlations_grid(rho.matrix(), 60), 1e-6);
}

TEST(ClassicalCorrelations, MatchesGridOracleOnRandomStates) {
  Rng rng(5);
  for (int trial = 0; trial < 8; ++trial) {
    const QuantumState rho = random_density(2, rng);
    const double got = classical_correlations(rho, kCut2, Side::A).value;
    const double grid = oracle::classical_correlations_grid(rho.matrix(), 60);
    EXPECT_GE(got, grid - 1e-9);
    EXPECT_LE(got, grid + 1e-3);
  }
}

TEST(ClassicalCorrelations, MeasuringSideBUsesTheSwappedState) {
  Rng rng(6);
  const QuantumState rho = random_density(2, rng);
  const Matrix swap = (Matrix(4, 4) << 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1).finished();
  const QuantumState swapped = QuantumState::from_trusted(2, Matrix(swap * rho.matrix() * swap));
  EXPECT_NEAR(classical_correlations(rho, kCut2, Side::B).value,
              classical_correlations(swapped, kCut2, Side::A).value, 1e-8);
}

TEST(ClassicalCorrelations, MultiQubitMeasuredSideIsUnsupported) {
  const QuantumState rho = QuantumState::maximally_mixed(3);
  EXPECT_THROW(classical_correlations(rho, Bipartition::first_vs_rest(3), Side::B), UnsupportedError);
}

TEST(Discord, ClassicalStatesHaveNone) {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const QuantumState rho = classical_state(rng, trial % 2 == 0 ? 1 : 2);
    const Bipartition cut = Bipartition::first_vs_rest(rho.n_qubits());
    EXPECT_LE(std::abs(discord(rho, cut, Side::A)), 1e-6);
  }
}

TEST(Discord, PureStatesHaveNone) {
  Rng rng(8);
  for (int n = 2; n <= 4; ++n) {
    const QuantumState rho = QuantumState::from_pure(random_pure_state(n, rng));
    const auto rep = correlation_report(rho, Bipartition::first_vs_rest(n), Side::A);
    EXPECT_LE(std::abs(rep.discord), 1e-6);
    EXPECT_EQ(rep.entanglement_source, EntanglementSource::PureState);
  }
}

TEST(Discord, WernerStateIsPositive) {
  Matrix m = 0.3 * Matrix::Identity(4, 4) / 4.0 + 0.7 * bell().matrix();
  const QuantumState w(2, m);
  const double one_way = mutual_information(w, kCut2) - classical_correlations(w, kCut2, Side::A).value;
  EXPECT_GT(one_way, 0.1);
  // regression anchor: Bell-diagonal states have C = 1 - h((1 + c)/2) with c = 0.7
  EXPECT_NEAR(classical_correlations(w, kCut2, Side::A).value, 1.0 - binary_entropy(0.85), 1e-8);
}

TEST(Discord, NonNegativeOnRandomStates) {
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 2;
    const QuantumState rho = random_density(n, rng);
    const Bipartition cut = Bipartition::first_vs_rest(n);
    const double i = mutual_information(rho, cut);
    const auto c = classical_correlations(rho, cut, Side::A);
    EXPECT_GE(i, -1e-8);
    EXPECT_GE(c.value, -1e-8);
    EXPECT_GE(i - c.value, -1e-8);
    EXPECT_LE(c.value, std::min(von_neumann_entropy(partial_trace(rho, {0})),
                                von_neumann_entropy(partial_trace(rho, cut, Side::B))) + 1e-8);
  }
}

TEST(RelativeEntropy, Examples) {
  Rng rng(10);
  const QuantumState rho = random_density(2, rng);
  EXPECT_NEAR(relative_entropy(rho, rho), 0.0, 1e-10);

  for (int n : {1, 3, 6}) {
    for (double eps : {0.01, 0.5, 0.9}) {
      const PureState psi = random_pure_state(n, rng);
      const QuantumState target = QuantumState::from_pure(psi);
      const QuantumState pp = assemble(PseudopureState(eps, psi));
      const double expect = eps + (1 - eps) / std::ldexp(1.0, n);
      EXPECT_NEAR(relative_entropy(target, pp), -std::log2(expect), 1e-10);
      EXPECT_NEAR(confusion_probability(target, pp), expect, 1e-10);
    }
  }
  const PureState psi = PureState::basis(8, 17);
  EXPECT_NEAR(confusion_probability(QuantumState::from_pure(psi), assemble(PseudopureState(0.05, psi))),
              0.05 + 0.95 / 256, 1e-12);
}

TEST(RelativeEntropy, SupportViolationIsInfinite) {
  const QuantumState zero = QuantumState::from_pure(PureState::basis(1, 0));
  const QuantumState one = QuantumState::from_pure(PureState::basis(1, 1));
  EXPECT_EQ(relative_entropy(zero, one), kInfinity);
  EXPECT_EQ(confusion_probability(zero, one), 0.0);
  EXPECT_THROW(relative_entropy(zero, QuantumState::maximally_mixed(2)), ArgumentError);
}

TEST(RelativeEntropy, MatchesMatrixLogOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const QuantumState a = random_density(2, rng);
    const QuantumState b = random_density(2, rng);
    const double s = relative_entropy(a, b);
    EXPECT_NEAR(s, relative_entropy_oracle(a.matrix(), b.matrix()), 1e-8);
    EXPECT_GE(s, -1e-8);
  }
}

TEST(Holevo, Examples) {
  Rng rng(12);
  const QuantumState rho = random_density(2, rng);
  std::vector<std::pair<double, QuantumState>> same{{0.3, rho}, {0.7, rho}};
  EXPECT_NEAR(holevo_information(same), 0.0, 1e-10);
  std::vector<std::pair<double, QuantumState>> orth{{0.5, QuantumState::from_pure(PureState::basis(1, 0))},
                                                    {0.5, QuantumState::from_pure(PureState::basis(1, 1))}};
  EXPECT_NEAR(holevo_information(orth), 1.0, 1e-12);
}

TEST(Holevo, UnitaryInvarianceAndBounds) {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::pair<double, QuantumState>> ens, rotated;
    const Unitary u = haar_unitary(2, rng);
    const double p = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    for (double w : {p, 1 - p}) {
      const QuantumState s = random_density(2, rng);
      ens.emplace_back(w, s);
      rotated.emplace_back(w, evolve(s, u));
    }
    const double chi = holevo_information(ens);
    EXPECT_NEAR(chi, holevo_information(rotated), 1e-8);
    EXPECT_GE(chi, -1e-8);
    EXPECT_LE(chi, von_neumann_entropy(QuantumState::mixture(ens)) + 1e-8);
    EXPECT_LE(chi, 1.0 + 1e-8);
  }
}

TEST(Ree, ProductStateIsZero) {
  Rng rng(14);
  const QuantumState rho = tensor(random_density(1, rng), random_density(1, rng));
  EXPECT_NEAR(relative_entropy_of_entanglement(rho, kCut2, quick_ree()).value, 0.0, 1e-4);
}

TEST(Ree, BellStateIsOneBit) {
  const ReeResult r = relative_entropy_of_entanglement(bell(), kCut2, quick_ree());
  EXPECT_NEAR(r.value, 1.0, 1e-3);
  // the reported value is recomputed from the returned ansatz
  EXPECT_EQ(r.value, relative_entropy(bell(), assemble(r.ansatz)));
}

TEST(Ree, BellMixtureClosedForm) {
  const QuantumState rho = bell_mixture(0.75);
  const ReeResult r = relative_entropy_of_entanglement(rho, kCut2, quick_ree());
  EXPECT_NEAR(r.value, 1 + 0.75 * std::log2(0.75) + 0.25 * std::log2(0.25), 1e-3);
  EXPECT_EQ(r.value, relative_entropy(rho, assemble(r.ansatz)));
  double total = 0;
  for (double w : r.ansatz.weights) {
    EXPECT_GE(w, 0.0);
    total += w;
  }
  EXPECT_NEAR(total, 1.0, 1e-10);
  EXPECT_TRUE(ppt_check(assemble(r.ansatz), kCut2).is_ppt);
}

TEST(Ree, IsDeterministicForASeed) {
  const QuantumState rho = bell_mixture(0.9);
  ReeOptions o = quick_ree();
  o.restarts = 2;
  const double a = relative_entropy_of_entanglement(rho, kCut2, o).value;
  o.workers = 2;
  EXPECT_EQ(a, relative_entropy_of_entanglement(rho, kCut2, o).value);
}

TEST(Ree, RejectsLargerSystems) {
  EXPECT_THROW(relative_entropy_of_entanglement(QuantumState::maximally_mixed(3), Bipartition::first_vs_rest(3)),
               UnsupportedError);
}

TEST(CorrelationReport, BellBreakdown) {
  CorrelationOptions opt;
  opt.ree = quick_ree();
  const auto r = correlation_report(bell(), kCut2, Side::A, opt);
  EXPECT_NEAR(r.mutual_information, 2.0, 1e-10);
  EXPECT_NEAR(r.classical_correlations, 1.0, 1e-8);
  ASSERT_TRUE(r.entanglement_ree.has_value());
  EXPECT_NEAR(*r.entanglement_ree, 1.0, 1e-10);
  EXPECT_LE(std::abs(r.discord), 1e-8);
  EXPECT_EQ(r.entanglement_source, EntanglementSource::PureState);
}

TEST(CorrelationReport, CertificateSources) {
  CorrelationOptions opt;
  opt.ree = quick_ree();
  Matrix cl = Matrix::Zero(4, 4);
  cl(0, 0) = cl(3, 3) = 0.5;
  EXPECT_EQ(correlation_report(QuantumState(2, cl), kCut2, Side::A, opt).entanglement_source,
            EntanglementSource::ClassicalQuantum);
  EXPECT_EQ(correlation_report(werner_form(0.25, 0, 1), kCut2, Side::A, opt).entanglement_source,
            EntanglementSource::PptTwoQubit);
  const QuantumState pp = assemble(PseudopureState(0.05, PureState::plus(3)));
  Rng rng(15);
  const QuantumState scrambled = evolve(pp, haar_unitary(3, rng));
  EXPECT_EQ(correlation_report(scrambled, Bipartition::first_vs_rest(3), Side::A, opt).entanglement_source,
            EntanglementSource::PurityBall);
  const auto w = correlation_report(werner_form(0.8, 0, 1), kCut2, Side::A, opt);
  EXPECT_EQ(w.entanglement_source, EntanglementSource::Numerical);
  // Werner REE: 1 - h((1 + 3 delta)/4)
  EXPECT_NEAR(*w.entanglement_ree, 1.0 - binary_entropy((1 + 3 * 0.8) / 4), 1e-3);
}

TEST(DiscordFormula, Examples) {
  for (int n : {2, 4, 7}) EXPECT_NEAR(discord_formula_first_qubit(n, 0.0), 0.0, 1e-15);

  // n=2, eps=0.9, (|00> + |11>)/sqrt2: 1 - S(rho) + S(rho_B) by direct eigenvalues
  Vector v = Vector::Zero(4);
  v(0) = v(3) = 1 / std::sqrt(2.0);
  const PseudopureState p(0.9, PureState(2, v));
  const Matrix m = assemble(p).matrix();
  const double direct = 1.0 - oracle::entropy(m) + oracle::entropy(oracle::partial_trace(m, 2, {1}));
  EXPECT_NEAR(discord_formula_first_qubit(p), direct, 1e-10);
  EXPECT_NEAR(discord_formula_first_qubit(2, 0.9), direct, 1e-10);
}

TEST(DiscordFormula, MatchesDirectEntropiesForOrthogonalHalves) {
  Rng rng(16);
  for (int n = 2; n <= 6; ++n) {
    for (double eps : {1e-3, 0.2, 0.7}) {
      // |0>|u0> + |1>|u1> with u0, u1 orthonormal columns of a Haar unitary
      const Unitary u = haar_unitary(n - 1, rng);
      const auto h = static_cast<Eigen::Index>(detail::dim_of(n - 1));
      Vector psi(2 * h);
      psi.head(h) = u.matrix().col(0) / std::sqrt(2.0);
      psi.tail(h) = u.matrix().col(1) / std::sqrt(2.0);
      const PseudopureState p(eps, PureState(n, psi));
      const QuantumState rho = assemble(p);
      std::vector<int> rest;
      for (int q = 1; q < n; ++q) rest.push_back(q);
      const double direct =
          1.0 - oracle::entropy(rho.matrix()) + oracle::entropy(oracle::partial_trace(rho.matrix(), n, rest));
      EXPECT_NEAR(discord_formula_first_qubit(p), direct, 1e-9) << n << " " << eps;
    }
  }
}

TEST(DiscordFormula, RejectsPurePartsWithoutMixedFirstQubit) {
  EXPECT_THROW(discord_formula_first_qubit(PseudopureState(0.1, PureState::basis(3, 0))), PreconditionError);
  EXPECT_THROW(discord_formula_first_qubit(1, 0.1), ArgumentError);
}

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

// cluster.hpp
// Graph states, the geometric measure of entanglement and the bound it puts
// on the success probability of any measurement outcome set.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qcorr/parallel.hpp"
#include "qcorr/qstate.hpp"
#include "qcorr/random.hpp"

namespace qcorr {

inline constexpr int kMaxGraphQubits = 20;
inline constexpr int kMaxGeometricQubits = 16;

// ---------------------------------------------------------------------------
// Graph states

using Edge = std::pair<int, int>;

/// prod_{(i,j) in edges} CZ_ij |+>^{(x) n}
class GraphState {
 public:
  GraphState(int n_qubits, std::vector<Edge> edges) : n_qubits_(n_qubits), edges_(std::move(edges)) {
    if (n_qubits_ < 1 || n_qubits_ > kMaxGraphQubits)
      throw ArgumentError("GraphState: qubit count must lie in [1, 20], got " + std::to_string(n_qubits_));
    for (auto& [i, j] : edges_) {
      if (i < 0 || j < 0 || i >= n_qubits_ || j >= n_qubits_) throw ArgumentError("GraphState: edge index out of range");
      if (i == j) throw ArgumentError("GraphState: self-loop");
      if (i > j) std::swap(i, j);
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

    const std::size_t d = detail::dim_of(n_qubits_);
    Vector amp(static_cast<Eigen::Index>(d));
    const double a = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t x = 0; x < d; ++x) {
      int parity = 0;
      for (const auto& [i, j] : edges_) parity ^= static_cast<int>(bit(x, i) & bit(x, j));
      amp(static_cast<Eigen::Index>(x)) = parity ? -a : a;
    }
    state_ = PureState(n_qubits_, std::move(amp));
  }

  int n_qubits() const { return n_qubits_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const PureState& state() const { return state_; }

 private:
  std::uint64_t bit(std::size_t x, int q) const { return (x >> (n_qubits_ - 1 - q)) & 1U; }

  int n_qubits_;
  std::vector<Edge> edges_;
  PureState state_ = PureState::plus(1);
};

enum class TopologyKind { Linear, Ring, Grid };

struct Topology {
  TopologyKind kind = TopologyKind::Linear;
  int rows = 0;
  int cols = 0;

  static Topology linear() { return {TopologyKind::Linear, 0, 0}; }
  static Topology ring() { return {TopologyKind::Ring, 0, 0}; }
  static Topology grid(int r, int c) { return {TopologyKind::Grid, r, c}; }

  /// "linear", "ring" or "grid:RxC"
  static Topology parse(std::string_view s) {
    if (s == "linear") return linear();
    if (s == "ring") return ring();
    if (s.starts_with("grid:")) {
      const std::string body(s.substr(5));
      const auto x = body.find('x');
      if (x == std::string::npos) throw ArgumentError("Topology: expected grid:RxC, got '" + std::string(s) + "'");
      try {
        std::size_t used = 0;
        const int r = std::stoi(body.substr(0, x), &used);
        if (used != x) throw ArgumentError("");
        const std::string cs = body.substr(x + 1);
        const int c = std::stoi(cs, &used);
        if (used != cs.size()) throw ArgumentError("");
        return grid(r, c);
      } catch (const std::exception&) {
        throw ArgumentError("Topology: expected grid:RxC, got '" + std::string(s) + "'");
      }
    }
    throw ArgumentError("Topology: unknown topology '" + std::string(s) + "'");
  }

  std::string to_string() const {
    switch (kind) {
      case TopologyKind::Linear: return "linear";
      case TopologyKind::Ring: return "ring";
      case TopologyKind::Grid: return "grid:" + std::to_string(rows) + "x" + std::to_string(cols);
    }
    return "linear";
  }
};

inline GraphState build_cluster(int n_qubits, const Topology& topo) {
  if (n_qubits < 1 || n_qubits > kMaxGraphQubits)
    throw ArgumentError("build_cluster: qubit count must lie in [1, 20], got " + std::to_string(n_qubits));
  std::vector<Edge> edges;
  switch (topo.kind) {
    case TopologyKind::Linear:
      for (int i = 0; i + 1 < n_qubits; ++i) edges.emplace_back(i, i + 1);
      break;
    case TopologyKind::Ring:
      for (int i = 0; i + 1 < n_qubits; ++i) edges.emplace_back(i, i + 1);
      if (n_qubits >= 3) edges.emplace_back(n_qubits - 1, 0);
      break;
    case TopologyKind::Grid:
      if (topo.rows < 1 || topo.cols < 1 || topo.rows * topo.cols != n_qubits)
        throw ArgumentError("build_cluster: grid " + std::to_string(topo.rows) + "x" + std::to_string(topo.cols) +
                            " does not hold " + std::to_string(n_qubits) + " qubits");
      for (int r = 0; r < topo.rows; ++r) {
        for (int c = 0; c < topo.cols; ++c) {
          const int q = r * topo.cols + c;
          if (c + 1 < topo.cols) edges.emplace_back(q, q + 1);
          if (r + 1 < topo.rows) edges.emplace_back(q, q + topo.cols);
        }
      }
      break;
  }
  return GraphState(n_qubits, std::move(edges));
}

/// |<b|psi>|^2 for a computational basis index (qubit 0 is the MSB).
inline double bitstring_probability(const GraphState& g, std::uint64_t b) {
  if (b >= g.state().dim()) throw ArgumentError("bitstring_probability: bit string out of range");
  return std::norm(g.state().amplitudes()(static_cast<Eigen::Index>(b)));
}

/// Parses a string of '0'/'1' characters of length n, qubit 0 first.
inline std::uint64_t parse_bitstring(std::string_view s, int n_qubits) {
  if (static_cast<int>(s.size()) != n_qubits)
    throw ArgumentError("parse_bitstring: expected " + std::to_string(n_qubits) + " bits, got " +
                        std::to_string(s.size()));
  std::uint64_t v = 0;
  for (char ch : s) {
    if (ch != '0' && ch != '1') throw ArgumentError("parse_bitstring: invalid character");
    v = (v << 1) | static_cast<std::uint64_t>(ch - '0');
  }
  return v;
}

inline double bitstring_probability(const GraphState& g, std::string_view b) {
  return bitstring_probability(g, parse_bitstring(b, g.n_qubits()));
}

// ---------------------------------------------------------------------------
// Geometric entanglement

struct GeometricOptions {
  int restarts = 50;
  std::uint64_t seed = 0x6e0;
  double tol = 1e-10;
  int max_sweeps = 10000;
  unsigned workers = 1;
};

struct GeometricEntanglement {
  /// -log2 max_overlap_sq, in bits
  double value = 0.0;
  double max_overlap_sq = 1.0;
  std::vector<Eigen::Vector2cd> closest_product;
  int restarts_used = 0;
  /// Best overlap^2 reached by each restart, in restart order.
  std::vector<double> restart_overlaps;
  /// max - min of -log2 over restarts
  double spread = 0.0;
  /// False when the best restart still moved by more than tol at the sweep cap.
  bool converged = true;
  int sweeps = 0;
};

namespace detail {

/// <phi_j, j != k | psi>, a vector on site k.
inline Eigen::Vector2cd site_environment(const Vector& psi, int n, const std::vector<Eigen::Vector2cd>& sites, int k) {
  Vector t = psi;
  // contract qubits 0..k-1 from the front: the MSB splits t into halves
  for (int q = 0; q < k; ++q) {
    const Eigen::Index h = t.size() / 2;
    t = (std::conj(sites[q](0)) * t.head(h) + std::conj(sites[q](1)) * t.tail(h)).eval();
  }
  // contract qubits n-1..k+1 from the back: the LSB interleaves
  for (int q = n - 1; q > k; --q) {
    const Eigen::Index h = t.size() / 2;
    Vector u(h);
    for (Eigen::Index y = 0; y < h; ++y) u(y) = std::conj(sites[q](0)) * t(2 * y) + std::conj(sites[q](1)) * t(2 * y + 1);
    t = std::move(u);
  }
  return Eigen::Vector2cd(t(0), t(1));
}

struct AlternatingRun {
  double overlap_sq = 0.0;
  std::vector<Eigen::Vector2cd> sites;
  bool converged = false;
  int sweeps = 0;
};

/// Each site update is the exact maximizer given the others, so the overlap
/// never decreases.
inline AlternatingRun alternating_maximize(const Vector& psi, int n, std::vector<Eigen::Vector2cd> sites,
                                           const GeometricOptions& opt) {
  AlternatingRun run;
  double prev = -1.0;
  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    double overlap = 0.0;
    for (int k = 0; k < n; ++k) {
      const Eigen::Vector2cd v = site_environment(psi, n, sites, k);
      const double nv = v.norm();
      if (nv > 0.0) sites[k] = v / nv;
      overlap = nv * nv;
    }
    run.sweeps = sweep + 1;
    if (std::abs(overlap - prev) <= opt.tol) {
      run.converged = true;
      prev = overlap;
      break;
    }
    prev = overlap;
  }
  run.overlap_sq = prev;
  run.sites = std::move(sites);
  return run;
}

}  // namespace detail

/// -log2 of the largest |<phi_1 ... phi_n|psi>|^2 found by alternating site
/// updates. Restart 0 starts from the most probable computational basis
/// string and the others from seeded random product states.
inline GeometricEntanglement geometric_entanglement(const PureState& psi, const GeometricOptions& opt = {}) {
  const int n = psi.n_qubits();
  if (n > kMaxGeometricQubits) throw PreconditionError("geometric_entanglement: requires n <= 16");
  if (opt.restarts < 1) throw ArgumentError("geometric_entanglement: restarts must be >= 1");
  if (opt.max_sweeps < 1) throw ArgumentError("geometric_entanglement: max_sweeps must be >= 1");

  Eigen::Index best_basis = 0;
  psi.amplitudes().cwiseAbs2().maxCoeff(&best_basis);

  auto runs = parallel_map(static_cast<std::size_t>(opt.restarts), opt.workers, [&](std::size_t r) {
    std::vector<Eigen::Vector2cd> sites(static_cast<std::size_t>(n));
    if (r == 0) {
      for (int q = 0; q < n; ++q) {
        const auto b = (static_cast<std::uint64_t>(best_basis) >> (n - 1 - q)) & 1U;
        sites[q] = b ? Eigen::Vector2cd(0, 1) : Eigen::Vector2cd(1, 0);
      }
    } else {
      Rng rng = make_rng(opt.seed, "geometric-restart-" + std::to_string(r));
      for (auto& s : sites) s = random_qubit_ket(rng);
    }
    return detail::alternating_maximize(psi.amplitudes(), n, std::move(sites), opt);
  });

  GeometricEntanglement g;
  std::size_t best = 0;
  double lo = runs[0].overlap_sq;
  double hi = runs[0].overlap_sq;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    g.restart_overlaps.push_back(runs[r].overlap_sq);
    if (runs[r].overlap_sq > runs[best].overlap_sq) best = r;
    lo = std::min(lo, runs[r].overlap_sq);
    hi = std::max(hi, runs[r].overlap_sq);
  }
  g.max_overlap_sq = std::min(1.0, runs[best].overlap_sq);
  g.value = std::max(0.0, -std::log2(g.max_overlap_sq));
  g.closest_product = runs[best].sites;
  g.restarts_used = opt.restarts;
  g.spread = std::log2(hi) - std::log2(lo);
  g.converged = runs[best].converged;
  g.sweeps = runs[best].sweeps;
  return g;
}

// ---------------------------------------------------------------------------
// Success bounds

/// Accepted measurement outcomes and the success probability c they are
/// meant to reach.
class SuccessSet {
 public:
  SuccessSet(int n_qubits, std::vector<std::uint64_t> accepted, double c = 1.0)
      : n_qubits_(n_qubits), accepted_(std::move(accepted)), c_(c) {
    if (n_qubits_ < 1 || n_qubits_ > kMaxGraphQubits) throw ArgumentError("SuccessSet: qubit count must lie in [1, 20]");
    if (!(c_ > 0.0 && c_ <= 1.0)) throw ArgumentError("SuccessSet: c must lie in (0, 1]");
    std::sort(accepted_.begin(), accepted_.end());
    accepted_.erase(std::unique(accepted_.begin(), accepted_.end()), accepted_.end());
    if (!accepted_.empty() && accepted_.back() >= detail::dim_of(n_qubits_))
      throw ArgumentError("SuccessSet: bit string out of range");
  }

  /// Uniformly random subset of the given size.
  static SuccessSet random(int n_qubits, std::size_t size, Rng& rng, double c = 1.0) {
    const std::size_t d = detail::dim_of(n_qubits);
    if (size > d) throw ArgumentError("SuccessSet: size exceeds 2^n");
    std::vector<std::uint64_t> all(d);
    for (std::size_t i = 0; i < d; ++i) all[i] = i;
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(size);
    return SuccessSet(n_qubits, std::move(all), c);
  }

  int n_qubits() const { return n_qubits_; }
  const std::vector<std::uint64_t>& accepted() const { return accepted_; }
  std::size_t size() const { return accepted_.size(); }
  double c() const { return c_; }

 private:
  int n_qubits_;
  std::vector<std::uint64_t> accepted_;
  double c_;
};

struct SuccessBound {
  double p_success = 0.0;
  /// N_s 2^{-E}
  double bound = 0.0;
  double e_psi = 0.0;
  bool holds = true;
};

namespace detail {
inline double success_probability(const GraphState& g, const SuccessSet& s) {
  if (s.n_qubits() != g.n_qubits()) throw ArgumentError("success_bound: success set and graph sizes differ");
  double p = 0.0;
  for (auto b : s.accepted()) p += bitstring_probability(g, b);
  return p;
}
}  // namespace detail

/// p_s = sum_{b in S} p(b) against N_s 2^{-E} for a given E.
inline SuccessBound success_bound(const GraphState& g, const SuccessSet& s, double e_psi) {
  SuccessBound r;
  r.p_success = detail::success_probability(g, s);
  r.e_psi = e_psi;
  r.bound = static_cast<double>(s.size()) * std::exp2(-e_psi);
  r.holds = r.p_success <= r.bound * (1.0 + 1e-12) + 1e-15;
  return r;
}

inline SuccessBound success_bound(const GraphState& g, const SuccessSet& s, const GeometricOptions& opt = {}) {
  if (g.n_qubits() > kMaxGeometricQubits) throw PreconditionError("success_bound: requires n <= 16");
  return success_bound(g, s, geometric_entanglement(g.state(), opt).value);
}

namespace detail {
/// ceil(2^x), treating values within rounding of an integer as that integer.
inline std::uint64_t ceil_pow2(double x) {
  if (x >= 63.0) throw ResourceError("required_outcomes: count exceeds 2^63");
  const double v = std::exp2(x);
  const double r = std::round(v);
  if (std::abs(v - r) <= 1e-9 * std::max(1.0, r)) return static_cast<std::uint64_t>(r);
  return static_cast<std::uint64_t>(std::ceil(v));
}
}  // namespace detail

/// Smallest N_s compatible with success probability c: ceil(2^{E - log2(1/c)}).
inline std::uint64_t required_outcomes(double e_psi, double c) {
  if (!(c > 0.0 && c <= 1.0)) throw ArgumentError("required_outcomes: c must lie in (0, 1]");
  if (!(e_psi >= 0.0)) throw ArgumentError("required_outcomes: E must be >= 0");
  return detail::ceil_pow2(e_psi - std::log2(1.0 / c));
}

/// Energies in units where p_G = 2^{(F - E_G)/kT}.
struct ThermalParams {
  double ground_energy = 0.0;
  double free_energy = 0.0;
  double kT = 1.0;

  double log2_ground_probability() const {
    if (!(kT > 0.0)) throw ArgumentError("ThermalParams: kT must be positive");
    const double l = (free_energy - ground_energy) / kT;
    if (l > 0.0) throw ArgumentError("ThermalParams: ground-state probability exceeds 1 (F > E_G)");
    return l;
  }
  double ground_probability() const { return std::exp2(log2_ground_probability()); }
};

struct ThermalBound {
  double p_success = 0.0;
  double p_ground = 1.0;
  /// N_s p_G 2^{-E}
  double bound = 0.0;
  /// ceil(2^{E + log2(1/p_G) - log2(1/c)})
  std::uint64_t n_s_lower = 0;
  double e_psi = 0.0;
};

inline ThermalBound thermal_success_bound(const GraphState& g, const SuccessSet& s, const ThermalParams& t,
                                          double e_psi) {
  ThermalBound r;
  const double lg = t.log2_ground_probability();
  r.p_success = detail::success_probability(g, s);
  r.p_ground = std::exp2(lg);
  r.e_psi = e_psi;
  r.bound = static_cast<double>(s.size()) * r.p_ground * std::exp2(-e_psi);
  r.n_s_lower = detail::ceil_pow2(e_psi - lg - std::log2(1.0 / s.c()));
  return r;
}

inline ThermalBound thermal_success_bound(const GraphState& g, const SuccessSet& s, const ThermalParams& t,
                                          const GeometricOptions& opt = {}) {
  if (g.n_qubits() > kMaxGeometricQubits) throw PreconditionError("thermal_success_bound: requires n <= 16");
  return thermal_success_bound(g, s, t, geometric_entanglement(g.state(), opt).value);
}

}  // namespace qcorr

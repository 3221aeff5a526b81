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

// nelder_mead.hpp
// Derivative-free downhill simplex minimization.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace qcorr {

struct NelderMeadOptions {
  std::size_t max_evals = 4000;
  /// Converged once the simplex diameter falls below this.
  double x_tol = 1e-7;
  /// Optional additional stop on the spread of vertex values (0 disables).
  double f_tol = 0.0;
  /// Dimension-dependent coefficients (Gao & Han); the classic 1/2/0.5/0.5
  /// set stalls in more than a handful of dimensions.
  bool adaptive = true;
  /// After convergence, rebuild a fresh simplex around the best vertex and
  /// continue, up to this many times, while it keeps improving.
  int restarts = 0;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double f = std::numeric_limits<double>::infinity();
  std::size_t evals = 0;
  bool converged = false;
};

namespace detail {

template <class F>
NelderMeadResult nelder_mead_pass(F& f, const Eigen::VectorXd& x0, const Eigen::VectorXd& step,
                                  const NelderMeadOptions& opt, std::size_t budget) {
  const Eigen::Index n = x0.size();
  const double dn = static_cast<double>(n);
  const double alpha = 1.0;
  const double gamma = opt.adaptive ? 1.0 + 2.0 / dn : 2.0;
  const double rho = opt.adaptive ? 0.75 - 0.5 / dn : 0.5;
  const double sigma = opt.adaptive ? 1.0 - 1.0 / dn : 0.5;

  std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n) + 1, x0);
  std::vector<double> vals(pts.size());
  std::size_t evals = 0;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++evals;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };
  for (Eigen::Index i = 0; i < n; ++i) pts[static_cast<std::size_t>(i) + 1](i) += step(i);
  for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = eval(pts[i]);

  std::vector<std::size_t> order(pts.size());
  bool converged = false;
  while (true) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];

    double radius = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) radius = std::max(radius, (pts[i] - pts[best]).norm());
    // max distance from the best vertex bounds the diameter within a factor 2
    if (2.0 * radius < opt.x_tol || (opt.f_tol > 0.0 && vals[worst] - vals[best] < opt.f_tol)) {
      converged = true;
      break;
    }
    if (evals >= budget) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i != worst) centroid += pts[i];
    }
    centroid /= dn;

    const Eigen::VectorXd xr = centroid + alpha * (centroid - pts[worst]);
    const double fr = eval(xr);
    if (fr < vals[best]) {
      const Eigen::VectorXd xe = centroid + gamma * (xr - centroid);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + rho * (xr - centroid))
                                       : Eigen::VectorXd(centroid + rho * (pts[worst] - centroid));
    const double fc = eval(xc);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + sigma * (pts[i] - pts[best]);
      vals[i] = eval(pts[i]);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  return {pts[best], vals[best], evals, converged};
}

}  // namespace detail

/// Minimizes f starting from a simplex {x0, x0 + step_i e_i}.
template <class F>
NelderMeadResult nelder_mead(F&& f, const Eigen::VectorXd& x0, const Eigen::VectorXd& step,
                             const NelderMeadOptions& opt = {}) {
  NelderMeadResult res = detail::nelder_mead_pass(f, x0, step, opt, opt.max_evals);
  for (int r = 0; r < opt.restarts && res.evals < opt.max_evals; ++r) {
    NelderMeadResult next = detail::nelder_mead_pass(f, res.x, step, opt, opt.max_evals - res.evals);
    const double gain = res.f - next.f;
    next.evals += res.evals;
    if (next.f <= res.f) {
      res = std::move(next);
    } else {
      res.evals = next.evals;
    }
    if (!(gain > std::max(opt.f_tol, 1e-14))) break;
  }
  return res;
}

}  // namespace qcorr

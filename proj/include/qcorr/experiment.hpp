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

// experiment.hpp
// Seeded experiment sweeps with JSON records and CSV tables.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qcorr/algorithms.hpp"
#include "qcorr/cluster.hpp"
#include "qcorr/correlations.hpp"
#include "qcorr/io.hpp"
#include "qcorr/pseudopure.hpp"
#include "qcorr/random.hpp"

#ifndef QCORR_VERSION
#define QCORR_VERSION "unknown"
#endif

namespace qcorr {

inline constexpr const char* kToolVersion = QCORR_VERSION;

// ---------------------------------------------------------------------------
// Fits

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
};

/// Least-squares line through (log2 x, log2 y).
inline SlopeFit fit_loglog_slope(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw ArgumentError("fit_loglog_slope: need at least 3 points");
  double sx = 0, sy = 0;
  std::vector<std::pair<double, double>> lp;
  for (auto [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) throw ArgumentError("fit_loglog_slope: values must be positive");
    lp.emplace_back(std::log2(x), std::log2(y));
    sx += lp.back().first;
    sy += lp.back().second;
  }
  const double n = static_cast<double>(lp.size());
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (auto [x, y] : lp) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0) throw ArgumentError("fit_loglog_slope: x values are all equal");
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  // a constant y is fitted exactly
  f.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

// ---------------------------------------------------------------------------
// Configuration and records

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"measures", "dj-sweep", "dqc1", "grover",
                                              "cluster-bound", "ree-bell-mixture", "separability-audit"};
  return names;
}

struct ExperimentConfig {
  std::string experiment;
  Json parameters = Json::object();
  std::string output_path;
  std::uint64_t seed = 0;
  /// Directory against which relative paths in `parameters` are resolved.
  std::string base_dir = ".";
};

/// {"experiment": ..., "seed": ..., "output_path": ..., "parameters": {...}}
inline ExperimentConfig parse_config(const Json& j, const std::string& source = "<config>") {
  if (!j.is_object()) throw ValidationError(source + ": expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    static const std::set<std::string> known{"experiment", "seed", "output_path", "parameters"};
    if (!known.contains(it.key())) throw ValidationError(source + ": field '" + it.key() + "': unknown field");
  }
  ExperimentConfig c;
  if (j.contains("experiment")) {
    if (!j["experiment"].is_string()) throw ValidationError(source + ": field 'experiment': expected a string");
    c.experiment = j["experiment"].get<std::string>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ValidationError(source + ": field 'seed': expected a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("output_path")) {
    if (!j["output_path"].is_string()) throw ValidationError(source + ": field 'output_path': expected a string");
    c.output_path = j["output_path"].get<std::string>();
  }
  if (j.contains("parameters")) {
    if (!j["parameters"].is_object()) throw ValidationError(source + ": field 'parameters': expected an object");
    c.parameters = j["parameters"];
  }
  return c;
}

inline ExperimentConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path + ":" + std::to_string(detail::line_of(text, e.byte)) + ": invalid JSON: " + e.what());
  }
  ExperimentConfig c = parse_config(j, path);
  c.base_dir = std::filesystem::path(path).parent_path().string();
  if (c.base_dir.empty()) c.base_dir = ".";
  return c;
}

struct CsvTable {
  std::string name;
  /// (column, description)
  std::vector<std::pair<std::string, std::string>> columns;
  std::vector<std::vector<std::string>> rows;
};

struct ResultRecord {
  /// Deterministic part: config echo, per-point outputs and summaries.
  Json payload;
  double wall_time_seconds = 0.0;
  std::vector<CsvTable> tables;
};

namespace detail {

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}
inline std::string num(std::uint64_t x) { return std::to_string(x); }
inline std::string num(int x) { return std::to_string(x); }
inline std::string num(bool x) { return x ? "1" : "0"; }

/// Typed access to `parameters` that records the values used (defaults
/// included) and rejects keys nobody asked for.
class Params {
 public:
  Params(const Json& j, std::string experiment) : j_(j), experiment_(std::move(experiment)) {
    if (!j_.is_object()) fail("parameters", "expected an object");
  }

  int integer(const std::string& key, int def, int lo, int hi) {
    int v = def;
    if (j_.contains(key)) {
      if (!j_[key].is_number_integer()) fail(key, "expected an integer");
      v = j_[key].get<int>();
    }
    if (v < lo || v > hi) fail(key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    used_[key] = v;
    return v;
  }

  double real(const std::string& key, double def, double lo, double hi) {
    double v = def;
    if (j_.contains(key)) {
      if (!j_[key].is_number()) fail(key, "expected a number");
      v = j_[key].get<double>();
    }
    if (!(v >= lo && v <= hi)) fail(key, "must lie in [" + num(lo) + ", " + num(hi) + "]");
    used_[key] = v;
    return v;
  }

  std::string text(const std::string& key, const std::string& def) {
    std::string v = def;
    if (j_.contains(key)) {
      if (!j_[key].is_string()) fail(key, "expected a string");
      v = j_[key].get<std::string>();
    }
    used_[key] = v;
    return v;
  }

  /// An integer, a list of integers or {"from": a, "to": b}.
  std::vector<int> integers(const std::string& key, std::vector<int> def, int lo, int hi) {
    std::vector<int> v = std::move(def);
    if (j_.contains(key)) {
      const Json& x = j_[key];
      v.clear();
      if (x.is_number_integer()) {
        v.push_back(x.get<int>());
      } else if (x.is_array()) {
        for (const auto& e : x) {
          if (!e.is_number_integer()) fail(key, "expected integers");
          v.push_back(e.get<int>());
        }
      } else if (x.is_object() && x.contains("from") && x.contains("to") && x["from"].is_number_integer() &&
                 x["to"].is_number_integer()) {
        for (int i = x["from"].get<int>(); i <= x["to"].get<int>(); ++i) v.push_back(i);
      } else {
        fail(key, "expected an integer, a list or {\"from\", \"to\"}");
      }
    }
    if (v.empty()) fail(key, "must not be empty");
    for (int i : v) {
      if (i < lo || i > hi) fail(key, "values must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    used_[key] = v;
    return v;
  }

  /// A number, a list or {"log10_min": a, "log10_max": b, "points": k}.
  std::vector<double> reals(const std::string& key, std::vector<double> def, double lo, double hi) {
    std::vector<double> v = std::move(def);
    if (j_.contains(key)) {
      const Json& x = j_[key];
      v.clear();
      if (x.is_number()) {
        v.push_back(x.get<double>());
      } else if (x.is_array()) {
        for (const auto& e : x) {
          if (!e.is_number()) fail(key, "expected numbers");
          v.push_back(e.get<double>());
        }
      } else if (x.is_object() && x.contains("log10_min") && x.contains("log10_max") && x.contains("points")) {
        if (!x["log10_min"].is_number() || !x["log10_max"].is_number() || !x["points"].is_number_integer())
          fail(key, "log grid needs numeric log10_min, log10_max and an integer points");
        v = log_grid(x["log10_min"].get<double>(), x["log10_max"].get<double>(), x["points"].get<int>(), key);
      } else {
        fail(key, "expected a number, a list or {\"log10_min\", \"log10_max\", \"points\"}");
      }
    }
    if (v.empty()) fail(key, "must not be empty");
    for (double d : v) {
      if (!(d >= lo && d <= hi)) fail(key, "values must lie in [" + num(lo) + ", " + num(hi) + "]");
    }
    used_[key] = v;
    return v;
  }

  std::vector<std::string> texts(const std::string& key, std::vector<std::string> def) {
    std::vector<std::string> v = std::move(def);
    if (j_.contains(key)) {
      const Json& x = j_[key];
      v.clear();
      if (x.is_string()) {
        v.push_back(x.get<std::string>());
      } else if (x.is_array()) {
        for (const auto& e : x) {
          if (!e.is_string()) fail(key, "expected strings");
          v.push_back(e.get<std::string>());
        }
      } else {
        fail(key, "expected a string or a list of strings");
      }
    }
    if (v.empty()) fail(key, "must not be empty");
    used_[key] = v;
    return v;
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  const Json& raw(const std::string& key) const { return j_[key]; }
  void record(const std::string& key, Json v) { used_[key] = std::move(v); }

  /// Throws on keys that were never read; returns the effective parameters.
  Json finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.contains(it.key())) fail(it.key(), "unknown parameter for " + experiment_);
    }
    return used_;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ValidationError("parameters." + key + ": " + msg);
  }

 private:
  std::vector<double> log_grid(double a, double b, int k, const std::string& key) const {
    if (k < 2 || k > 10000 || !(a <= b)) fail(key, "log grid needs 2..10000 points and log10_min <= log10_max");
    std::vector<double> v;
    for (int i = 0; i < k; ++i) v.push_back(std::pow(10.0, a + (b - a) * i / (k - 1)));
    return v;
  }

  const Json& j_;
  std::string experiment_;
  Json used_ = Json::object();
};

inline std::string label(std::initializer_list<std::string> parts) {
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "" : "/") + p;
  return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Experiments

namespace detail {

struct Output {
  Json points = Json::array();
  Json summary = Json::object();
  std::vector<CsvTable> tables;
};

inline Output run_measures(Params& p, const ExperimentConfig& cfg) {
  StateFile sf = [&] {
    if (!p.has("state")) p.fail("state", "missing (path to a state file or an inline state object)");
    const Json& s = p.raw("state");
    if (s.is_string()) {
      std::filesystem::path path(s.get<std::string>());
      if (path.is_relative()) path = std::filesystem::path(cfg.base_dir) / path;
      p.record("state", s);
      return read_state_file(path.string());
    }
    if (s.is_object()) {
      p.record("state", s);
      return parse_state_json(s.dump(), "parameters.state");
    }
    p.fail("state", "expected a path or an inline state object");
  }();
  const int n = sf.density.n_qubits();
  if (n < 2) p.fail("state", "a bipartite state needs at least 2 qubits");
  const Bipartition cut = Bipartition::parse(p.text("cut", "0|rest"), n);
  std::string side = p.text("measured_side", "auto");
  if (side == "auto") side = cut.side_b().size() == 1 ? "b" : "a";
  if (side != "a" && side != "b") p.fail("measured_side", "expected \"a\", \"b\" or \"auto\"");

  CorrelationOptions opt;
  opt.ree.seed = derive_seed(cfg.seed, "measures/ree");
  opt.ree.restarts = p.integer("ree_restarts", opt.ree.restarts, 1, 1000);
  opt.ree.workers = static_cast<unsigned>(p.integer("workers", 1, 1, 256));
  const CorrelationReport rep = correlation_report(sf.density, cut, side == "a" ? Side::A : Side::B, opt);

  Output out;
  Json pt = to_json(rep);
  pt["n_qubits"] = n;
  pt["kind"] = sf.kind;
  out.points.push_back(pt);
  out.summary = {{"mutual_information", rep.mutual_information},
                 {"classical_correlations", rep.classical_correlations},
                 {"discord", rep.discord}};
  return out;
}

inline Output run_dj_sweep(Params& p, const ExperimentConfig& cfg) {
  const auto ns = p.integers("n", {4, 5, 6}, 2, 10);
  const auto eps = p.reals("epsilon", {1e-5, 3e-5, 1e-4, 3e-4, 1e-3}, 0.0, 1.0);
  const double prior = p.real("prior", 0.5, 0.0, 1.0);
  const int oracles = p.integer("oracles", 1, 1, 10000);
  const auto workers = static_cast<unsigned>(p.integer("workers", 1, 1, 256));

  struct Task {
    int n;
    int oracle;
    double eps;
  };
  std::vector<Task> tasks;
  for (int n : ns)
    for (int o = 0; o < oracles; ++o)
      for (double e : eps) tasks.push_back({n, o, e});

  struct Row {
    double chi, d;
  };
  const auto rows = parallel_map(tasks.size(), workers, [&](std::size_t i) {
    const Task& t = tasks[i];
    Rng rng = make_rng(cfg.seed, label({"dj", std::to_string(t.n), std::to_string(t.oracle)}));
    const PhaseOracle f = PhaseOracle::random_balanced(t.n, rng);
    return Row{dj_run(f, t.eps, prior).holevo, discord_formula_first_qubit(t.n, t.eps)};
  });

  Output out;
  CsvTable csv{"sweep",
               {{"n", "register qubits"},
                {"oracle", "balanced oracle index"},
                {"epsilon", "pure fraction of the input"},
                {"holevo", "Holevo information of the balanced/constant output ensemble (bits)"},
                {"discord", "first-qubit discord of the output (bits)"},
                {"ratio", "holevo / discord"},
                {"discord_over_scale", "discord / (2^(n-1) epsilon^2)"}},
               {}};
  Json fits = Json::object();
  double worst_ratio = 0.0;
  for (int n : ns) {
    std::vector<std::pair<double, double>> chi_pts, d_pts;
    double lo = kInfinity, hi = 0.0;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      if (tasks[i].n != n) continue;
      const double e = tasks[i].eps;
      const double ratio = rows[i].d > 0.0 ? rows[i].chi / rows[i].d : 0.0;
      const double scaled = e > 0.0 ? rows[i].d / (std::ldexp(1.0, n - 1) * e * e) : 0.0;
      worst_ratio = std::max(worst_ratio, ratio);
      if (e > 0.0) {
        lo = std::min(lo, scaled);
        hi = std::max(hi, scaled);
      }
      out.points.push_back({{"n", n}, {"oracle", tasks[i].oracle}, {"epsilon", e}, {"holevo", rows[i].chi},
                            {"discord", rows[i].d}, {"ratio", ratio}});
      csv.rows.push_back({num(n), num(tasks[i].oracle), num(e), num(rows[i].chi), num(rows[i].d), num(ratio),
                          num(scaled)});
      if (rows[i].chi > 0.0 && e > 0.0) chi_pts.emplace_back(e, rows[i].chi);
      if (rows[i].d > 0.0 && e > 0.0) d_pts.emplace_back(e, rows[i].d);
    }
    Json f = Json::object();
    if (std::set<double>(eps.begin(), eps.end()).size() >= 3 && chi_pts.size() >= 3 && d_pts.size() >= 3) {
      const SlopeFit fc = fit_loglog_slope(chi_pts);
      const SlopeFit fd = fit_loglog_slope(d_pts);
      f = {{"holevo_slope", fc.slope}, {"holevo_r_squared", fc.r_squared},
           {"discord_slope", fd.slope}, {"discord_r_squared", fd.r_squared}};
    }
    if (hi > 0.0) {
      f["discord_over_scale_min"] = lo;
      f["discord_over_scale_max"] = hi;
    }
    fits[std::to_string(n)] = f;
  }
  out.summary = {{"fits", fits},
                 {"max_holevo_over_discord", worst_ratio},
                 {"classical_baseline", dj_classical_baseline(prior)}};
  out.tables.push_back(std::move(csv));
  return out;
}

inline Output run_dqc1(Params& p, const ExperimentConfig& cfg) {
  const auto ns = p.integers("n", {1, 2, 3, 4, 5, 6}, 1, 11);
  const int count = p.integer("unitaries", 20, 1, 100000);
  const double alpha = p.real("alpha", 1.0, 0.0, 1.0);
  const auto workers = static_cast<unsigned>(p.integer("workers", 1, 1, 256));
  if (alpha == 0.0) p.fail("alpha", "control purity 0 carries no signal");

  struct Row {
    Complex direct, estimate;
    double min_ppt, dist;
  };
  std::vector<std::pair<int, int>> tasks;
  for (int n : ns)
    for (int u = 0; u < count; ++u) tasks.emplace_back(n, u);
  const auto rows = parallel_map(tasks.size(), workers, [&](std::size_t i) {
    const auto [n, u] = tasks[i];
    Rng rng = make_rng(cfg.seed, label({"dqc1", std::to_string(n), std::to_string(u)}));
    const Dqc1Instance inst(n, alpha, haar_unitary(n, rng));
    const Complex direct = inst.target.matrix().trace() / std::ldexp(1.0, n);
    const PptResult ppt = ppt_check(dqc1_output_state(inst), Bipartition::first_vs_rest(n + 1));
    return Row{direct, dqc1_estimate_trace(inst), ppt.min_eigenvalue, dqc1_distinguishability(inst)};
  });

  Output out;
  CsvTable csv{"unitaries",
               {{"n", "register qubits"},
                {"unitary", "Haar unitary index"},
                {"trace_re", "Re tr(U)/2^n, direct"},
                {"trace_im", "Im tr(U)/2^n, direct"},
                {"estimate_re", "Re of the control-qubit estimate"},
                {"estimate_im", "Im of the control-qubit estimate"},
                {"abs_error", "|estimate - direct|"},
                {"min_ppt_eigenvalue", "smallest eigenvalue of the partial transpose across control|register"},
                {"distinguishability", "S(output with pure control || I/2^(n+1)) (bits)"}},
               {}};
  double max_err = 0.0, max_dist_dev = 0.0, min_ppt = kInfinity;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& r = rows[i];
    const double err = std::abs(r.estimate - r.direct);
    max_err = std::max(max_err, err);
    max_dist_dev = std::max(max_dist_dev, std::abs(r.dist - 1.0));
    min_ppt = std::min(min_ppt, r.min_ppt);
    out.points.push_back({{"n", tasks[i].first}, {"unitary", tasks[i].second},
                          {"trace", {r.direct.real(), r.direct.imag()}},
                          {"estimate", {r.estimate.real(), r.estimate.imag()}},
                          {"abs_error", err}, {"min_ppt_eigenvalue", r.min_ppt}, {"distinguishability", r.dist}});
    csv.rows.push_back({num(tasks[i].first), num(tasks[i].second), num(r.direct.real()), num(r.direct.imag()),
                        num(r.estimate.real()), num(r.estimate.imag()), num(err), num(r.min_ppt), num(r.dist)});
  }
  Json pseudo = Json::object();
  for (int n : ns) {
    const PseudopureState pp(std::ldexp(1.0, -n), PureState::basis(n, 0));
    pseudo[std::to_string(n)] = exact_entropy_deficit(pp);
  }
  out.summary = {{"max_abs_error", max_err},
                 {"max_distinguishability_deviation", max_dist_dev},
                 {"min_ppt_eigenvalue", min_ppt},
                 {"control_cut_ppt", min_ppt >= -kInvariantTol},
                 {"pseudopure_distinguishability_at_eps_2^-n", pseudo}};
  out.tables.push_back(std::move(csv));
  return out;
}

inline Output run_grover(Params& p, const ExperimentConfig&) {
  const auto ns = p.integers("n", {2, 3, 4, 5, 6, 7, 8}, 1, 24);
  const auto eps = p.reals("epsilon", {1.0, 0.3, 0.125}, 0.0, 1.0);
  const int target_param = p.integer("target", 0, 0, std::numeric_limits<int>::max());
  const int iters = p.integer("iterations", -1, -1, std::numeric_limits<int>::max());

  Output out;
  CsvTable curve{"curve",
                 {{"n", "register qubits"},
                  {"epsilon", "pure fraction of the input"},
                  {"iteration", "Grover iterations applied"},
                  {"success", "probability of measuring the target"},
                  {"pure_success", "the same for the pure input"},
                  {"textbook", "sin^2((2t+1) theta), theta = arcsin(2^(-n/2))"},
                  {"linearity", "epsilon pure_success + (1-epsilon) 2^-n"}},
                 {}};
  CsvTable audit_csv{"audit",
                     {{"n", "register qubits"},
                      {"epsilon", "pure fraction of the input"},
                      {"iteration", "iteration whose query is examined"},
                      {"delta", "pure weight of the projected two-qubit state"},
                      {"min_ppt_eigenvalue", "smallest eigenvalue of its partial transpose"},
                      {"entangled", "1 when the partial transpose is not positive"}},
                    {}};
  double max_lin = 0.0, max_text = 0.0;
  for (int n : ns) {
    const auto target = static_cast<std::uint64_t>(target_param);
    if (target >= detail::dim_of(n)) p.fail("target", "out of range for n = " + std::to_string(n));
    const GroverInstance inst(n, target, iters >= 0 ? std::optional<int>(iters) : std::nullopt);
    const double theta = std::asin(std::sqrt(std::ldexp(1.0, -n)));
    for (double e : eps) {
      const GroverRun run = grover_run(inst, e);
      double dev_lin = 0.0, dev_text = 0.0;
      for (std::size_t t = 0; t < run.success.size(); ++t) {
        const double text = std::pow(std::sin((2.0 * static_cast<double>(t) + 1.0) * theta), 2);
        const double lin = e * run.pure_success[t] + (1.0 - e) * std::ldexp(1.0, -n);
        dev_lin = std::max(dev_lin, std::abs(run.success[t] - lin));
        dev_text = std::max(dev_text, std::abs(run.pure_success[t] - text));
        curve.rows.push_back({num(n), num(e), num(static_cast<int>(t)), num(run.success[t]),
                              num(run.pure_success[t]), num(text), num(lin)});
      }
      max_lin = std::max(max_lin, dev_lin);
      max_text = std::max(max_text, dev_text);
      Json pt{{"n", n}, {"epsilon", e}, {"iterations", inst.iterations},
              {"final_success", run.success.back()}, {"density_matrix", run.density_matrix},
              {"max_linearity_deviation", dev_lin}, {"max_textbook_deviation", dev_text}};
      if (n <= 10) {
        const GroverAudit a = grover_entanglement_audit(inst, e);
        for (const auto& s : a.steps)
          audit_csv.rows.push_back({num(n), num(e), num(s.iteration), num(s.delta), num(s.min_ppt_eigenvalue),
                                    num(s.entangled)});
        pt["first_entangled_iteration"] =
            a.first_entangled_iteration ? Json(*a.first_entangled_iteration) : Json(nullptr);
        pt["entangled_before_optimal"] = a.entangled_before_optimal;
        pt["efficiency_threshold"] = a.efficiency_threshold;
        pt["meets_efficiency_threshold"] = a.meets_efficiency_threshold;
      }
      out.points.push_back(pt);
    }
  }
  out.summary = {{"max_linearity_deviation", max_lin}, {"max_textbook_deviation", max_text}};
  out.tables.push_back(std::move(curve));
  out.tables.push_back(std::move(audit_csv));
  return out;
}

inline Output run_cluster_bound(Params& p, const ExperimentConfig& cfg) {
  const auto topo_names = p.texts("topologies", {"linear", "ring", "grid:2x2", "grid:2x3", "grid:2x4"});
  const auto ns = p.integers("n", {2, 3, 4, 5, 6, 7, 8}, 1, kMaxGeometricQubits);
  const int sets = p.integer("sets", 100, 0, 100000);
  const auto sizes = p.integers("set_sizes", {1, 4, 16}, 0, 1 << 16);
  GeometricOptions gopt;
  gopt.restarts = p.integer("restarts", gopt.restarts, 1, 10000);
  gopt.workers = static_cast<unsigned>(p.integer("workers", 1, 1, 256));

  std::vector<std::pair<Topology, int>> graphs;
  for (const auto& name : topo_names) {
    const Topology t = Topology::parse(name);
    if (t.kind == TopologyKind::Grid) {
      graphs.emplace_back(t, t.rows * t.cols);
      if (t.rows * t.cols > kMaxGeometricQubits) p.fail("topologies", name + " exceeds 16 qubits");
    } else {
      for (int n : ns) graphs.emplace_back(t, n);
    }
  }

  Output out;
  CsvTable summary_csv{"summary",
                       {{"topology", "graph family"},
                        {"n", "qubits"},
                        {"e_psi", "geometric entanglement -log2 max overlap^2 (bits)"},
                        {"e_per_qubit", "e_psi / n"},
                        {"spread", "max - min of -log2 overlap^2 across restarts (bits)"},
                        {"converged", "1 when the best restart met the overlap tolerance"},
                        {"max_p", "largest single bit-string probability"},
                        {"sets_checked", "random success sets tested"},
                        {"bound_violations", "sets with p_s > N_s 2^-e_psi"}},
                       {}};
  CsvTable restart_csv{"restarts",
                       {{"topology", "graph family"},
                        {"n", "qubits"},
                        {"restart", "restart index"},
                        {"overlap_sq", "best |<product|psi>|^2 reached by this restart"}},
                       {}};
  std::size_t total_violations = 0, total_sets = 0;
  for (const auto& [topo, n] : graphs) {
    const std::string tag = topo.to_string() + "-" + std::to_string(n);
    const GraphState g = build_cluster(n, topo);
    GeometricOptions o = gopt;
    o.seed = derive_seed(cfg.seed, label({"cluster", tag, "geometric"}));
    const GeometricEntanglement ge = geometric_entanglement(g.state(), o);
    Rng rng = make_rng(cfg.seed, label({"cluster", tag, "sets"}));
    std::size_t violations = 0;
    std::size_t checked = 0;
    double worst_margin = kInfinity;
    for (int s = 0; s < sets; ++s) {
      const std::size_t size = std::min<std::size_t>(static_cast<std::size_t>(sizes[static_cast<std::size_t>(s) % sizes.size()]),
                                                     detail::dim_of(n));
      const SuccessSet set = SuccessSet::random(n, size, rng);
      const SuccessBound b = success_bound(g, set, ge.value);
      ++checked;
      violations += !b.holds;
      if (size > 0) worst_margin = std::min(worst_margin, b.bound - b.p_success);
    }
    const double max_p = g.state().amplitudes().cwiseAbs2().maxCoeff();
    total_violations += violations;
    total_sets += checked;
    Json pt = to_json(ge);
    pt["topology"] = topo.to_string();
    pt["n"] = n;
    pt["e_per_qubit"] = ge.value / n;
    pt["max_bitstring_probability"] = max_p;
    pt["sets_checked"] = checked;
    pt["bound_violations"] = violations;
    pt["required_outcomes_c1"] = required_outcomes(ge.value, 1.0);
    if (worst_margin < kInfinity) pt["min_bound_margin"] = worst_margin;
    out.points.push_back(pt);
    summary_csv.rows.push_back({topo.to_string(), num(n), num(ge.value), num(ge.value / n), num(ge.spread),
                                num(ge.converged), num(max_p), num(static_cast<std::uint64_t>(checked)),
                                num(static_cast<std::uint64_t>(violations))});
    for (std::size_t r = 0; r < ge.restart_overlaps.size(); ++r)
      restart_csv.rows.push_back({topo.to_string(), num(n), num(static_cast<int>(r)), num(ge.restart_overlaps[r])});
  }
  out.summary = {{"sets_checked", total_sets}, {"bound_violations", total_violations}};
  out.tables.push_back(std::move(summary_csv));
  out.tables.push_back(std::move(restart_csv));
  return out;
}

/// p |Psi+><Psi+| + (1-p) |Psi-><Psi-|
inline QuantumState bell_mixture(double p) {
  const double s = 1.0 / std::sqrt(2.0);
  Vector plus = Vector::Zero(4), minus = Vector::Zero(4);
  plus << 0, s, s, 0;
  minus << 0, s, -s, 0;
  Matrix m = p * plus * plus.adjoint() + (1.0 - p) * minus * minus.adjoint();
  return QuantumState::from_trusted(2, std::move(m));
}

inline Output run_ree_bell_mixture(Params& p, const ExperimentConfig& cfg) {
  const auto ps = p.reals("p", {0.1, 0.25, 0.5, 0.75, 0.9}, 0.0, 1.0);
  ReeOptions opt;
  opt.restarts = p.integer("restarts", opt.restarts, 1, 10000);
  opt.terms = p.integer("terms", opt.terms, 4, 256);
  const auto workers = static_cast<unsigned>(p.integer("workers", 1, 1, 256));

  const auto results = parallel_map(ps.size(), workers, [&](std::size_t i) {
    ReeOptions o = opt;
    o.seed = derive_seed(cfg.seed, label({"ree", std::to_string(i)}));
    return relative_entropy_of_entanglement(bell_mixture(ps[i]), Bipartition::first_vs_rest(2), o);
  });

  Output out;
  CsvTable csv{"ree",
               {{"p", "weight of Psi+ in p Psi+ + (1-p) Psi-"},
                {"ree", "numerical relative entropy of entanglement (bits)"},
                {"closed_form", "1 + p log2 p + (1-p) log2 (1-p)"},
                {"abs_error", "|ree - closed_form|"},
                {"restart_spread", "max - min of the restart values (bits)"},
                {"converged", "1 when the best restart met its tolerance"}},
               {}};
  double max_err = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const ReeResult& r = results[i];
    const double exact = 1.0 - binary_entropy(ps[i]);
    const double err = std::abs(r.value - exact);
    const auto [lo, hi] = std::minmax_element(r.restart_values.begin(), r.restart_values.end());
    const double spread = r.restart_values.empty() ? 0.0 : *hi - *lo;
    max_err = std::max(max_err, err);
    out.points.push_back({{"p", ps[i]}, {"ree", r.value}, {"closed_form", exact}, {"abs_error", err},
                          {"restart_spread", spread}, {"converged", r.converged}, {"evals", r.evals},
                          {"ansatz", to_json(r.ansatz)}});
    csv.rows.push_back({num(ps[i]), num(r.value), num(exact), num(err), num(spread), num(r.converged)});
  }
  out.summary = {{"max_abs_error", max_err}};
  out.tables.push_back(std::move(csv));
  return out;
}

inline Output run_separability_audit(Params& p, const ExperimentConfig& cfg) {
  const auto ns = p.integers("n", {2, 3}, 2, 5);
  const int count = p.integer("unitaries", 100, 1, 100000);
  const bool fixed_eps = p.has("epsilon");
  const double eps_param = fixed_eps ? p.real("epsilon", 0.0, 0.0, 1.0) : 0.0;
  const double fraction = fixed_eps ? 0.0 : p.real("threshold_fraction", 0.9, 0.0, 1000.0);

  Output out;
  CsvTable csv{"audit",
               {{"n", "qubits"},
                {"unitary_index", "Haar unitary index"},
                {"cut", "bipartition, qubits of side A | side B"},
                {"min_ppt_eigenvalue", "smallest eigenvalue of the partial transpose of U rho U^dagger"}},
               {}};
  std::size_t total = 0;
  for (int n : ns) {
    const double thr = braunstein_threshold(n).value;
    const double e = fixed_eps ? eps_param : std::min(1.0, fraction * thr);
    std::vector<Unitary> us;
    for (int u = 0; u < count; ++u) {
      Rng rng = make_rng(cfg.seed, label({"audit", std::to_string(n), std::to_string(u)}));
      us.push_back(haar_unitary(n, rng));
    }
    const SeparabilityAudit a = separability_audit(PseudopureState(e, PureState::basis(n, 0)), us);
    double min_eig = kInfinity;
    for (const auto& entry : a.entries) {
      min_eig = std::min(min_eig, entry.min_ppt_eigenvalue);
      csv.rows.push_back({num(n), num(static_cast<std::uint64_t>(entry.unitary_index)), entry.cut,
                          num(entry.min_ppt_eigenvalue)});
    }
    total += a.violations;
    out.points.push_back({{"n", n}, {"epsilon", e}, {"braunstein_threshold", thr},
                          {"below_threshold", e < thr}, {"checks", a.entries.size()},
                          {"violations", a.violations}, {"min_ppt_eigenvalue", min_eig}});
  }
  out.summary = {{"violations", total}};
  out.tables.push_back(std::move(csv));
  return out;
}

}  // namespace detail

/// Validates the configuration, runs the experiment and returns its record.
/// Nothing is written to disk.
inline ResultRecord run(const ExperimentConfig& cfg) {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), cfg.experiment) == names.end())
    throw ValidationError("unknown experiment '" + cfg.experiment + "'");
  const auto start = std::chrono::steady_clock::now();
  detail::Params p(cfg.parameters, cfg.experiment);
  detail::Output o;
  if (cfg.experiment == "measures") o = detail::run_measures(p, cfg);
  else if (cfg.experiment == "dj-sweep") o = detail::run_dj_sweep(p, cfg);
  else if (cfg.experiment == "dqc1") o = detail::run_dqc1(p, cfg);
  else if (cfg.experiment == "grover") o = detail::run_grover(p, cfg);
  else if (cfg.experiment == "cluster-bound") o = detail::run_cluster_bound(p, cfg);
  else if (cfg.experiment == "ree-bell-mixture") o = detail::run_ree_bell_mixture(p, cfg);
  else o = detail::run_separability_audit(p, cfg);
  const Json effective = p.finish();

  ResultRecord rec;
  rec.payload = {{"tool_version", kToolVersion},
                 {"experiment", cfg.experiment},
                 {"seed", cfg.seed},
                 {"parameters", effective},
                 {"points", std::move(o.points)},
                 {"summary", std::move(o.summary)}};
  rec.tables = std::move(o.tables);
  rec.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

inline std::string to_csv(const CsvTable& t) {
  std::string s;
  for (const auto& [name, desc] : t.columns) s += "# " + name + ": " + desc + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i].first;
  s += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + row[i];
    s += "\n";
  }
  return s;
}

/// Writes <dir>/<experiment>.json and <dir>/<experiment>_<table>.csv.
/// Returns the paths written.
inline std::vector<std::string> write_record(const ResultRecord& rec, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ArgumentError("output path '" + dir + "' is not writable: " + ec.message());
  const std::string name = rec.payload.at("experiment").get<std::string>();
  std::vector<std::string> written;
  auto put = [&](const fs::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArgumentError("output path '" + path.string() + "' is not writable");
    out << body;
    if (!out) throw ArgumentError("failed writing '" + path.string() + "'");
    written.push_back(path.string());
  };
  const Json doc{{"payload", rec.payload}, {"wall_time_seconds", rec.wall_time_seconds}};
  put(fs::path(dir) / (name + ".json"), doc.dump(2) + "\n");
  for (const auto& t : rec.tables) put(fs::path(dir) / (name + "_" + t.name + ".csv"), to_csv(t));
  return written;
}

}  // namespace qcorr

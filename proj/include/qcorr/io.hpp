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

// io.hpp
// JSON state files and JSON forms of the result types.
//
// State file:
//   {"n_qubits": k, "kind": "pure" | "density", "data": [[re, im], ...]}
// with amplitudes in basis order for pure states and entries in row-major
// order for density matrices.

#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "qcorr/cluster.hpp"
#include "qcorr/correlations.hpp"
#include "qcorr/qstate.hpp"

namespace qcorr {

using Json = nlohmann::json;

struct StateFile {
  std::string kind;  // "pure" or "density"
  QuantumState density;
  std::optional<PureState> pure;
};

namespace detail {

inline std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < text.size() && i < byte; ++i) line += text[i] == '\n';
  return line;
}

[[noreturn]] inline void state_error(const std::string& source, const std::string& field, const std::string& msg) {
  throw ValidationError(source + ": field '" + field + "': " + msg);
}

inline Complex parse_entry(const Json& e, const std::string& source, std::size_t i) {
  const std::string field = "data[" + std::to_string(i) + "]";
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
    state_error(source, field, "expected [re, im]");
  return {e[0].get<double>(), e[1].get<double>()};
}

}  // namespace detail

/// Parses and validates a state file. Syntax errors report the line, invalid
/// content reports the field.
inline StateFile parse_state_json(const std::string& text, const std::string& source = "<state>") {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(source + ":" + std::to_string(detail::line_of(text, e.byte)) + ": invalid JSON: " + e.what());
  }
  if (!j.is_object()) detail::state_error(source, "<root>", "expected an object");
  for (const char* key : {"n_qubits", "kind", "data"}) {
    if (!j.contains(key)) detail::state_error(source, key, "missing");
  }
  if (!j["n_qubits"].is_number_integer()) detail::state_error(source, "n_qubits", "expected an integer");
  if (!j["kind"].is_string()) detail::state_error(source, "kind", "expected \"pure\" or \"density\"");
  if (!j["data"].is_array()) detail::state_error(source, "data", "expected an array of [re, im] pairs");

  const auto n = j["n_qubits"].get<long long>();
  const std::string kind = j["kind"].get<std::string>();
  if (kind != "pure" && kind != "density") detail::state_error(source, "kind", "expected \"pure\" or \"density\"");
  const int cap = kind == "pure" ? Limits{}.max_pure_qubits : Limits{}.max_density_qubits;
  if (n < 1 || n > cap)
    detail::state_error(source, "n_qubits", "must lie in [1, " + std::to_string(cap) + "], got " + std::to_string(n));
  const std::size_t dim = detail::dim_of(static_cast<int>(n));
  const auto& data = j["data"];
  const std::size_t expected = kind == "pure" ? dim : dim * dim;
  if (data.size() != expected)
    detail::state_error(source, "data",
                        "expected " + std::to_string(expected) + " entries, got " + std::to_string(data.size()));

  try {
    if (kind == "pure") {
      Vector v(static_cast<Eigen::Index>(dim));
      for (std::size_t i = 0; i < dim; ++i) v(static_cast<Eigen::Index>(i)) = detail::parse_entry(data[i], source, i);
      PureState psi(static_cast<int>(n), std::move(v));
      QuantumState rho = QuantumState::from_pure(psi);
      return StateFile{kind, std::move(rho), std::move(psi)};
    }
    Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < expected; ++i)
      m(static_cast<Eigen::Index>(i / dim), static_cast<Eigen::Index>(i % dim)) = detail::parse_entry(data[i], source, i);
    return StateFile{kind, QuantumState(static_cast<int>(n), std::move(m)), std::nullopt};
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    if (what.starts_with(source)) throw;
    detail::state_error(source, "data", what);
  }
}

inline StateFile read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open state file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_state_json(ss.str(), path);
}

namespace detail {
inline Json complex_array(const Eigen::Ref<const Vector>& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back({v(i).real(), v(i).imag()});
  return a;
}
}  // namespace detail

inline Json to_json(const PureState& psi) {
  return Json{{"n_qubits", psi.n_qubits()}, {"kind", "pure"}, {"data", detail::complex_array(psi.amplitudes())}};
}

inline Json to_json(const QuantumState& rho) {
  const Matrix rows = rho.matrix().transpose();  // column-major storage of the transpose is row-major
  const Eigen::Map<const Vector> flat(rows.data(), rows.size());
  return Json{{"n_qubits", rho.n_qubits()}, {"kind", "density"}, {"data", detail::complex_array(flat)}};
}

inline Json to_json(const BlochMeasurement& m) { return Json{{"theta", m.theta}, {"phi", m.phi}}; }

inline Json to_json(const CorrelationReport& r) {
  Json j{{"mutual_information", r.mutual_information},
         {"classical_correlations", r.classical_correlations},
         {"discord", r.discord},
         {"entanglement_source", to_string(r.entanglement_source)},
         {"measurement", to_json(r.measurement)},
         {"cut", r.cut},
         {"measured_side", r.measured_side},
         {"optimizer_evals", r.optimizer_evals},
         {"optimizer_converged", r.optimizer_converged}};
  j["entanglement_ree"] = r.entanglement_ree ? Json(*r.entanglement_ree) : Json(nullptr);
  return j;
}

inline Json to_json(const SeparableAnsatz& a) {
  Json terms = Json::array();
  for (std::size_t k = 0; k < a.k_terms(); ++k) {
    terms.push_back({{"weight", a.weights[k]},
                     {"a", detail::complex_array(a.local_a[k].amplitudes())},
                     {"b", detail::complex_array(a.local_b[k].amplitudes())}});
  }
  return Json{{"terms", terms}};
}

inline Json to_json(const GeometricEntanglement& g) {
  Json sites = Json::array();
  for (const auto& s : g.closest_product) sites.push_back(detail::complex_array(Vector(s)));
  return Json{{"value", g.value},
              {"max_overlap_sq", g.max_overlap_sq},
              {"closest_product", sites},
              {"restarts_used", g.restarts_used},
              {"spread", g.spread},
              {"converged", g.converged},
              {"sweeps", g.sweeps}};
}

}  // namespace qcorr

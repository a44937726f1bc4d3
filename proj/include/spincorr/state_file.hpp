#pragma once

// spincorr-state/1 files:
//
//   { "format": "spincorr-state/1", "local_dim": d, "parties": n,
//     "kind": "pure" | "density",
//     "data": [...] }
//
// pure: 2 d^n reals, (re, im) interleaved, lexicographic basis order.
// density: 2 d^{2n} reals, row-major.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spincorr/errors.hpp"
#include "spincorr/linalg.hpp"
#include "spincorr/states.hpp"

namespace spincorr {

inline constexpr const char* kStateFormat = "spincorr-state/1";

enum class StateKind { automatic, pure, density };

namespace detail {

// State vector of a rank-one density matrix, phase fixed so the largest
// amplitude is real and positive.
inline std::vector<Complex> amplitudes_of_pure(const ComplexMatrix& rho) {
  std::size_t pivot = 0;
  for (std::size_t i = 1; i < rho.rows(); ++i) {
    if (rho(i, i).real() > rho(pivot, pivot).real()) pivot = i;
  }
  const double scale = 1.0 / std::sqrt(rho(pivot, pivot).real());
  std::vector<Complex> psi(rho.rows());
  for (std::size_t i = 0; i < rho.rows(); ++i) psi[i] = rho(i, pivot) * scale;
  return psi;
}

}  // namespace detail

inline nlohmann::json state_to_json(const QuantumState& s,
                                    StateKind kind = StateKind::automatic) {
  if (kind == StateKind::automatic) {
    kind = std::abs(purity(s) - 1.0) <= 1e-12 ? StateKind::pure
                                              : StateKind::density;
  }
  nlohmann::json j;
  j["format"] = kStateFormat;
  j["local_dim"] = s.local_dim();
  j["parties"] = s.parties();
  std::vector<double> data;
  if (kind == StateKind::pure) {
    j["kind"] = "pure";
    for (const auto& a : detail::amplitudes_of_pure(s.density())) {
      data.push_back(a.real());
      data.push_back(a.imag());
    }
  } else {
    j["kind"] = "density";
    for (const auto& z : s.density().entries()) {
      data.push_back(z.real());
      data.push_back(z.imag());
    }
  }
  j["data"] = std::move(data);
  return j;
}

/// Parses and validates a state document. Every failure is an
/// InvalidStateError whose message names the violated field or invariant.
inline QuantumState state_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidStateError("format: document is not an object");
  auto field = [&j](const char* name) -> const nlohmann::json& {
    if (!j.contains(name)) {
      throw InvalidStateError(std::string("format: missing field '") + name + "'");
    }
    return j.at(name);
  };
  if (field("format") != kStateFormat) {
    throw InvalidStateError("format: expected \"" + std::string(kStateFormat) +
                            "\"");
  }
  const auto& dim_field = field("local_dim");
  const auto& parties_field = field("parties");
  if (!dim_field.is_number_unsigned() || !parties_field.is_number_unsigned()) {
    throw InvalidStateError("format: local_dim and parties must be positive integers");
  }
  const auto d = dim_field.get<std::size_t>();
  const auto n = parties_field.get<std::size_t>();
  if (d < 2) throw InvalidStateError("local_dim: must be at least 2");
  if (n < 1 || n > kMaxParties) throw InvalidStateError("parties: must be in 1..4");
  const std::size_t dim = ipow(d, n);

  const auto& kind_field = field("kind");
  const auto& data_field = field("data");
  if (!data_field.is_array()) throw InvalidStateError("format: data must be an array");
  std::vector<double> data;
  data.reserve(data_field.size());
  for (const auto& x : data_field) {
    if (!x.is_number()) throw InvalidStateError("format: data holds a non-number");
    data.push_back(x.get<double>());
  }
  auto complex_at = [&data](std::size_t i) {
    return Complex(data[2 * i], data[2 * i + 1]);
  };

  if (kind_field == "pure") {
    if (data.size() != 2 * dim) {
      throw InvalidStateError("dimension: pure data needs " +
                              std::to_string(2 * dim) + " reals, got " +
                              std::to_string(data.size()));
    }
    std::vector<Complex> psi(dim);
    for (std::size_t i = 0; i < dim; ++i) psi[i] = complex_at(i);
    QuantumState s = QuantumState::from_amplitudes(d, n, psi);
    s.validate();
    return s;
  }
  if (kind_field == "density") {
    if (data.size() != 2 * dim * dim) {
      throw InvalidStateError("dimension: density data needs " +
                              std::to_string(2 * dim * dim) + " reals, got " +
                              std::to_string(data.size()));
    }
    std::vector<Complex> entries(dim * dim);
    for (std::size_t i = 0; i < dim * dim; ++i) entries[i] = complex_at(i);
    return QuantumState::from_density(d, n, ComplexMatrix(dim, dim, std::move(entries)));
  }
  throw InvalidStateError("format: kind must be \"pure\" or \"density\"");
}

inline QuantumState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidStateError("file: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidStateError("format: '" + path + "' is not valid JSON: " + e.what());
  }
  return state_from_json(j);
}

inline void save_state(const QuantumState& s, const std::string& path,
                       StateKind kind = StateKind::automatic) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << state_to_json(s, kind).dump(2) << '\n';
}

}  // namespace spincorr

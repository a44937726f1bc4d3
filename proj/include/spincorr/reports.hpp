#pragma once

// JSON views of the analysis results. Doubles are written with the shortest
// representation that round-trips exactly.

#include <string>

#include <nlohmann/json.hpp>

#include "spincorr/bloch.hpp"
#include "spincorr/ensemble.hpp"
#include "spincorr/gme.hpp"
#include "spincorr/identities.hpp"
#include "spincorr/realign.hpp"

namespace spincorr {

inline nlohmann::json to_json(const Spectrum& s) { return s.values; }

inline nlohmann::json tensor_report(const BlochDecomposition& dec) {
  nlohmann::json tensors = nlohmann::json::array();
  for (const auto& t : dec.tensors()) {
    nlohmann::json entry{{"subset", t.label()},
                         {"squared_norm", t.squared_norm()},
                         {"entries", t.entries()}};
    if (t.order() == 2) entry["isotropic_strength"] = isotropic_strength(t).value;
    tensors.push_back(std::move(entry));
  }
  return {{"local_dim", dec.local_dim()},
          {"parties", dec.parties()},
          {"basis_order", "symmetric, antisymmetric, diagonal"},
          {"tensors", std::move(tensors)}};
}

/// Pair isotropic strengths with R Rᵗ spectra, plus every ‖R^S‖².
inline nlohmann::json strengths_report(const BlochDecomposition& dec) {
  nlohmann::json pairs = nlohmann::json::array();
  nlohmann::json norms = nlohmann::json::object();
  double pair_sum = 0.0;
  for (const auto& t : dec.tensors()) {
    norms[t.label()] = t.squared_norm();
    if (t.order() != 2) continue;
    const IsotropicStrength iso = isotropic_strength(t);
    pair_sum += iso.value;
    pairs.push_back({{"subset", t.label()},
                     {"isotropic_strength", iso.value},
                     {"squared_norm", iso.squared_norm},
                     {"eigenvalues", to_json(iso.spectrum)}});
  }
  return {{"local_dim", dec.local_dim()},
          {"parties", dec.parties()},
          {"pairs", std::move(pairs)},
          {"isotropic_strength_sum", pair_sum},
          {"squared_norms", std::move(norms)}};
}

inline nlohmann::json to_json(const IdentityRecord& r) {
  nlohmann::json j{{"name", r.name},
                   {"kind", to_string(r.kind)},
                   {"lhs", r.lhs},
                   {"rhs", r.rhs},
                   {"residual", r.residual},
                   {"applicable", r.applicable}};
  j["pass"] = r.pass ? nlohmann::json(*r.pass) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json to_json(const IdentityReport& report) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : report.records) records.push_back(to_json(r));
  return {{"local_dim", report.local_dim},
          {"parties", report.parties},
          {"purity", report.purity},
          {"pure", report.pure},
          {"tolerance", report.tolerance},
          {"all_pass", report.all_pass()},
          {"records", std::move(records)}};
}

inline nlohmann::json to_json(const KyFanProfile& p) {
  return {{"singular_values", to_json(p.singular_values)},
          {"kyfan", p.partial_sums}};
}

inline nlohmann::json to_json(const GmeVerdict& v) {
  nlohmann::json table = nlohmann::json::array();
  for (const auto& row : v.table) {
    table.push_back({{"k", row.k},
                     {"m22", row.m22},
                     {"threshold", row.threshold},
                     {"margin", row.margin}});
  }
  nlohmann::json splits = nlohmann::json::array();
  for (std::size_t i = 0; i < v.profiles.splits.size(); ++i) {
    nlohmann::json s = to_json(v.profiles.profiles[i]);
    s["split"] = v.profiles.splits[i].label();
    splits.push_back(std::move(s));
  }
  return {{"detected", v.detected},
          {"best_k", v.best_k},
          {"best_margin", v.best().margin},
          {"tolerance", v.tolerance},
          {"table", std::move(table)},
          {"splits", std::move(splits)}};
}

inline nlohmann::json to_json(const NoiseScanResult& r) {
  nlohmann::json per_k = nlohmann::json::array();
  for (const auto& row : r.per_k) {
    per_k.push_back({{"k", row.k},
                     {"m22", row.m22},
                     {"threshold", row.threshold},
                     {"p_critical", row.p_critical}});
  }
  nlohmann::json j{{"method", to_string(r.method)},
                   {"p_star", r.p_star},
                   {"best_k", r.best_k},
                   {"resolution", r.resolution},
                   {"consistent", r.consistent()},
                   {"per_k", std::move(per_k)}};
  if (r.p_star_bisection) {
    j[r.method == NoiseScanMethod::closed_form ? "p_star_bisection"
                                               : "p_star_closed_form"] =
        *r.p_star_bisection;
  }
  return j;
}

inline nlohmann::json to_json(const NoiseClaimAudit& a) {
  return {{"claimed_p", a.claimed},
          {"computed_p_star", a.scan.p_star},
          {"bisection_p_star", a.scan.p_star_bisection
                                   ? nlohmann::json(*a.scan.p_star_bisection)
                                   : nlohmann::json(nullptr)},
          {"internally_consistent", a.scan.consistent()},
          {"detected_without_noise", a.detected_without_noise},
          {"claim_reproduced", a.reproduced},
          {"product_splits", a.product_splits},
          {"note", a.note}};
}

inline nlohmann::json to_json(const SeparabilityBounds& b) {
  nlohmann::json j{{"local_dim", b.local_dim},
                   {"k", b.k},
                   {"fully_separable", b.fully_separable},
                   {"one_vs_three", b.one_vs_three},
                   {"two_two_aligned", b.two_two_aligned},
                   {"two_two_cross", b.two_two_cross}};
  if (b.two_two_cross_qubit) j["two_two_cross_qubit"] = *b.two_two_cross_qubit;
  return j;
}

inline nlohmann::json to_json(const EnsembleSummary& s) {
  nlohmann::json ids = nlohmann::json::array();
  for (const auto& st : s.identities) {
    ids.push_back({{"name", st.name},
                   {"kind", to_string(st.kind)},
                   {"worst_residual", st.applicable > 0 ? nlohmann::json(st.worst_residual)
                                                        : nlohmann::json(nullptr)},
                   {"applicable", st.applicable},
                   {"not_applicable", st.not_applicable},
                   {"violations", st.violations}});
  }
  return {{"local_dim", s.config.local_dim},
          {"parties", s.config.parties},
          {"samples", s.config.samples},
          {"seed", s.config.seed},
          {"rank", s.config.rank},
          {"tolerance", s.config.tolerance},
          {"violations", s.violations()},
          {"identities", std::move(ids)}};
}

}  // namespace spincorr

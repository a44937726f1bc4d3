#pragma once

// Residual checks for the isotropic-strength identities and bounds of three-
// and four-party states.
//
// Notation in record names: a², b², c², d² are the squared Bloch-vector norms
// ‖R^A‖², ..., s_XY = ‖R^XY‖² / (d²-1), T_XYZ = ‖R^XYZ‖².

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "spincorr/bloch.hpp"
#include "spincorr/errors.hpp"
#include "spincorr/states.hpp"

namespace spincorr {

inline constexpr double kIdentityTolerance = 1e-9;
/// States with purity above 1 - 1e-8 count as pure.
inline constexpr double kPurityGate = 1.0 - 1e-8;

enum class CheckKind { equality, inequality, informational };

inline const char* to_string(CheckKind kind) {
  switch (kind) {
    case CheckKind::equality: return "equality";
    case CheckKind::inequality: return "inequality";
    case CheckKind::informational: return "conjecture";
  }
  return "?";
}

/// One identity (lhs = rhs) or inequality (lhs <= rhs).
struct IdentityRecord {
  std::string name;
  CheckKind kind;
  double lhs;
  double rhs;
  double residual;  // lhs - rhs
  bool applicable;
  /// Verdict; empty when the check is not applicable.
  std::optional<bool> pass;
};

struct IdentityReport {
  std::size_t local_dim;
  std::size_t parties;
  double purity;
  bool pure;
  double tolerance;
  std::vector<IdentityRecord> records;

  /// All applicable equality/inequality records pass. Informational records
  /// never fail a report.
  bool all_pass() const {
    for (const auto& r : records) {
      if (r.kind == CheckKind::informational) continue;
      if (r.pass.has_value() && !*r.pass) return false;
    }
    return true;
  }

  const IdentityRecord* find(std::string_view name) const {
    for (const auto& r : records)
      if (r.name == name) return &r;
    return nullptr;
  }
};

namespace detail {

class ReportBuilder {
 public:
  ReportBuilder(IdentityReport& report) : report_(report) {}

  void equality(std::string name, double lhs, double rhs, bool applicable) {
    add(std::move(name), CheckKind::equality, lhs, rhs, applicable);
  }
  void inequality(std::string name, double lhs, double rhs, bool applicable) {
    add(std::move(name), CheckKind::inequality, lhs, rhs, applicable);
  }
  void informational(std::string name, double lhs, double rhs, bool applicable) {
    add(std::move(name), CheckKind::informational, lhs, rhs, applicable);
  }

 private:
  void add(std::string name, CheckKind kind, double lhs, double rhs,
           bool applicable) {
    const double residual = lhs - rhs;
    std::optional<bool> pass;
    if (applicable) {
      const double tol = report_.tolerance;
      pass = kind == CheckKind::equality ? std::abs(residual) <= tol
                                         : residual <= tol;
    }
    report_.records.push_back(
        IdentityRecord{std::move(name), kind, lhs, rhs, residual, applicable, pass});
  }

  IdentityReport& report_;
};

}  // namespace detail

/// Relations among the Bloch vectors, pair strengths and ‖R^ABC‖² of a
/// three-party state. Pure-state identities are evaluated but reported not
/// applicable unless purity > 1 - 1e-8.
inline IdentityReport check_tripartite(const QuantumState& s,
                                       double tol = kIdentityTolerance) {
  if (s.parties() != 3) {
    throw DomainError("check_tripartite needs a 3-party state, got " +
                      std::to_string(s.parties()));
  }
  const BlochDecomposition dec = full_decomposition(s);
  const double d = static_cast<double>(s.local_dim());
  const double D = d * d - 1.0;

  IdentityReport report{s.local_dim(), 3, purity(s), false, tol, {}};
  report.pure = report.purity > kPurityGate;
  const bool pure = report.pure;
  detail::ReportBuilder add(report);

  const double a2 = dec.strength("A");
  const double b2 = dec.strength("B");
  const double c2 = dec.strength("C");
  const double t3 = dec.strength("ABC");
  const double s_ab = dec.strength("AB") / D;
  const double s_ac = dec.strength("AC") / D;
  const double s_bc = dec.strength("BC") / D;
  const double sum = s_ab + s_ac + s_bc;

  // Each pair strength from the single-party norms.
  add.equality("siso_AB", s_ab, (d * (1 + c2) - 1 - a2 - b2) / D, pure);
  add.equality("siso_BC", s_bc, (d * (1 + a2) - 1 - b2 - c2) / D, pure);
  add.equality("siso_AC", s_ac, (d * (1 + b2) - 1 - a2 - c2) / D, pure);

  struct Pair {
    const char* name;
    double norm2;
    double third2;
  };
  for (const Pair& p : {Pair{"AB", dec.strength("AB"), c2},
                        Pair{"AC", dec.strength("AC"), b2},
                        Pair{"BC", dec.strength("BC"), a2}}) {
    add.inequality(std::string("pair_strength_bound_") + p.name, p.norm2,
                   d - 1 + d * p.third2, pure);
    add.inequality(std::string("pair_strength_cap_") + p.name,
                   d - 1 + d * p.third2, D, pure);
    // ‖R^XY‖² <= d²-1 follows from tr(ρ_XY²) <= 1 for any state.
    add.inequality(std::string("pair_strength_") + p.name + "_max", p.norm2, D,
                   true);
  }

  add.equality("isosum", sum, (3 * d - 3 + (d - 2) * (a2 + b2 + c2)) / D, pure);
  add.equality("invariant_sum", a2 + b2 + c2 + t3 / (d - 1), (d + 2) * (d - 1),
               pure);
  add.equality("tradeoff",
               sum, d - 1 - (d - 2) / ((d + 1) * (d - 1) * (d - 1)) * t3, pure);

  const double deficit_a = a2 / (d - 1) - s_bc;
  const double deficit_b = b2 / (d - 1) - s_ac;
  const double deficit_c = c2 / (d - 1) - s_ab;
  add.equality("equal_deficit_A_B", deficit_a, deficit_b, pure);
  add.equality("equal_deficit_B_C", deficit_b, deficit_c, pure);

  add.inequality("isosum_lower_bound", 3 / (d + 1), sum, pure);
  add.inequality("isosum_upper_bound", sum, d - 1, true);
  add.inequality("tripartite_strength_bound", t3, (d - 1) * (d - 1) * (d + 2),
                 true);
  return report;
}

/// Relations among the strengths of a four-party state.
inline IdentityReport check_quadripartite(const QuantumState& s,
                                          double tol = kIdentityTolerance) {
  if (s.parties() != 4) {
    throw DomainError("check_quadripartite needs a 4-party state, got " +
                      std::to_string(s.parties()));
  }
  const BlochDecomposition dec = full_decomposition(s);
  const double d = static_cast<double>(s.local_dim());
  const double D = d * d - 1.0;
  const bool qubits = s.local_dim() == 2;

  IdentityReport report{s.local_dim(), 4, purity(s), false, tol, {}};
  report.pure = report.purity > kPurityGate;
  const bool pure = report.pure;
  detail::ReportBuilder add(report);

  const double a2 = dec.strength("A");
  const double b2 = dec.strength("B");
  const double c2 = dec.strength("C");
  const double d2 = dec.strength("D");
  const double bloch_sum = a2 + b2 + c2 + d2;
  auto s_iso = [&](const char* xy) { return dec.strength(xy) / D; };
  const double s_ab = s_iso("AB"), s_ac = s_iso("AC"), s_ad = s_iso("AD");
  const double s_bc = s_iso("BC"), s_bd = s_iso("BD"), s_cd = s_iso("CD");
  const double t_abc = dec.strength("ABC");
  const double t_abd = dec.strength("ABD");
  const double t_acd = dec.strength("ACD");
  const double t_bcd = dec.strength("BCD");
  const double t_abcd = dec.strength("ABCD");
  const double six = s_ab + s_ac + s_ad + s_bc + s_bd + s_cd;

  // Complementary pairs.
  add.equality("pair_difference_AB_CD", s_ab - s_cd, (-(a2 + b2) + c2 + d2) / D,
               pure);
  add.equality("pair_difference_AC_BD", s_ac - s_bd, (-(a2 + c2) + b2 + d2) / D,
               pure);
  add.equality("pair_difference_AD_BC", s_ad - s_bc, (-(a2 + d2) + b2 + c2) / D,
               pure);

  // Pair strengths inside each triple against the excluded party.
  auto triple_rhs = [&](double excluded2, double others2, double t3) {
    return (d * d * (1 + excluded2) - (1 + others2) - t3) / D;
  };
  add.equality("triple_sum_ABC", s_bc + s_ac + s_ab,
               triple_rhs(d2, a2 + b2 + c2, t_abc), pure);
  add.equality("triple_sum_ACD", s_cd + s_ac + s_ad,
               triple_rhs(b2, a2 + c2 + d2, t_acd), pure);
  add.equality("triple_sum_BCD", s_bc + s_cd + s_bd,
               triple_rhs(a2, b2 + c2 + d2, t_bcd), pure);
  add.equality("triple_sum_ABD", s_ab + s_ad + s_bd,
               triple_rhs(c2, a2 + b2 + d2, t_abd), pure);
  // Each triple sum is the pair-strength sum of a reduced 3-party state.
  for (const auto& [name, value] :
       {std::pair{"ABC", s_ab + s_ac + s_bc}, std::pair{"ABD", s_ab + s_ad + s_bd},
        std::pair{"ACD", s_ac + s_ad + s_cd}, std::pair{"BCD", s_bc + s_bd + s_cd}}) {
    add.inequality(std::string("triple_sum_bound_") + name, value, d - 1, true);
  }

  const double deficit_a = D * a2 - t_bcd;
  const double deficit_b = D * b2 - t_acd;
  const double deficit_c = D * c2 - t_abd;
  const double deficit_d = D * d2 - t_abc;
  add.equality("equal_deficit_A_B", deficit_a, deficit_b, pure);
  add.equality("equal_deficit_B_C", deficit_b, deficit_c, pure);
  add.equality("equal_deficit_C_D", deficit_c, deficit_d, pure);
  add.equality("strength_difference_ACD_BCD", t_acd - t_bcd, D * (b2 - a2), pure);
  add.equality("strength_difference_ABC_ABD", t_abc - t_abd, D * (d2 - c2), pure);
  add.equality("strength_difference_ABD_ACD", t_abd - t_acd, D * (c2 - b2), pure);

  add.equality("tradeoff_six",
               six, ((3 - d * d) * D + (d * d - 2) * bloch_sum + t_abcd) / D,
               pure);
  // Sign of the deficit term fixed by summing the four triple sums and
  // substituting the equal-deficit chain.
  add.equality("tradeoff_six_deficit", six,
               (2 * D - bloch_sum + 2 * deficit_a) / D, pure);

  add.equality("monogamy_A", s_ab + s_ac + s_ad,
               (D + (d * d - 3) * a2 - t_bcd) / D, pure);
  add.equality("monogamy_B", s_ab + s_bc + s_bd,
               (D + (d * d - 3) * b2 - t_acd) / D, pure);
  add.equality("monogamy_C", s_ac + s_bc + s_cd,
               (D + (d * d - 3) * c2 - t_abd) / D, pure);
  add.equality("monogamy_D", s_ad + s_bd + s_cd,
               (D + (d * d - 3) * d2 - t_abc) / D, pure);

  if (qubits) {
    const double qubit_rhs =
        (12 + a2 - t_bcd + b2 - t_acd + c2 - t_abd + d2 - t_abc) / 6;
    add.equality("qubit_six_term", six, qubit_rhs, pure);
    add.inequality("qubit_six_term_bound", qubit_rhs, 2.0, pure);
    add.inequality("qubit_bloch_vs_tripartite", bloch_sum,
                   t_abc + t_abd + t_acd + t_bcd, pure);
    add.informational("conjecture_monogamy_A", s_ab + s_ac + s_ad, 1.0, pure);
  }
  return report;
}

}  // namespace spincorr

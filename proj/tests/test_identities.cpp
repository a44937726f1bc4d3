#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "spincorr/identities.hpp"

namespace spincorr {
namespace {

double lhs_of(const IdentityReport& r, std::string_view name) {
  const IdentityRecord* rec = r.find(name);
  if (rec == nullptr) throw std::runtime_error("missing record " + std::string(name));
  return rec->lhs;
}

void expect_all_applicable_pass(const IdentityReport& r, double max_residual) {
  for (const auto& rec : r.records) {
    if (!rec.applicable || rec.kind == CheckKind::informational) continue;
    ASSERT_TRUE(rec.pass.has_value()) << rec.name;
    EXPECT_TRUE(*rec.pass) << rec.name << " residual " << rec.residual;
    if (rec.kind == CheckKind::equality) {
      EXPECT_LE(std::abs(rec.residual), max_residual) << rec.name;
    }
  }
  EXPECT_TRUE(r.all_pass());
}

// tr(ρ_S²) d^|S| = 1 + Σ_{T ⊆ S, T ≠ ∅} ‖R^T‖², checked against purities of
// reduced states computed by the digit-enumeration oracle.
TEST(Strengths, AgreeWithReducedPurities) {
  for (std::size_t d = 2; d <= 3; ++d) {
    const QuantumState s = random_mixed(d, 3, 2, 70 + d);
    const BlochDecomposition dec = full_decomposition(s);
    for (const auto& subset : all_subsets(3)) {
      const ComplexMatrix rho = oracle::partial_trace_direct(s, subset);
      const double pur = trace_of_product(rho, rho).real();
      double sum = 1.0;
      for (const auto& t : all_subsets(3)) {
        const bool inside = std::all_of(t.begin(), t.end(), [&](Party p) {
          return std::find(subset.begin(), subset.end(), p) != subset.end();
        });
        if (inside) sum += dec.at(t).squared_norm();
      }
      EXPECT_NEAR(pur * static_cast<double>(ipow(d, subset.size())), sum, 1e-10)
          << party_string(subset);
    }
  }
}

TEST(Tripartite, GhzValues) {
  const IdentityReport r = check_tripartite(named_state("ghz", 2, 3));
  EXPECT_TRUE(r.pure);
  EXPECT_NEAR(lhs_of(r, "siso_AB"), 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(lhs_of(r, "isosum"), 1.0, 1e-14);
  EXPECT_NEAR(lhs_of(r, "invariant_sum"), 4.0, 1e-13);
  expect_all_applicable_pass(r, 1e-12);
}

TEST(Tripartite, WValues) {
  const QuantumState w = named_state("w", 2, 3);
  const BlochDecomposition dec = full_decomposition(w);
  EXPECT_NEAR(dec.strength("A"), 1.0 / 9.0, 1e-14);
  EXPECT_NEAR(dec.strength("ABC"), 11.0 / 3.0, 1e-13);
  const IdentityReport r = check_tripartite(w);
  EXPECT_NEAR(lhs_of(r, "invariant_sum"), 4.0, 1e-13);
  expect_all_applicable_pass(r, 1e-12);
}

TEST(Tripartite, ProductState) {
  const QuantumState s = tensor_product(
      tensor_product(haar_random_pure(3, 1, 1), haar_random_pure(3, 1, 2)),
      haar_random_pure(3, 1, 3));
  const IdentityReport r = check_tripartite(s);
  // ‖a‖² = d - 1 for pure qutrits and ‖R^XY‖² = ‖x‖²‖y‖², so s_iso = 4/8.
  EXPECT_NEAR(lhs_of(r, "siso_AB"), 0.5, 1e-10);
  EXPECT_NEAR(lhs_of(r, "isosum"), 1.5, 1e-10);
  expect_all_applicable_pass(r, 1e-9);
}

TEST(Tripartite, HaarEnsemble) {
  for (std::size_t d = 2; d <= 4; ++d) {
    for (std::uint64_t i = 0; i < 50; ++i) {
      const IdentityReport r = check_tripartite(haar_random_pure(d, 3, sample_seed(3, i)));
      ASSERT_TRUE(r.pure);
      expect_all_applicable_pass(r, 1e-9);
    }
  }
}

TEST(Tripartite, TradeoffAgreesWithIsosumAndInvariant) {
  // For pure states the trade-off follows from the other two identities, so
  // the two right-hand sides must coincide state by state.
  const QuantumState s = haar_random_pure(3, 3, 12);
  const IdentityReport r = check_tripartite(s);
  EXPECT_NEAR(r.find("tradeoff")->rhs, r.find("isosum")->rhs, 1e-10);
}

TEST(Tripartite, MixedStateGatesPureOnlyChecks) {
  const QuantumState s = random_mixed(2, 3, 3, 5);
  const IdentityReport r = check_tripartite(s);
  EXPECT_FALSE(r.pure);
  const IdentityRecord* siso = r.find("siso_AB");
  ASSERT_NE(siso, nullptr);
  EXPECT_FALSE(siso->applicable);
  EXPECT_FALSE(siso->pass.has_value());
  const IdentityRecord* any = r.find("pair_strength_AB_max");
  ASSERT_NE(any, nullptr);
  EXPECT_TRUE(any->applicable);
  EXPECT_TRUE(*any->pass);
  EXPECT_TRUE(r.all_pass());
}

TEST(Tripartite, NoiseBreaksPureIdentities) {
  // Mixing in noise leaves the gate closed; evaluating the identities anyway
  // shows a real residual, so the gate is not hiding a trivial pass.
  const QuantumState s = white_noise_mix(named_state("ghz", 2, 3), 0.2);
  const IdentityReport r = check_tripartite(s);
  EXPECT_GT(std::abs(r.find("invariant_sum")->residual), 0.1);
  EXPECT_TRUE(r.all_pass());
}

TEST(Tripartite, RejectsWrongPartyCount) {
  EXPECT_THROW(check_tripartite(named_state("ghz", 2, 4)), DomainError);
}

TEST(Quadripartite, GhzValues) {
  const QuantumState ghz = named_state("ghz", 2, 4);
  const BlochDecomposition dec = full_decomposition(ghz);
  EXPECT_NEAR(dec.strength("ABC"), 0.0, 1e-14);
  const IdentityReport r = check_quadripartite(ghz);
  EXPECT_NEAR(lhs_of(r, "tradeoff_six"), 2.0, 1e-13);
  EXPECT_NEAR(lhs_of(r, "monogamy_A"), 1.0, 1e-13);
  expect_all_applicable_pass(r, 1e-12);
}

TEST(Quadripartite, BellTimesBell) {
  const IdentityReport r = check_quadripartite(named_state("bell", 2, 4));
  EXPECT_NEAR(lhs_of(r, "tradeoff_six"), 2.0, 1e-13);
  EXPECT_NEAR(lhs_of(r, "pair_difference_AB_CD"), 0.0, 1e-13);
  expect_all_applicable_pass(r, 1e-12);
}

TEST(Quadripartite, QutritGhz) {
  expect_all_applicable_pass(check_quadripartite(named_state("ghz", 3, 4)), 1e-11);
}

TEST(Quadripartite, HaarEnsemble) {
  for (std::size_t d = 2; d <= 3; ++d) {
    for (std::uint64_t i = 0; i < 20; ++i) {
      const IdentityReport r = check_quadripartite(haar_random_pure(d, 4, sample_seed(4, i)));
      ASSERT_TRUE(r.pure);
      expect_all_applicable_pass(r, 1e-9);
    }
  }
}

TEST(Quadripartite, DeficitTermSign) {
  // The deficit enters with a plus sign. Flipping it gives a residual of
  // 4 (D a² - ‖R^BCD‖²)/D, which is far from zero for generic states.
  const QuantumState s = haar_random_pure(2, 4, 21);
  const BlochDecomposition dec = full_decomposition(s);
  const double D = 3.0;
  const double bloch = dec.strength("A") + dec.strength("B") + dec.strength("C") +
                       dec.strength("D");
  const double deficit = D * dec.strength("A") - dec.strength("BCD");
  const IdentityReport r = check_quadripartite(s);
  const double six = lhs_of(r, "tradeoff_six_deficit");
  EXPECT_NEAR(six, (2 * D - bloch + 2 * deficit) / D, 1e-10);
  EXPECT_GT(std::abs(six - (2 * D - bloch - 2 * deficit) / D), 1e-3);
}

TEST(Quadripartite, QubitOnlyRecords) {
  EXPECT_NE(check_quadripartite(named_state("ghz", 2, 4)).find("qubit_six_term"), nullptr);
  EXPECT_EQ(check_quadripartite(named_state("ghz", 3, 4)).find("qubit_six_term"), nullptr);
}

TEST(Quadripartite, ConjectureIsInformational) {
  const IdentityReport r = check_quadripartite(haar_random_pure(2, 4, 3));
  const IdentityRecord* c = r.find("conjecture_monogamy_A");
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->kind, CheckKind::informational);
  EXPECT_STREQ(to_string(c->kind), "conjecture");

  IdentityReport forced = r;
  for (auto& rec : forced.records) {
    if (rec.kind == CheckKind::informational) rec.pass = false;
  }
  EXPECT_TRUE(forced.all_pass());
}

TEST(Quadripartite, MixedStateAnyStateBoundsHold) {
  for (std::uint64_t i = 0; i < 5; ++i) {
    const IdentityReport r = check_quadripartite(random_mixed(2, 4, 4, i));
    EXPECT_FALSE(r.pure);
    EXPECT_TRUE(r.find("triple_sum_bound_ABC")->applicable);
    EXPECT_TRUE(r.all_pass());
  }
}

TEST(Quadripartite, RejectsWrongPartyCount) {
  EXPECT_THROW(check_quadripartite(named_state("ghz", 2, 3)), DomainError);
}

TEST(Report, FailingEqualityFailsReport) {
  IdentityReport r{2, 3, 1.0, true, 1e-9, {}};
  detail::ReportBuilder add(r);
  add.equality("x", 1.0, 1.0 + 1e-6, true);
  EXPECT_FALSE(r.all_pass());
  EXPECT_FALSE(*r.records.front().pass);
}

TEST(Report, InequalityDirection) {
  IdentityReport r{2, 3, 1.0, true, 1e-9, {}};
  detail::ReportBuilder add(r);
  add.inequality("below", 0.5, 1.0, true);
  add.inequality("above", 1.5, 1.0, true);
  EXPECT_TRUE(*r.find("below")->pass);
  EXPECT_FALSE(*r.find("above")->pass);
}

}  // namespace
}  // namespace spincorr

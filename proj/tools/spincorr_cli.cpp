// spincorr: correlation tensors, isotropic-strength identities and GME
// detection for 2-4 qudit states.
//
// Exit codes: 0 success, 1 an identity check failed, 2 bad input.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "spincorr/spincorr.hpp"

namespace {

using namespace spincorr;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInputError = 2;

// Claimed white-noise tolerance of the paper-psi fixture, audited by
// noise-scan.
constexpr double kPairExampleClaimedTolerance = 2.0 / 9.0;

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

// n = 4 with d <= 3, n = 3 with d <= 4, otherwise d^n <= 81.
void check_capacity(std::size_t d, std::size_t n) {
  const bool ok = (n == 4 && d <= 3) || (n == 3 && d <= 4) ||
                  (n <= 2 && ipow(d, n) <= 81);
  if (!ok) {
    throw CapacityError("capacity: " + std::to_string(n) + " parties of dimension " +
                        std::to_string(d) +
                        " exceed the supported sizes (n=4: d<=3, n=3: d<=4, "
                        "n<=2: d^n<=81)");
  }
}

std::size_t worker_threads() {
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SPINCORR_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) threads = std::min<std::size_t>(threads, static_cast<std::size_t>(cap));
    } catch (const std::exception&) {
      throw DomainError("SPINCORR_THREADS must be a positive integer");
    }
  }
  return threads;
}

QuantumState load_checked(const std::string& path) {
  QuantumState s = load_state(path);
  check_capacity(s.local_dim(), s.parties());
  return s;
}

struct Output {
  std::string path;
  bool json = false;

  void emit(const nlohmann::json& j, const std::string& human) const {
    const std::string text = json ? j.dump(2) + "\n" : human;
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
  }
};

void add_output_flags(CLI::App* cmd, Output& out) {
  cmd->add_flag("--json", out.json, "Emit JSON instead of a table");
  cmd->add_option("-o,--out", out.path, "Write the report to a file");
}

// state ------------------------------------------------------------------

struct StateArgs {
  std::string name;
  std::size_t dim = 2;
  std::size_t parties = 3;
  std::size_t excitations = 1;
  std::uint64_t seed = 0;
  std::size_t rank = 1;
  double noise = 0.0;
  std::string out;
};

int cmd_state(const StateArgs& a) {
  check_capacity(a.dim, a.parties);
  QuantumState s = [&] {
    if (a.name == "haar") return haar_random_pure(a.dim, a.parties, a.seed);
    if (a.name == "mixed") return random_mixed(a.dim, a.parties, a.rank, a.seed);
    return named_state(a.name, a.dim, a.parties, a.excitations);
  }();
  if (a.noise > 0.0) s = white_noise_mix(s, a.noise);
  const std::string text = state_to_json(s).dump(2) + "\n";
  if (a.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(a.out);
    if (!f) throw Error("cannot write '" + a.out + "'");
    f << text;
  }
  return kExitOk;
}

// bloch / strengths --------------------------------------------------------

int cmd_bloch(const std::string& file, const Output& out) {
  const BlochDecomposition dec = full_decomposition(load_checked(file));
  std::ostringstream human;
  human << "subset  squared_norm\n";
  for (const auto& t : dec.tensors()) {
    human << std::left << std::setw(8) << t.label() << num(t.squared_norm()) << "\n";
  }
  out.emit(tensor_report(dec), human.str());
  return kExitOk;
}

int cmd_strengths(const std::string& file, const Output& out) {
  const BlochDecomposition dec = full_decomposition(load_checked(file));
  const nlohmann::json j = strengths_report(dec);
  std::ostringstream human;
  human << "pair  s_iso                   ||R||^2\n";
  for (const auto& p : j["pairs"]) {
    human << std::left << std::setw(6) << p["subset"].get<std::string>()
          << std::setw(24) << num(p["isotropic_strength"].get<double>())
          << num(p["squared_norm"].get<double>()) << "\n";
  }
  human << "sum of isotropic strengths: "
        << num(j["isotropic_strength_sum"].get<double>()) << "\n";
  for (const auto& t : dec.tensors()) {
    if (t.order() >= 3) {
      human << "||R^" << t.label() << "||^2 = " << num(t.squared_norm()) << "\n";
    }
  }
  out.emit(j, human.str());
  return kExitOk;
}

// verify -------------------------------------------------------------------

int cmd_verify(const std::string& file, double tol, const Output& out) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  const QuantumState s = load_checked(file);
  const IdentityReport report = check_state(s, tol);
  std::ostringstream human;
  human << "purity " << num(report.purity) << (report.pure ? " (pure)" : " (mixed)")
        << ", tolerance " << num(tol) << "\n";
  for (const auto& r : report.records) {
    const char* verdict = !r.applicable            ? "n/a"
                          : r.kind == CheckKind::informational
                              ? (*r.pass ? "holds" : "fails")
                          : *r.pass ? "PASS"
                                    : "FAIL";
    human << std::left << std::setw(6) << verdict << std::setw(34) << r.name
          << "lhs " << std::setw(24) << num(r.lhs) << "rhs " << std::setw(24)
          << num(r.rhs) << "residual " << num(r.residual) << "\n";
  }
  human << (report.all_pass() ? "all applicable checks pass\n"
                              : "some checks FAILED\n");
  out.emit(to_json(report), human.str());
  return report.all_pass() ? kExitOk : kExitCheckFailed;
}

// gme ----------------------------------------------------------------------

QuantumState load_four_party(const std::string& file) {
  QuantumState s = load_checked(file);
  if (s.parties() != 4) {
    throw DomainError("GME detection needs a 4-party state, got " +
                      std::to_string(s.parties()));
  }
  return s;
}

bool is_pair_example(const QuantumState& s) {
  if (s.local_dim() != 2 || s.parties() != 4) return false;
  return std::abs(overlap(s, named_state("paper-psi", 2, 4)) - 1.0) <= 1e-9;
}

int cmd_gme(const std::string& file, std::optional<std::size_t> k,
            bool qubit_strict, const Output& out) {
  const QuantumState s = load_four_party(file);
  const GmeVerdict v = detect_gme(s);
  if (k) check_kyfan_index(s.local_dim(), *k);

  nlohmann::json j = to_json(v);
  const SeparabilityBounds bounds = separability_bounds(s.local_dim(), k.value_or(v.best_k));
  j["bounds"] = to_json(bounds);
  j["bounds"]["qubit_strict"] = qubit_strict;
  j["bounds"]["cross_bound_in_use"] = bounds.cross_bound(qubit_strict);
  if (k) j["selected_k"] = *k;
  if (is_pair_example(s)) j["claim_audit"] = to_json(audit_noise_claim(s, kPairExampleClaimedTolerance));

  std::ostringstream human;
  human << (v.detected ? "genuine multipartite entanglement DETECTED"
                       : "not detected (the test is sufficient only)")
        << ", best k = " << v.best_k << "\n";
  for (std::size_t i = 0; i < 3; ++i) {
    human << v.profiles.splits[i].label() << " singular values:";
    for (double x : v.profiles.profiles[i].singular_values.values) human << " " << num(x);
    human << "\n";
  }
  human << "k    m22                     threshold               margin\n";
  for (const auto& row : v.table) {
    if (k && row.k != *k) continue;
    human << std::left << std::setw(5) << row.k << std::setw(24) << num(row.m22)
          << std::setw(24) << num(row.threshold) << num(row.margin) << "\n";
  }
  human << "bounds at k=" << bounds.k << ": fully separable " << num(bounds.fully_separable)
        << ", 1|3 " << num(bounds.one_vs_three) << ", 2|2 aligned "
        << num(bounds.two_two_aligned) << ", 2|2 cross "
        << num(bounds.cross_bound(qubit_strict))
        << (qubit_strict && bounds.two_two_cross_qubit ? " (qubit-strict)" : "") << "\n";
  if (j.contains("claim_audit")) {
    human << "claim audit: " << j["claim_audit"]["note"].get<std::string>() << "\n";
  }
  out.emit(j, human.str());
  return kExitOk;
}

int cmd_noise_scan(const std::string& file, const std::string& method_name,
                   double resolution, std::optional<double> claim,
                   const Output& out) {
  const QuantumState s = load_four_party(file);
  if (!(resolution > 0.0 && resolution < 1.0)) {
    throw DomainError("resolution must lie in (0,1)");
  }
  NoiseScanMethod method;
  if (method_name == "closed-form") {
    method = NoiseScanMethod::closed_form;
  } else if (method_name == "bisection") {
    method = NoiseScanMethod::bisection;
  } else {
    throw DomainError("method must be closed-form or bisection");
  }
  const NoiseScanResult r = noise_scan(s, method, true, resolution);
  nlohmann::json j{{"noise", to_json(r)}};
  if (!claim && is_pair_example(s)) claim = kPairExampleClaimedTolerance;
  std::optional<NoiseClaimAudit> audit;
  if (claim) {
    audit = audit_noise_claim(s, *claim, resolution);
    j["claim"] = to_json(*audit);
  }

  std::ostringstream human;
  human << "white-noise tolerance p* = " << num(r.p_star) << " (" << to_string(r.method)
        << ", best k = " << r.best_k << ")\n";
  if (r.p_star_bisection) {
    human << "cross-check: " << num(*r.p_star_bisection)
          << (r.consistent() ? " (agrees)" : " (DISAGREES)") << "\n";
  }
  human << "k    p_k\n";
  for (const auto& row : r.per_k) {
    human << std::left << std::setw(5) << row.k << num(row.p_critical) << "\n";
  }
  if (audit) human << audit->note << "\n";
  out.emit(j, human.str());
  return kExitOk;
}

// random -------------------------------------------------------------------

int cmd_random(EnsembleConfig config, const Output& out) {
  check_capacity(config.local_dim, config.parties);
  config.threads = worker_threads();
  const EnsembleSummary summary = run_ensemble(config);
  // Thread count is an execution detail; keep it out of the report.
  nlohmann::json j = to_json(summary);

  std::ostringstream human;
  human << summary.config.samples << " samples, d=" << config.local_dim
        << ", n=" << config.parties
        << (config.rank == 0 ? ", Haar-random pure"
                             : ", random mixed rank " + std::to_string(config.rank))
        << ", seed " << config.seed << "\n";
  human << "identity                          worst residual          violations  n/a\n";
  for (const auto& st : summary.identities) {
    human << std::left << std::setw(34) << st.name << std::setw(24)
          << (st.applicable ? num(st.worst_residual) : std::string("-"))
          << std::setw(12) << st.violations << st.not_applicable
          << (st.kind == CheckKind::informational ? "  (conjecture)" : "") << "\n";
  }
  human << "total violations: " << summary.violations() << "\n";
  out.emit(j, human.str());
  return summary.violations() == 0 ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-correlation strengths and GME detection for qudit states"};
  app.require_subcommand(1);

  StateArgs state_args;
  auto* state = app.add_subcommand("state", "Write a named or random state file");
  state->add_option("--name", state_args.name,
                    "ghz, w, dicke, bell, paper-psi, product, max-mixed, haar, mixed")
      ->required();
  state->add_option("--dim", state_args.dim, "Local dimension d");
  state->add_option("--parties", state_args.parties, "Number of parties n");
  state->add_option("--excitations", state_args.excitations, "Dicke excitation count");
  state->add_option("--seed", state_args.seed, "Seed for haar/mixed");
  state->add_option("--rank", state_args.rank, "Mixture rank for mixed");
  state->add_option("--noise", state_args.noise, "White-noise weight p");
  state->add_option("-o,--out", state_args.out, "Output path (stdout if omitted)");

  std::string file;
  Output bloch_out;
  auto* bloch = app.add_subcommand("bloch", "Report every correlation tensor");
  bloch->add_option("file", file, "State file")->required();
  add_output_flags(bloch, bloch_out);

  Output strengths_out;
  auto* strengths = app.add_subcommand("strengths", "Isotropic and correlation strengths");
  strengths->add_option("file", file, "State file")->required();
  add_output_flags(strengths, strengths_out);

  Output verify_out;
  double verify_tol = kIdentityTolerance;
  auto* verify = app.add_subcommand("verify", "Check the identities of a 3- or 4-party state");
  verify->add_option("file", file, "State file")->required();
  verify->add_option("--tol", verify_tol, "Absolute tolerance");
  add_output_flags(verify, verify_out);

  Output gme_out;
  std::optional<std::size_t> gme_k;
  bool qubit_strict = false;
  auto* gme = app.add_subcommand("gme", "Genuine multipartite entanglement test");
  gme->add_option("file", file, "4-party state file")->required();
  gme->add_option("--k", gme_k, "Show only this Ky Fan index");
  gme->add_flag("--qubit-strict", qubit_strict,
                "Use the Kronecker bound k for crossing 2|2 splits (d=2 diagnostics)");
  add_output_flags(gme, gme_out);

  Output noise_out;
  std::string method = "closed-form";
  double resolution = kNoiseResolution;
  std::optional<double> claim;
  auto* noise = app.add_subcommand("noise-scan", "White-noise tolerance of the GME test");
  noise->add_option("file", file, "4-party state file")->required();
  noise->add_option("--method", method, "closed-form or bisection");
  noise->add_option("--resolution", resolution, "Bisection resolution");
  noise->add_option("--claim", claim, "Compare against a claimed tolerance");
  add_output_flags(noise, noise_out);

  Output random_out;
  EnsembleConfig config;
  auto* random = app.add_subcommand("random", "Check identities on a random ensemble");
  random->add_option("--dim", config.local_dim, "Local dimension d");
  random->add_option("--parties", config.parties, "3 or 4");
  random->add_option("--samples", config.samples, "Ensemble size");
  random->add_option("--seed", config.seed, "Base seed");
  random->add_option("--rank", config.rank, "Mixture rank (omit for pure states)");
  random->add_option("--tol", config.tolerance, "Absolute tolerance");
  add_output_flags(random, random_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (*state) return cmd_state(state_args);
    if (*bloch) return cmd_bloch(file, bloch_out);
    if (*strengths) return cmd_strengths(file, strengths_out);
    if (*verify) return cmd_verify(file, verify_tol, verify_out);
    if (*gme) return cmd_gme(file, gme_k, qubit_strict, gme_out);
    if (*noise) return cmd_noise_scan(file, method, resolution, claim, noise_out);
    if (*random) return cmd_random(config, random_out);
  } catch (const InvalidStateError& e) {
    std::cerr << "invalid state: " << e.what() << "\n";
    return kExitInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

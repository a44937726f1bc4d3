#pragma once

// Multi-qudit density matrices, named fixtures, random ensembles and the
// subsystem operations (partial trace, party permutation, tensor product).
//
// Basis order is big-endian lexicographic: party A is the most significant
// digit, so |0101> has index 0*8 + 1*4 + 0*2 + 1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "spincorr/errors.hpp"
#include "spincorr/linalg.hpp"

namespace spincorr {

inline constexpr std::size_t kMaxParties = 4;
inline constexpr double kStateTolerance = 1e-10;
inline constexpr double kPsdTolerance = 1e-8;

/// Party slot index: A = 0, B = 1, C = 2, D = 3.
using Party = std::size_t;
using PartyList = std::vector<Party>;

inline char party_letter(Party p) { return static_cast<char>('A' + p); }

inline std::string party_string(const PartyList& parties) {
  std::string s;
  for (Party p : parties) s.push_back(party_letter(p));
  return s;
}

/// "ACD" -> {0, 2, 3}. Throws DomainError on anything outside A..D or repeats.
inline PartyList parse_parties(std::string_view text) {
  PartyList out;
  for (char ch : text) {
    const char up = static_cast<char>(ch >= 'a' && ch <= 'z' ? ch - 'a' + 'A' : ch);
    if (up < 'A' || up >= static_cast<char>('A' + kMaxParties)) {
      throw DomainError("invalid party label '" + std::string(1, ch) + "'");
    }
    const Party p = static_cast<Party>(up - 'A');
    if (std::find(out.begin(), out.end(), p) != out.end()) {
      throw DomainError("party '" + std::string(1, up) + "' listed twice");
    }
    out.push_back(p);
  }
  if (out.empty()) throw DomainError("empty party list");
  return out;
}

inline std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

/// An n-party density matrix over (C^d)^{⊗n}.
class QuantumState {
 public:
  /// Validates every invariant; the InvalidStateError message names the
  /// first one violated.
  static QuantumState from_density(std::size_t local_dim, std::size_t parties,
                                   ComplexMatrix rho) {
    QuantumState s(local_dim, parties, std::move(rho));
    s.validate();
    return s;
  }

  /// |ψ><ψ| from amplitudes in lexicographic basis order; the vector must be
  /// normalized within 1e-10.
  static QuantumState from_amplitudes(std::size_t local_dim,
                                      std::size_t parties,
                                      const std::vector<Complex>& amplitudes) {
    check_dims(local_dim, parties);
    const std::size_t dim = ipow(local_dim, parties);
    if (amplitudes.size() != dim) {
      throw InvalidStateError("dimension: expected " + std::to_string(dim) +
                              " amplitudes, got " +
                              std::to_string(amplitudes.size()));
    }
    double norm2 = 0.0;
    for (const auto& a : amplitudes) {
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
        throw InvalidStateError("finite: non-finite amplitude");
      }
      norm2 += std::norm(a);
    }
    if (std::abs(norm2 - 1.0) > kStateTolerance) {
      throw InvalidStateError("trace: state vector norm² is " +
                              std::to_string(norm2) + ", expected 1");
    }
    return unchecked(local_dim, parties, projector(amplitudes));
  }

  /// Skips invariant checks. For results of operations that preserve them.
  static QuantumState unchecked(std::size_t local_dim, std::size_t parties,
                                ComplexMatrix rho) {
    return QuantumState(local_dim, parties, std::move(rho));
  }

  std::size_t local_dim() const noexcept { return local_dim_; }
  std::size_t parties() const noexcept { return parties_; }
  std::size_t dimension() const noexcept { return rho_.rows(); }
  const ComplexMatrix& density() const noexcept { return rho_; }

  void validate() const {
    check_dims(local_dim_, parties_);
    const std::size_t dim = ipow(local_dim_, parties_);
    if (rho_.rows() != dim || rho_.cols() != dim) {
      throw InvalidStateError("dimension: density matrix is " +
                              std::to_string(rho_.rows()) + "x" +
                              std::to_string(rho_.cols()) + ", expected " +
                              std::to_string(dim) + "x" + std::to_string(dim));
    }
    if (!rho_.is_finite()) throw InvalidStateError("finite: non-finite entry");
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = i; j < dim; ++j) {
        if (std::abs(rho_(i, j) - std::conj(rho_(j, i))) > kStateTolerance) {
          throw InvalidStateError("hermitian: entries (" + std::to_string(i) +
                                  "," + std::to_string(j) +
                                  ") and its mirror differ by more than 1e-10");
        }
      }
    }
    const Complex tr = trace(rho_);
    if (std::abs(tr - Complex(1.0, 0.0)) > kStateTolerance) {
      throw InvalidStateError("trace: trace is " + std::to_string(tr.real()) +
                              ", expected 1");
    }
    const double pur = trace_of_product(rho_, rho_).real();
    const double floor = 1.0 / static_cast<double>(dim);
    if (pur < floor - kStateTolerance || pur > 1.0 + kStateTolerance) {
      throw InvalidStateError("purity: tr(rho²) = " + std::to_string(pur) +
                              " outside [d^-n, 1]");
    }
    const Spectrum spectrum = eig_hermitian(rho_);
    if (spectrum.values.back() < -kPsdTolerance) {
      throw InvalidStateError("positive-semidefinite: smallest eigenvalue " +
                              std::to_string(spectrum.values.back()) +
                              " below -1e-8");
    }
  }

 private:
  QuantumState(std::size_t local_dim, std::size_t parties, ComplexMatrix rho)
      : local_dim_(local_dim), parties_(parties), rho_(std::move(rho)) {}

  static void check_dims(std::size_t local_dim, std::size_t parties) {
    if (local_dim < 2) {
      throw InvalidStateError("local_dim: must be at least 2, got " +
                              std::to_string(local_dim));
    }
    if (parties < 1 || parties > kMaxParties) {
      throw InvalidStateError("parties: must be in 1..4, got " +
                              std::to_string(parties));
    }
  }

  static ComplexMatrix projector(const std::vector<Complex>& psi) {
    ComplexMatrix rho(psi.size(), psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i)
      for (std::size_t j = 0; j < psi.size(); ++j)
        rho(i, j) = psi[i] * std::conj(psi[j]);
    return rho;
  }

  std::size_t local_dim_;
  std::size_t parties_;
  ComplexMatrix rho_;
};

inline double purity(const QuantumState& s) {
  return trace_of_product(s.density(), s.density()).real();
}

namespace detail {

inline void check_party_list(const PartyList& parties, std::size_t n,
                             const char* what) {
  if (parties.empty()) {
    throw DomainError(std::string(what) + ": party list is empty");
  }
  std::vector<bool> seen(n, false);
  for (Party p : parties) {
    if (p >= n) {
      throw DomainError(std::string(what) + ": party " +
                        std::string(1, party_letter(p)) +
                        " out of range for a " + std::to_string(n) +
                        "-party state");
    }
    if (seen[p]) {
      throw DomainError(std::string(what) + ": party " +
                        std::string(1, party_letter(p)) + " repeated");
    }
    seen[p] = true;
  }
}

// Offsets into the full index for every digit assignment of `slots`, with the
// first slot most significant.
inline std::vector<std::size_t> slot_offsets(const PartyList& slots,
                                             std::size_t d, std::size_t n) {
  std::vector<std::size_t> offsets(ipow(d, slots.size()), 0);
  for (std::size_t r = 0; r < offsets.size(); ++r) {
    std::size_t rem = r;
    std::size_t off = 0;
    for (std::size_t j = slots.size(); j-- > 0;) {
      off += (rem % d) * ipow(d, n - 1 - slots[j]);
      rem /= d;
    }
    offsets[r] = off;
  }
  return offsets;
}

}  // namespace detail

/// Reduced state over `keep`, with the kept parties in the given order.
inline QuantumState partial_trace(const QuantumState& s, const PartyList& keep) {
  const std::size_t n = s.parties();
  const std::size_t d = s.local_dim();
  detail::check_party_list(keep, n, "partial_trace");

  PartyList traced;
  for (Party p = 0; p < n; ++p) {
    if (std::find(keep.begin(), keep.end(), p) == keep.end()) traced.push_back(p);
  }
  const auto kept_off = detail::slot_offsets(keep, d, n);
  const std::vector<std::size_t> traced_off =
      traced.empty() ? std::vector<std::size_t>{0}
                     : detail::slot_offsets(traced, d, n);

  const ComplexMatrix& rho = s.density();
  ComplexMatrix out(kept_off.size(), kept_off.size());
  for (std::size_t r = 0; r < kept_off.size(); ++r) {
    for (std::size_t c = 0; c < kept_off.size(); ++c) {
      Complex acc{};
      for (std::size_t t : traced_off) acc += rho(kept_off[r] + t, kept_off[c] + t);
      out(r, c) = acc;
    }
  }
  return QuantumState::unchecked(d, keep.size(), std::move(out));
}

/// Reorders parties: slot j of the result holds party order[j] of `s`.
inline QuantumState permute_parties(const QuantumState& s,
                                    const PartyList& order) {
  if (order.size() != s.parties()) {
    throw DomainError("permute_parties: order must list every party once");
  }
  return partial_trace(s, order);
}

/// ρ_a ⊗ ρ_b with a's parties first.
inline QuantumState tensor_product(const QuantumState& a,
                                   const QuantumState& b) {
  if (a.local_dim() != b.local_dim()) {
    throw DomainError("tensor_product: local dimensions differ");
  }
  if (a.parties() + b.parties() > kMaxParties) {
    throw DomainError("tensor_product: more than 4 parties");
  }
  return QuantumState::unchecked(a.local_dim(), a.parties() + b.parties(),
                                 kron(a.density(), b.density()));
}

/// (1-p) ρ + p I / d^n.
inline QuantumState white_noise_mix(const QuantumState& s, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("white noise weight must lie in [0,1], got " +
                      std::to_string(p));
  }
  ComplexMatrix rho = s.density() * Complex(1.0 - p, 0.0);
  const double diag = p / static_cast<double>(s.dimension());
  for (std::size_t i = 0; i < s.dimension(); ++i) rho(i, i) += diag;
  return QuantumState::unchecked(s.local_dim(), s.parties(), std::move(rho));
}

/// Fidelity-style overlap tr(ρ σ); equals |<ψ|φ>|² for pure states.
inline double overlap(const QuantumState& a, const QuantumState& b) {
  if (a.dimension() != b.dimension()) return 0.0;
  return trace_of_product(a.density(), b.density()).real();
}

// Named fixtures ------------------------------------------------------------

namespace detail {

inline std::size_t basis_index(const std::vector<std::size_t>& digits,
                               std::size_t d) {
  std::size_t idx = 0;
  for (std::size_t digit : digits) idx = idx * d + digit;
  return idx;
}

inline std::vector<Complex> bell_pair(std::size_t d) {
  // (1/√d) Σ_j |j, d-1-j>; ψ+ for qubits.
  std::vector<Complex> psi(d * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t j = 0; j < d; ++j) psi[j * d + (d - 1 - j)] = amp;
  return psi;
}

inline std::vector<Complex> kron_vectors(const std::vector<Complex>& a,
                                         const std::vector<Complex>& b) {
  std::vector<Complex> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(x * y);
  return out;
}

}  // namespace detail

/// Fixture names: ghz, w, dicke, bell, paper-psi, product, max-mixed.
///
/// bell is the pair (1/√d) Σ_j |j, d-1-j> for n = 2 and two such pairs on AB
/// and CD for n = 4. dicke uses `excitations` ones among n digits.
/// paper-psi is ½(|0101> + |0110> + |1001> + |1010>) (d = 2, n = 4).
inline QuantumState named_state(std::string_view name, std::size_t d,
                                std::size_t n, std::size_t excitations = 1) {
  if (d < 2) throw DomainError("local dimension must be at least 2");
  if (n < 1 || n > kMaxParties) throw DomainError("parties must be in 1..4");
  const std::size_t dim = ipow(d, n);
  std::vector<Complex> psi(dim);

  if (name == "ghz") {
    if (n < 2) throw DomainError("ghz needs at least 2 parties");
    const double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t j = 0; j < d; ++j) {
      psi[detail::basis_index(std::vector<std::size_t>(n, j), d)] = amp;
    }
  } else if (name == "w" || name == "dicke") {
    const std::size_t k = name == "w" ? 1 : excitations;
    if (n < 2) throw DomainError(std::string(name) + " needs at least 2 parties");
    if (k < 1 || k >= n) {
      throw DomainError("dicke excitations must be in 1..n-1, got " +
                        std::to_string(k));
    }
    std::vector<bool> mask(n, false);
    std::fill(mask.end() - static_cast<std::ptrdiff_t>(k), mask.end(), true);
    std::vector<std::size_t> members;
    do {
      std::vector<std::size_t> digits(n);
      for (std::size_t i = 0; i < n; ++i) digits[i] = mask[i] ? 1 : 0;
      members.push_back(detail::basis_index(digits, d));
    } while (std::next_permutation(mask.begin(), mask.end()));
    const double amp = 1.0 / std::sqrt(static_cast<double>(members.size()));
    for (std::size_t idx : members) psi[idx] = amp;
  } else if (name == "bell") {
    if (n == 2) {
      psi = detail::bell_pair(d);
    } else if (n == 4) {
      psi = detail::kron_vectors(detail::bell_pair(d), detail::bell_pair(d));
    } else {
      throw DomainError("bell is defined for 2 or 4 parties");
    }
  } else if (name == "paper-psi") {
    if (d != 2 || n != 4) throw DomainError("paper-psi is a 4-qubit state");
    for (std::size_t idx : {0b0101u, 0b0110u, 0b1001u, 0b1010u}) psi[idx] = 0.5;
  } else if (name == "product") {
    psi[0] = 1.0;
  } else if (name == "max-mixed") {
    ComplexMatrix rho = ComplexMatrix::identity(dim);
    rho *= Complex(1.0 / static_cast<double>(dim), 0.0);
    return QuantumState::unchecked(d, n, std::move(rho));
  } else {
    throw DomainError("unknown state name '" + std::string(name) + "'");
  }
  return QuantumState::from_amplitudes(d, n, psi);
}

// Random ensembles ----------------------------------------------------------

/// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of sample `index` in an ensemble seeded with `seed`. Depends only on
/// (seed, index) so serial and parallel runs draw identical states.
inline std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed) ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

/// Normalized vector of d^n i.i.d. standard complex Gaussians.
inline std::vector<Complex> haar_random_amplitudes(std::size_t d, std::size_t n,
                                                   std::uint64_t seed) {
  if (d < 2) throw DomainError("local dimension must be at least 2");
  if (n < 1 || n > kMaxParties) throw DomainError("parties must be in 1..4");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Complex> psi(ipow(d, n));
  double norm2 = 0.0;
  for (auto& a : psi) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    a = Complex(re, im);
    norm2 += re * re + im * im;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& a : psi) a *= inv;
  return psi;
}

inline QuantumState haar_random_pure(std::size_t d, std::size_t n,
                                     std::uint64_t seed) {
  return QuantumState::from_amplitudes(d, n, haar_random_amplitudes(d, n, seed));
}

/// Mixture of `rank` Haar-random pure states with flat-Dirichlet weights.
/// Component j uses sample_seed(seed, j); the weights use a separate stream.
/// With equal_weights every component gets weight 1/rank.
inline QuantumState random_mixed(std::size_t d, std::size_t n, std::size_t rank,
                                 std::uint64_t seed, bool equal_weights = false) {
  if (d < 2) throw DomainError("local dimension must be at least 2");
  if (n < 1 || n > kMaxParties) throw DomainError("parties must be in 1..4");
  const std::size_t dim = ipow(d, n);
  if (rank < 1 || rank > dim) {
    throw DomainError("rank must be in 1.." + std::to_string(dim) + ", got " +
                      std::to_string(rank));
  }
  std::mt19937_64 weight_rng(mix64(seed ^ 0xD1B54A32D192ED03ULL));
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> weights(rank);
  double total = 0.0;
  for (auto& w : weights) {
    w = equal_weights ? 1.0 : expo(weight_rng);
    total += w;
  }

  ComplexMatrix rho(dim, dim);
  for (std::size_t j = 0; j < rank; ++j) {
    const auto psi = haar_random_amplitudes(d, n, sample_seed(seed, j));
    const double w = weights[j] / total;
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c)
        rho(r, c) += w * psi[r] * std::conj(psi[c]);
  }
  return QuantumState::unchecked(d, n, std::move(rho));
}

}  // namespace spincorr

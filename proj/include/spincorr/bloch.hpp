#pragma once

// Correlation tensors R^S of a state in the normalized Gell-Mann basis:
//
//   R^S_{i1..ik} = tr(ρ · λ_{i1} ⊗ ... ⊗ λ_{ik})   (identity on parties ∉ S)
//
// and the inverse map back to the density matrix,
//
//   ρ = d^{-n} (I + Σ_S Σ_idx R^S_idx λ_idx).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "spincorr/errors.hpp"
#include "spincorr/gellmann.hpp"
#include "spincorr/linalg.hpp"
#include "spincorr/states.hpp"

namespace spincorr {

inline constexpr double kImaginaryTolerance = 1e-10;

/// Real tensor over [1..d²-1]^|S|, flattened lexicographically in the
/// subset's party order.
class CorrelationTensor {
 public:
  CorrelationTensor(PartyList subset, std::size_t local_dim,
                    std::vector<double> entries)
      : subset_(std::move(subset)),
        local_dim_(local_dim),
        entries_(std::move(entries)) {
    if (subset_.empty()) throw DomainError("correlation tensor needs a party");
    if (entries_.size() != ipow(basis_size(), subset_.size())) {
      throw ShapeError("correlation tensor entry count mismatch");
    }
  }

  const PartyList& subset() const noexcept { return subset_; }
  std::string label() const { return party_string(subset_); }
  std::size_t local_dim() const noexcept { return local_dim_; }
  std::size_t order() const noexcept { return subset_.size(); }
  std::size_t basis_size() const noexcept { return local_dim_ * local_dim_ - 1; }

  const std::vector<double>& entries() const noexcept { return entries_; }

  /// Zero-based multi-index (i1-1, ..., ik-1).
  double at(std::initializer_list<std::size_t> index) const {
    if (index.size() != order()) throw ShapeError("tensor index arity mismatch");
    std::size_t flat = 0;
    for (std::size_t i : index) {
      if (i >= basis_size()) throw ShapeError("tensor index out of range");
      flat = flat * basis_size() + i;
    }
    return entries_[flat];
  }

  double squared_norm() const {
    double s = 0.0;
    for (double x : entries_) s += x * x;
    return s;
  }

  /// Two-party tensor as a (d²-1)x(d²-1) matrix, row index = first party.
  RealMatrix as_matrix() const {
    if (order() != 2) {
      throw DomainError("as_matrix needs a two-party tensor, got order " +
                        std::to_string(order()));
    }
    return RealMatrix(basis_size(), basis_size(), entries_);
  }

 private:
  PartyList subset_;
  std::size_t local_dim_;
  std::vector<double> entries_;
};

namespace detail {

// tr(ρ · op_{i1} ⊗ ... ⊗ op_{ik}) for every index tuple over `ops`, with ρ a
// k-party operator. Peels one party at a time:
//   M_i(a', b') = Σ_{a1,b1} op_i(b1, a1) ρ((a1,a'), (b1,b')).
inline std::vector<Complex> contract_local_ops(
    const ComplexMatrix& rho, std::size_t d, std::size_t k,
    const std::vector<ComplexMatrix>& ops) {
  std::vector<ComplexMatrix> current{rho};
  std::size_t block = rho.rows();
  for (std::size_t step = 0; step < k; ++step) {
    const std::size_t sub = block / d;
    std::vector<ComplexMatrix> next;
    next.reserve(current.size() * ops.size());
    for (const auto& x : current) {
      for (const auto& op : ops) {
        ComplexMatrix m(sub, sub);
        for (std::size_t a1 = 0; a1 < d; ++a1) {
          for (std::size_t b1 = 0; b1 < d; ++b1) {
            const Complex w = op(b1, a1);
            if (w == Complex{}) continue;
            for (std::size_t ap = 0; ap < sub; ++ap)
              for (std::size_t bp = 0; bp < sub; ++bp)
                m(ap, bp) += w * x(a1 * sub + ap, b1 * sub + bp);
          }
        }
        next.push_back(std::move(m));
      }
    }
    current = std::move(next);
    block = sub;
  }
  std::vector<Complex> out;
  out.reserve(current.size());
  for (const auto& m : current) out.push_back(m(0, 0));
  return out;
}

inline std::vector<double> real_parts(const std::vector<Complex>& values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& z : values) {
    if (std::abs(z.imag()) > kImaginaryTolerance) {
      throw InvalidStateError(
          "hermitian: correlation entry has imaginary part " +
          std::to_string(z.imag()));
    }
    out.push_back(z.real());
  }
  return out;
}

}  // namespace detail

/// R^S computed from the reduced state ρ_S.
inline CorrelationTensor correlation_tensor(const QuantumState& s,
                                            const PartyList& subset,
                                            const HermitianBasis& basis) {
  if (basis.local_dim() != s.local_dim()) {
    throw ShapeError("basis dimension does not match the state");
  }
  detail::check_party_list(subset, s.parties(), "correlation_tensor");
  const QuantumState reduced = partial_trace(s, subset);
  auto values = detail::contract_local_ops(reduced.density(), s.local_dim(),
                                           subset.size(), basis.elements());
  return CorrelationTensor(subset, s.local_dim(), detail::real_parts(values));
}

inline CorrelationTensor correlation_tensor(const QuantumState& s,
                                            const PartyList& subset) {
  return correlation_tensor(s, subset, HermitianBasis(s.local_dim()));
}

/// Every nonempty party subset in canonical order: by size, then
/// lexicographic (A, B, ..., AB, AC, ..., ABCD).
inline std::vector<PartyList> all_subsets(std::size_t parties) {
  std::vector<PartyList> out;
  for (std::size_t size = 1; size <= parties; ++size) {
    std::vector<bool> mask(parties, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(size), true);
    do {
      PartyList subset;
      for (Party p = 0; p < parties; ++p)
        if (mask[p]) subset.push_back(p);
      out.push_back(std::move(subset));
    } while (std::prev_permutation(mask.begin(), mask.end()));
  }
  return out;
}

/// All 2^n - 1 correlation tensors of an n-party state.
class BlochDecomposition {
 public:
  BlochDecomposition(std::size_t local_dim, std::size_t parties,
                     std::vector<CorrelationTensor> tensors)
      : local_dim_(local_dim), parties_(parties), tensors_(std::move(tensors)) {}

  std::size_t local_dim() const noexcept { return local_dim_; }
  std::size_t parties() const noexcept { return parties_; }
  const std::vector<CorrelationTensor>& tensors() const noexcept {
    return tensors_;
  }

  bool is_complete() const {
    if (tensors_.size() != ipow(2, parties_) - 1) return false;
    for (const auto& subset : all_subsets(parties_)) {
      if (find(subset) == nullptr) return false;
    }
    return true;
  }

  /// Tensor for `subset` (any party order; looked up by membership).
  const CorrelationTensor& at(const PartyList& subset) const {
    if (const auto* t = find(subset)) return *t;
    throw DomainError("no correlation tensor for subset " + party_string(subset));
  }
  const CorrelationTensor& at(std::string_view labels) const {
    return at(parse_parties(labels));
  }

  /// ‖R^S‖²
  double strength(std::string_view labels) const {
    return at(labels).squared_norm();
  }

 private:
  const CorrelationTensor* find(PartyList subset) const {
    std::sort(subset.begin(), subset.end());
    for (const auto& t : tensors_) {
      if (t.subset() == subset) return &t;
    }
    return nullptr;
  }

  std::size_t local_dim_;
  std::size_t parties_;
  std::vector<CorrelationTensor> tensors_;
};

inline BlochDecomposition full_decomposition(const QuantumState& s) {
  const HermitianBasis basis(s.local_dim());
  std::vector<CorrelationTensor> tensors;
  for (const auto& subset : all_subsets(s.parties())) {
    tensors.push_back(correlation_tensor(s, subset, basis));
  }
  return BlochDecomposition(s.local_dim(), s.parties(), std::move(tensors));
}

struct IsotropicStrength {
  /// ‖R‖² / (d² - 1), the mean eigenvalue of R Rᵗ
  double value;
  double squared_norm;
  /// eigenvalues of R Rᵗ, descending
  Spectrum spectrum;
};

inline IsotropicStrength isotropic_strength(const CorrelationTensor& r) {
  if (r.order() != 2) {
    throw DomainError("isotropic strength needs a two-party tensor, got " +
                      r.label());
  }
  const double norm2 = r.squared_norm();
  return IsotropicStrength{norm2 / static_cast<double>(r.basis_size()), norm2,
                           eig_symmetric(gram_rows(r.as_matrix()))};
}

/// Inverse of full_decomposition.
inline QuantumState reconstruct(const BlochDecomposition& dec) {
  if (!dec.is_complete()) {
    throw DomainError("reconstruct needs all " +
                      std::to_string(ipow(2, dec.parties()) - 1) +
                      " correlation tensors");
  }
  const std::size_t d = dec.local_dim();
  const std::size_t n = dec.parties();
  const HermitianBasis basis(d);
  const std::size_t width = basis.size() + 1;  // λ_0 = I

  // Coefficient tensor over {0..d²-1}^n; index 0 means identity on that slot.
  std::vector<double> coeff(ipow(width, n), 0.0);
  coeff[0] = 1.0;
  for (const auto& t : dec.tensors()) {
    const std::size_t k = t.order();
    const std::size_t D = t.basis_size();
    for (std::size_t flat = 0; flat < t.entries().size(); ++flat) {
      std::size_t rem = flat;
      std::size_t full = 0;
      std::vector<std::size_t> local(k);
      for (std::size_t j = k; j-- > 0;) {
        local[j] = rem % D + 1;
        rem /= D;
      }
      std::vector<std::size_t> digits(n, 0);
      for (std::size_t j = 0; j < k; ++j) digits[t.subset()[j]] = local[j];
      for (std::size_t digit : digits) full = full * width + digit;
      coeff[full] = t.entries()[flat];
    }
  }

  std::vector<ComplexMatrix> ops;
  ops.push_back(ComplexMatrix::identity(d));
  for (const auto& e : basis.elements()) ops.push_back(e);

  // Fold the last slot into d x d matrices, then kron outward one slot at a
  // time.
  std::vector<ComplexMatrix> level;
  level.reserve(coeff.size() / width);
  for (std::size_t prefix = 0; prefix < coeff.size() / width; ++prefix) {
    ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < width; ++i) {
      const double c = coeff[prefix * width + i];
      if (c != 0.0) m += ops[i] * Complex(c, 0.0);
    }
    level.push_back(std::move(m));
  }
  while (level.size() > 1) {
    std::vector<ComplexMatrix> up;
    up.reserve(level.size() / width);
    for (std::size_t prefix = 0; prefix < level.size() / width; ++prefix) {
      const std::size_t inner = level[prefix * width].rows();
      ComplexMatrix m(d * inner, d * inner);
      for (std::size_t i = 0; i < width; ++i) {
        m += kron(ops[i], level[prefix * width + i]);
      }
      up.push_back(std::move(m));
    }
    level = std::move(up);
  }
  ComplexMatrix rho = std::move(level.front());
  rho *= Complex(1.0 / static_cast<double>(ipow(d, n)), 0.0);
  return QuantumState::unchecked(d, n, std::move(rho));
}

}  // namespace spincorr

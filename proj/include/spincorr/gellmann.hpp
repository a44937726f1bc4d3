#pragma once

// Generalized Gell-Mann basis normalized as tr(λ_i λ_j) = d δ_ij.
//
// Element order: symmetric E_jk + E_kj (j < k, lexicographic), then
// antisymmetric -i(E_jk - E_kj) in the same order, then the d-1 diagonal
// matrices. For d = 2 this gives σx, σy, σz.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "spincorr/errors.hpp"
#include "spincorr/linalg.hpp"

namespace spincorr {

class HermitianBasis {
 public:
  explicit HermitianBasis(std::size_t local_dim) : local_dim_(local_dim) {
    if (local_dim < 2) {
      throw DomainError("local dimension must be at least 2, got " +
                        std::to_string(local_dim));
    }
    const std::size_t d = local_dim;
    const double scale = std::sqrt(static_cast<double>(d) / 2.0);
    elements_.reserve(d * d - 1);

    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = j + 1; k < d; ++k) {
        ComplexMatrix m(d, d);
        m(j, k) = scale;
        m(k, j) = scale;
        elements_.push_back(std::move(m));
      }
    }
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = j + 1; k < d; ++k) {
        ComplexMatrix m(d, d);
        m(j, k) = Complex(0.0, -scale);
        m(k, j) = Complex(0.0, scale);
        elements_.push_back(std::move(m));
      }
    }
    for (std::size_t l = 1; l < d; ++l) {
      const double lf = static_cast<double>(l);
      const double norm = scale * std::sqrt(2.0 / (lf * (lf + 1.0)));
      ComplexMatrix m(d, d);
      for (std::size_t j = 0; j < l; ++j) m(j, j) = norm;
      m(l, l) = -lf * norm;
      elements_.push_back(std::move(m));
    }
  }

  std::size_t local_dim() const noexcept { return local_dim_; }
  /// d² - 1
  std::size_t size() const noexcept { return elements_.size(); }

  /// λ_1 ... λ_{d²-1}, zero-based: element(0) is λ_1.
  const ComplexMatrix& element(std::size_t i) const { return elements_.at(i); }
  const std::vector<ComplexMatrix>& elements() const noexcept {
    return elements_;
  }

 private:
  std::size_t local_dim_;
  std::vector<ComplexMatrix> elements_;
};

inline HermitianBasis build_basis(std::size_t local_dim) {
  return HermitianBasis(local_dim);
}

/// Coefficients of M = identity * I + Σ_i coefficients[i] λ_{i+1}.
struct BasisExpansion {
  Complex identity;
  std::vector<Complex> coefficients;
};

inline BasisExpansion expand_hermitian(const ComplexMatrix& m,
                                       const HermitianBasis& basis) {
  const std::size_t d = basis.local_dim();
  if (m.rows() != d || m.cols() != d) {
    throw ShapeError("expand_hermitian: matrix is " + std::to_string(m.rows()) +
                     "x" + std::to_string(m.cols()) + " but basis dimension is " +
                     std::to_string(d));
  }
  const double inv_d = 1.0 / static_cast<double>(d);
  BasisExpansion out{trace(m) * inv_d, {}};
  out.coefficients.reserve(basis.size());
  for (const auto& lambda : basis.elements()) {
    out.coefficients.push_back(trace_of_product(m, lambda) * inv_d);
  }
  return out;
}

inline ComplexMatrix assemble_hermitian(const BasisExpansion& expansion,
                                        const HermitianBasis& basis) {
  if (expansion.coefficients.size() != basis.size()) {
    throw ShapeError("assemble_hermitian: coefficient count mismatch");
  }
  ComplexMatrix m = ComplexMatrix::identity(basis.local_dim());
  m *= expansion.identity;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    m += basis.element(i) * expansion.coefficients[i];
  }
  return m;
}

}  // namespace spincorr

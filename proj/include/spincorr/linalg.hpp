#pragma once

// Dense real/complex matrices, a cyclic Jacobi eigensolver for real symmetric
// matrices and singular values built on top of it.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spincorr/errors.hpp"

namespace spincorr {

using Complex = std::complex<double>;

namespace detail {

inline bool is_finite_scalar(double x) { return std::isfinite(x); }
inline bool is_finite_scalar(const Complex& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline double abs_scalar(double x) { return std::abs(x); }
inline double abs_scalar(const Complex& z) { return std::abs(z); }

inline double conj_scalar(double x) { return x; }
inline Complex conj_scalar(const Complex& z) { return std::conj(z); }

}  // namespace detail

/// Row-major dense matrix with at least one row and one column.
template <typename T>
class Matrix {
 public:
  using value_type = T;

  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (rows == 0 || cols == 0) {
      throw ShapeError("matrix must have at least one row and one column");
    }
  }

  Matrix(std::size_t rows, std::size_t cols, std::vector<T> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0) {
      throw ShapeError("matrix must have at least one row and one column");
    }
    if (data_.size() != rows * cols) {
      throw ShapeError("entry count " + std::to_string(data_.size()) +
                       " does not match shape " + std::to_string(rows) + "x" +
                       std::to_string(cols));
    }
  }

  Matrix(std::initializer_list<std::initializer_list<T>> rows)
      : Matrix(rows.size(), rows.size() == 0 ? 0 : rows.begin()->size()) {
    std::size_t r = 0;
    for (const auto& row : rows) {
      if (row.size() != cols_) throw ShapeError("ragged initializer list");
      std::copy(row.begin(), row.end(), data_.begin() + r * cols_);
      ++r;
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  static Matrix diagonal(std::span<const T> values) {
    Matrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<T> entries() noexcept { return data_; }
  std::span<const T> entries() const noexcept { return data_; }

  bool is_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const T& x) { return detail::is_finite_scalar(x); });
  }

  Matrix& operator+=(const Matrix& other) {
    require_same_shape(other, "+=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
  }

  Matrix& operator-=(const Matrix& other) {
    require_same_shape(other, "-=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
  }

  Matrix& operator*=(T scale) {
    for (auto& x : data_) x *= scale;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, T s) { return a *= s; }
  friend Matrix operator*(T s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) {
      throw ShapeError("matrix product shape mismatch: " +
                       std::to_string(a.rows_) + "x" + std::to_string(a.cols_) +
                       " * " + std::to_string(b.rows_) + "x" +
                       std::to_string(b.cols_));
    }
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T aik = a(i, k);
        if (aik == T{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    }
    return out;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  void require_same_shape(const Matrix& other, const char* op) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
      throw ShapeError(std::string("shape mismatch in ") + op);
    }
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<Complex>;

/// Eigenvalues or singular values, sorted non-increasing.
struct Spectrum {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double sum() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
};

inline constexpr double kEigenTolerance = 1e-12;
inline constexpr double kCompareTolerance = 1e-9;
inline constexpr int kJacobiSweepBudget = 100;

template <typename T>
Matrix<T> transpose(const Matrix<T>& m) {
  Matrix<T> out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
  return out;
}

template <typename T>
Matrix<T> adjoint(const Matrix<T>& m) {
  Matrix<T> out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(j, i) = detail::conj_scalar(m(i, j));
  return out;
}

template <typename T>
T trace(const Matrix<T>& m) {
  if (!m.is_square()) throw ShapeError("trace of a non-square matrix");
  T t{};
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

/// tr(a b) without forming the product.
template <typename T>
T trace_of_product(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) {
    throw ShapeError("trace_of_product shape mismatch");
  }
  T t{};
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) t += a(i, k) * b(k, i);
  return t;
}

template <typename T>
double frobenius_norm_squared(const Matrix<T>& m) {
  double s = 0.0;
  for (const auto& x : m.entries()) {
    const double a = detail::abs_scalar(x);
    s += a * a;
  }
  return s;
}

template <typename T>
double frobenius_norm(const Matrix<T>& m) {
  return std::sqrt(frobenius_norm_squared(m));
}

template <typename T>
double max_abs_difference(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("max_abs_difference shape mismatch");
  }
  double worst = 0.0;
  auto ea = a.entries();
  auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) {
    worst = std::max(worst, detail::abs_scalar(ea[i] - eb[i]));
  }
  return worst;
}

/// Kronecker product; entry ((i,l),(j,m)) = a(i,j) * b(l,m).
template <typename T>
Matrix<T> kron(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const T aij = a(i, j);
      if (aij == T{}) continue;
      for (std::size_t l = 0; l < b.rows(); ++l)
        for (std::size_t m = 0; m < b.cols(); ++m)
          out(i * b.rows() + l, j * b.cols() + m) = aij * b(l, m);
    }
  }
  return out;
}

inline ComplexMatrix to_complex(const RealMatrix& m) {
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.size(); ++i) out.entries()[i] = m.entries()[i];
  return out;
}

/// All eigenvalues of a real symmetric matrix, descending.
///
/// Cyclic Jacobi rotations are applied until the off-diagonal Frobenius norm
/// drops to tol * (diagonal Frobenius norm + 1). Throws ShapeError for
/// non-square input or an asymmetry larger than tol * (1 + max |entry|), and
/// ConvergenceError when the sweep budget runs out.
inline Spectrum eig_symmetric(const RealMatrix& m,
                              double tol = kEigenTolerance) {
  if (!m.is_square()) {
    throw ShapeError("eig_symmetric needs a square matrix, got " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.is_finite()) throw DomainError("eig_symmetric: non-finite entry");
  const std::size_t n = m.rows();

  double max_abs = 0.0;
  for (double x : m.entries()) max_abs = std::max(max_abs, std::abs(x));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > tol * (1.0 + max_abs)) {
        throw ShapeError("eig_symmetric: matrix is not symmetric at (" +
                         std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }

  // Work on the symmetrized copy.
  RealMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));

  auto off_and_diag = [&a, n] {
    double off = 0.0;
    double diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      diag += a(i, i) * a(i, i);
      for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * a(i, j) * a(i, j);
    }
    return std::pair{std::sqrt(off), std::sqrt(diag)};
  };

  bool converged = false;
  for (int sweep = 0; sweep <= kJacobiSweepBudget; ++sweep) {
    const auto [off, diag] = off_and_diag();
    if (off <= tol * (diag + 1.0)) {
      converged = true;
      break;
    }
    if (sweep == kJacobiSweepBudget) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }
  if (!converged) {
    throw ConvergenceError("Jacobi eigensolver did not converge within " +
                           std::to_string(kJacobiSweepBudget) + " sweeps");
  }

  Spectrum spectrum;
  spectrum.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) spectrum.values.push_back(a(i, i));
  std::sort(spectrum.values.begin(), spectrum.values.end(), std::greater<>());
  return spectrum;
}

/// Gram matrix m mᵗ (rows x rows), exactly symmetric.
inline RealMatrix gram_rows(const RealMatrix& m) {
  RealMatrix g(m.rows(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = i; j < m.rows(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < m.cols(); ++k) s += m(i, k) * m(j, k);
      g(i, j) = s;
      g(j, i) = s;
    }
  }
  return g;
}

/// Singular values of m, descending, min(rows, cols) of them.
///
/// One-sided Jacobi: rotate pairs of the min(rows, cols) long vectors until
/// every pair is orthogonal to within tol, then read off their norms. Going
/// through the Gram matrix instead would leave zero singular values at about
/// sqrt(machine epsilon), which adds up in Ky Fan sums.
inline Spectrum singular_values(const RealMatrix& m,
                                double tol = kEigenTolerance) {
  if (!m.is_finite()) throw DomainError("singular_values: non-finite entry");
  // One vector per row of the shorter orientation.
  const bool wide = m.rows() <= m.cols();
  const std::size_t count = wide ? m.rows() : m.cols();
  const std::size_t len = wide ? m.cols() : m.rows();
  std::vector<std::vector<double>> v(count, std::vector<double>(len));
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t k = 0; k < len; ++k) v[i][k] = wide ? m(i, k) : m(k, i);

  bool converged = false;
  for (int sweep = 0; sweep < kJacobiSweepBudget && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < count; ++p) {
      for (std::size_t q = p + 1; q < count; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t k = 0; k < len; ++k) {
          alpha += v[p][k] * v[p][k];
          beta += v[q][k] * v[q][k];
          gamma += v[p][k] * v[q][k];
        }
        if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        converged = false;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < len; ++k) {
          const double x = v[p][k];
          const double y = v[q][k];
          v[p][k] = c * x - s * y;
          v[q][k] = s * x + c * y;
        }
      }
    }
  }
  if (!converged) {
    throw ConvergenceError("one-sided Jacobi SVD did not converge within " +
                           std::to_string(kJacobiSweepBudget) + " sweeps");
  }

  Spectrum spectrum;
  spectrum.values.reserve(count);
  for (const auto& row : v) {
    double sq = 0.0;
    for (double x : row) sq += x * x;
    spectrum.values.push_back(std::sqrt(sq));
  }
  std::sort(spectrum.values.begin(), spectrum.values.end(), std::greater<>());
  return spectrum;
}

/// Eigenvalues of a complex Hermitian matrix, descending, via the real
/// symmetric embedding [[Re, -Im], [Im, Re]] whose spectrum doubles each value.
inline Spectrum eig_hermitian(const ComplexMatrix& h,
                              double tol = kEigenTolerance) {
  if (!h.is_square()) throw ShapeError("eig_hermitian needs a square matrix");
  const std::size_t n = h.rows();
  RealMatrix embed(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // Average with the mirrored entry so tiny non-Hermitian noise cancels.
      const Complex z = 0.5 * (h(i, j) + std::conj(h(j, i)));
      embed(i, j) = z.real();
      embed(i + n, j + n) = z.real();
      embed(i, j + n) = -z.imag();
      embed(i + n, j) = z.imag();
    }
  }
  const Spectrum doubled = eig_symmetric(embed, tol);
  Spectrum out;
  out.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.values.push_back(0.5 * (doubled[2 * i] + doubled[2 * i + 1]));
  }
  return out;
}

}  // namespace spincorr

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace roesser {

using Complex = std::complex<double>;

/// Dense row-major matrix of complex doubles. Entries are always finite.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix identity(std::size_t n);
  static CMatrix from_real(std::size_t rows, std::size_t cols, std::span<const double> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Complex> entries() const noexcept { return data_; }

  /// max_ij |X_ij|
  double max_abs() const noexcept;
  bool is_real(double tol = 0.0) const noexcept;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(Complex s);

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator*(Complex s, CMatrix a);

CMatrix conj_transpose(const CMatrix& x);
CMatrix conjugate(const CMatrix& x);

/// X + X*. Throws DimensionMismatch for non-square input.
CMatrix herm_part(const CMatrix& x);

/// Hermitian within 1e-12 * (1 + max|X|).
bool is_hermitian(const CMatrix& x);

/// Solves A X = B by partial-pivoted elimination. Throws SingularMatrix when a
/// pivot falls below 1e-14 * max|A|.
CMatrix solve(const CMatrix& a, const CMatrix& b);

/// All eigenvalues with multiplicity (Hessenberg reduction + shifted QR).
/// Throws NoConvergence after 100*n QR iterations.
std::vector<Complex> eig_general(const CMatrix& x);

/// Real eigenvalues of a Hermitian matrix in nondecreasing order (cyclic
/// Jacobi). Throws NotHermitian.
std::vector<double> eig_hermitian(const CMatrix& x);

/// True iff the Cholesky factorization of X - margin*I succeeds with
/// strictly positive pivots. Throws NotHermitian.
bool is_positive_definite(const CMatrix& x, double margin);

/// Smallest singular value, via the Hermitian eigenproblem of X* X.
double smallest_singular_value(const CMatrix& x);

/// Block-diagonal concatenation.
CMatrix block_diag(const std::vector<CMatrix>& blocks);

}  // namespace roesser

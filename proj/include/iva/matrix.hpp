#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "iva/errors.hpp"

namespace iva {

using cxd = std::complex<double>;

/// Dense complex matrix, row-major storage.
///
/// Holds every matrix symbol of the solver stack (W, A, P, Q, T, V_i, G_i,
/// U, H). Arithmetic helpers are free functions; hot loops index rows
/// directly through row().
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n);
  /// Builds from nested row lists and rejects non-finite entries.
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cxd>> rows);
  static ComplexMatrix from_rows(const std::vector<std::vector<cxd>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  cxd& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cxd& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  cxd* row(std::size_t i) { return data_.data() + i * cols_; }
  const cxd* row(std::size_t i) const { return data_.data() + i * cols_; }

  std::vector<cxd>& data() { return data_; }
  const std::vector<cxd>& data() const { return data_; }

  bool all_finite() const;
  /// Throws DomainError when any entry is NaN/Inf.
  void require_finite(const char* what) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cxd> data_;
};

/// Dense real matrix, row-major. Carries the auxiliary weights Lambda.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }
  std::span<const double> row_span(std::size_t i) const { return {row(i), cols_}; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cxd s, const ComplexMatrix& a);

/// Conjugate transpose.
ComplexMatrix adjoint(const ComplexMatrix& a);

double max_abs(const ComplexMatrix& a);
double fro_norm(const ComplexMatrix& a);
/// max |a - b| over entries; shapes must match.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// LU factorization with partial pivoting of a square matrix.
struct LuDecomposition {
  ComplexMatrix lu;            // packed L (unit diagonal) and U
  std::vector<int> pivots;     // row i was swapped with pivots[i]
  int swap_parity = 1;         // +1 / -1
  double max_pivot = 0.0;      // max |U_ii|
  double min_pivot = 0.0;      // min |U_ii|

  bool singular(double rel_tol = 1e-14) const {
    return max_pivot == 0.0 || min_pivot <= rel_tol * max_pivot;
  }
};

LuDecomposition lu_factor(const ComplexMatrix& a);
/// Solves A x = b for one or more right-hand-side columns (b is n x r).
ComplexMatrix lu_solve(const LuDecomposition& f, const ComplexMatrix& b);

cxd determinant(const ComplexMatrix& a);
/// log |det A|^2, throws SingularMatrix on (scaled) zero pivot.
double log_abs_det_sq(const ComplexMatrix& a);
/// General inverse via LU; throws SingularMatrix.
ComplexMatrix inverse(const ComplexMatrix& a);
/// Solves A X = B; throws SingularMatrix.
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);
/// Scaled-pivot nonsingularity test (|det| > 0 under the eps-scaled test).
bool is_nonsingular(const ComplexMatrix& a, double rel_tol = 1e-14);

}  // namespace iva

#pragma once

#include <vector>

#include "iva/matrix.hpp"

namespace iva {

/// Hermitian symmetry tolerance: ||M - M^H||_max <= kHermTol * ||M||_max.
inline constexpr double kHermTol = 1e-10;
/// Positive-definiteness test: lambda_min > kPdEps * lambda_max.
inline constexpr double kPdEps = 1e-12;
/// Cyclic Jacobi sweep budget and off-diagonal convergence threshold
/// (relative to ||C||_max).
inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kJacobiOffTol = 1e-13;

bool is_hermitian(const ComplexMatrix& m, double tau = kHermTol);

/// A square matrix validated Hermitian within kHermTol.
///
/// Positive definiteness is enforced by the operations that actually
/// decompose the matrix (herm_inv, herm_inv_sqrt, eigensolve consumers);
/// they throw NotPositiveDefinite under the kPdEps eigenvalue test.
class HermitianPD {
 public:
  /// Validates shape and Hermitian symmetry; symmetrizes exactly.
  static HermitianPD checked(ComplexMatrix m, double tau = kHermTol);
  /// Fast path for matrices Hermitian by construction (Gram products).
  static HermitianPD trusted(ComplexMatrix m);

  const ComplexMatrix& matrix() const { return m_; }
  std::size_t size() const { return m_.rows(); }

 private:
  explicit HermitianPD(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

struct HermitianEig {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // unitary; column i pairs with values[i]
};

/// Cyclic-Jacobi eigendecomposition C = U diag(lambda) U^H.
/// Throws ConvergenceFailure if the sweep budget is exhausted.
HermitianEig eig_hermitian(const HermitianPD& c);

/// Inverse of a Hermitian positive definite matrix.
/// 1x1 and 2x2 use the adjugate directly; larger sizes go through Jacobi.
ComplexMatrix herm_inv(const HermitianPD& g);

/// Hermitian M with M C M^H = I (the principal inverse square root).
ComplexMatrix herm_inv_sqrt(const HermitianPD& c);

}  // namespace iva

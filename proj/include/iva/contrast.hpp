#pragma once

#include "iva/errors.hpp"

namespace iva {

/// Numerical guard added to radii before forming weights.
inline constexpr double kDefaultEps = 1e-10;
/// Default shape (Laplace).
inline constexpr double kDefaultBeta = 1.0;

/// Super-Gaussian GGD contrast phi(r) = r^beta, 0 < beta < 2.
///
/// Supplies the contrast value, its derivative, the quadratic-majorizer
/// weight phi'(r)/r, and the majorizer right-hand side used by the descent
/// proofs. The additive normalization constant of the density is dropped
/// throughout, so costs are reported up to a constant.
class ContrastModel {
 public:
  /// Rejects beta outside the open super-Gaussian interval (0, 2).
  explicit ContrastModel(double beta = kDefaultBeta);

  double beta() const { return beta_; }

  /// r^beta for r >= 0.
  double phi(double r) const;

  /// beta * r^(beta-1); diverges at r = 0 when beta < 1 (DomainError).
  double phi_prime(double r) const;

  /// phi'(r + eps) / (r + eps) = beta * (r + eps)^(beta - 2).
  /// Strictly decreasing in r; eps > 0 keeps it finite at r = 0.
  double weight(double r, double eps) const;

  /// Quadratic majorizer evaluated at r with tangency point alpha:
  ///   (phi'(alpha) / (2 alpha)) r^2 + phi(alpha) - alpha phi'(alpha) / 2.
  /// Dominates phi(r) for every alpha > 0, with equality at alpha = r.
  double majorizer_rhs(double r, double alpha) const;

 private:
  double beta_;
};

}  // namespace iva

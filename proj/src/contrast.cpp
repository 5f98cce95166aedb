#include "iva/contrast.hpp"

#include <cmath>
#include <string>

namespace iva {

ContrastModel::ContrastModel(double beta) : beta_(beta) {
  if (!(beta > 0.0) || !(beta < 2.0) || !std::isfinite(beta)) {
    throw DomainError("ContrastModel: beta must lie in (0, 2), got " + std::to_string(beta));
  }
}

double ContrastModel::phi(double r) const {
  if (r < 0.0 || !std::isfinite(r)) throw DomainError("phi: negative or non-finite radius");
  return std::pow(r, beta_);
}

double ContrastModel::phi_prime(double r) const {
  if (r < 0.0 || !std::isfinite(r)) throw DomainError("phi_prime: negative or non-finite radius");
  if (r == 0.0 && beta_ < 1.0) throw DomainError("phi_prime: derivative diverges at r = 0");
  return beta_ * std::pow(r, beta_ - 1.0);
}

double ContrastModel::weight(double r, double eps) const {
  return beta_ * std::pow(r + eps, beta_ - 2.0);
}

double ContrastModel::majorizer_rhs(double r, double alpha) const {
  if (!(r > 0.0) || !(alpha > 0.0)) throw DomainError("majorizer_rhs: requires r > 0, alpha > 0");
  const double dp = phi_prime(alpha);
  return 0.5 * dp / alpha * r * r + phi(alpha) - 0.5 * alpha * dp;
}

}  // namespace iva

#include <doctest.h>

#include <cmath>
#include <random>

#include "iva/contrast.hpp"

using iva::ContrastModel;

TEST_CASE("constructor rejects shapes outside the super-Gaussian interval") {
  CHECK_THROWS_AS(ContrastModel(0.0), iva::DomainError);
  CHECK_THROWS_AS(ContrastModel(-1.0), iva::DomainError);
  CHECK_THROWS_AS(ContrastModel(2.0), iva::DomainError);
  CHECK_THROWS_AS(ContrastModel(2.5), iva::DomainError);
  CHECK(ContrastModel(1.0).beta() == 1.0);
  CHECK(ContrastModel(1.999).beta() == 1.999);
}

TEST_CASE("phi hand values") {
  const ContrastModel laplace(1.0);
  CHECK(laplace.phi(0.0) == 0.0);
  CHECK(laplace.phi(3.0) == 3.0);
  CHECK(ContrastModel(0.5).phi(4.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(laplace.phi(-1.0), iva::DomainError);
}

TEST_CASE("phi_prime hand values and error path") {
  CHECK(ContrastModel(1.0).phi_prime(5.0) == doctest::Approx(1.0));
  CHECK(ContrastModel(0.5).phi_prime(4.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(ContrastModel(1.5).phi_prime(1.0) == doctest::Approx(1.5));
  CHECK_THROWS_AS(ContrastModel(0.5).phi_prime(0.0), iva::DomainError);
  CHECK(ContrastModel(1.0).phi_prime(0.0) == doctest::Approx(1.0));
}

TEST_CASE("phi_prime matches a central finite difference of phi") {
  for (double beta : {0.3, 0.7, 1.0, 1.4, 1.9}) {
    const ContrastModel m(beta);
    for (double r = 0.1; r <= 10.0; r *= 1.7) {
      const double h = 1e-6 * r;
      const double fd = (m.phi(r + h) - m.phi(r - h)) / (2.0 * h);
      CHECK(m.phi_prime(r) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("weight hand values") {
  const ContrastModel laplace(1.0);
  // beta=1, r=2, eps -> 0 limit: 1/r = 0.5
  CHECK(laplace.weight(2.0, 1e-15) == doctest::Approx(0.5).epsilon(1e-12));
  // guard formula at r = 0
  CHECK(laplace.weight(0.0, 1e-10) == doctest::Approx(1e10).epsilon(1e-12));
  // Gaussian limit: weight approaches the constant 2
  const ContrastModel near_gauss(2.0 - 1e-9);
  for (double r : {0.3, 1.0, 7.0}) {
    CHECK(near_gauss.weight(r, 1e-10) == doctest::Approx(2.0).epsilon(1e-7));
  }
}

TEST_CASE("weight is strictly decreasing on a logarithmic grid") {
  for (double beta : {0.2, 0.5, 1.0, 1.5, 1.95}) {
    const ContrastModel m(beta);
    double prev = m.weight(1e-6, 1e-10);
    for (double r = 1e-6 * 1.2; r <= 1e3; r *= 1.2) {
      const double w = m.weight(r, 1e-10);
      CHECK(w < prev);
      prev = w;
    }
  }
}

TEST_CASE("majorizer hand values") {
  const ContrastModel laplace(1.0);
  // tangency point
  CHECK(laplace.majorizer_rhs(2.0, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  // (1/2)*4 + 1 - 1/2
  CHECK(laplace.majorizer_rhs(2.0, 1.0) == doctest::Approx(2.5).epsilon(1e-15));
  // (1/8)*1 + 4 - 2 = 2.125, and it dominates phi(1) = 1
  const double v = laplace.majorizer_rhs(1.0, 4.0);
  CHECK(v == doctest::Approx(2.125).epsilon(1e-15));
  CHECK(v >= 1.0);
}

TEST_CASE("majorization dominance and tangency over random triples") {
  std::mt19937_64 g(2024);
  std::uniform_real_distribution<double> beta_d(0.05, 1.95);
  std::uniform_real_distribution<double> log_d(std::log(1e-6), std::log(1e3));
  for (int k = 0; k < 10000; ++k) {
    const ContrastModel m(beta_d(g));
    const double r = std::exp(log_d(g));
    const double alpha = std::exp(log_d(g));
    CHECK(m.majorizer_rhs(r, alpha) - m.phi(r) >= -1e-12);
    const double phi_r = m.phi(r);
    CHECK(std::abs(m.majorizer_rhs(r, r) - phi_r) <= 1e-12 * std::max(1.0, std::abs(phi_r)));
  }
}

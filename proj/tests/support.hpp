#pragma once

// Shared fixtures and independent oracles for the test suites. Everything
// here is deliberately written from the problem definitions (finite
// differences, brute-force search, direct transcription) rather than through
// the library's own solver paths.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "iva/contrast.hpp"
#include "iva/matrix.hpp"
#include "iva/mixture.hpp"
#include "iva/mm_core.hpp"

namespace testsup {

using iva::ComplexMatrix;
using iva::cxd;
using iva::RealMatrix;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline cxd randn_c(std::mt19937_64& g) {
  std::normal_distribution<double> d(0.0, std::sqrt(0.5));
  return {d(g), d(g)};
}

inline ComplexMatrix random_complex(std::size_t r, std::size_t c, std::mt19937_64& g) {
  ComplexMatrix m(r, c);
  for (cxd& v : m.data()) v = randn_c(g);
  return m;
}

/// Random Hermitian PD with moderate conditioning: B B^H + ridge * tr * I.
inline ComplexMatrix random_hpd(std::size_t n, std::mt19937_64& g, double ridge = 0.05) {
  const ComplexMatrix b = random_complex(n, n, g);
  ComplexMatrix m = b * iva::adjoint(b);
  double tr = 0.0;
  for (std::size_t i = 0; i < n; ++i) tr += m(i, i).real();
  const double shift = ridge * (tr / n + 1e-3);
  for (std::size_t i = 0; i < n; ++i) m(i, i) += shift;
  return m;
}

inline ComplexMatrix random_nonsingular(std::size_t n, std::mt19937_64& g) {
  for (;;) {
    ComplexMatrix m = random_complex(n, n, g);
    if (iva::is_nonsingular(m, 1e-6)) return m;
  }
}

inline RealMatrix random_positive_lambda(std::size_t m, std::size_t n, std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(0.1, 3.0);
  RealMatrix l(m, n);
  for (double& v : l.data()) v = u(g);
  return l;
}

/// Random K-bin mixture X^[k] = A^[k] S^[k] with complex Gaussian sources.
inline iva::MixtureSet random_mixture(std::size_t K, std::size_t m, std::size_t n,
                                      std::uint64_t seed) {
  auto g = rng(seed);
  std::vector<ComplexMatrix> bins;
  bins.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    const ComplexMatrix a = random_nonsingular(m, g);
    bins.push_back(a * random_complex(m, n, g));
  }
  return iva::MixtureSet::from_bins(std::move(bins));
}

/// Covariance set V_1..V_m for one bin under Lambda.
inline std::vector<ComplexMatrix> covariances(const ComplexMatrix& x, const RealMatrix& lambda) {
  std::vector<ComplexMatrix> v;
  for (std::size_t i = 0; i < lambda.rows(); ++i) {
    v.push_back(iva::build_covariance(x, lambda.row_span(i)));
  }
  return v;
}

// ---------------------------------------------------------------------------
// d = 2 block objective f(P) = sum_i p_i^H G_i p_i - log |det P|^2
// (rows of P are p_i^H), plus an independent finite-difference gradient.
// ---------------------------------------------------------------------------

inline double block2_objective(const ComplexMatrix& p, const ComplexMatrix& g1,
                               const ComplexMatrix& g2) {
  const ComplexMatrix* gs[2] = {&g1, &g2};
  double quad = 0.0;
  for (int i = 0; i < 2; ++i) {
    // p_i = (row i of P)^H
    const cxd pi0 = std::conj(p(i, 0));
    const cxd pi1 = std::conj(p(i, 1));
    const ComplexMatrix& g = *gs[i];
    quad += (std::conj(pi0) * (g(0, 0) * pi0 + g(0, 1) * pi1) +
             std::conj(pi1) * (g(1, 0) * pi0 + g(1, 1) * pi1))
                .real();
  }
  const cxd det = p(0, 0) * p(1, 1) - p(0, 1) * p(1, 0);
  return quad - std::log(std::norm(det));
}

/// Central finite-difference gradient over the 8 real coordinates of P.
inline std::vector<double> block2_fd_gradient(const ComplexMatrix& p, const ComplexMatrix& g1,
                                              const ComplexMatrix& g2, double h = 1e-6) {
  std::vector<double> grad;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      for (int part = 0; part < 2; ++part) {
        ComplexMatrix plus = p, minus = p;
        const cxd delta = part == 0 ? cxd(h, 0.0) : cxd(0.0, h);
        plus(i, j) += delta;
        minus(i, j) -= delta;
        grad.push_back((block2_objective(plus, g1, g2) - block2_objective(minus, g1, g2)) /
                       (2.0 * h));
      }
    }
  }
  return grad;
}

// ---------------------------------------------------------------------------
// Brute-force oracle for the m = 2 surrogate minimum: random multistart plus
// numeric-gradient descent with backtracking on the 8 real coordinates of W.
// ---------------------------------------------------------------------------

inline double surrogate2_oracle_min(const std::vector<ComplexMatrix>& v_set, std::uint64_t seed,
                                    int starts = 60, int iters = 400) {
  auto g = rng(seed);
  auto objective = [&](const ComplexMatrix& w) {
    return iva::surrogate_value(w, v_set);
  };
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < starts; ++s) {
    ComplexMatrix w = s == 0 ? ComplexMatrix::identity(2) : random_nonsingular(2, g);
    double fw = objective(w);
    double step = 0.25;
    for (int it = 0; it < iters && step > 1e-12; ++it) {
      // numeric gradient over 8 coordinates
      double grad[8];
      int idx = 0;
      const double h = 1e-7;
      for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
          for (int part = 0; part < 2; ++part) {
            ComplexMatrix plus = w, minus = w;
            const cxd d = part == 0 ? cxd(h, 0.0) : cxd(0.0, h);
            plus(i, j) += d;
            minus(i, j) -= d;
            grad[idx++] = (objective(plus) - objective(minus)) / (2.0 * h);
          }
        }
      }
      // backtracking line search along -grad
      bool moved = false;
      for (int bt = 0; bt < 30; ++bt) {
        ComplexMatrix trial = w;
        int t = 0;
        for (std::size_t i = 0; i < 2; ++i) {
          for (std::size_t j = 0; j < 2; ++j) {
            trial(i, j) -= cxd(step * grad[t], step * grad[t + 1]);
            t += 2;
          }
        }
        double ft = std::numeric_limits<double>::infinity();
        if (iva::is_nonsingular(trial)) ft = objective(trial);
        if (ft < fw) {
          w = trial;
          fw = ft;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
      step *= 1.6;
    }
    best = std::min(best, fw);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Independent transcription of the conventional ISS_1 sweep: the closed-form
// per-row updates plus the scalar rescale, written directly over original
// row indices with no multiplicative-update machinery.
// ---------------------------------------------------------------------------

inline void iss1_reference_pass(ComplexMatrix& w, ComplexMatrix& y, const RealMatrix& lambda) {
  const std::size_t m = y.rows();
  const std::size_t n = y.cols();
  const double inv2n = 0.5 / static_cast<double>(n);
  for (std::size_t l = 0; l < m; ++l) {
    for (std::size_t i = 0; i < m; ++i) {
      if (i == l) continue;
      cxd gcross = 0.0;
      double gpow = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double lam = lambda(i, j);
        gpow += lam * std::norm(y(l, j));
        gcross += lam * y(l, j) * std::conj(y(i, j));
      }
      gpow *= inv2n;
      gcross *= inv2n;
      const cxd q = -gcross / gpow;        // q_i = -G_i^{-1} g_i, scalars
      const cxd coeff = std::conj(q);      // row update uses q^H
      for (std::size_t j = 0; j < n; ++j) y(i, j) += coeff * y(l, j);
      for (std::size_t j = 0; j < m; ++j) w(i, j) += coeff * w(l, j);
    }
    double gll = 0.0;
    for (std::size_t j = 0; j < n; ++j) gll += lambda(l, j) * std::norm(y(l, j));
    gll *= inv2n;
    const double p = 1.0 / std::sqrt(gll);  // G_1^{-1/2}
    for (std::size_t j = 0; j < n; ++j) y(l, j) *= p;
    for (std::size_t j = 0; j < m; ++j) w(l, j) *= p;
  }
}

/// Random element of D_ISS_d within `step` of the identity.
inline ComplexMatrix random_iss_perturbation(std::size_t m, std::size_t d, double step,
                                             std::mt19937_64& g) {
  ComplexMatrix t = ComplexMatrix::identity(m);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) t(i, j) += step * randn_c(g);
  }
  for (std::size_t i = d; i < m; ++i) {
    for (std::size_t j = 0; j < d; ++j) t(i, j) = step * randn_c(g);
  }
  return t;
}

}  // namespace testsup

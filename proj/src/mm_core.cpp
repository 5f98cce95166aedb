#include "iva/mm_core.hpp"

#include <chrono>
#include <cmath>

#include "iva/ip_solvers.hpp"
#include "iva/iss_solvers.hpp"
#include "iva/parallel.hpp"

namespace iva {

std::pair<ComplexMatrix, ComplexMatrix> whiten_init(const ComplexMatrix& x) {
  const std::size_t m = x.rows();
  const std::size_t n = x.cols();
  if (n < m || m == 0) throw ShapeMismatch("whiten_init: needs n >= m >= 1");

  // sample covariance (1/n) X X^H, Hermitian by construction
  ComplexMatrix c(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    const cxd* xi = x.row(i);
    for (std::size_t j = i; j < m; ++j) {
      const cxd* xj = x.row(j);
      double re = 0.0, im = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        const double ar = xi[t].real(), ai = xi[t].imag();
        const double br = xj[t].real(), bi = xj[t].imag();
        re += ar * br + ai * bi;
        im += ai * br - ar * bi;
      }
      const cxd v = cxd(re / n, im / n);
      c(i, j) = v;
      c(j, i) = std::conj(v);
    }
    c(i, i) = cxd(c(i, i).real(), 0.0);
  }

  const HermitianEig e = eig_hermitian(HermitianPD::trusted(std::move(c)));
  const double lmax = e.values.front();
  const double lmin = e.values.back();
  if (!(lmax > 0.0) || !(lmin > kPdEps * lmax)) {
    throw NotPositiveDefinite("whiten_init: rank-deficient observation");
  }

  // W = D^{-1/2} U^H
  ComplexMatrix w(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    const double s = 1.0 / std::sqrt(e.values[i]);
    for (std::size_t j = 0; j < m; ++j) w(i, j) = s * std::conj(e.vectors(j, i));
  }
  ComplexMatrix y = w * x;
  return {std::move(w), std::move(y)};
}

SeparatorState whiten_init_all(const MixtureSet& mix, int threads) {
  SeparatorState state;
  state.W.resize(mix.bins());
  state.Y.resize(mix.bins());
  parallel_for(mix.bins(), threads, [&](std::size_t k) {
    auto [w, y] = whiten_init(mix.bin(k));
    state.W[k] = std::move(w);
    state.Y[k] = std::move(y);
  });
  return state;
}

namespace {

/// Across-bin radii ||y_ij||; the shared coupling of the IVA model.
RealMatrix bin_norms(const SeparatorState& state) {
  const std::size_t m = state.channels();
  const std::size_t n = state.frames();
  RealMatrix r2(m, n);
  for (const ComplexMatrix& y : state.Y) {
    for (std::size_t i = 0; i < m; ++i) {
      const cxd* yi = y.row(i);
      double* ri = r2.row(i);
      for (std::size_t j = 0; j < n; ++j) ri[j] += std::norm(yi[j]);
    }
  }
  for (double& v : r2.data()) v = std::sqrt(v);
  return r2;
}

}  // namespace

AuxiliaryWeights update_weights(const SeparatorState& state, const ContrastModel& model,
                                double eps) {
  RealMatrix lambda = bin_norms(state);
  for (double& v : lambda.data()) v = model.weight(v, eps);
  return AuxiliaryWeights{std::move(lambda)};
}

Gram weighted_gram(const ComplexMatrix& y_block, std::span<const double> lambda_row,
                   const ComplexMatrix* y_target) {
  const std::size_t d = y_block.rows();
  const std::size_t n = y_block.cols();
  if (lambda_row.size() != n) throw DimensionMismatch("weighted_gram: lambda length");
  if (d > n) throw DimensionMismatch("weighted_gram: block taller than frame count");
  if (y_target && (y_target->rows() != 1 || y_target->cols() != n)) {
    throw DimensionMismatch("weighted_gram: target must be 1 x n");
  }

  const double inv2n = 0.5 / static_cast<double>(n);
  Gram out;
  out.G = ComplexMatrix(d, d);
  for (std::size_t r = 0; r < d; ++r) {
    const cxd* yr = y_block.row(r);
    for (std::size_t c = r; c < d; ++c) {
      const cxd* yc = y_block.row(c);
      double re = 0.0, im = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        const double l = lambda_row[t];
        const double ar = yr[t].real(), ai = yr[t].imag();
        const double br = yc[t].real(), bi = yc[t].imag();
        re += l * (ar * br + ai * bi);
        im += l * (ai * br - ar * bi);
      }
      const cxd v = cxd(re * inv2n, im * inv2n);
      out.G(r, c) = v;
      out.G(c, r) = std::conj(v);
    }
    out.G(r, r) = cxd(out.G(r, r).real(), 0.0);
  }
  if (y_target) {
    ComplexMatrix g(d, 1);
    const cxd* yt = y_target->row(0);
    for (std::size_t r = 0; r < d; ++r) {
      const cxd* yr = y_block.row(r);
      double re = 0.0, im = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        const double l = lambda_row[t];
        const double ar = yr[t].real(), ai = yr[t].imag();
        const double br = yt[t].real(), bi = yt[t].imag();
        re += l * (ar * br + ai * bi);
        im += l * (ai * br - ar * bi);
      }
      g(r, 0) = cxd(re * inv2n, im * inv2n);
    }
    out.g = std::move(g);
  }
  return out;
}

ComplexMatrix build_covariance(const ComplexMatrix& x, std::span<const double> lambda_row) {
  const std::size_t m = x.rows();
  const std::size_t n = x.cols();
  if (lambda_row.size() != n) throw DimensionMismatch("build_covariance: lambda length");
  if (m > n) throw DimensionMismatch("build_covariance: m > n");

  const double inv2n = 0.5 / static_cast<double>(n);
  ComplexMatrix v(m, m);
  for (std::size_t r = 0; r < m; ++r) {
    const cxd* xr = x.row(r);
    for (std::size_t c = r; c < m; ++c) {
      const cxd* xc = x.row(c);
      double re = 0.0, im = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        const double l = lambda_row[t];
        const double ar = xr[t].real(), ai = xr[t].imag();
        const double br = xc[t].real(), bi = xc[t].imag();
        re += l * (ar * br + ai * bi);
        im += l * (ai * br - ar * bi);
      }
      v(r, c) = cxd(re * inv2n, im * inv2n);
      v(c, r) = std::conj(v(r, c));
    }
    v(r, r) = cxd(v(r, r).real(), 0.0);
  }
  return v;
}

double surrogate_value(const ComplexMatrix& w, const std::vector<ComplexMatrix>& v_set) {
  const std::size_t m = w.rows();
  if (w.cols() != m) throw DimensionMismatch("surrogate_value: W not square");
  if (v_set.size() != m) throw DimensionMismatch("surrogate_value: needs one V per row");
  double quad = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const ComplexMatrix& v = v_set[i];
    if (v.rows() != m || v.cols() != m) throw DimensionMismatch("surrogate_value: V shape");
    const cxd* wi = w.row(i);
    // w_i^H V_i w_i with w_i = (row i of W)^H; equals conj(W_i) V_i W_i^T
    double acc = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      cxd t = 0.0;
      const cxd* vr = v.row(r);
      for (std::size_t c = 0; c < m; ++c) t += vr[c] * std::conj(wi[c]);
      acc += (wi[r] * t).real();
    }
    quad += acc;
  }
  return quad - log_abs_det_sq(w);
}

double total_cost(const SeparatorState& state, const ContrastModel& model) {
  const std::size_t n = state.frames();
  RealMatrix r = bin_norms(state);
  double phi_sum = 0.0;
  for (double v : r.data()) phi_sum += model.phi(v);
  double logdet = 0.0;
  for (const ComplexMatrix& w : state.W) logdet += log_abs_det_sq(w);
  return phi_sum / static_cast<double>(n) - logdet;
}

std::unique_ptr<Solver> Solver::make(SolverKind kind) {
  switch (kind) {
    case SolverKind::Ip1: return std::make_unique<Ip1Solver>();
    case SolverKind::Ip2: return std::make_unique<Ip2Solver>();
    case SolverKind::Iss1: return std::make_unique<Iss1Solver>();
    case SolverKind::Iss2: return std::make_unique<Iss2Solver>();
  }
  throw ConfigError("Solver::make: bad kind");
}

AuxiliaryWeights mm_step(SeparatorState& state, const MixtureSet& mix, const Solver& solver,
                         const ContrastModel& model, double eps, int threads, double* pass_ms) {
  AuxiliaryWeights weights = update_weights(state, model, eps);
  const auto t0 = std::chrono::steady_clock::now();
  parallel_for(state.bins(), threads, [&](std::size_t k) {
    solver.pass(state.W[k], state.Y[k], mix.bin(k), weights.lambda);
  });
  if (pass_ms) {
    *pass_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                   .count();
  }
  ++state.iteration;
  return weights;
}

}  // namespace iva

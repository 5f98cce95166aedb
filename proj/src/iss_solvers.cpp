#include "iva/iss_solvers.hpp"

#include <algorithm>
#include <cmath>

namespace iva {

namespace {

struct Eig2 {
  double lmax, lmin;
};

Eig2 herm2_eigenvalues(const ComplexMatrix& g) {
  const double a = g(0, 0).real();
  const double b = g(1, 1).real();
  const double off = std::abs(g(0, 1));
  const double half_tr = 0.5 * (a + b);
  const double disc = std::sqrt(std::max(0.0, 0.25 * (a - b) * (a - b) + off * off));
  return {half_tr + disc, half_tr - disc};
}

void require_pd_2x2(const ComplexMatrix& g, const char* what) {
  const Eig2 e = herm2_eigenvalues(g);
  if (!(e.lmax > 0.0) || !(e.lmin > kPdEps * e.lmax)) throw NotPositiveDefinite(what);
}

cxd quad_form_2x2(const ComplexMatrix& g, cxd u0, cxd u1) {
  // u^H G u for Hermitian G
  return std::conj(u0) * (g(0, 0) * u0 + g(0, 1) * u1) +
         std::conj(u1) * (g(1, 0) * u0 + g(1, 1) * u1);
}

}  // namespace

TwoByTwoSolution solve_2x2_full(const ComplexMatrix& g1_in, const ComplexMatrix& g2_in) {
  const ComplexMatrix g1 = HermitianPD::checked(g1_in).matrix();
  const ComplexMatrix g2 = HermitianPD::checked(g2_in).matrix();
  if (g1.rows() != 2 || g2.rows() != 2) throw DimensionMismatch("solve_2x2: inputs must be 2x2");
  require_pd_2x2(g1, "solve_2x2: G1 not positive definite");
  require_pd_2x2(g2, "solve_2x2: G2 not positive definite");

  TwoByTwoSolution out;

  // H = G1^{-1} G2 via the 2x2 adjugate
  const double a1 = g1(0, 0).real();
  const double b1 = g1(1, 1).real();
  const cxd c1 = g1(0, 1);
  const double det1 = a1 * b1 - std::norm(c1);
  ComplexMatrix h(2, 2);
  h(0, 0) = (b1 * g2(0, 0) - c1 * g2(1, 0)) / det1;
  h(0, 1) = (b1 * g2(0, 1) - c1 * g2(1, 1)) / det1;
  h(1, 0) = (a1 * g2(1, 0) - std::conj(c1) * g2(0, 0)) / det1;
  h(1, 1) = (a1 * g2(1, 1) - std::conj(c1) * g2(0, 1)) / det1;
  out.H = h;

  const double scale = std::max(max_abs(h), 1e-300);
  const cxd tr_c = h(0, 0) + h(1, 1);
  const cxd det_c = h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0);
  const double tr = tr_c.real();
  const double det = det_c.real();

  // H is similar to a Hermitian PD matrix: its spectrum is real positive and
  // the discriminant nonnegative. Residues beyond rounding mean broken inputs.
  const double residue_tol = 1e-10 * scale * scale;
  cxd disc_c = tr_c * tr_c - 4.0 * det_c;
  if (std::abs(disc_c.imag()) > residue_tol) {
    throw NumericalBreakdown("solve_2x2: complex discriminant residue");
  }
  double disc = disc_c.real();
  if (disc < 0.0) {
    if (-disc > residue_tol) throw NumericalBreakdown("solve_2x2: negative discriminant");
    disc = 0.0;
  }
  const double theta1 = 0.5 * (tr + std::sqrt(disc));
  if (!(theta1 > 0.0)) throw NumericalBreakdown("solve_2x2: nonpositive eigenvalue");
  const double theta2 = det / theta1;
  out.theta1 = theta1;
  out.theta2 = theta2;

  // Eigenvector of H for eigenvalue theta: either nonzero row of adj(H - theta I).
  // The first choice matches the closed-form solution; when it vanishes the
  // alternate row spans the same eigenspace unless H = theta I.
  const double zero_tol = 1e-12 * scale;
  auto pick = [&](double theta, bool first_form, cxd fallback0, cxd fallback1) {
    ComplexMatrix u(2, 1);
    if (first_form) {
      u(0, 0) = h(1, 1) - theta;
      u(1, 0) = -h(1, 0);
    } else {
      u(0, 0) = -h(0, 1);
      u(1, 0) = h(0, 0) - theta;
    }
    if (std::hypot(std::abs(u(0, 0)), std::abs(u(1, 0))) > zero_tol) return u;
    if (first_form) {
      u(0, 0) = h(0, 1);
      u(1, 0) = theta - h(0, 0);
    } else {
      u(0, 0) = theta - h(1, 1);
      u(1, 0) = h(1, 0);
    }
    if (std::hypot(std::abs(u(0, 0)), std::abs(u(1, 0))) > zero_tol) return u;
    u(0, 0) = fallback0;  // H ~ theta I: any basis vector is an eigenvector
    u(1, 0) = fallback1;
    return u;
  };
  out.u1 = pick(theta1, true, 1.0, 0.0);
  out.u2 = pick(theta2, false, 0.0, 1.0);

  ComplexMatrix p(2, 2);
  const ComplexMatrix* gs[2] = {&g1, &g2};
  const ComplexMatrix* us[2] = {&out.u1, &out.u2};
  for (int i = 0; i < 2; ++i) {
    const cxd u0 = (*us[i])(0, 0);
    const cxd u1 = (*us[i])(1, 0);
    const double s = quad_form_2x2(*gs[i], u0, u1).real();
    if (!(s > 0.0)) throw NumericalBreakdown("solve_2x2: vanishing normalization");
    const double inv = 1.0 / std::sqrt(s);
    p(i, 0) = std::conj(u0) * inv;  // row i is p_i^H
    p(i, 1) = std::conj(u1) * inv;
  }
  out.P = std::move(p);
  return out;
}

ComplexMatrix solve_2x2(const ComplexMatrix& g1, const ComplexMatrix& g2) {
  return solve_2x2_full(g1, g2).P;
}

namespace {

// q = -G^{-1} g and the row update coefficients conj(q_r), for d = 1.
void q_update_d1(ComplexMatrix& w, ComplexMatrix& y, const RealMatrix& lambda, std::size_t s0,
                 std::size_t target) {
  const std::size_t n = y.cols();
  const std::size_t mw = w.cols();
  const cxd* ys = y.row(s0);
  cxd* yt = y.row(target);
  const double* lam = lambda.row(target);

  double gss = 0.0, gr = 0.0, gi = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double l = lam[j];
    const double ar = ys[j].real(), ai = ys[j].imag();
    const double tr = yt[j].real(), ti = yt[j].imag();
    gss += l * (ar * ar + ai * ai);
    gr += l * (ar * tr + ai * ti);
    gi += l * (ai * tr - ar * ti);
  }
  if (!(gss > 0.0)) throw NotPositiveDefinite("iss_q_step: steering power vanished");
  // coeff = conj(q) = -conj(g)/G  (G real scalar; the 1/2n factors cancel)
  const cxd coeff = cxd(-gr / gss, gi / gss);

  for (std::size_t j = 0; j < n; ++j) yt[j] += coeff * ys[j];
  const cxd* wsrc = w.row(s0);
  cxd* wt = w.row(target);
  for (std::size_t j = 0; j < mw; ++j) wt[j] += coeff * wsrc[j];
}

// Same for d = 2, with the 2x2 Hermitian solve done by adjugate.
void q_update_d2(ComplexMatrix& w, ComplexMatrix& y, const RealMatrix& lambda, std::size_t s0,
                 std::size_t s1, std::size_t target) {
  const std::size_t n = y.cols();
  const std::size_t mw = w.cols();
  const cxd* y0 = y.row(s0);
  const cxd* y1 = y.row(s1);
  cxd* yt = y.row(target);
  const double* lam = lambda.row(target);

  double g00 = 0.0, g11 = 0.0;
  double g01r = 0.0, g01i = 0.0;
  double h0r = 0.0, h0i = 0.0, h1r = 0.0, h1i = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double l = lam[j];
    const double ar = y0[j].real(), ai = y0[j].imag();
    const double br = y1[j].real(), bi = y1[j].imag();
    const double tr = yt[j].real(), ti = yt[j].imag();
    g00 += l * (ar * ar + ai * ai);
    g11 += l * (br * br + bi * bi);
    g01r += l * (ar * br + ai * bi);
    g01i += l * (ai * br - ar * bi);
    h0r += l * (ar * tr + ai * ti);
    h0i += l * (ai * tr - ar * ti);
    h1r += l * (br * tr + bi * ti);
    h1i += l * (bi * tr - br * ti);
  }
  const cxd g01(g01r, g01i);
  const double det = g00 * g11 - (g01r * g01r + g01i * g01i);
  const double half_tr = 0.5 * (g00 + g11);
  const double edisc = std::sqrt(std::max(0.0, half_tr * half_tr - det));
  const double lmax = half_tr + edisc;
  const double lmin = half_tr - edisc;
  if (!(lmax > 0.0) || !(lmin > kPdEps * lmax)) {
    throw NotPositiveDefinite("iss_q_step: steering Gram not positive definite");
  }
  const cxd g0(h0r, h0i);
  const cxd g1(h1r, h1i);
  // q = -G^{-1} g; row coefficients are conj(q)
  const cxd q0 = -(g11 * g0 - g01 * g1) / det;
  const cxd q1 = -(g00 * g1 - std::conj(g01) * g0) / det;
  const cxd c0 = std::conj(q0);
  const cxd c1 = std::conj(q1);

  for (std::size_t j = 0; j < n; ++j) yt[j] += c0 * y0[j] + c1 * y1[j];
  const cxd* w0 = w.row(s0);
  const cxd* w1 = w.row(s1);
  cxd* wt = w.row(target);
  for (std::size_t j = 0; j < mw; ++j) wt[j] += c0 * w0[j] + c1 * w1[j];
}

void check_block_args(const ComplexMatrix& w, const ComplexMatrix& y, const RealMatrix& lambda,
                      std::size_t d) {
  const std::size_t m = y.rows();
  if (w.rows() != m || w.cols() != m) throw DimensionMismatch("iss: W shape");
  if (lambda.rows() != m || lambda.cols() != y.cols()) throw DimensionMismatch("iss: Lambda shape");
  if (d != 1 && d != 2) throw DomainError("iss: block size must be 1 or 2");
  if (d > m) throw IndivisibleBlock("iss: block size exceeds channel count");
}

}  // namespace

void iss_q_step(ComplexMatrix& w, ComplexMatrix& y, const RealMatrix& lambda, std::size_t d,
                std::size_t rotation) {
  check_block_args(w, y, lambda, d);
  const std::size_t m = y.rows();
  const std::size_t s0 = rotation % m;
  const std::size_t s1 = (rotation + 1) % m;
  for (std::size_t r = d; r < m; ++r) {
    const std::size_t target = (rotation + r) % m;
    if (d == 1) {
      q_update_d1(w, y, lambda, s0, target);
    } else {
      q_update_d2(w, y, lambda, s0, s1, target);
    }
  }
}

ComplexMatrix iss_p_step(ComplexMatrix& w, ComplexMatrix& y, const RealMatrix& lambda,
                         std::size_t d, std::size_t rotation) {
  check_block_args(w, y, lambda, d);
  const std::size_t m = y.rows();
  const std::size_t n = y.cols();
  const std::size_t mw = w.cols();
  const double inv2n = 0.5 / static_cast<double>(n);

  if (d == 1) {
    const std::size_t s0 = rotation % m;
    const cxd* ys = y.row(s0);
    const double* lam = lambda.row(s0);
    double gss = 0.0;
    for (std::size_t j = 0; j < n; ++j) gss += lam[j] * std::norm(ys[j]);
    gss *= inv2n;
    if (!(gss > 0.0)) throw NotPositiveDefinite("iss_p_step: leading power vanished");
    const double p = 1.0 / std::sqrt(gss);
    cxd* yrow = y.row(s0);
    for (std::size_t j = 0; j < n; ++j) yrow[j] *= p;
    cxd* wrow = w.row(s0);
    for (std::size_t j = 0; j < mw; ++j) wrow[j] *= p;
    ComplexMatrix pm(1, 1);
    pm(0, 0) = p;
    return pm;
  }

  const std::size_t s0 = rotation % m;
  const std::size_t s1 = (rotation + 1) % m;
  ComplexMatrix g[2];
  const std::size_t steer[2] = {s0, s1};
  for (int i = 0; i < 2; ++i) {
    const double* lam = lambda.row(steer[i]);
    const cxd* y0 = y.row(s0);
    const cxd* y1 = y.row(s1);
    double g00 = 0.0, g11 = 0.0, g01r = 0.0, g01i = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double l = lam[j];
      const double ar = y0[j].real(), ai = y0[j].imag();
      const double br = y1[j].real(), bi = y1[j].imag();
      g00 += l * (ar * ar + ai * ai);
      g11 += l * (br * br + bi * bi);
      g01r += l * (ar * br + ai * bi);
      g01i += l * (ai * br - ar * bi);
    }
    g[i] = ComplexMatrix(2, 2);
    g[i](0, 0) = g00 * inv2n;
    g[i](1, 1) = g11 * inv2n;
    g[i](0, 1) = cxd(g01r, g01i) * inv2n;
    g[i](1, 0) = std::conj(g[i](0, 1));
  }
  const ComplexMatrix p = solve_2x2(g[0], g[1]);

  cxd* y0 = y.row(s0);
  cxd* y1 = y.row(s1);
  const cxd p00 = p(0, 0), p01 = p(0, 1), p10 = p(1, 0), p11 = p(1, 1);
  for (std::size_t j = 0; j < n; ++j) {
    const cxd a = y0[j], b = y1[j];
    y0[j] = p00 * a + p01 * b;
    y1[j] = p10 * a + p11 * b;
  }
  cxd* w0 = w.row(s0);
  cxd* w1 = w.row(s1);
  for (std::size_t j = 0; j < mw; ++j) {
    const cxd a = w0[j], b = w1[j];
    w0[j] = p00 * a + p01 * b;
    w1[j] = p10 * a + p11 * b;
  }
  return p;
}

void iss_pass(ComplexMatrix& w, ComplexMatrix& y, const RealMatrix& lambda, std::size_t d) {
  check_block_args(w, y, lambda, d);
  const std::size_t m = y.rows();
  if (m % d != 0) throw IndivisibleBlock("iss_pass: block size must divide channel count");
  const std::size_t blocks = m / d;
  for (std::size_t l = 0; l < blocks; ++l) {
    const std::size_t rot = l * d;
    iss_q_step(w, y, lambda, d, rot);
    iss_p_step(w, y, lambda, d, rot);
  }
}

void Iss1Solver::pass(ComplexMatrix& w, ComplexMatrix& y, const ComplexMatrix& /*x*/,
                      const RealMatrix& lambda) const {
  iss_pass(w, y, lambda, 1);
}

void Iss2Solver::pass(ComplexMatrix& w, ComplexMatrix& y, const ComplexMatrix& /*x*/,
                      const RealMatrix& lambda) const {
  iss_pass(w, y, lambda, 2);
}

}  // namespace iva

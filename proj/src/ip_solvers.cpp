#include "iva/ip_solvers.hpp"

#include <cmath>

#include "iva/iss_solvers.hpp"

namespace iva {

namespace {

// y = W x refresh without temporaries beyond the output rows
void refresh_separated(const ComplexMatrix& w, ComplexMatrix& y, const ComplexMatrix& x) {
  const std::size_t m = w.rows();
  const std::size_t n = x.cols();
  for (std::size_t i = 0; i < m; ++i) {
    cxd* yi = y.row(i);
    for (std::size_t j = 0; j < n; ++j) yi[j] = 0.0;
    const cxd* wi = w.row(i);
    for (std::size_t k = 0; k < m; ++k) {
      const cxd a = wi[k];
      if (a == cxd{}) continue;
      const cxd* xk = x.row(k);
      for (std::size_t j = 0; j < n; ++j) yi[j] += a * xk[j];
    }
  }
}

double quad_form(const ComplexMatrix& v, const ComplexMatrix& u) {
  // u^H V u for Hermitian V, u given as m x 1
  const std::size_t m = v.rows();
  cxd acc = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    cxd t = 0.0;
    const cxd* vr = v.row(r);
    for (std::size_t c = 0; c < m; ++c) t += vr[c] * u(c, 0);
    acc += std::conj(u(r, 0)) * t;
  }
  return acc.real();
}

}  // namespace

CovarianceSet build_covariance_set(const ComplexMatrix& x, const RealMatrix& lambda) {
  const std::size_t m = x.rows();
  if (lambda.rows() != m || lambda.cols() != x.cols()) {
    throw DimensionMismatch("build_covariance_set: Lambda shape");
  }
  CovarianceSet set;
  set.V.reserve(m);
  for (std::size_t i = 0; i < m; ++i) set.V.push_back(build_covariance(x, lambda.row_span(i)));
  return set;
}

ComplexMatrix ip1_row_update(const ComplexMatrix& w, const ComplexMatrix& v_l, std::size_t l) {
  const std::size_t m = w.rows();
  if (w.cols() != m || v_l.rows() != m || v_l.cols() != m) {
    throw DimensionMismatch("ip1_row_update: shapes");
  }
  if (l >= m) throw DimensionMismatch("ip1_row_update: row index");

  const ComplexMatrix wv = w * v_l;
  ComplexMatrix e(m, 1);
  e(l, 0) = 1.0;
  ComplexMatrix u = solve(wv, e);  // SingularMatrix if W V_l singular
  const double s = quad_form(v_l, u);
  if (!(s > 0.0)) throw NumericalBreakdown("ip1_row_update: nonpositive normalization");
  const double inv = 1.0 / std::sqrt(s);
  for (std::size_t i = 0; i < m; ++i) u(i, 0) *= inv;
  return u;
}

void ip1_pass(ComplexMatrix& w, ComplexMatrix& y, const ComplexMatrix& x,
              const RealMatrix& lambda) {
  const std::size_t m = w.rows();
  const CovarianceSet set = build_covariance_set(x, lambda);
  for (std::size_t l = 0; l < m; ++l) {
    const ComplexMatrix wl = ip1_row_update(w, set.V[l], l);
    for (std::size_t j = 0; j < m; ++j) w(l, j) = std::conj(wl(j, 0));
  }
  refresh_separated(w, y, x);
}

std::pair<ComplexMatrix, ComplexMatrix> ip2_pair_update(const ComplexMatrix& w,
                                                        const ComplexMatrix& v_p,
                                                        const ComplexMatrix& v_q, std::size_t p,
                                                        std::size_t q) {
  const std::size_t m = w.rows();
  if (w.cols() != m) throw DimensionMismatch("ip2_pair_update: W not square");
  if (p == q || p >= m || q >= m) throw DimensionMismatch("ip2_pair_update: row indices");

  ComplexMatrix e(m, 2);
  e(p, 0) = 1.0;
  e(q, 1) = 1.0;

  const ComplexMatrix* vs[2] = {&v_p, &v_q};
  ComplexMatrix u[2];       // (W V_i)^{-1} E, m x 2
  ComplexMatrix gt[2];      // U_i^H V_i U_i, 2x2 Hermitian PD
  ComplexMatrix gt_inv[2];  // Gt_i^{-1}
  for (int i = 0; i < 2; ++i) {
    const ComplexMatrix& v = *vs[i];
    if (v.rows() != m || v.cols() != m) throw DimensionMismatch("ip2_pair_update: V shape");
    u[i] = solve(w * v, e);  // SingularMatrix if W V_i singular
    const ComplexMatrix vu = v * u[i];
    ComplexMatrix g(2, 2);
    for (int r = 0; r < 2; ++r) {
      for (int c = r; c < 2; ++c) {
        cxd acc = 0.0;
        for (std::size_t t = 0; t < m; ++t) acc += std::conj(u[i](t, r)) * vu(t, c);
        g(r, c) = acc;
        g(c, r) = std::conj(acc);
      }
      g(r, r) = cxd(g(r, r).real(), 0.0);
    }
    gt[i] = g;
    gt_inv[i] = herm_inv(HermitianPD::trusted(std::move(g)));  // NotPositiveDefinite on failure
  }

  // Reduced d = 2 block problem with Gram inputs (Gt_p^{-1}, Gt_q^{-1});
  // back-substitution w_i = U_i Gt_i^{-1} r_i with r_i^H the rows of the
  // reduced minimizer.
  const ComplexMatrix pz = solve_2x2(gt_inv[0], gt_inv[1]);
  std::pair<ComplexMatrix, ComplexMatrix> out{ComplexMatrix(m, 1), ComplexMatrix(m, 1)};
  ComplexMatrix* cols[2] = {&out.first, &out.second};
  for (int i = 0; i < 2; ++i) {
    ComplexMatrix r(2, 1);
    r(0, 0) = std::conj(pz(i, 0));
    r(1, 0) = std::conj(pz(i, 1));
    const ComplexMatrix c = gt_inv[i] * r;
    *cols[i] = u[i] * c;
  }
  return out;
}

void ip2_pass(ComplexMatrix& w, ComplexMatrix& y, const ComplexMatrix& x,
              const RealMatrix& lambda) {
  const std::size_t m = w.rows();
  if (m % 2 != 0) throw OddChannelCount("ip2_pass: channel count must be even");
  const CovarianceSet set = build_covariance_set(x, lambda);
  for (std::size_t p = 0; p < m; p += 2) {
    const std::size_t q = p + 1;
    const auto [wp, wq] = ip2_pair_update(w, set.V[p], set.V[q], p, q);
    for (std::size_t j = 0; j < m; ++j) {
      w(p, j) = std::conj(wp(j, 0));
      w(q, j) = std::conj(wq(j, 0));
    }
  }
  refresh_separated(w, y, x);
}

void Ip1Solver::pass(ComplexMatrix& w, ComplexMatrix& y, const ComplexMatrix& x,
                     const RealMatrix& lambda) const {
  ip1_pass(w, y, x, lambda);
}

void Ip2Solver::pass(ComplexMatrix& w, ComplexMatrix& y, const ComplexMatrix& x,
                     const RealMatrix& lambda) const {
  ip2_pass(w, y, x, lambda);
}

}  // namespace iva

#include "iva/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace iva {

bool is_hermitian(const ComplexMatrix& m, double tau) {
  if (m.rows() != m.cols()) return false;
  const double scale = max_abs(m);
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = i; j < m.cols(); ++j) {
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
    }
  }
  return worst <= tau * std::max(scale, 1e-300);
}

HermitianPD HermitianPD::checked(ComplexMatrix m, double tau) {
  if (m.rows() != m.cols()) throw DimensionMismatch("HermitianPD: matrix not square");
  m.require_finite("HermitianPD");
  if (!is_hermitian(m, tau)) throw NotHermitian("HermitianPD: symmetry tolerance exceeded");
  // exact symmetrization so downstream algebra sees a true Hermitian matrix
  for (std::size_t i = 0; i < m.rows(); ++i) {
    m(i, i) = cxd(m(i, i).real(), 0.0);
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const cxd v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
  }
  return HermitianPD(std::move(m));
}

HermitianPD HermitianPD::trusted(ComplexMatrix m) { return HermitianPD(std::move(m)); }

namespace {

void require_positive_spectrum(const std::vector<double>& lambda, const char* what) {
  if (lambda.empty()) throw DimensionMismatch(std::string(what) + ": empty matrix");
  const double lmax = lambda.front();  // descending
  const double lmin = lambda.back();
  if (!(lmax > 0.0) || !(lmin > kPdEps * lmax)) {
    throw NotPositiveDefinite(std::string(what) + ": eigenvalue test failed");
  }
}

// Eigenvalues of a Hermitian 2x2, descending.
std::pair<double, double> eig2_values(const ComplexMatrix& m) {
  const double a = m(0, 0).real();
  const double b = m(1, 1).real();
  const double off = std::abs(m(0, 1));
  const double tr = a + b;
  const double disc = std::sqrt(std::max(0.0, 0.25 * (a - b) * (a - b) + off * off));
  return {0.5 * tr + disc, 0.5 * tr - disc};
}

}  // namespace

HermitianEig eig_hermitian(const HermitianPD& c) {
  const ComplexMatrix& src = c.matrix();
  const std::size_t n = src.rows();
  HermitianEig out;
  out.vectors = ComplexMatrix::identity(n);
  out.values.assign(n, 0.0);
  if (n == 0) return out;
  if (n == 1) {
    out.values[0] = src(0, 0).real();
    return out;
  }

  ComplexMatrix a = src;
  ComplexMatrix& u = out.vectors;
  const double scale = std::max(max_abs(a), 1e-300);
  const double off_tol = kJacobiOffTol * scale;
  const double skip_tol = off_tol * 1e-3;

  bool converged = false;
  for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
    double off_max = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cxd apq = a(p, q);
        const double r = std::abs(apq);
        off_max = std::max(off_max, r);
        if (r <= skip_tol) continue;

        const cxd phase = apq / r;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double sign = tau >= 0.0 ? 1.0 : -1.0;
        const double t = sign / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * cs;

        // A <- J^H A J with J acting on the (p, q) plane:
        //   J(p,p)=c, J(p,q)=s*phase, J(q,p)=-s*conj(phase), J(q,q)=c
        const cxd jpq = sn * phase;                 // J(p,q)
        const cxd jqp = -sn * std::conj(phase);     // J(q,p)
        for (std::size_t j = 0; j < n; ++j) {
          if (j == p || j == q) continue;
          // rows p, q of J^H A
          const cxd apj = a(p, j);
          const cxd aqj = a(q, j);
          a(p, j) = cs * apj - sn * phase * aqj;
          a(q, j) = sn * std::conj(phase) * apj + cs * aqj;
          // columns p, q of (.) J; keep Hermitian symmetry exactly
          a(j, p) = std::conj(a(p, j));
          a(j, q) = std::conj(a(q, j));
        }
        const double new_pp = app * cs * cs - 2.0 * r * sn * cs + aqq * sn * sn;
        const double new_qq = app * sn * sn + 2.0 * r * sn * cs + aqq * cs * cs;
        a(p, p) = new_pp;
        a(q, q) = new_qq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;

        // accumulate U <- U J (columns p, q)
        for (std::size_t j = 0; j < n; ++j) {
          const cxd ujp = u(j, p);
          const cxd ujq = u(j, q);
          u(j, p) = cs * ujp + jqp * ujq;
          u(j, q) = jpq * ujp + cs * ujq;
        }
      }
    }
    converged = off_max <= off_tol;
  }
  if (!converged) throw ConvergenceFailure("eig_hermitian: Jacobi sweep budget exhausted");

  // sort descending, permuting eigenvector columns along
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });
  ComplexMatrix sorted(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t j = 0; j < n; ++j) sorted(j, k) = u(j, order[k]);
  }
  out.vectors = std::move(sorted);
  return out;
}

ComplexMatrix herm_inv(const HermitianPD& g) {
  const ComplexMatrix& m = g.matrix();
  const std::size_t n = m.rows();
  if (n == 0) throw DimensionMismatch("herm_inv: empty matrix");

  if (n == 1) {
    const double a = m(0, 0).real();
    if (!(a > 0.0)) throw NotPositiveDefinite("herm_inv: 1x1 not positive");
    ComplexMatrix r(1, 1);
    r(0, 0) = 1.0 / a;
    return r;
  }
  if (n == 2) {
    const auto [l1, l2] = eig2_values(m);
    if (!(l1 > 0.0) || !(l2 > kPdEps * l1)) {
      throw NotPositiveDefinite("herm_inv: 2x2 eigenvalue test failed");
    }
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const cxd b = m(0, 1);
    const double det = a * d - std::norm(b);
    ComplexMatrix r(2, 2);
    r(0, 0) = d / det;
    r(0, 1) = -b / det;
    r(1, 0) = std::conj(r(0, 1));
    r(1, 1) = a / det;
    return r;
  }

  HermitianEig e = eig_hermitian(g);
  require_positive_spectrum(e.values, "herm_inv");
  const ComplexMatrix& u = e.vectors;
  ComplexMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      cxd acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += u(i, k) * std::conj(u(j, k)) / e.values[k];
      r(i, j) = acc;
      r(j, i) = std::conj(acc);
    }
    r(i, i) = cxd(r(i, i).real(), 0.0);
  }
  return r;
}

ComplexMatrix herm_inv_sqrt(const HermitianPD& c) {
  const std::size_t n = c.size();
  if (n == 0) throw DimensionMismatch("herm_inv_sqrt: empty matrix");
  if (n == 1) {
    const double a = c.matrix()(0, 0).real();
    if (!(a > 0.0)) throw NotPositiveDefinite("herm_inv_sqrt: 1x1 not positive");
    ComplexMatrix r(1, 1);
    r(0, 0) = 1.0 / std::sqrt(a);
    return r;
  }
  HermitianEig e = eig_hermitian(c);
  require_positive_spectrum(e.values, "herm_inv_sqrt");
  const ComplexMatrix& u = e.vectors;
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = 1.0 / std::sqrt(e.values[k]);
  ComplexMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      cxd acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += u(i, k) * std::conj(u(j, k)) * w[k];
      r(i, j) = acc;
      r(j, i) = std::conj(acc);
    }
    r(i, i) = cxd(r(i, i).real(), 0.0);
  }
  return r;
}

}  // namespace iva

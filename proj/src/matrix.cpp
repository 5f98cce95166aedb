#include "iva/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace iva {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<cxd>> rows) {
  std::vector<std::vector<cxd>> tmp;
  tmp.reserve(rows.size());
  for (const auto& r : rows) tmp.emplace_back(r);
  return from_rows(tmp);
}

ComplexMatrix ComplexMatrix::from_rows(const std::vector<std::vector<cxd>>& rows) {
  const std::size_t nr = rows.size();
  const std::size_t nc = nr ? rows.front().size() : 0;
  ComplexMatrix m(nr, nc);
  for (std::size_t i = 0; i < nr; ++i) {
    if (rows[i].size() != nc) throw DimensionMismatch("from_rows: ragged row lengths");
    for (std::size_t j = 0; j < nc; ++j) m(i, j) = rows[i][j];
  }
  m.require_finite("from_rows");
  return m;
}

bool ComplexMatrix::all_finite() const {
  for (const cxd& v : data_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

void ComplexMatrix::require_finite(const char* what) const {
  if (!all_finite()) throw DomainError(std::string(what) + ": non-finite matrix entry");
}

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch(std::string(what) + ": shape mismatch");
  }
}

}  // namespace

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "operator+");
  ComplexMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.data().size(); ++i) c.data()[i] = a.data()[i] + b.data()[i];
  return c;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "operator-");
  ComplexMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.data().size(); ++i) c.data()[i] = a.data()[i] - b.data()[i];
  return c;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("operator*: inner dimensions differ");
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cxd* ci = c.row(i);
    const cxd* ai = a.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cxd aik = ai[k];
      if (aik == cxd{}) continue;
      const cxd* bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

ComplexMatrix operator*(cxd s, const ComplexMatrix& a) {
  ComplexMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.data().size(); ++i) c.data()[i] = s * a.data()[i];
  return c;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix c(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(j, i) = std::conj(a(i, j));
  return c;
}

double max_abs(const ComplexMatrix& a) {
  double m = 0.0;
  for (const cxd& v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

double fro_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (const cxd& v : a.data()) s += std::norm(v);
  return std::sqrt(s);
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  }
  return m;
}

LuDecomposition lu_factor(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("lu_factor: matrix not square");
  const std::size_t n = a.rows();
  LuDecomposition f;
  f.lu = a;
  f.pivots.resize(n);
  f.max_pivot = 0.0;
  f.min_pivot = n ? std::numeric_limits<double>::infinity() : 0.0;

  ComplexMatrix& m = f.lu;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(m(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(m(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    f.pivots[k] = static_cast<int>(piv);
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      f.swap_parity = -f.swap_parity;
    }
    const cxd pivot = m(k, k);
    const double pa = std::abs(pivot);
    f.max_pivot = std::max(f.max_pivot, pa);
    f.min_pivot = std::min(f.min_pivot, pa);
    if (pa == 0.0) continue;  // leaves a zero pivot; callers test singular()
    for (std::size_t i = k + 1; i < n; ++i) {
      const cxd l = m(i, k) / pivot;
      m(i, k) = l;
      if (l == cxd{}) continue;
      const cxd* mk = m.row(k);
      cxd* mi = m.row(i);
      for (std::size_t j = k + 1; j < n; ++j) mi[j] -= l * mk[j];
    }
  }
  return f;
}

ComplexMatrix lu_solve(const LuDecomposition& f, const ComplexMatrix& b) {
  const std::size_t n = f.lu.rows();
  if (b.rows() != n) throw DimensionMismatch("lu_solve: rhs row count");
  if (f.singular()) throw SingularMatrix("lu_solve: singular matrix");
  ComplexMatrix x = b;
  const std::size_t r = b.cols();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t p = static_cast<std::size_t>(f.pivots[k]);
    if (p != k)
      for (std::size_t j = 0; j < r; ++j) std::swap(x(k, j), x(p, j));
  }
  // forward: L y = P b
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      const cxd l = f.lu(i, k);
      if (l == cxd{}) continue;
      for (std::size_t j = 0; j < r; ++j) x(i, j) -= l * x(k, j);
    }
  }
  // backward: U x = y
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t k = ii + 1; k < n; ++k) {
      const cxd u = f.lu(ii, k);
      if (u == cxd{}) continue;
      for (std::size_t j = 0; j < r; ++j) x(ii, j) -= u * x(k, j);
    }
    const cxd d = f.lu(ii, ii);
    for (std::size_t j = 0; j < r; ++j) x(ii, j) /= d;
  }
  return x;
}

cxd determinant(const ComplexMatrix& a) {
  LuDecomposition f = lu_factor(a);
  cxd det = static_cast<double>(f.swap_parity);
  for (std::size_t i = 0; i < a.rows(); ++i) det *= f.lu(i, i);
  return det;
}

double log_abs_det_sq(const ComplexMatrix& a) {
  LuDecomposition f = lu_factor(a);
  if (f.singular()) throw SingularMatrix("log_abs_det_sq: singular matrix");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) acc += std::log(std::abs(f.lu(i, i)));
  return 2.0 * acc;
}

ComplexMatrix inverse(const ComplexMatrix& a) {
  LuDecomposition f = lu_factor(a);
  if (f.singular()) throw SingularMatrix("inverse: singular matrix");
  return lu_solve(f, ComplexMatrix::identity(a.rows()));
}

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  LuDecomposition f = lu_factor(a);
  if (f.singular()) throw SingularMatrix("solve: singular matrix");
  return lu_solve(f, b);
}

bool is_nonsingular(const ComplexMatrix& a, double rel_tol) {
  if (a.rows() != a.cols() || a.rows() == 0) return false;
  return !lu_factor(a).singular(rel_tol);
}

}  // namespace iva

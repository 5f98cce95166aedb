#include <doctest.h>

#include "iva/hermitian.hpp"
#include "support.hpp"

using iva::ComplexMatrix;
using iva::cxd;
using iva::HermitianPD;

namespace {

HermitianPD hpd(const ComplexMatrix& m) { return HermitianPD::checked(m); }

}  // namespace

TEST_CASE("herm_inv identity and diagonal cases") {
  const ComplexMatrix i2 = ComplexMatrix::identity(2);
  CHECK(iva::max_abs_diff(iva::herm_inv(hpd(i2)), i2) == 0.0);

  const ComplexMatrix d = ComplexMatrix::from_rows({{2.0, 0.0}, {0.0, 0.5}});
  const ComplexMatrix di = iva::herm_inv(hpd(d));
  CHECK(di(0, 0).real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(di(1, 1).real() == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("herm_inv 2x2 adjugate hand value") {
  // [[2, i], [-i, 2]]^{-1} = (1/3) [[2, -i], [i, 2]]
  const ComplexMatrix m = ComplexMatrix::from_rows({{2.0, cxd(0, 1)}, {cxd(0, -1), 2.0}});
  const ComplexMatrix inv = iva::herm_inv(hpd(m));
  CHECK(std::abs(inv(0, 0) - cxd(2.0 / 3, 0)) < 1e-14);
  CHECK(std::abs(inv(0, 1) - cxd(0, -1.0 / 3)) < 1e-14);
  CHECK(std::abs(inv(1, 0) - cxd(0, 1.0 / 3)) < 1e-14);
  CHECK(std::abs(inv(1, 1) - cxd(2.0 / 3, 0)) < 1e-14);
}

TEST_CASE("herm_inv error paths") {
  const ComplexMatrix indefinite = ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}});
  CHECK_THROWS_AS(iva::herm_inv(hpd(indefinite)), iva::NotPositiveDefinite);

  const ComplexMatrix psd = ComplexMatrix::from_rows({{1.0, 1.0}, {1.0, 1.0}});
  CHECK_THROWS_AS(iva::herm_inv(hpd(psd)), iva::NotPositiveDefinite);

  ComplexMatrix rect(2, 3);
  CHECK_THROWS_AS(HermitianPD::checked(rect), iva::DimensionMismatch);

  const ComplexMatrix skew = ComplexMatrix::from_rows({{1.0, cxd(0, 1)}, {cxd(0, 1), 1.0}});
  CHECK_THROWS_AS(HermitianPD::checked(skew), iva::NotHermitian);
}

TEST_CASE("herm_inv is an involution on random HPD inputs") {
  auto g = testsup::rng(21);
  for (std::size_t n = 1; n <= 8; ++n) {
    const ComplexMatrix m = testsup::random_hpd(n, g);
    const ComplexMatrix back = iva::herm_inv(hpd(iva::herm_inv(hpd(m))));
    CHECK(iva::max_abs_diff(back, m) < 1e-8 * iva::max_abs(m));
  }
}

TEST_CASE("eig_hermitian diagonal and hand cases") {
  const ComplexMatrix d = ComplexMatrix::from_rows({{3.0, 0.0}, {0.0, 1.0}});
  const iva::HermitianEig e = iva::eig_hermitian(hpd(d));
  CHECK(e.values[0] == doctest::Approx(3.0));
  CHECK(e.values[1] == doctest::Approx(1.0));
  CHECK(iva::max_abs_diff(e.vectors, ComplexMatrix::identity(2)) < 1e-14);

  // [[2,1],[1,2]]: eigenvalues (3, 1), eigenvectors (1,1)/sqrt2 and (1,-1)/sqrt2
  const ComplexMatrix m = ComplexMatrix::from_rows({{2.0, 1.0}, {1.0, 2.0}});
  const iva::HermitianEig e2 = iva::eig_hermitian(hpd(m));
  CHECK(e2.values[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(e2.values[1] == doctest::Approx(1.0).epsilon(1e-12));
  const double s = 1.0 / std::sqrt(2.0);
  // compare up to phase via |<u, expected>| = 1
  const cxd dot0 = std::conj(e2.vectors(0, 0)) * s + std::conj(e2.vectors(1, 0)) * s;
  const cxd dot1 = std::conj(e2.vectors(0, 1)) * s - std::conj(e2.vectors(1, 1)) * s;
  CHECK(std::abs(dot0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(dot1) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("eig_hermitian scalar matrix accepts any unitary basis") {
  const ComplexMatrix c = cxd(2.5, 0.0) * ComplexMatrix::identity(4);
  const iva::HermitianEig e = iva::eig_hermitian(hpd(c));
  for (double v : e.values) CHECK(v == doctest::Approx(2.5));
  // reconstruction test is the contract
  ComplexMatrix rec(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      cxd acc = 0.0;
      for (std::size_t k = 0; k < 4; ++k)
        acc += e.vectors(i, k) * e.values[k] * std::conj(e.vectors(j, k));
      rec(i, j) = acc;
    }
  CHECK(iva::max_abs_diff(rec, c) < 1e-12);
}

TEST_CASE("eig_hermitian reconstruction and unitarity on random inputs") {
  auto g = testsup::rng(33);
  for (std::size_t n : {2u, 3u, 5u, 8u}) {
    // Hermitian but not necessarily PD
    ComplexMatrix m = testsup::random_complex(n, n, g);
    m = cxd(0.5, 0.0) * (m + iva::adjoint(m));
    const iva::HermitianEig e = iva::eig_hermitian(HermitianPD::checked(m));

    const double scale = std::max(iva::max_abs(m), 1e-30);
    ComplexMatrix rec(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        cxd acc = 0.0;
        for (std::size_t k = 0; k < n; ++k)
          acc += e.vectors(i, k) * e.values[k] * std::conj(e.vectors(j, k));
        rec(i, j) = acc;
      }
    CHECK(iva::max_abs_diff(rec, m) < 1e-9 * scale);

    const ComplexMatrix uhu = iva::adjoint(e.vectors) * e.vectors;
    CHECK(iva::max_abs_diff(uhu, ComplexMatrix::identity(n)) < 1e-10);

    for (std::size_t k = 0; k + 1 < n; ++k) CHECK(e.values[k] >= e.values[k + 1]);
  }
}

TEST_CASE("herm_inv_sqrt hand values and contract") {
  CHECK(iva::max_abs_diff(iva::herm_inv_sqrt(hpd(ComplexMatrix::identity(3))),
                          ComplexMatrix::identity(3)) < 1e-14);

  const ComplexMatrix d = ComplexMatrix::from_rows({{4.0, 0.0}, {0.0, 9.0}});
  const ComplexMatrix r = iva::herm_inv_sqrt(hpd(d));
  CHECK(r(0, 0).real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r(1, 1).real() == doctest::Approx(1.0 / 3).epsilon(1e-14));

  const ComplexMatrix scalar = ComplexMatrix::from_rows({{4.0}});
  CHECK(iva::herm_inv_sqrt(hpd(scalar))(0, 0).real() == doctest::Approx(0.5));

  auto g = testsup::rng(55);
  for (std::size_t n : {2u, 4u, 6u}) {
    const ComplexMatrix c = testsup::random_hpd(n, g);
    const ComplexMatrix m = iva::herm_inv_sqrt(hpd(c));
    CHECK(iva::is_hermitian(m, 1e-12));
    const ComplexMatrix mcmh = m * c * iva::adjoint(m);
    CHECK(iva::max_abs_diff(mcmh, ComplexMatrix::identity(n)) < 1e-9);
    // squared and inverted equals C
    const ComplexMatrix back = iva::herm_inv(hpd(m * m));
    CHECK(iva::max_abs_diff(back, c) < 1e-8 * iva::max_abs(c));
  }

  const ComplexMatrix indefinite = ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -2.0}});
  CHECK_THROWS_AS(iva::herm_inv_sqrt(hpd(indefinite)), iva::NotPositiveDefinite);
}

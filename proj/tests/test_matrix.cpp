#include <doctest.h>

#include "iva/matrix.hpp"
#include "support.hpp"

using iva::ComplexMatrix;
using iva::cxd;

TEST_CASE("matmul and adjoint basics") {
  const ComplexMatrix a = ComplexMatrix::from_rows({{cxd(1, 1), cxd(0, 2)}, {cxd(3, 0), cxd(1, -1)}});
  const ComplexMatrix i2 = ComplexMatrix::identity(2);
  CHECK(iva::max_abs_diff(a * i2, a) == 0.0);
  CHECK(iva::max_abs_diff(i2 * a, a) == 0.0);

  const ComplexMatrix ah = iva::adjoint(a);
  CHECK(ah(0, 1) == std::conj(a(1, 0)));
  CHECK(iva::max_abs_diff(iva::adjoint(ah), a) == 0.0);
}

TEST_CASE("from_rows rejects non-finite entries and ragged rows") {
  CHECK_THROWS_AS(ComplexMatrix::from_rows({{cxd(std::nan(""), 0)}}), iva::DomainError);
  CHECK_THROWS_AS(ComplexMatrix::from_rows({{cxd(1, 0), cxd(0, 0)}, {cxd(1, 0)}}),
                  iva::DimensionMismatch);
}

TEST_CASE("determinant matches hand values") {
  const ComplexMatrix a = ComplexMatrix::from_rows({{2.0, cxd(0, 1)}, {cxd(0, -1), 2.0}});
  CHECK(std::abs(iva::determinant(a) - cxd(3.0, 0.0)) < 1e-14);

  const ComplexMatrix b =
      ComplexMatrix::from_rows({{1.0, 2.0, 0.0}, {0.0, 1.0, 3.0}, {4.0, 0.0, 1.0}});
  // det = 1*(1-0) - 2*(0-12) + 0 = 25
  CHECK(std::abs(iva::determinant(b) - cxd(25.0, 0.0)) < 1e-12);
  CHECK(iva::log_abs_det_sq(b) == doctest::Approx(2.0 * std::log(25.0)).epsilon(1e-12));
}

TEST_CASE("inverse and solve round trips on random matrices") {
  auto g = testsup::rng(11);
  for (std::size_t n : {1u, 2u, 3u, 5u, 8u}) {
    const ComplexMatrix a = testsup::random_nonsingular(n, g);
    const ComplexMatrix ai = iva::inverse(a);
    CHECK(iva::max_abs_diff(a * ai, ComplexMatrix::identity(n)) < 1e-10 * std::max(1.0, iva::max_abs(a)));

    const ComplexMatrix b = testsup::random_complex(n, 3, g);
    const ComplexMatrix x = iva::solve(a, b);
    CHECK(iva::max_abs_diff(a * x, b) < 1e-9 * std::max(1.0, iva::max_abs(b)));
  }
}

TEST_CASE("singular matrices are rejected") {
  const ComplexMatrix s = ComplexMatrix::from_rows({{1.0, 2.0}, {2.0, 4.0}});
  CHECK_THROWS_AS(iva::inverse(s), iva::SingularMatrix);
  CHECK_THROWS_AS(iva::log_abs_det_sq(s), iva::SingularMatrix);
  CHECK_FALSE(iva::is_nonsingular(s));
  CHECK(iva::is_nonsingular(ComplexMatrix::identity(3)));
}

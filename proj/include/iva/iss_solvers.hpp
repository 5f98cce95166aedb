#pragma once

#include "iva/mm_core.hpp"

namespace iva {

/// Closed-form solution pieces of the 2x2 block problem
///   min_P  p_1^H G_1 p_1 + p_2^H G_2 p_2 - log |det P|^2
/// built from the eigenpairs of H = G_1^{-1} G_2.
struct TwoByTwoSolution {
  ComplexMatrix H;        // G1^{-1} G2
  double theta1 = 0.0;    // larger eigenvalue (the + branch)
  double theta2 = 0.0;    // det(H) / theta1
  ComplexMatrix u1, u2;   // 2x1 eigenvectors (pre-normalization)
  ComplexMatrix P;        // 2x2 minimizer, rows p_i^H with p_i^H G_i p_i = 1
};

/// Solves the d = 2 block problem globally. G1, G2 must be Hermitian PD
/// (NotPositiveDefinite otherwise). A degenerate spectrum (H ~ c I) falls
/// back to coordinate eigenvectors; a vanishing eigenvector formula is
/// replaced by the alternate row of the adjugate, which spans the same
/// eigenspace whenever H != theta I.
TwoByTwoSolution solve_2x2_full(const ComplexMatrix& g1, const ComplexMatrix& g2);
ComplexMatrix solve_2x2(const ComplexMatrix& g1, const ComplexMatrix& g2);

/// Closed-form minimization over the Q block of T in D_ISS_d:
/// for each target row i = d..m-1 (current order), subtracts the
/// lambda-weighted projection onto the leading d rows:
///   q_i = -G_i^{-1} g_i,  Y_i += q_i^H Y_{0:d},  W_i += q_i^H W_{0:d}.
/// After the step the recomputed cross-term g_i vanishes.
void iss_q_step(ComplexMatrix& w, ComplexMatrix& y, const RealMatrix& lambda, std::size_t d,
                std::size_t rotation = 0);

/// Closed-form minimization over the P block of T: d = 1 rescales the
/// leading row by G_1^{-1/2}; d = 2 applies the solve_2x2 minimizer to the
/// leading two rows. Returns the applied d x d transform.
ComplexMatrix iss_p_step(ComplexMatrix& w, ComplexMatrix& y, const RealMatrix& lambda,
                         std::size_t d, std::size_t rotation = 0);

/// One full ISS_d pass: L = m / d sub-steps of (Q, P) with the cyclic block
/// rotation tracked as an index offset, so the row order of (W, Y, Lambda)
/// is untouched and restored by construction after the pass.
/// Throws IndivisibleBlock when d does not divide m.
void iss_pass(ComplexMatrix& w, ComplexMatrix& y, const RealMatrix& lambda, std::size_t d);

class Iss1Solver final : public Solver {
 public:
  SolverKind kind() const override { return SolverKind::Iss1; }
  void pass(ComplexMatrix& w, ComplexMatrix& y, const ComplexMatrix& x,
            const RealMatrix& lambda) const override;
};

class Iss2Solver final : public Solver {
 public:
  SolverKind kind() const override { return SolverKind::Iss2; }
  void pass(ComplexMatrix& w, ComplexMatrix& y, const ComplexMatrix& x,
            const RealMatrix& lambda) const override;
};

}  // namespace iva

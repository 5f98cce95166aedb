#pragma once

#include <utility>
#include <vector>

#include "iva/mm_core.hpp"

namespace iva {

/// Covariances V_1..V_m (m x m each) for one bin, built from X and Lambda.
struct CovarianceSet {
  std::vector<ComplexMatrix> V;
};

CovarianceSet build_covariance_set(const ComplexMatrix& x, const RealMatrix& lambda);

/// Single-row update: u = (W V_l)^{-1} e_l, w_l = u / (u^H V_l u)^{1/2}.
/// Returns the new m x 1 column w_l (row l of W becomes w_l^H).
ComplexMatrix ip1_row_update(const ComplexMatrix& w, const ComplexMatrix& v_l, std::size_t l);

/// Sweeps rows 0..m-1 with ip1_row_update against freshly built covariances,
/// then refreshes Y = W X.
void ip1_pass(ComplexMatrix& w, ComplexMatrix& y, const ComplexMatrix& x,
              const RealMatrix& lambda);

/// Joint update of rows p and q: reduces to the 2x2 block problem through
/// U_i = (W V_i)^{-1} [e_p, e_q] and Gt_i = U_i^H V_i U_i, solves it with
/// solve_2x2 on (Gt_p^{-1}, Gt_q^{-1}), and maps rows back via
/// w_i = U_i Gt_i^{-1} r_i. Returns (w_p, w_q) as m x 1 columns.
std::pair<ComplexMatrix, ComplexMatrix> ip2_pair_update(const ComplexMatrix& w,
                                                        const ComplexMatrix& v_p,
                                                        const ComplexMatrix& v_q, std::size_t p,
                                                        std::size_t q);

/// Sweeps the disjoint pairs (0,1), (2,3), ... ; throws OddChannelCount for
/// odd m. Refreshes Y = W X at the end of the sweep.
void ip2_pass(ComplexMatrix& w, ComplexMatrix& y, const ComplexMatrix& x,
              const RealMatrix& lambda);

class Ip1Solver final : public Solver {
 public:
  SolverKind kind() const override { return SolverKind::Ip1; }
  void pass(ComplexMatrix& w, ComplexMatrix& y, const ComplexMatrix& x,
            const RealMatrix& lambda) const override;
};

class Ip2Solver final : public Solver {
 public:
  SolverKind kind() const override { return SolverKind::Ip2; }
  void pass(ComplexMatrix& w, ComplexMatrix& y, const ComplexMatrix& x,
            const RealMatrix& lambda) const override;
};

}  // namespace iva

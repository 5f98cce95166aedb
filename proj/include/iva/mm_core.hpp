#pragma once

#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "iva/contrast.hpp"
#include "iva/hermitian.hpp"
#include "iva/mixture.hpp"

namespace iva {

/// Whitening initialization for one bin: with U D U^H = (1/n) X X^H,
/// returns W = D^{-1/2} U^H and Y = W X, so (1/n) Y Y^H = I.
/// Throws NotPositiveDefinite for rank-deficient observations.
std::pair<ComplexMatrix, ComplexMatrix> whiten_init(const ComplexMatrix& x);

/// Builds a whitened SeparatorState over all bins.
SeparatorState whiten_init_all(const MixtureSet& mix, int threads = 1);

/// Lambda_ij = phi'(||y_ij|| + eps) / (||y_ij|| + eps) with
/// ||y_ij|| = sqrt(sum_k |Y_ij^[k]|^2).
AuxiliaryWeights update_weights(const SeparatorState& state, const ContrastModel& model,
                                double eps = kDefaultEps);

struct Gram {
  ComplexMatrix G;                 // (1/2n) Yb diag(lambda) Yb^H, d x d Hermitian
  std::optional<ComplexMatrix> g;  // (1/2n) Yb diag(lambda) yt^H, d x 1
};

/// Weighted Gram quantities of a d x n block against an optional 1 x n target.
Gram weighted_gram(const ComplexMatrix& y_block, std::span<const double> lambda_row,
                   const ComplexMatrix* y_target = nullptr);

/// V = (1/2n) X diag(lambda) X^H; Hermitian by construction, PD for generic X.
ComplexMatrix build_covariance(const ComplexMatrix& x, std::span<const double> lambda_row);

/// sum_i w_i^H V_i w_i - log |det W|^2 (w_i^H is row i of W).
double surrogate_value(const ComplexMatrix& w, const std::vector<ComplexMatrix>& v_set);

/// (1/n) sum_ij phi(||y_ij||) - sum_k log |det W^[k]|^2 (constant dropped).
double total_cost(const SeparatorState& state, const ContrastModel& model);

/// One inner-BCD pass over a single bin; implemented by each solver.
class Solver {
 public:
  virtual ~Solver() = default;
  virtual SolverKind kind() const = 0;
  /// Updates the bin in place; lambda is fixed for the whole pass.
  virtual void pass(ComplexMatrix& w, ComplexMatrix& y, const ComplexMatrix& x,
                    const RealMatrix& lambda) const = 0;
  const char* name() const { return solver_name(kind()); }

  static std::unique_ptr<Solver> make(SolverKind kind);
};

/// One MM iteration: the weight update followed by one full inner pass of
/// the solver over every bin (bins are independent given Lambda and may run
/// in parallel; results are bitwise independent of the thread count).
/// Returns the weights used by this step. pass_ms, when given, receives the
/// wall time of the inner pass alone (the weight update is excluded, which
/// is what the complexity accounting measures).
AuxiliaryWeights mm_step(SeparatorState& state, const MixtureSet& mix, const Solver& solver,
                         const ContrastModel& model, double eps = kDefaultEps, int threads = 1,
                         double* pass_ms = nullptr);

}  // namespace iva

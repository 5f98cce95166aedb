#pragma once

#include <span>
#include <vector>

#include "iva/mixture.hpp"
#include "iva/signal.hpp"

namespace iva {

/// Scale-invariant SDR in dB:
///   10 log10(||alpha s||^2 / ||shat - alpha s||^2), alpha = <shat, s> / ||s||^2.
/// Returns +inf when the residual energy falls below 1e-30 of the projected
/// signal energy and -inf when the projection vanishes.
double sdr_si(std::span<const double> estimate, std::span<const double> reference);
double sdr_si(const TimeSignal& estimate, const TimeSignal& reference);

struct MdpResult {
  SeparatorState state;
  /// True when some row scale A_1i (image at the first microphone) is
  /// negligible, e.g. the identity-separator case; such rows are zeroed and
  /// the rescaled W may be singular.
  bool degenerate = false;
};

/// Minimum-distortion-principle rescaling: per bin, with A = W^{-1}, row i of
/// Y (and of W) is scaled by A_1i so each source appears at its image at the
/// first microphone; Y = W X is preserved.
MdpResult mdp_rescale(const SeparatorState& state);

/// Maximum-total assignment of estimates to references given a score matrix
/// (rows: estimates, cols: references). Exhaustive for m <= 6, Hungarian
/// above. Infinities are clamped to +/-1e9 for the search arithmetic.
std::vector<std::size_t> best_assignment(const std::vector<std::vector<double>>& score);

struct DeltaSdrReport {
  std::vector<double> sdr_db;        // per estimate, aligned
  std::vector<double> initial_db;    // per matched reference, mixture baseline
  std::vector<double> delta_db;      // sdr_db - initial_db
  std::vector<std::size_t> assignment;  // estimate i -> reference assignment[i]
  double mean_delta_db = 0.0;
  bool mdp_degenerate = false;
};

/// MDP-rescales, synthesizes each separated source, aligns to the references
/// by exact assignment search, and reports Delta SDR against the unprocessed
/// first-microphone mixture. Signals are compared on the fully covered
/// overlap-add interior.
DeltaSdrReport evaluate_delta_sdr(const SeparatorState& state, const StftConfig& cfg,
                                  const std::vector<TimeSignal>& references,
                                  const TimeSignal& first_mic_mixture);

}  // namespace iva

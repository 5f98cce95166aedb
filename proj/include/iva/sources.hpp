#pragma once

#include <cstdint>
#include <vector>

#include "iva/contrast.hpp"
#include "iva/signal.hpp"

namespace iva {

/// Theoretical standard deviation of the unit-scale GGD exp(-|x|^beta):
/// sqrt(Gamma(3/beta) / Gamma(1/beta)).
double ggd_std(double beta);

/// i.i.d. real symmetric GGD samples with shape model.beta(), scaled to unit
/// theoretical power. |s| = T^{1/beta} with T ~ Gamma(1/beta, 1) and a random
/// sign (inverse-transform of the radial density). Deterministic per seed and
/// per source index, independent of threading.
std::vector<TimeSignal> sample_sources(std::size_t m, std::size_t length,
                                       const ContrastModel& model, std::uint64_t seed,
                                       double sample_rate = 16000.0);

/// Multiplies each source by a slowly varying random level envelope
/// exp(z(t)), z linearly interpolated between i.i.d. N(0, log_std^2) control
/// points spaced `period` samples apart, then renormalizes to unit empirical
/// power. Gives stationary innovations the frame-level loud/quiet dynamics
/// that speech has; separation benchmarks need this structure because the
/// frame norms of an unmodulated i.i.d. process concentrate and carry almost
/// no contrast. Deterministic per seed and source index.
void apply_level_envelope(std::vector<TimeSignal>& sources, std::uint64_t seed,
                          double log_std = 1.0, std::size_t period = 2048);

}  // namespace iva

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iva/signal.hpp"

namespace iva {

/// Square FIR convolutive mixing system: taps[c][s] filters source s into
/// channel c. The matrix of DC gains must be nonsingular.
struct MixingScenario {
  std::size_t channels = 0;
  std::size_t filter_length = 0;
  double sample_rate = 16000.0;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::vector<double>>> taps;  // [channel][source][tap]

  void validate() const;

  /// Random exponentially decaying FIR scenario; redraws (deterministically)
  /// until the DC-gain matrix passes the nonsingularity check.
  static MixingScenario random(std::size_t m, std::size_t filter_length, std::uint64_t seed,
                               double sample_rate = 16000.0);

  static MixingScenario load(const std::string& path);
  void save(const std::string& path) const;
  std::string to_json_string() const;
  static MixingScenario from_json_string(const std::string& text);
};

/// Same-length convolutive mixture: x_c = sum_s taps[c][s] * source_s with
/// the convolution tail truncated at the source length.
std::vector<TimeSignal> mix_convolutive(const std::vector<TimeSignal>& sources,
                                        const MixingScenario& scenario);

/// Per-source images at the first microphone (all other sources muted);
/// the evaluation references.
std::vector<TimeSignal> reference_images(const std::vector<TimeSignal>& sources,
                                         const MixingScenario& scenario);

}  // namespace iva

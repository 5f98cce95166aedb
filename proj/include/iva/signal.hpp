#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "iva/matrix.hpp"

namespace iva {

struct TimeSignal {
  std::vector<double> samples;
  double sample_rate = 16000.0;
};

enum class WindowKind { Hann, Rect };

WindowKind window_from_name(const std::string& name);  // "hann" | "rect"
const char* window_name(WindowKind w);

/// Analysis/synthesis framing. hop must divide frame_size and satisfy
/// hop <= frame_size / 2; frame_size must be a power of two (radix-2 FFT).
struct StftConfig {
  std::size_t frame_size = 4096;
  std::size_t hop = 1024;
  WindowKind window = WindowKind::Hann;

  void validate() const;
  std::size_t bins() const { return frame_size / 2 + 1; }
};

/// One-sided complex spectrogram, bins x frames, row-major per bin.
struct Spectrogram {
  std::size_t bins = 0;
  std::size_t frames = 0;
  double sample_rate = 16000.0;
  std::vector<cxd> data;

  Spectrogram() = default;
  Spectrogram(std::size_t b, std::size_t f, double rate)
      : bins(b), frames(f), sample_rate(rate), data(b * f) {}

  cxd& at(std::size_t k, std::size_t j) { return data[k * frames + j]; }
  const cxd& at(std::size_t k, std::size_t j) const { return data[k * frames + j]; }
};

/// Radix-2 complex FFT with precomputed twiddles; n must be a power of two.
class Fft {
 public:
  explicit Fft(std::size_t n);
  std::size_t size() const { return n_; }
  void forward(cxd* a) const;
  void inverse(cxd* a) const;  // includes the 1/n scale

 private:
  void transform(cxd* a, bool inv) const;
  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<cxd> twiddle_;  // exp(-2 pi i j / n), j < n/2
};

/// Windowed, hop-advanced one-sided STFT; rejects signals shorter than one
/// frame (SignalTooShort).
Spectrogram stft(const TimeSignal& x, const StftConfig& cfg);

/// Weighted overlap-add synthesis. The synthesis window is the analysis
/// window normalized by the full-overlap window-energy sum, and partially
/// covered edge samples are renormalized by the accumulated window product,
/// so the round trip is exact wherever any window coverage exists.
TimeSignal istft(const Spectrogram& s, const StftConfig& cfg);

/// Synthesizes two spectrograms with one complex inverse FFT per frame
/// (identical output to istft on each); the per-iteration scoring path.
std::pair<TimeSignal, TimeSignal> istft_pair(const Spectrogram& a, const Spectrogram& b,
                                             const StftConfig& cfg);

/// Samples in [begin, end) carry full window coverage; outside the range the
/// overlap-add is edge-renormalized. recon_len is the istft output length.
inline std::size_t istft_interior_begin(const StftConfig& cfg) {
  return cfg.frame_size - cfg.hop;
}
inline std::size_t istft_interior_end(const StftConfig& cfg, std::size_t recon_len) {
  return recon_len - (cfg.frame_size - cfg.hop);
}

}  // namespace iva

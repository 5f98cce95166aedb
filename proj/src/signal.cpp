#include "iva/signal.hpp"

#include <cmath>
#include <numbers>

namespace iva {

WindowKind window_from_name(const std::string& name) {
  if (name == "hann") return WindowKind::Hann;
  if (name == "rect") return WindowKind::Rect;
  throw ConfigError("unknown window: " + name);
}

const char* window_name(WindowKind w) {
  return w == WindowKind::Hann ? "hann" : "rect";
}

namespace {

bool power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<double> analysis_window(const StftConfig& cfg) {
  std::vector<double> w(cfg.frame_size, 1.0);
  if (cfg.window == WindowKind::Hann) {
    const double step = 2.0 * std::numbers::pi / static_cast<double>(cfg.frame_size);
    for (std::size_t t = 0; t < cfg.frame_size; ++t) w[t] = 0.5 - 0.5 * std::cos(step * t);
  }
  return w;
}

// w_s = w_a / D with D the full-overlap window-energy sum per hop offset,
// so that sum_j w_s(t - jh) w_a(t - jh) = 1 under full coverage.
std::vector<double> synthesis_window(const StftConfig& cfg, const std::vector<double>& wa) {
  const std::size_t n = cfg.frame_size;
  const std::size_t h = cfg.hop;
  std::vector<double> d(h, 0.0);
  for (std::size_t t = 0; t < n; ++t) d[t % h] += wa[t] * wa[t];
  std::vector<double> ws(n);
  for (std::size_t t = 0; t < n; ++t) ws[t] = d[t % h] > 0.0 ? wa[t] / d[t % h] : 0.0;
  return ws;
}

}  // namespace

void StftConfig::validate() const {
  if (!power_of_two(frame_size) || frame_size < 2) {
    throw ConfigError("StftConfig: frame_size must be a power of two >= 2");
  }
  if (hop == 0 || frame_size % hop != 0 || hop > frame_size / 2) {
    throw ConfigError("StftConfig: hop must divide frame_size and satisfy hop <= frame_size/2");
  }
}

Fft::Fft(std::size_t n) : n_(n) {
  if (!power_of_two(n)) throw ConfigError("Fft: size must be a power of two");
  bitrev_.resize(n);
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
    bitrev_[i] = r;
  }
  twiddle_.resize(n / 2);
  for (std::size_t j = 0; j < n / 2; ++j) {
    const double ang = -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    twiddle_[j] = cxd(std::cos(ang), std::sin(ang));
  }
}

void Fft::transform(cxd* a, bool inv) const {
  const std::size_t n = n_;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = bitrev_[i];
    if (i < r) std::swap(a[i], a[r]);
  }
  double* d = reinterpret_cast<double*>(a);  // (re, im) pairs
  const double sign = inv ? -1.0 : 1.0;
  // first stage: twiddle is 1
  if (n >= 2) {
    for (std::size_t base = 0; base < 2 * n; base += 4) {
      const double tr = d[base + 2], ti = d[base + 3];
      d[base + 2] = d[base] - tr;
      d[base + 3] = d[base + 1] - ti;
      d[base] += tr;
      d[base + 1] += ti;
    }
  }
  for (std::size_t len = 4; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t stride = n / len;
    for (std::size_t base = 0; base < n; base += len) {
      double* lo = d + 2 * base;
      double* hi = d + 2 * (base + half);
      const cxd* tw = twiddle_.data();
      for (std::size_t j = 0; j < half; ++j, tw += stride) {
        const double wr = tw->real();
        const double wi = sign * tw->imag();
        const double hr = hi[2 * j], hm = hi[2 * j + 1];
        const double tr = wr * hr - wi * hm;
        const double ti = wr * hm + wi * hr;
        hi[2 * j] = lo[2 * j] - tr;
        hi[2 * j + 1] = lo[2 * j + 1] - ti;
        lo[2 * j] += tr;
        lo[2 * j + 1] += ti;
      }
    }
  }
}

void Fft::forward(cxd* a) const { transform(a, false); }

void Fft::inverse(cxd* a) const {
  transform(a, true);
  const double s = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) a[i] *= s;
}

Spectrogram stft(const TimeSignal& x, const StftConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.frame_size;
  const std::size_t h = cfg.hop;
  if (x.samples.size() < n) throw SignalTooShort("stft: signal shorter than one frame");
  const std::size_t frames = (x.samples.size() - n) / h + 1;
  const std::size_t bins = cfg.bins();

  const std::vector<double> wa = analysis_window(cfg);
  const Fft fft(n);
  Spectrogram s(bins, frames, x.sample_rate);
  std::vector<cxd> buf(n);
  for (std::size_t j = 0; j < frames; ++j) {
    const double* seg = x.samples.data() + j * h;
    for (std::size_t t = 0; t < n; ++t) buf[t] = wa[t] * seg[t];
    fft.forward(buf.data());
    for (std::size_t k = 0; k < bins; ++k) s.at(k, j) = buf[k];
  }
  return s;
}

TimeSignal istft(const Spectrogram& s, const StftConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.frame_size;
  const std::size_t h = cfg.hop;
  if (s.bins != cfg.bins() || s.frames == 0) {
    throw ShapeMismatch("istft: spectrogram shape does not match config");
  }

  const std::vector<double> wa = analysis_window(cfg);
  const std::vector<double> ws = synthesis_window(cfg, wa);
  const Fft fft(n);

  const std::size_t out_len = (s.frames - 1) * h + n;
  TimeSignal out;
  out.sample_rate = s.sample_rate;
  out.samples.assign(out_len, 0.0);
  std::vector<double> den(out_len, 0.0);
  std::vector<cxd> buf(n);

  for (std::size_t j = 0; j < s.frames; ++j) {
    // DC and Nyquist are projected to their real parts so the assembled
    // spectrum is exactly Hermitian (real synthesis).
    buf[0] = s.at(0, j).real();
    for (std::size_t k = 1; k < n / 2; ++k) {
      buf[k] = s.at(k, j);
      buf[n - k] = std::conj(s.at(k, j));
    }
    buf[n / 2] = s.at(n / 2, j).real();
    fft.inverse(buf.data());
    double* dst = out.samples.data() + j * h;
    double* dd = den.data() + j * h;
    for (std::size_t t = 0; t < n; ++t) {
      dst[t] += ws[t] * buf[t].real();
      dd[t] += ws[t] * wa[t];
    }
  }
  for (std::size_t t = 0; t < out_len; ++t) {
    out.samples[t] = den[t] > 1e-12 ? out.samples[t] / den[t] : 0.0;
  }
  return out;
}

namespace {

// Real inverse transform of a one-sided spectrum through a half-size complex
// inverse FFT: with E/O the even/odd-sample DFTs recovered from
//   X[k] = E[k] + t_k O[k],  conj(X[N/2-k]) = E[k] - t_k O[k],
// ifft_{N/2}(E + iO) interleaves back to the N real samples.
class HalfSizeSynth {
 public:
  explicit HalfSizeSynth(std::size_t n)
      : n_(n), fft_(n / 2), z_(n / 2), twiddle_conj_(n / 2) {
    for (std::size_t k = 0; k < n / 2; ++k) {
      const double ang = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      twiddle_conj_[k] = cxd(std::cos(ang), std::sin(ang));  // conj(t_k)
    }
  }

  // spectrum: callable k -> X[k] for k = 0..n/2 (DC/Nyquist real);
  // out receives n real samples
  template <class Spectrum>
  void run(const Spectrum& spectrum, double* out) {
    const std::size_t half = n_ / 2;
    {
      const cxd x0 = spectrum(0);
      const cxd xh = spectrum(half);
      const cxd e = 0.5 * (x0 + std::conj(xh));
      const cxd o = 0.5 * (x0 - std::conj(xh));  // t_0 = 1
      z_[0] = e + cxd(0.0, 1.0) * o;
    }
    for (std::size_t k = 1; k < half; ++k) {
      const cxd xk = spectrum(k);
      const cxd xm = std::conj(spectrum(half - k));
      const cxd e = 0.5 * (xk + xm);
      const cxd o = 0.5 * (xk - xm) * twiddle_conj_[k];
      z_[k] = e + cxd(0.0, 1.0) * o;
    }
    fft_.inverse(z_.data());
    for (std::size_t t = 0; t < half; ++t) {
      out[2 * t] = z_[t].real();
      out[2 * t + 1] = z_[t].imag();
    }
  }

 private:
  std::size_t n_;
  Fft fft_;
  std::vector<cxd> z_;
  std::vector<cxd> twiddle_conj_;
};

}  // namespace

std::pair<TimeSignal, TimeSignal> istft_pair(const Spectrogram& a, const Spectrogram& b,
                                             const StftConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.frame_size;
  const std::size_t h = cfg.hop;
  if (a.bins != cfg.bins() || b.bins != cfg.bins() || a.frames != b.frames || a.frames == 0) {
    throw ShapeMismatch("istft_pair: spectrogram shapes");
  }

  const std::vector<double> wa = analysis_window(cfg);
  const std::vector<double> ws = synthesis_window(cfg, wa);

  const std::size_t out_len = (a.frames - 1) * h + n;
  TimeSignal xa, xb;
  xa.sample_rate = a.sample_rate;
  xb.sample_rate = b.sample_rate;
  xa.samples.assign(out_len, 0.0);
  xb.samples.assign(out_len, 0.0);
  std::vector<double> den(out_len, 0.0);

  if (n >= 4) {
    HalfSizeSynth synth(n);
    std::vector<double> fa(n), fb(n);
    for (std::size_t j = 0; j < a.frames; ++j) {
      // DC and Nyquist projected real, matching istft
      auto spec_a = [&](std::size_t k) {
        const cxd v = a.at(k, j);
        return (k == 0 || k == n / 2) ? cxd(v.real(), 0.0) : v;
      };
      auto spec_b = [&](std::size_t k) {
        const cxd v = b.at(k, j);
        return (k == 0 || k == n / 2) ? cxd(v.real(), 0.0) : v;
      };
      synth.run(spec_a, fa.data());
      synth.run(spec_b, fb.data());
      double* da = xa.samples.data() + j * h;
      double* db = xb.samples.data() + j * h;
      double* dd = den.data() + j * h;
      for (std::size_t t = 0; t < n; ++t) {
        da[t] += ws[t] * fa[t];
        db[t] += ws[t] * fb[t];
        dd[t] += ws[t] * wa[t];
      }
    }
  } else {
    const Fft fft(n);
    std::vector<cxd> buf(n);
    for (std::size_t j = 0; j < a.frames; ++j) {
      buf[0] = cxd(a.at(0, j).real(), b.at(0, j).real());
      buf[n / 2] = cxd(a.at(n / 2, j).real(), b.at(n / 2, j).real());
      fft.inverse(buf.data());
      double* da = xa.samples.data() + j * h;
      double* db = xb.samples.data() + j * h;
      double* dd = den.data() + j * h;
      for (std::size_t t = 0; t < n; ++t) {
        da[t] += ws[t] * buf[t].real();
        db[t] += ws[t] * buf[t].imag();
        dd[t] += ws[t] * wa[t];
      }
    }
  }
  for (std::size_t t = 0; t < out_len; ++t) {
    const double scale = den[t] > 1e-12 ? 1.0 / den[t] : 0.0;
    xa.samples[t] *= scale;
    xb.samples[t] *= scale;
  }
  return {std::move(xa), std::move(xb)};
}

}  // namespace iva

#include "iva/sources.hpp"

#include <cmath>
#include <random>

namespace iva {

double ggd_std(double beta) {
  return std::sqrt(std::exp(std::lgamma(3.0 / beta) - std::lgamma(1.0 / beta)));
}

void apply_level_envelope(std::vector<TimeSignal>& sources, std::uint64_t seed, double log_std,
                          std::size_t period) {
  if (period == 0) throw DomainError("apply_level_envelope: period must be positive");
  if (!(log_std >= 0.0)) throw DomainError("apply_level_envelope: log_std must be nonnegative");
  for (std::size_t i = 0; i < sources.size(); ++i) {
    std::vector<double>& s = sources[i].samples;
    if (s.empty()) continue;
    std::mt19937_64 g(seed + 0xD1B54A32D192ED03ULL * (i + 1));
    std::normal_distribution<double> z(0.0, log_std);
    std::vector<double> ctl(s.size() / period + 2);
    for (double& v : ctl) v = z(g);
    double power = 0.0;
    for (std::size_t t = 0; t < s.size(); ++t) {
      const std::size_t c = t / period;
      const double frac = static_cast<double>(t % period) / static_cast<double>(period);
      s[t] *= std::exp(ctl[c] * (1.0 - frac) + ctl[c + 1] * frac);
      power += s[t] * s[t];
    }
    const double inv = 1.0 / std::sqrt(power / static_cast<double>(s.size()));
    for (double& v : s) v *= inv;
  }
}

std::vector<TimeSignal> sample_sources(std::size_t m, std::size_t length,
                                       const ContrastModel& model, std::uint64_t seed,
                                       double sample_rate) {
  if (length == 0) throw DomainError("sample_sources: length must be positive");
  const double beta = model.beta();
  const double inv_beta = 1.0 / beta;
  const double scale = 1.0 / ggd_std(beta);

  std::vector<TimeSignal> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::mt19937_64 rng(seed + 0x9E3779B97F4A7C15ULL * (i + 1));
    std::gamma_distribution<double> radial(inv_beta, 1.0);
    std::uniform_int_distribution<int> sign(0, 1);
    TimeSignal& sig = out[i];
    sig.sample_rate = sample_rate;
    sig.samples.resize(length);
    for (std::size_t t = 0; t < length; ++t) {
      const double mag = std::pow(radial(rng), inv_beta);
      sig.samples[t] = (sign(rng) ? mag : -mag) * scale;
    }
  }
  return out;
}

}  // namespace iva

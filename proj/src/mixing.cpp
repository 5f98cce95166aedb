#include "iva/mixing.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "iva/matrix.hpp"

namespace iva {

namespace {

ComplexMatrix dc_gain_matrix(const MixingScenario& s) {
  ComplexMatrix g(s.channels, s.channels);
  for (std::size_t c = 0; c < s.channels; ++c) {
    for (std::size_t src = 0; src < s.channels; ++src) {
      double acc = 0.0;
      for (double t : s.taps[c][src]) acc += t;
      g(c, src) = acc;
    }
  }
  return g;
}

}  // namespace

void MixingScenario::validate() const {
  if (channels == 0 || filter_length == 0) throw ShapeMismatch("MixingScenario: empty system");
  if (!(sample_rate > 0.0)) throw ShapeMismatch("MixingScenario: sample_rate must be positive");
  if (taps.size() != channels) throw ShapeMismatch("MixingScenario: channel count mismatch");
  for (const auto& row : taps) {
    if (row.size() != channels) throw ShapeMismatch("MixingScenario: source count mismatch");
    for (const auto& f : row) {
      if (f.size() != filter_length) throw ShapeMismatch("MixingScenario: filter length mismatch");
      for (double v : f) {
        if (!std::isfinite(v)) throw ShapeMismatch("MixingScenario: non-finite tap");
      }
    }
  }
  if (!is_nonsingular(dc_gain_matrix(*this), 1e-10)) {
    throw ShapeMismatch("MixingScenario: DC gain matrix is singular");
  }
}

MixingScenario MixingScenario::random(std::size_t m, std::size_t filter_length,
                                      std::uint64_t seed, double sample_rate) {
  MixingScenario s;
  s.channels = m;
  s.filter_length = filter_length;
  s.sample_rate = sample_rate;
  s.seed = seed;
  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    std::mt19937_64 rng(seed + attempt * 0x2545F4914F6CDD1DULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    s.taps.assign(m, std::vector<std::vector<double>>(m, std::vector<double>(filter_length)));
    for (std::size_t c = 0; c < m; ++c) {
      for (std::size_t src = 0; src < m; ++src) {
        double norm2 = 0.0;
        for (std::size_t t = 0; t < filter_length; ++t) {
          const double decay = std::exp(-static_cast<double>(t) / 3.0);
          s.taps[c][src][t] = gauss(rng) * decay;
          norm2 += s.taps[c][src][t] * s.taps[c][src][t];
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& v : s.taps[c][src]) v *= inv;
      }
    }
    if (is_nonsingular(dc_gain_matrix(s), 1e-10)) return s;
  }
  throw ShapeMismatch("MixingScenario::random: could not draw a nonsingular DC gain matrix");
}

std::string MixingScenario::to_json_string() const {
  nlohmann::json j;
  j["channels"] = channels;
  j["sources"] = channels;
  j["filter_length"] = filter_length;
  j["sample_rate"] = sample_rate;
  j["seed"] = seed;
  j["filters"] = taps;
  return j.dump(2);
}

MixingScenario MixingScenario::from_json_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw CorruptHeader(std::string("scenario JSON parse error: ") + e.what());
  }
  MixingScenario s;
  try {
    s.channels = j.at("channels").get<std::size_t>();
    s.filter_length = j.at("filter_length").get<std::size_t>();
    s.sample_rate = j.at("sample_rate").get<double>();
    s.seed = j.value("seed", std::uint64_t{0});
    s.taps = j.at("filters").get<std::vector<std::vector<std::vector<double>>>>();
  } catch (const nlohmann::json::exception& e) {
    throw CorruptHeader(std::string("scenario JSON field error: ") + e.what());
  }
  s.validate();
  return s;
}

MixingScenario MixingScenario::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_string(buf.str());
}

void MixingScenario::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoFailure("cannot write scenario file: " + path);
  out << to_json_string() << '\n';
  if (!out) throw IoFailure("write failed: " + path);
}

std::vector<TimeSignal> mix_convolutive(const std::vector<TimeSignal>& sources,
                                        const MixingScenario& scenario) {
  scenario.validate();
  if (sources.size() != scenario.channels) {
    throw ShapeMismatch("mix_convolutive: source count differs from scenario");
  }
  const std::size_t len = sources.front().samples.size();
  for (const TimeSignal& s : sources) {
    if (s.samples.size() != len) throw ShapeMismatch("mix_convolutive: source lengths differ");
  }

  std::vector<TimeSignal> out(scenario.channels);
  for (std::size_t c = 0; c < scenario.channels; ++c) {
    out[c].sample_rate = scenario.sample_rate;
    out[c].samples.assign(len, 0.0);
    double* dst = out[c].samples.data();
    for (std::size_t src = 0; src < scenario.channels; ++src) {
      const std::vector<double>& h = scenario.taps[c][src];
      const double* sp = sources[src].samples.data();
      for (std::size_t tau = 0; tau < h.size(); ++tau) {
        const double coeff = h[tau];
        if (coeff == 0.0) continue;
        for (std::size_t t = tau; t < len; ++t) dst[t] += coeff * sp[t - tau];
      }
    }
  }
  return out;
}

std::vector<TimeSignal> reference_images(const std::vector<TimeSignal>& sources,
                                         const MixingScenario& scenario) {
  if (sources.size() != scenario.channels) {
    throw ShapeMismatch("reference_images: source count differs from scenario");
  }
  const std::size_t len = sources.front().samples.size();
  std::vector<TimeSignal> refs(scenario.channels);
  for (std::size_t src = 0; src < scenario.channels; ++src) {
    refs[src].sample_rate = scenario.sample_rate;
    refs[src].samples.assign(len, 0.0);
    const std::vector<double>& h = scenario.taps[0][src];
    const double* sp = sources[src].samples.data();
    double* dst = refs[src].samples.data();
    for (std::size_t tau = 0; tau < h.size(); ++tau) {
      const double coeff = h[tau];
      if (coeff == 0.0) continue;
      for (std::size_t t = tau; t < len; ++t) dst[t] += coeff * sp[t - tau];
    }
  }
  return refs;
}

}  // namespace iva

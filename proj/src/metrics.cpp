#include "iva/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace iva {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
/// Residual-to-signal energy ratio below which the SDR saturates to +inf.
constexpr double kResidualFloor = 1e-30;
/// Stand-in magnitude for +/-inf scores inside assignment arithmetic.
constexpr double kBigScore = 1e9;

}  // namespace

double sdr_si(std::span<const double> estimate, std::span<const double> reference) {
  if (estimate.size() != reference.size()) throw LengthMismatch("sdr_si: length mismatch");
  if (estimate.empty()) throw LengthMismatch("sdr_si: empty signals");
  double ref_energy = 0.0, dot = 0.0;
  for (std::size_t t = 0; t < reference.size(); ++t) {
    ref_energy += reference[t] * reference[t];
    dot += estimate[t] * reference[t];
  }
  if (ref_energy == 0.0) throw ZeroReference("sdr_si: all-zero reference");
  const double alpha = dot / ref_energy;
  if (alpha == 0.0) return -kInf;
  const double target_energy = alpha * alpha * ref_energy;
  double residual = 0.0;
  for (std::size_t t = 0; t < reference.size(); ++t) {
    const double d = estimate[t] - alpha * reference[t];
    residual += d * d;
  }
  if (residual <= kResidualFloor * target_energy) return kInf;
  return 10.0 * std::log10(target_energy / residual);
}

double sdr_si(const TimeSignal& estimate, const TimeSignal& reference) {
  return sdr_si(std::span<const double>(estimate.samples),
                std::span<const double>(reference.samples));
}

MdpResult mdp_rescale(const SeparatorState& state) {
  MdpResult out;
  out.state = state;
  for (std::size_t k = 0; k < state.bins(); ++k) {
    const ComplexMatrix a = inverse(state.W[k]);  // SingularMatrix on failure
    double max_scale = 0.0;
    for (std::size_t i = 0; i < a.cols(); ++i) max_scale = std::max(max_scale, std::abs(a(0, i)));
    ComplexMatrix& w = out.state.W[k];
    ComplexMatrix& y = out.state.Y[k];
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const cxd s = a(0, i);
      if (std::abs(s) <= 1e-12 * max_scale) out.degenerate = true;
      cxd* yi = y.row(i);
      for (std::size_t j = 0; j < y.cols(); ++j) yi[j] *= s;
      cxd* wi = w.row(i);
      for (std::size_t j = 0; j < w.cols(); ++j) wi[j] *= s;
    }
  }
  return out;
}

namespace {

double clamp_score(double v) {
  if (v == kInf) return kBigScore;
  if (v == -kInf) return -kBigScore;
  return v;
}

std::vector<std::size_t> hungarian_max(const std::vector<std::vector<double>>& score) {
  const int n = static_cast<int>(score.size());
  // minimize the negated scores with the potentials method
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = -clamp_score(score[i0 - 1][j - 1]) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> result(n);
  for (int j = 1; j <= n; ++j) {
    if (p[j] != 0) result[p[j] - 1] = static_cast<std::size_t>(j - 1);
  }
  return result;
}

}  // namespace

std::vector<std::size_t> best_assignment(const std::vector<std::vector<double>>& score) {
  const std::size_t m = score.size();
  if (m == 0) return {};
  for (const auto& row : score) {
    if (row.size() != m) throw DimensionMismatch("best_assignment: score matrix not square");
  }
  if (m > 6) return hungarian_max(score);

  std::vector<std::size_t> perm(m), best(m);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  best = perm;
  double best_total = -kInf;
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) total += clamp_score(score[i][perm[i]]);
    if (total > best_total) {
      best_total = total;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

namespace {

/// SDR matrix from precomputed energies and cross terms; falls back to the
/// direct two-pass formula whenever the residual identity loses precision.
double sdr_from_moments(std::span<const double> est, std::span<const double> ref,
                        double est_energy, double ref_energy, double dot) {
  if (ref_energy == 0.0) throw ZeroReference("sdr_si: all-zero reference");
  const double alpha = dot / ref_energy;
  if (alpha == 0.0) return -std::numeric_limits<double>::infinity();
  const double target = alpha * alpha * ref_energy;
  const double residual = est_energy - target;
  if (residual > 1e-8 * target) return 10.0 * std::log10(target / residual);
  return sdr_si(est, ref);  // near-perfect match: evaluate exactly
}

}  // namespace

DeltaSdrReport evaluate_delta_sdr(const SeparatorState& state, const StftConfig& cfg,
                                  const std::vector<TimeSignal>& references,
                                  const TimeSignal& first_mic_mixture) {
  cfg.validate();
  const std::size_t m = state.channels();
  const std::size_t frames = state.frames();
  if (references.size() != m) throw ShapeMismatch("evaluate_delta_sdr: reference count");
  if (state.bins() != cfg.bins()) throw ShapeMismatch("evaluate_delta_sdr: bin count vs config");

  // minimum-distortion scales A_1i per bin, fused into the spectrogram
  // gather (same arithmetic as mdp_rescale without copying the state)
  const std::size_t bins = state.bins();
  std::vector<std::vector<cxd>> scales(bins);
  bool degenerate = false;
  for (std::size_t k = 0; k < bins; ++k) {
    const ComplexMatrix a = inverse(state.W[k]);
    double max_scale = 0.0;
    for (std::size_t i = 0; i < m; ++i) max_scale = std::max(max_scale, std::abs(a(0, i)));
    scales[k].resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      scales[k][i] = a(0, i);
      if (std::abs(a(0, i)) <= 1e-12 * max_scale) degenerate = true;
    }
  }

  // bin-major gather: each Y^[k] is read once for all sources
  const double rate = first_mic_mixture.sample_rate;
  std::vector<Spectrogram> specs(m);
  for (std::size_t i = 0; i < m; ++i) specs[i] = Spectrogram(cfg.bins(), frames, rate);
  for (std::size_t k = 0; k < bins; ++k) {
    const ComplexMatrix& y = state.Y[k];
    for (std::size_t i = 0; i < m; ++i) {
      const cxd scale = scales[k][i];
      const cxd* src = y.row(i);
      cxd* dst = specs[i].data.data() + k * frames;
      for (std::size_t j = 0; j < frames; ++j) dst[j] = scale * src[j];
    }
  }
  std::vector<TimeSignal> estimates(m);
  for (std::size_t i = 0; i + 1 < m; i += 2) {
    auto [ea, eb] = istft_pair(specs[i], specs[i + 1], cfg);
    estimates[i] = std::move(ea);
    estimates[i + 1] = std::move(eb);
  }
  if (m % 2 != 0) estimates[m - 1] = istft(specs[m - 1], cfg);

  // compare on the fully covered overlap-add interior
  const std::size_t recon_len = estimates.front().samples.size();
  const std::size_t begin = istft_interior_begin(cfg);
  const std::size_t end = istft_interior_end(cfg, recon_len);
  if (end <= begin) throw ShapeMismatch("evaluate_delta_sdr: no interior samples");
  for (const TimeSignal& r : references) {
    if (r.samples.size() < end) throw LengthMismatch("evaluate_delta_sdr: reference too short");
  }
  if (first_mic_mixture.samples.size() < end) {
    throw LengthMismatch("evaluate_delta_sdr: mixture too short");
  }
  auto slice = [&](const TimeSignal& s) {
    return std::span<const double>(s.samples.data() + begin, end - begin);
  };

  std::vector<double> est_energy(m, 0.0), ref_energy(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (double v : slice(estimates[i])) est_energy[i] += v * v;
    for (double v : slice(references[i])) ref_energy[i] += v * v;
  }
  std::vector<std::vector<double>> score(m, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const std::span<const double> e = slice(estimates[i]);
    for (std::size_t j = 0; j < m; ++j) {
      const std::span<const double> r = slice(references[j]);
      double dot = 0.0;
      for (std::size_t t = 0; t < e.size(); ++t) dot += e[t] * r[t];
      score[i][j] = sdr_from_moments(e, r, est_energy[i], ref_energy[j], dot);
    }
  }
  DeltaSdrReport report;
  report.mdp_degenerate = degenerate;
  report.assignment = best_assignment(score);
  report.sdr_db.resize(m);
  report.initial_db.resize(m);
  report.delta_db.resize(m);
  double mean = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = report.assignment[i];
    report.sdr_db[i] = score[i][j];
    report.initial_db[i] = sdr_si(slice(first_mic_mixture), slice(references[j]));
    report.delta_db[i] = report.sdr_db[i] - report.initial_db[i];
    mean += report.delta_db[i];
  }
  report.mean_delta_db = mean / static_cast<double>(m);
  return report;
}

}  // namespace iva

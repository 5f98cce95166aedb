#include "iva/mixture.hpp"

#include <algorithm>

namespace iva {

MixtureSet MixtureSet::from_bins(std::vector<ComplexMatrix> bins) {
  if (bins.empty()) throw ShapeMismatch("MixtureSet: needs at least one bin");
  const std::size_t m = bins.front().rows();
  const std::size_t n = bins.front().cols();
  if (m == 0 || n == 0) throw ShapeMismatch("MixtureSet: empty observation");
  if (n < m) throw ShapeMismatch("MixtureSet: frame count below channel count");
  for (const ComplexMatrix& b : bins) {
    if (b.rows() != m || b.cols() != n) throw ShapeMismatch("MixtureSet: bins differ in shape");
    b.require_finite("MixtureSet");
  }
  MixtureSet s;
  s.x_ = std::move(bins);
  s.channels_ = m;
  s.frames_ = n;
  return s;
}

double max_consistency_error(const SeparatorState& state, const MixtureSet& mix) {
  double worst = 0.0;
  for (std::size_t k = 0; k < state.bins(); ++k) {
    const ComplexMatrix wx = state.W[k] * mix.bin(k);
    const double scale = std::max(max_abs(state.Y[k]), 1e-300);
    worst = std::max(worst, max_abs_diff(wx, state.Y[k]) / scale);
  }
  return worst;
}

const char* solver_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::Ip1: return "ip1";
    case SolverKind::Ip2: return "ip2";
    case SolverKind::Iss1: return "iss1";
    case SolverKind::Iss2: return "iss2";
  }
  return "?";
}

SolverKind solver_from_name(const std::string& name) {
  if (name == "ip1") return SolverKind::Ip1;
  if (name == "ip2") return SolverKind::Ip2;
  if (name == "iss1") return SolverKind::Iss1;
  if (name == "iss2") return SolverKind::Iss2;
  throw ConfigError("unknown solver: " + name);
}

void SolverConfig::validate_for_channels(std::size_t m) const {
  if (kind == SolverKind::Ip2 && m % 2 != 0) {
    throw OddChannelCount("ip2 requires an even channel count");
  }
  if (kind == SolverKind::Iss2 && m % 2 != 0) {
    throw IndivisibleBlock("iss2 requires the block size 2 to divide the channel count");
  }
}

}  // namespace iva

#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "iva/matrix.hpp"

namespace iva {

/// The K per-bin observations X^[k], each m x n, sharing dimensions.
class MixtureSet {
 public:
  static MixtureSet from_bins(std::vector<ComplexMatrix> bins);

  std::size_t bins() const { return x_.size(); }       // K
  std::size_t channels() const { return channels_; }   // m
  std::size_t frames() const { return frames_; }       // n

  const ComplexMatrix& bin(std::size_t k) const { return x_[k]; }
  const std::vector<ComplexMatrix>& all() const { return x_; }

 private:
  std::vector<ComplexMatrix> x_;
  std::size_t channels_ = 0;
  std::size_t frames_ = 0;
};

/// Per-bin separation matrices W^[k] and separated signals Y^[k] = W^[k] X^[k].
struct SeparatorState {
  std::vector<ComplexMatrix> W;  // m x m per bin
  std::vector<ComplexMatrix> Y;  // m x n per bin
  std::size_t iteration = 0;

  std::size_t bins() const { return std::max(W.size(), Y.size()); }
  std::size_t channels() const {
    if (!Y.empty()) return Y.front().rows();
    return W.empty() ? 0 : W.front().rows();
  }
  std::size_t frames() const { return Y.empty() ? 0 : Y.front().cols(); }
};

/// max over bins of ||Y - W X||_max / ||Y||_max; tests hold this <= 1e-8.
double max_consistency_error(const SeparatorState& state, const MixtureSet& mix);

/// The shared m x n nonnegative weight matrix Lambda.
struct AuxiliaryWeights {
  RealMatrix lambda;
};

enum class SolverKind { Ip1, Ip2, Iss1, Iss2 };

const char* solver_name(SolverKind kind);
SolverKind solver_from_name(const std::string& name);  // throws ConfigError

struct SolverConfig {
  SolverKind kind = SolverKind::Iss2;
  int iterations = 30;
  double beta = 1.0;
  double eps = 1e-10;
  std::uint64_t seed = 1;
  /// Relative cost-change early-stop threshold; 0 disables it so
  /// convergence curves keep a fixed length.
  double stop_tol = 0.0;

  /// Pairing/block structure constraints against the channel count.
  /// Throws OddChannelCount (IP2) or IndivisibleBlock (ISS2) when violated.
  void validate_for_channels(std::size_t m) const;
};

}  // namespace iva

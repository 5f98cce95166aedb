#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "iva/metrics.hpp"
#include "iva/mixing.hpp"
#include "iva/mm_core.hpp"
#include "iva/sources.hpp"

namespace iva {

struct SyntheticSpec {
  std::size_t sources = 4;
  std::size_t filter_length = 8;
  double duration_s = 10.0;
  double sample_rate = 16000.0;
  /// Speech-like level dynamics of the synthetic sources (see
  /// apply_level_envelope); 0 disables the envelope.
  double envelope_log_std = 1.0;
  std::size_t envelope_period = 2048;
};

struct WavSpec {
  std::string mixture_path;
  std::vector<std::string> reference_paths;  // optional; enables Delta SDR
};

struct ExperimentConfig {
  std::variant<SyntheticSpec, WavSpec> scenario = SyntheticSpec{};
  SolverConfig solver;
  StftConfig stft;
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out_dir = ".";
  bool write_wavs = false;

  std::string to_json_string() const;
  static ExperimentConfig from_json_string(const std::string& text);
  static ExperimentConfig load(const std::string& path);
};

/// Per-MM-iteration log of one solver run.
struct RunRecord {
  struct Row {
    std::size_t iter = 0;      // 1-based MM iteration
    double cost = 0.0;         // total cost after the iteration
    double delta_sdr_db = 0.0; // mean over sources; NaN without references
    double ms = 0.0;           // inner-pass wall time
  };

  std::string solver;
  std::size_t m = 0, n = 0, K = 0;
  std::uint64_t seed = 0;
  std::vector<Row> rows;

  /// Enforces the non-increasing cost column (1e-9 relative slack).
  void append(Row row);
  void write_csv(const std::string& path) const;
};

/// STFT of each channel assembled into per-bin observation matrices.
MixtureSet mixture_from_channels(const std::vector<TimeSignal>& channels, const StftConfig& cfg);

/// One experiment's data: per-bin observations plus evaluation signals.
struct TrialData {
  MixtureSet mixture;
  TimeSignal first_mic;
  std::vector<TimeSignal> references;  // empty when unavailable
  std::optional<MixingScenario> scenario;
  bool has_references() const { return !references.empty(); }
};

TrialData make_synthetic_trial(const SyntheticSpec& spec, const StftConfig& cfg,
                               double contrast_beta, std::uint64_t seed);
TrialData load_wav_trial(const WavSpec& spec, const StftConfig& cfg);

/// Whitening init + the configured number of MM iterations with per-iteration
/// logging. Delta SDR is evaluated only when references exist. final_state,
/// when given, receives the terminal separator state.
RunRecord run_solver_on_trial(const TrialData& trial, const SolverConfig& solver_cfg,
                              const StftConfig& stft_cfg, int threads,
                              SeparatorState* final_state = nullptr);

/// Scenario resolution, per-trial runs, and file outputs (run CSV per trial,
/// a run JSON echo/summary, separated WAVs when requested).
std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg);

/// Ensemble study: every trial's data is synthesized once and shared by all
/// requested solvers. Trials run in parallel; per-trial seeding keeps results
/// independent of the thread count. records[s][t] pairs solver s, trial t.
std::vector<std::vector<RunRecord>> bench_ensemble(const ExperimentConfig& cfg,
                                                   const std::vector<SolverKind>& solvers);

/// First 1-based iteration whose Delta SDR reaches fraction * final Delta SDR.
std::size_t iterations_to_fraction(const RunRecord& record, double fraction = 0.9);

double median(std::vector<double> values);

// --- complexity benchmark ---

struct ScalingRow {
  std::string solver;
  std::size_t m = 0, n = 0, K = 0;
  int rep = 0;      // negative: warmup (excluded from the fit)
  double ms = 0.0;  // inner-pass time of one MM iteration
};

struct ScalingResult {
  std::vector<ScalingRow> rows;
  /// Least-squares slope of log(median ms) vs log(m), per solver.
  std::map<std::string, double> slopes;
  void write_csv(const std::string& path) const;
};

/// Times one single-threaded inner pass per MM iteration on random complex
/// instances of each size in m_list (timing noise is data, not an error).
ScalingResult scaling_bench(const std::vector<std::size_t>& m_list, std::size_t n, std::size_t K,
                            int reps, const std::vector<SolverKind>& solvers, std::uint64_t seed,
                            double beta = 1.0, double eps = kDefaultEps);

}  // namespace iva

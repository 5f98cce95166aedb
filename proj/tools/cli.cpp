// Command-line driver for the IVA separation engine: scenario synthesis,
// separation runs, ensemble convergence benchmarks, and the complexity
// scaling benchmark.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "iva/experiment.hpp"
#include "iva/wav.hpp"

namespace {

using namespace iva;

std::vector<SolverKind> parse_solver_list(const std::string& csv) {
  std::vector<SolverKind> out;
  std::string token;
  std::istringstream stream(csv);
  while (std::getline(stream, token, ',')) {
    if (token == "all") {
      return {SolverKind::Ip1, SolverKind::Ip2, SolverKind::Iss1, SolverKind::Iss2};
    }
    out.push_back(solver_from_name(token));
  }
  if (out.empty()) throw ConfigError("empty solver list");
  return out;
}

struct CommonFlags {
  std::string solver = "iss2";
  int iters = 30;
  double beta = 1.0;
  double eps = 1e-10;
  double stop_tol = 0.0;
  std::uint64_t seed = 1;
  std::string config_path;
  std::string out_dir = ".";
  int threads = 1;

  void attach(CLI::App* app) {
    app->add_option("--solver", solver, "Solver: ip1|ip2|iss1|iss2");
    app->add_option("--iters", iters, "MM iteration budget");
    app->add_option("--beta", beta, "GGD contrast shape in (0, 2)");
    app->add_option("--eps", eps, "Weight-update stabilizer");
    app->add_option("--stop-tol", stop_tol,
                    "Relative cost-change early stop (0 = fixed budget; try 1e-7)");
    app->add_option("--seed", seed, "Master seed");
    app->add_option("--config", config_path, "JSON config (flags override it)");
    app->add_option("--out", out_dir, "Output directory");
    app->add_option("--threads", threads, "Worker threads");
  }

  ExperimentConfig merge(const CLI::App* app) const {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = ExperimentConfig::load(config_path);
    if (app->count("--solver") || config_path.empty()) cfg.solver.kind = solver_from_name(solver);
    if (app->count("--iters") || config_path.empty()) cfg.solver.iterations = iters;
    if (app->count("--beta") || config_path.empty()) cfg.solver.beta = beta;
    if (app->count("--eps") || config_path.empty()) cfg.solver.eps = eps;
    if (app->count("--stop-tol") || config_path.empty()) cfg.solver.stop_tol = stop_tol;
    if (app->count("--seed") || config_path.empty()) cfg.seed = seed;
    if (app->count("--out") || config_path.empty()) cfg.out_dir = out_dir;
    if (app->count("--threads") || config_path.empty()) cfg.threads = threads;
    return cfg;
  }
};

int cmd_synth(const CommonFlags& flags, std::size_t m, std::size_t taps, double duration,
              double rate, double env_log_std, std::size_t env_period) {
  std::filesystem::create_directories(flags.out_dir);
  const MixingScenario scenario = MixingScenario::random(m, taps, flags.seed, rate);
  scenario.save(flags.out_dir + "/scenario.json");

  const ContrastModel model(flags.beta);
  const auto length = static_cast<std::size_t>(std::llround(duration * rate));
  std::vector<TimeSignal> sources = sample_sources(m, length, model, flags.seed, rate);
  if (env_log_std > 0.0) {
    apply_level_envelope(sources, flags.seed ^ 0x5DEECE66DULL, env_log_std, env_period);
  }
  const std::vector<TimeSignal> channels = mix_convolutive(sources, scenario);
  const std::vector<TimeSignal> refs = reference_images(sources, scenario);

  write_wav(flags.out_dir + "/mix.wav", channels);
  for (std::size_t i = 0; i < m; ++i) {
    write_wav(flags.out_dir + "/ref_" + std::to_string(i + 1) + ".wav", refs[i]);
    write_wav(flags.out_dir + "/src_" + std::to_string(i + 1) + ".wav", sources[i]);
  }
  std::printf("wrote scenario.json, mix.wav (%zu ch), ref_*.wav, src_*.wav to %s\n", m,
              flags.out_dir.c_str());
  return 0;
}

int cmd_separate(const CLI::App* app, const CommonFlags& flags, const std::string& in_path,
                 const std::vector<std::string>& ref_paths, std::size_t frame, std::size_t hop,
                 const std::string& window) {
  ExperimentConfig cfg = flags.merge(app);
  WavSpec spec;
  spec.mixture_path = in_path;
  spec.reference_paths = ref_paths;
  cfg.scenario = spec;
  if (app->count("--frame") || flags.config_path.empty()) cfg.stft.frame_size = frame;
  if (app->count("--hop") || flags.config_path.empty()) cfg.stft.hop = hop;
  if (app->count("--window") || flags.config_path.empty()) {
    cfg.stft.window = window_from_name(window);
  }
  cfg.trials = 1;
  cfg.write_wavs = true;
  const auto records = run_experiment(cfg);
  const auto& last = records.front().rows.back();
  std::printf("%s: %zu iterations, final cost %.6g", records.front().solver.c_str(),
              records.front().rows.size(), last.cost);
  if (!ref_paths.empty()) std::printf(", final delta SDR %.2f dB", last.delta_sdr_db);
  std::printf("\noutputs in %s: run.csv, run.json, separated_*.wav\n", cfg.out_dir.c_str());
  return 0;
}

int cmd_bench(const CLI::App* app, const CommonFlags& flags, std::size_t m, std::size_t taps,
              double duration, double rate, double env_log_std, std::size_t env_period,
              std::size_t trials, const std::string& solvers_csv, std::size_t frame,
              std::size_t hop, const std::string& window) {
  ExperimentConfig cfg = flags.merge(app);
  // start from the config's synthetic scenario when present; explicit flags win
  SyntheticSpec spec;
  if (std::holds_alternative<SyntheticSpec>(cfg.scenario)) {
    spec = std::get<SyntheticSpec>(cfg.scenario);
  }
  const bool no_config = flags.config_path.empty();
  if (app->count("--m") || no_config) spec.sources = m;
  if (app->count("--taps") || no_config) spec.filter_length = taps;
  if (app->count("--duration") || no_config) spec.duration_s = duration;
  if (app->count("--rate") || no_config) spec.sample_rate = rate;
  if (app->count("--envelope-log-std") || no_config) spec.envelope_log_std = env_log_std;
  if (app->count("--envelope-period") || no_config) spec.envelope_period = env_period;
  cfg.scenario = spec;
  if (app->count("--trials") || no_config) cfg.trials = trials;
  if (app->count("--frame")) cfg.stft.frame_size = frame;
  if (app->count("--hop")) cfg.stft.hop = hop;
  if (app->count("--window")) cfg.stft.window = window_from_name(window);

  const std::vector<SolverKind> solvers = parse_solver_list(solvers_csv);
  std::filesystem::create_directories(cfg.out_dir);
  const auto records = bench_ensemble(cfg, solvers);

  nlohmann::json summary;
  summary["config"] = nlohmann::json::parse(cfg.to_json_string());
  for (std::size_t s = 0; s < solvers.size(); ++s) {
    std::vector<double> its, finals;
    for (std::size_t t = 0; t < records[s].size(); ++t) {
      const RunRecord& r = records[s][t];
      r.write_csv(cfg.out_dir + "/run_" + r.solver + "_t" + std::to_string(t) + ".csv");
      its.push_back(static_cast<double>(iterations_to_fraction(r)));
      finals.push_back(r.rows.back().delta_sdr_db);
    }
    const char* name = solver_name(solvers[s]);
    summary["solvers"][name]["median_iters_to_90pct"] = median(its);
    summary["solvers"][name]["median_final_delta_sdr_db"] = median(finals);
    std::printf("%4s: median iters to 90%% = %.1f, median final delta SDR = %.2f dB\n", name,
                median(its), median(finals));
  }
  std::ofstream out(cfg.out_dir + "/bench_summary.json");
  out << summary.dump(2) << '\n';
  std::printf("per-run CSVs and bench_summary.json in %s\n", cfg.out_dir.c_str());
  return 0;
}

int cmd_scaling(const CommonFlags& flags, const std::string& m_csv, std::size_t n, std::size_t K,
                int reps, const std::string& solvers_csv) {
  std::vector<std::size_t> m_list;
  {
    std::istringstream stream(m_csv);
    std::string token;
    while (std::getline(stream, token, ',')) m_list.push_back(std::stoul(token));
  }
  const std::vector<SolverKind> solvers = parse_solver_list(solvers_csv);
  const ScalingResult result =
      scaling_bench(m_list, n, K, reps, solvers, flags.seed, flags.beta, flags.eps);
  std::filesystem::create_directories(flags.out_dir);
  result.write_csv(flags.out_dir + "/scaling.csv");
  nlohmann::json j;
  for (const auto& [name, slope] : result.slopes) {
    std::printf("%4s: log-log slope of per-iteration time vs m: %.3f\n", name.c_str(), slope);
    j["slopes"][name] = slope;
  }
  std::ofstream out(flags.out_dir + "/scaling.json");
  out << j.dump(2) << '\n';
  std::printf("raw timings in %s/scaling.csv\n", flags.out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MM-based IVA separation engine (IP1, IP2, ISS1, ISS2)"};
  app.require_subcommand(1);

  CommonFlags flags;

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a scenario and convolutive mixtures");
  std::size_t m = 4, taps = 8, env_period = 2048, trials = 50;
  double duration = 10.0, rate = 16000.0, env_log_std = 1.0;
  flags.attach(synth);
  synth->add_option("--m", m, "Sources (= microphones)");
  synth->add_option("--taps", taps, "FIR filter length");
  synth->add_option("--duration", duration, "Signal length in seconds");
  synth->add_option("--rate", rate, "Sample rate in Hz");
  synth->add_option("--envelope-log-std", env_log_std, "Source level dynamics (0 disables)");
  synth->add_option("--envelope-period", env_period, "Envelope control spacing in samples");

  // separate
  auto* separate = app.add_subcommand("separate", "Run one solver on a WAV mixture");
  std::string in_path;
  std::vector<std::string> ref_paths;
  std::size_t frame = 4096, hop = 1024;
  std::string window = "hann";
  flags.attach(separate);
  separate->add_option("--in", in_path, "Multichannel mixture WAV")->required();
  separate->add_option("--refs", ref_paths, "Per-source reference WAVs (enables delta SDR)");
  separate->add_option("--frame", frame, "STFT frame size (power of two)");
  separate->add_option("--hop", hop, "STFT hop size");
  separate->add_option("--window", window, "Analysis window: hann|rect");

  // bench
  auto* bench = app.add_subcommand("bench", "Ensemble convergence study over synthetic trials");
  std::string solvers_csv = "all";
  flags.attach(bench);
  bench->add_option("--m", m, "Sources (= microphones)");
  bench->add_option("--taps", taps, "FIR filter length");
  bench->add_option("--duration", duration, "Signal length in seconds");
  bench->add_option("--rate", rate, "Sample rate in Hz");
  bench->add_option("--envelope-log-std", env_log_std, "Source level dynamics (0 disables)");
  bench->add_option("--envelope-period", env_period, "Envelope control spacing in samples");
  bench->add_option("--trials", trials, "Trial count");
  bench->add_option("--solvers", solvers_csv, "Comma list of solvers or 'all'");
  bench->add_option("--frame", frame, "STFT frame size (power of two)");
  bench->add_option("--hop", hop, "STFT hop size");
  bench->add_option("--window", window, "Analysis window: hann|rect");

  // scaling
  auto* scaling = app.add_subcommand("scaling", "Per-iteration runtime scaling benchmark");
  std::string m_csv = "8,16,32,64";
  std::size_t bench_n = 256, bench_k = 8;
  int reps = 5;
  flags.attach(scaling);
  scaling->add_option("--m-list", m_csv, "Comma list of channel counts");
  scaling->add_option("--n", bench_n, "Frames per bin");
  scaling->add_option("--bins", bench_k, "Frequency bins");
  scaling->add_option("--reps", reps, "Timed repetitions per point");
  scaling->add_option("--solvers", solvers_csv, "Comma list of solvers or 'all'");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      return cmd_synth(flags, m, taps, duration, rate, env_log_std, env_period);
    }
    if (separate->parsed()) {
      return cmd_separate(separate, flags, in_path, ref_paths, frame, hop, window);
    }
    if (bench->parsed()) {
      return cmd_bench(bench, flags, m, taps, duration, rate, env_log_std, env_period, trials,
                       solvers_csv, frame, hop, window);
    }
    if (scaling->parsed()) {
      return cmd_scaling(flags, m_csv, bench_n, bench_k, reps, solvers_csv);
    }
  } catch (const iva::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

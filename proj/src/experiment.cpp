#include "iva/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "iva/parallel.hpp"
#include "iva/wav.hpp"

namespace iva {

namespace {

using nlohmann::json;

std::string format_value(double v, const char* fmt) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

json solver_to_json(const SolverConfig& s) {
  return json{{"kind", solver_name(s.kind)}, {"iterations", s.iterations}, {"beta", s.beta},
              {"eps", s.eps},                {"seed", s.seed},            {"stop_tol", s.stop_tol}};
}

SolverConfig solver_from_json(const json& j) {
  SolverConfig s;
  s.kind = solver_from_name(j.value("kind", std::string("iss2")));
  s.iterations = j.value("iterations", 30);
  s.beta = j.value("beta", 1.0);
  s.eps = j.value("eps", 1e-10);
  s.seed = j.value("seed", std::uint64_t{1});
  s.stop_tol = j.value("stop_tol", 0.0);
  return s;
}

json stft_to_json(const StftConfig& c) {
  return json{{"frame_size", c.frame_size}, {"hop", c.hop}, {"window", window_name(c.window)}};
}

StftConfig stft_from_json(const json& j) {
  StftConfig c;
  c.frame_size = j.value("frame_size", std::size_t{4096});
  c.hop = j.value("hop", std::size_t{1024});
  c.window = window_from_name(j.value("window", std::string("hann")));
  c.validate();
  return c;
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t trial) {
  return master + 0x9E3779B97F4A7C15ULL * (trial + 1);
}

}  // namespace

std::string ExperimentConfig::to_json_string() const {
  json j;
  if (std::holds_alternative<SyntheticSpec>(scenario)) {
    const auto& s = std::get<SyntheticSpec>(scenario);
    j["scenario"] = json{{"type", "synthetic"},
                         {"sources", s.sources},
                         {"filter_length", s.filter_length},
                         {"duration_s", s.duration_s},
                         {"sample_rate", s.sample_rate},
                         {"envelope_log_std", s.envelope_log_std},
                         {"envelope_period", s.envelope_period}};
  } else {
    const auto& s = std::get<WavSpec>(scenario);
    j["scenario"] =
        json{{"type", "wav"}, {"mixture", s.mixture_path}, {"references", s.reference_paths}};
  }
  j["solver"] = solver_to_json(solver);
  j["stft"] = stft_to_json(stft);
  j["trials"] = trials;
  j["seed"] = seed;
  j["threads"] = threads;
  j["out_dir"] = out_dir;
  j["write_wavs"] = write_wavs;
  return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    if (j.contains("scenario")) {
      const json& s = j["scenario"];
      const std::string type = s.value("type", std::string("synthetic"));
      if (type == "synthetic") {
        SyntheticSpec spec;
        spec.sources = s.value("sources", std::size_t{4});
        spec.filter_length = s.value("filter_length", std::size_t{8});
        spec.duration_s = s.value("duration_s", 10.0);
        spec.sample_rate = s.value("sample_rate", 16000.0);
        spec.envelope_log_std = s.value("envelope_log_std", 1.0);
        spec.envelope_period = s.value("envelope_period", std::size_t{2048});
        cfg.scenario = spec;
      } else if (type == "wav") {
        WavSpec spec;
        spec.mixture_path = s.at("mixture").get<std::string>();
        spec.reference_paths = s.value("references", std::vector<std::string>{});
        cfg.scenario = spec;
      } else {
        throw ConfigError("config: unknown scenario type " + type);
      }
    }
    if (j.contains("solver")) cfg.solver = solver_from_json(j["solver"]);
    if (j.contains("stft")) cfg.stft = stft_from_json(j["stft"]);
    cfg.trials = j.value("trials", std::size_t{1});
    cfg.seed = j.value("seed", std::uint64_t{1});
    cfg.threads = j.value("threads", 1);
    cfg.out_dir = j.value("out_dir", std::string("."));
    cfg.write_wavs = j.value("write_wavs", false);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
  if (cfg.trials == 0) throw ConfigError("config: trials must be >= 1");
  cfg.stft.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_string(buf.str());
}

void RunRecord::append(Row row) {
  if (!rows.empty() && std::isfinite(rows.back().cost) && std::isfinite(row.cost)) {
    const double prev = rows.back().cost;
    if (row.cost > prev + 1e-9 * std::abs(prev)) {
      throw NumericalBreakdown("RunRecord: cost increased beyond the 1e-9 relative slack");
    }
  }
  rows.push_back(row);
}

void RunRecord::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoFailure("cannot write csv: " + path);
  out << "iter,cost,delta_sdr_db,ms\n";
  for (const Row& r : rows) {
    out << r.iter << ',' << format_value(r.cost, "%.17g") << ','
        << format_value(r.delta_sdr_db, "%.9g") << ',' << format_value(r.ms, "%.6g") << '\n';
  }
  if (!out) throw IoFailure("csv write failed: " + path);
}

MixtureSet mixture_from_channels(const std::vector<TimeSignal>& channels, const StftConfig& cfg) {
  if (channels.empty()) throw ShapeMismatch("mixture_from_channels: no channels");
  const std::size_t m = channels.size();
  std::vector<Spectrogram> specs;
  specs.reserve(m);
  for (const TimeSignal& c : channels) specs.push_back(stft(c, cfg));
  const std::size_t bins = specs.front().bins;
  const std::size_t frames = specs.front().frames;
  for (const Spectrogram& s : specs) {
    if (s.bins != bins || s.frames != frames) {
      throw ShapeMismatch("mixture_from_channels: channel spectrograms differ");
    }
  }
  std::vector<ComplexMatrix> x(bins, ComplexMatrix(m, frames));
  for (std::size_t k = 0; k < bins; ++k) {
    for (std::size_t c = 0; c < m; ++c) {
      cxd* row = x[k].row(c);
      const cxd* src = specs[c].data.data() + k * frames;
      std::copy(src, src + frames, row);
    }
  }
  return MixtureSet::from_bins(std::move(x));
}

TrialData make_synthetic_trial(const SyntheticSpec& spec, const StftConfig& cfg,
                               double contrast_beta, std::uint64_t seed) {
  const std::size_t length =
      static_cast<std::size_t>(std::llround(spec.duration_s * spec.sample_rate));
  const ContrastModel model(contrast_beta);
  std::vector<TimeSignal> sources =
      sample_sources(spec.sources, length, model, seed, spec.sample_rate);
  if (spec.envelope_log_std > 0.0) {
    apply_level_envelope(sources, seed ^ 0x5DEECE66DULL, spec.envelope_log_std,
                         spec.envelope_period);
  }
  TrialData trial;
  trial.scenario = MixingScenario::random(spec.sources, spec.filter_length, seed ^ 0xA5A5A5A5ULL,
                                          spec.sample_rate);
  const std::vector<TimeSignal> channels = mix_convolutive(sources, *trial.scenario);
  trial.mixture = mixture_from_channels(channels, cfg);
  trial.first_mic = channels.front();
  trial.references = reference_images(sources, *trial.scenario);
  return trial;
}

TrialData load_wav_trial(const WavSpec& spec, const StftConfig& cfg) {
  TrialData trial;
  std::vector<TimeSignal> channels = read_wav(spec.mixture_path);
  if (channels.size() < 2) throw ShapeMismatch("load_wav_trial: need at least two channels");
  trial.mixture = mixture_from_channels(channels, cfg);
  trial.first_mic = std::move(channels.front());
  for (const std::string& p : spec.reference_paths) {
    std::vector<TimeSignal> ref = read_wav(p);
    if (ref.size() != 1) throw ShapeMismatch("load_wav_trial: references must be mono");
    trial.references.push_back(std::move(ref.front()));
  }
  if (!trial.references.empty() && trial.references.size() != channels.size()) {
    throw ShapeMismatch("load_wav_trial: reference count must match channel count");
  }
  return trial;
}

RunRecord run_solver_on_trial(const TrialData& trial, const SolverConfig& solver_cfg,
                              const StftConfig& stft_cfg, int threads,
                              SeparatorState* final_state) {
  const MixtureSet& mix = trial.mixture;
  solver_cfg.validate_for_channels(mix.channels());
  const ContrastModel model(solver_cfg.beta);
  const std::unique_ptr<Solver> solver = Solver::make(solver_cfg.kind);

  RunRecord record;
  record.solver = solver->name();
  record.m = mix.channels();
  record.n = mix.frames();
  record.K = mix.bins();
  record.seed = solver_cfg.seed;

  SeparatorState state = whiten_init_all(mix, threads);
  double prev_cost = total_cost(state, model);
  for (int it = 1; it <= solver_cfg.iterations; ++it) {
    double pass_ms = 0.0;
    mm_step(state, mix, *solver, model, solver_cfg.eps, threads, &pass_ms);
    RunRecord::Row row;
    row.iter = static_cast<std::size_t>(it);
    row.cost = total_cost(state, model);
    row.ms = pass_ms;
    row.delta_sdr_db = std::numeric_limits<double>::quiet_NaN();
    if (trial.has_references()) {
      row.delta_sdr_db =
          evaluate_delta_sdr(state, stft_cfg, trial.references, trial.first_mic).mean_delta_db;
    }
    record.append(row);
    if (solver_cfg.stop_tol > 0.0 &&
        std::abs(prev_cost - row.cost) <= solver_cfg.stop_tol * std::abs(prev_cost)) {
      break;
    }
    prev_cost = row.cost;
  }
  if (final_state) *final_state = std::move(state);
  return record;
}

namespace {

TrialData make_trial(const ExperimentConfig& cfg, std::size_t trial_index) {
  if (std::holds_alternative<SyntheticSpec>(cfg.scenario)) {
    return make_synthetic_trial(std::get<SyntheticSpec>(cfg.scenario), cfg.stft, cfg.solver.beta,
                                trial_seed(cfg.seed, trial_index));
  }
  return load_wav_trial(std::get<WavSpec>(cfg.scenario), cfg.stft);
}

void write_separated(const SeparatorState& state, const StftConfig& cfg, double rate,
                     const std::string& out_dir, const std::string& suffix) {
  const MdpResult mdp = mdp_rescale(state);
  const std::size_t m = state.channels();
  for (std::size_t i = 0; i < m; ++i) {
    Spectrogram s(cfg.bins(), state.frames(), rate);
    for (std::size_t k = 0; k < state.bins(); ++k) {
      const ComplexMatrix& y = mdp.state.Y[k];
      for (std::size_t j = 0; j < state.frames(); ++j) s.at(k, j) = y(i, j);
    }
    const TimeSignal sig = istft(s, cfg);
    write_wav(out_dir + "/separated_" + std::to_string(i + 1) + suffix + ".wav", sig);
  }
}

}  // namespace

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
  std::vector<RunRecord> records(cfg.trials);
  std::vector<json> summaries(cfg.trials);

  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const TrialData trial = make_trial(cfg, t);
    SolverConfig solver_cfg = cfg.solver;
    solver_cfg.seed = trial_seed(cfg.seed, t);
    SeparatorState final_state;
    records[t] = run_solver_on_trial(trial, solver_cfg, cfg.stft, cfg.threads, &final_state);

    const std::string suffix = cfg.trials == 1 ? "" : "_t" + std::to_string(t);
    records[t].write_csv(cfg.out_dir + "/run" + suffix + ".csv");
    if (cfg.write_wavs) {
      write_separated(final_state, cfg.stft, trial.first_mic.sample_rate, cfg.out_dir, suffix);
    }

    json s;
    s["trial"] = t;
    s["solver"] = records[t].solver;
    s["m"] = records[t].m;
    s["n"] = records[t].n;
    s["K"] = records[t].K;
    s["seed"] = records[t].seed;
    s["iterations_run"] = records[t].rows.size();
    if (!records[t].rows.empty()) {
      const auto& last = records[t].rows.back();
      s["final_cost"] = format_value(last.cost, "%.17g");
      s["final_delta_sdr_db"] = format_value(last.delta_sdr_db, "%.9g");
      double total_ms = 0.0;
      for (const auto& r : records[t].rows) total_ms += r.ms;
      s["total_pass_ms"] = total_ms;
    }
    summaries[t] = std::move(s);
  }

  json out;
  out["config"] = json::parse(cfg.to_json_string());
  out["runs"] = summaries;
  std::ofstream jf(cfg.out_dir + "/run.json");
  if (!jf) throw IoFailure("cannot write run.json");
  jf << out.dump(2) << '\n';
  return records;
}

std::vector<std::vector<RunRecord>> bench_ensemble(const ExperimentConfig& cfg,
                                                   const std::vector<SolverKind>& solvers) {
  std::vector<std::vector<RunRecord>> records(solvers.size(),
                                              std::vector<RunRecord>(cfg.trials));
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
    const TrialData trial = make_trial(cfg, t);
    for (std::size_t s = 0; s < solvers.size(); ++s) {
      SolverConfig solver_cfg = cfg.solver;
      solver_cfg.kind = solvers[s];
      solver_cfg.seed = trial_seed(cfg.seed, t);
      records[s][t] = run_solver_on_trial(trial, solver_cfg, cfg.stft, /*threads=*/1);
    }
  });
  return records;
}

std::size_t iterations_to_fraction(const RunRecord& record, double fraction) {
  if (record.rows.empty()) return 0;
  const double final_delta = record.rows.back().delta_sdr_db;
  if (!std::isfinite(final_delta) || final_delta <= 0.0) return record.rows.size();
  const double target = fraction * final_delta;
  for (const auto& r : record.rows) {
    if (r.delta_sdr_db >= target) return r.iter;
  }
  return record.rows.size();
}

double median(std::vector<double> values) {
  if (values.empty()) throw DomainError("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

void ScalingResult::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoFailure("cannot write csv: " + path);
  out << "solver,m,n,K,rep,ms\n";
  for (const ScalingRow& r : rows) {
    out << r.solver << ',' << r.m << ',' << r.n << ',' << r.K << ',' << r.rep << ','
        << format_value(r.ms, "%.6g") << '\n';
  }
}

ScalingResult scaling_bench(const std::vector<std::size_t>& m_list, std::size_t n, std::size_t K,
                            int reps, const std::vector<SolverKind>& solvers, std::uint64_t seed,
                            double beta, double eps) {
  if (m_list.empty() || reps < 1) throw ConfigError("scaling_bench: empty size list or reps < 1");
  const ContrastModel model(beta);
  ScalingResult result;
  std::map<std::string, std::vector<std::pair<double, double>>> fit_points;

  for (const std::size_t m : m_list) {
    // random complex instance: X^[k] = A^[k] S^[k]
    std::mt19937_64 rng(seed + m * 0x100000001B3ULL);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    std::vector<ComplexMatrix> bins;
    bins.reserve(K);
    for (std::size_t k = 0; k < K; ++k) {
      ComplexMatrix a(m, m), s(m, n);
      do {
        for (cxd& v : a.data()) v = cxd(gauss(rng), gauss(rng));
      } while (!is_nonsingular(a));
      for (cxd& v : s.data()) v = cxd(gauss(rng), gauss(rng));
      bins.push_back(a * s);
    }
    const MixtureSet mix = MixtureSet::from_bins(std::move(bins));
    const SeparatorState whitened = whiten_init_all(mix);

    for (const SolverKind kind : solvers) {
      const std::unique_ptr<Solver> solver = Solver::make(kind);
      SeparatorState state = whitened;
      std::vector<double> times;
      for (int rep = -1; rep < reps; ++rep) {
        double ms = 0.0;
        mm_step(state, mix, *solver, model, eps, /*threads=*/1, &ms);
        result.rows.push_back({solver->name(), m, n, K, rep, ms});
        if (rep >= 0) times.push_back(ms);
      }
      fit_points[solver->name()].push_back({std::log(static_cast<double>(m)), std::log(median(times))});
    }
  }

  for (const auto& [name, pts] : fit_points) {
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : pts) {
      mx += x;
      my += y;
    }
    mx /= pts.size();
    my /= pts.size();
    double sxy = 0.0, sxx = 0.0;
    for (const auto& [x, y] : pts) {
      sxy += (x - mx) * (y - my);
      sxx += (x - mx) * (x - mx);
    }
    result.slopes[name] = sxx > 0.0 ? sxy / sxx : 0.0;
  }
  return result;
}

}  // namespace iva

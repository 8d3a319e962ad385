#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "aec/config.hpp"
#include "aec/errors.hpp"
#include "aec/metrics.hpp"
#include "aec/pipeline.hpp"
#include "aec/simulate.hpp"
#include "aec/trace_io.hpp"
#include "aec/wav.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kSampleRate = 16000;

void attach_config_options(CLI::App* cmd, aec::AecConfig& cfg, std::string& solver_name) {
  cmd->add_option("--frame", cfg.frame_len, "analysis frame length (= FFT size)")
      ->capture_default_str();
  cmd->add_option("--hop", cfg.hop, "hop size in samples")->capture_default_str();
  cmd->add_option("-P,--order", cfg.order, "nonlinear expansion order P")
      ->capture_default_str();
  cmd->add_option("-L,--ctf-len", cfg.ctf_len, "CTF filter length L in frames")
      ->capture_default_str();
  cmd->add_option("--alpha", cfg.alpha, "forgetting factor")->capture_default_str();
  cmd->add_option("--beta", cfg.beta, "generalized-Gaussian shape parameter")
      ->capture_default_str();
  cmd->add_option("--r-floor", cfg.r_floor, "floor on the auxiliary norm")
      ->capture_default_str();
  cmd->add_option("--v-init", cfg.v_init_scale, "initial covariance diagonal")
      ->capture_default_str();
  cmd->add_option("--solver", solver_name, "solver: ip or eiss")->capture_default_str();
  cmd->add_option("--threads", cfg.threads,
                  "per-bin worker threads (1 = serial, 0 = OpenMP default)")
      ->capture_default_str();
}

aec::WavData read_checked(const std::string& path) {
  aec::WavData wav = aec::read_wav(path);
  if (wav.sample_rate != kSampleRate)
    throw aec::DataError(path + ": expected " + std::to_string(kSampleRate) +
                         " Hz, got " + std::to_string(wav.sample_rate) +
                         " Hz (no resampling)");
  return wav;
}

// Accepts "3", "3,4", "2..12" and combinations thereof.
std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string tok = text.substr(pos, comma - pos);
    if (!tok.empty()) {
      const size_t dots = tok.find("..");
      if (dots == std::string::npos) {
        out.push_back(std::stoi(tok));
      } else {
        const int a = std::stoi(tok.substr(0, dots));
        const int b = std::stoi(tok.substr(dots + 2));
        if (b < a) throw aec::ConfigError("bad range '" + tok + "'");
        for (int v = a; v <= b; ++v) out.push_back(v);
      }
    }
    pos = comma + 1;
  }
  if (out.empty()) throw aec::ConfigError("empty integer list '" + text + "'");
  return out;
}

int cmd_process(const std::string& mic_path, const std::string& far_path,
                const std::string& out_path, const std::string& trace_path,
                aec::AecConfig cfg, const std::string& solver_name) {
  cfg.solver = aec::solver_from_string(solver_name);
  cfg.fft_size = cfg.frame_len;
  cfg.validate();

  const aec::WavData mic = read_checked(mic_path);
  const aec::WavData far = read_checked(far_path);

  const auto t0 = std::chrono::steady_clock::now();
  const aec::RunResult result = aec::run(mic.samples, far.samples, cfg, !trace_path.empty());
  const auto t1 = std::chrono::steady_clock::now();

  aec::write_wav(out_path, result.output, kSampleRate);
  if (!trace_path.empty()) aec::save_trace(trace_path, result.trace);

  const size_t run_len = std::max(mic.samples.size(), far.samples.size());
  json summary{{"frames", static_cast<int>((run_len + cfg.hop - 1) / cfg.hop)},
               {"bins", cfg.bins()},
               {"taps", cfg.taps()},
               {"solver", aec::to_string(cfg.solver)},
               {"samples", mic.samples.size()},
               {"sample_rate", kSampleRate},
               {"wall_time_s", std::chrono::duration<double>(t1 - t0).count()},
               {"output", out_path}};
  std::cout << summary.dump(2) << std::endl;
  return 0;
}

int cmd_simulate(const std::string& out_dir, const aec::ScenarioParams& params) {
  const aec::Scenario sc = aec::make_scenario(params);
  fs::create_directories(out_dir);

  const auto p = [&](const char* name) { return (fs::path(out_dir) / name).string(); };
  aec::write_wav(p("farend.wav"), sc.far_end, params.sample_rate);
  aec::write_wav(p("near.wav"), sc.near_end, params.sample_rate);
  aec::write_wav(p("echo.wav"), sc.echo, params.sample_rate);
  aec::write_wav(p("mixture.wav"), sc.mixture, params.sample_rate);

  double p_near = 0.0, p_echo = 0.0;
  for (double v : sc.near_end) p_near += v * v;
  for (double v : sc.echo) p_echo += v * v;
  const double measured_ser = 10.0 * std::log10(p_near / p_echo);

  json manifest{{"duration_s", params.duration_s},
                {"sample_rate", params.sample_rate},
                {"t60_ms", params.t60_ms},
                {"ser_db", params.ser_db},
                {"clip_frac", params.clip_frac},
                {"rir_len", params.rir_len},
                {"seed", params.seed},
                {"clip_threshold", sc.clip_threshold},
                {"measured_ser_db", measured_ser},
                {"files", {"farend.wav", "near.wav", "echo.wav", "mixture.wav"}}};
  std::ofstream mf(p("manifest.json"), std::ios::trunc);
  mf << manifest.dump(2) << "\n";
  if (!mf) throw aec::DataError(p("manifest.json") + ": write failed");

  std::cout << manifest.dump(2) << std::endl;
  return 0;
}

int cmd_evaluate(const std::string& mixture_path, const std::string& echo_path,
                 const std::string& far_path, const std::string& trace_path,
                 const std::string& csv_path, double window_ms, aec::AecConfig cfg,
                 const std::string& solver_name) {
  cfg.solver = aec::solver_from_string(solver_name);
  cfg.fft_size = cfg.frame_len;
  cfg.validate();

  const aec::WavData mixture = read_checked(mixture_path);
  const aec::WavData echo = read_checked(echo_path);
  const aec::WavData far = read_checked(far_path);
  const aec::FilterTrace trace = aec::load_trace(trace_path);

  const std::vector<double> residual =
      aec::replay_on_echo(trace, echo.samples, far.samples, cfg);

  const std::vector<double> erle_series =
      aec::erle(mixture.samples, residual, window_ms, kSampleRate);
  const std::vector<double> terle_series =
      aec::terle(echo.samples, residual, window_ms, kSampleRate);

  if (!csv_path.empty()) {
    std::ofstream csv(csv_path, std::ios::trunc);
    csv << "window_s,erle_db,terle_db\n";
    for (size_t w = 0; w < terle_series.size(); ++w)
      csv << (w * window_ms * 1e-3) << ',' << erle_series[w] << ',' << terle_series[w]
          << '\n';
    if (!csv) throw aec::DataError(csv_path + ": write failed");
  }

  json summary{{"windows", terle_series.size()},
               {"window_ms", window_ms},
               {"steady_state_erle_db", aec::steady_state_mean(erle_series)},
               {"steady_state_terle_db", aec::steady_state_mean(terle_series)}};
  std::cout << summary.dump(2) << std::endl;
  return 0;
}

int cmd_bench(const std::string& p_list, const std::string& l_list, int frames,
              int trials, int bins, const std::string& csv_path,
              const std::string& json_path) {
  const std::vector<int> P = parse_int_list(p_list);
  const std::vector<int> L = parse_int_list(l_list);
  if (frames < 1000)
    throw aec::ConfigError("bench needs >= 1000 frames to amortize setup");

  const aec::BenchResult result = aec::bench(P, L, frames, trials, bins);

  std::ofstream csv(csv_path, std::ios::trunc);
  aec::write_bench_csv(csv, result.rows);
  if (!csv) throw aec::DataError(csv_path + ": write failed");

  json verdict{{"ip_slope", result.ip_slope},
               {"eiss_slope", result.eiss_slope},
               {"eiss_faster_everywhere", result.eiss_faster_everywhere},
               {"low_confidence", trials < 2},
               {"frames", frames},
               {"trials", trials},
               {"bins", bins},
               {"csv", csv_path}};
  if (!json_path.empty()) {
    std::ofstream jf(json_path, std::ios::trunc);
    jf << verdict.dump(2) << "\n";
    if (!jf) throw aec::DataError(json_path + ": write failed");
  }
  std::cout << verdict.dump(2) << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming nonlinear acoustic echo canceller (CTF-domain semi-blind "
               "source separation, IP and EISS solvers)"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "TOML file; keys live under a [process]/[simulate]/[evaluate]/[bench] "
                 "section and are overridden by command-line flags");

  // process
  auto* proc = app.add_subcommand("process", "cancel echo from a mic/far-end WAV pair");
  proc->fallthrough();
  std::string mic_path, far_path, out_path, trace_path;
  aec::AecConfig proc_cfg;
  std::string proc_solver = "eiss";
  proc->add_option("mic", mic_path, "microphone WAV (16 kHz mono)")->required();
  proc->add_option("farend", far_path, "far-end reference WAV (16 kHz mono)")->required();
  proc->add_option("output", out_path, "near-end estimate WAV")->required();
  proc->add_option("--trace", trace_path, "write per-frame filter trace");
  attach_config_options(proc, proc_cfg, proc_solver);

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a synthetic double-talk scenario");
  sim->fallthrough();
  std::string out_dir;
  aec::ScenarioParams params;
  sim->add_option("out_dir", out_dir, "output directory")->required();
  sim->add_option("--duration", params.duration_s, "seconds")->capture_default_str();
  sim->add_option("--t60", params.t60_ms, "reverberation time, ms")->capture_default_str();
  sim->add_option("--ser", params.ser_db, "signal-to-echo ratio, dB")
      ->capture_default_str();
  sim->add_option("--clip", params.clip_frac, "hard-clip threshold fraction of max|x|")
      ->capture_default_str();
  sim->add_option("--rir-len", params.rir_len, "RIR length in samples")
      ->capture_default_str();
  sim->add_option("--seed", params.seed, "random seed")->capture_default_str();

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "ERLE/tERLE from a recorded filter trace");
  eval->fallthrough();
  std::string mix_path, echo_path, eval_far, eval_trace, csv_path;
  double window_ms = 128.0;
  aec::AecConfig eval_cfg;
  std::string eval_solver = "eiss";
  eval->add_option("mixture", mix_path, "mixture WAV used for the process run")
      ->required();
  eval->add_option("echo", echo_path, "ground-truth echo WAV")->required();
  eval->add_option("farend", eval_far, "far-end reference WAV")->required();
  eval->add_option("trace", eval_trace, "filter trace from process --trace")->required();
  eval->add_option("--csv", csv_path, "write per-window ERLE/tERLE series CSV");
  eval->add_option("--window-ms", window_ms, "metric window length")
      ->capture_default_str();
  attach_config_options(eval, eval_cfg, eval_solver);

  // bench
  auto* bench = app.add_subcommand("bench", "IP vs EISS per-frame runtime benchmark");
  bench->fallthrough();
  std::string p_list = "3,4", l_list = "2..12", bench_csv = "bench.csv", bench_json;
  int frames = 2000, trials = 5, bins = 4;
  bench->add_option("--P", p_list, "expansion orders, e.g. 3,4")->capture_default_str();
  bench->add_option("--L", l_list, "CTF lengths, e.g. 2..12")->capture_default_str();
  bench->add_option("--frames", frames, "frames per trial")->capture_default_str();
  bench->add_option("--trials", trials, "trials per grid point")->capture_default_str();
  bench->add_option("--bins", bins, "bins in the measured kernel")->capture_default_str();
  bench->add_option("--csv", bench_csv, "output CSV path")->capture_default_str();
  bench->add_option("--json", bench_json, "also write the verdict JSON here");

  int rc = 0;
  try {
    app.parse(argc, argv);
    if (proc->parsed())
      rc = cmd_process(mic_path, far_path, out_path, trace_path, proc_cfg, proc_solver);
    else if (sim->parsed())
      rc = cmd_simulate(out_dir, params);
    else if (eval->parsed())
      rc = cmd_evaluate(mix_path, echo_path, eval_far, eval_trace, csv_path, window_ms,
                        eval_cfg, eval_solver);
    else if (bench->parsed())
      rc = cmd_bench(p_list, l_list, frames, trials, bins, bench_csv, bench_json);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const aec::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << std::endl;
    return 1;
  } catch (const aec::DataError& e) {
    std::cerr << "data error: " << e.what() << std::endl;
    return 2;
  } catch (const aec::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << std::endl;
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
  return rc;
}

// Acceptance suite: one self-contained check per criterion, each printing a
// single [PASS]/[FAIL] line with its measured figure and wall time. Exits
// nonzero if any check fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aec/metrics.hpp"
#include "aec/pipeline.hpp"
#include "aec/simulate.hpp"
#include "aec/solver_eiss.hpp"
#include "aec/solver_ip.hpp"
#include "aec/spectral.hpp"
#include "oracles.hpp"

using namespace aec;
namespace fs = std::filesystem;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

int g_failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail,
            double seconds, double budget_s) {
  const bool in_budget = seconds < budget_s;
  if (!ok || !in_budget) ++g_failures;
  std::cout << (ok && in_budget ? "[PASS]" : "[FAIL]") << " criterion " << id << ": "
            << name << " — " << detail;
  if (!in_budget) std::cout << " [over budget]";
  std::cout << " (" << seconds << " s, budget " << budget_s << " s)" << std::endl;
}

double coord_objective(const ExtractionFilter& w, const WeightedCovariance& V, cpx u,
                       int k) {
  ExtractionFilter trial = w;
  eiss_apply(trial, u, k);
  return aux_value(trial, V, trial.w[0]);
}

// --- 1. STFT perfect reconstruction -----------------------------------------

void criterion_1() {
  Timer timer;
  AecConfig cfg;  // 1024-point Hann, 75% overlap
  std::mt19937 rng(100);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::vector<double> x = oracle::random_signal(16000, rng);
    const std::vector<double> back = synthesize(analyze(x, cfg), cfg);
    double peak = 0.0;
    for (double v : x) peak = std::max(peak, std::abs(v));
    const int interior = full_overlap_length(16000, cfg);
    for (int t = 0; t < interior; ++t)
      worst = std::max(worst, std::abs(back[t] - x[t]) / peak);
  }
  std::ostringstream d;
  d << "max interior relative error " << worst << " (<= 1e-6)";
  report(1, "STFT perfect reconstruction", worst <= 1e-6, d.str(), timer.seconds(), 10.0);
}

// --- 2. EISS stationarity/optimality -----------------------------------------

void criterion_2() {
  Timer timer;
  std::mt19937 rng(200);
  bool minimizer_ok = true, descent_ok = true;
  int checked = 0;

  for (int rep = 0; rep < 1000; ++rep) {
    const int n = 2 + rep % 15;  // sizes 2..16
    const WeightedCovariance V = oracle::random_pd(n, rng);
    ExtractionFilter w;
    w.w = oracle::random_cvec(n, rng);
    w.w[0] = 1.0;

    double value = aux_value(w, V, w.w[0]);
    for (int k = 1; k <= n; ++k) {
      const cpx u = eiss_coeff(w, V, k);
      const double at_u = coord_objective(w, V, u, k);
      const double h = 1e-3 * std::max(1.0, std::abs(u));
      for (int dr = -2; dr <= 2 && minimizer_ok; ++dr)
        for (int di = -2; di <= 2; ++di) {
          if (at_u > coord_objective(w, V, u + cpx{dr * h, di * h}, k) +
                         1e-10 * std::abs(at_u)) {
            minimizer_ok = false;
            break;
          }
        }
      eiss_apply(w, u, k);
      const double next = aux_value(w, V, w.w[0]);
      if (next > value + 1e-9 * (1.0 + std::abs(value))) descent_ok = false;
      value = next;
      ++checked;
    }
    if (!minimizer_ok || !descent_ok) break;
  }
  std::ostringstream d;
  d << checked << " coordinates grid-checked; minimizer " << (minimizer_ok ? "ok" : "VIOLATED")
    << ", descent " << (descent_ok ? "ok" : "VIOLATED");
  report(2, "EISS closed-form coefficients are descent minimizers",
         minimizer_ok && descent_ok, d.str(), timer.seconds(), 60.0);
}

// --- 3. IP <-> EISS fixed-point equivalence ----------------------------------

void criterion_3() {
  Timer timer;
  std::mt19937 rng(300);
  int converged = 0;
  long total_sweeps = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const WeightedCovariance V = oracle::random_pd(16, rng);
    const std::vector<cpx> star = normalize(ip_update(V));

    ExtractionFilter w = ExtractionFilter::identity(16);
    bool ok = false;
    for (int sweep = 0; sweep < 50000; ++sweep) {
      w = eiss_update(std::move(w), V);
      ++total_sweeps;
      double diff = 0.0;
      for (int k = 0; k < 16; ++k) diff = std::max(diff, std::abs(w.w[k] - star[k]));
      if (diff <= 1e-6) {
        ok = true;
        break;
      }
    }
    if (ok) ++converged;
  }
  std::ostringstream d;
  d << converged << "/100 instances converged to normalize(V^-1 e1) within 1e-6 ("
    << total_sweeps / 100 << " sweeps avg)";
  report(3, "repeated EISS sweeps reach the IP fixed point", converged == 100, d.str(),
         timer.seconds(), 30.0);
}

// --- 4. Online solver equivalence on the default scenario --------------------

void criterion_4() {
  Timer timer;
  const Scenario sc = make_scenario(ScenarioParams{});  // 10 s, T60 300 ms, SER 0, clip 0.2

  double terle_db[2] = {0.0, 0.0};
  int idx = 0;
  for (Solver solver : {Solver::IP, Solver::EISS}) {
    AecConfig cfg;
    cfg.solver = solver;
    const RunResult res = run(sc.mixture, sc.far_end, cfg, true);
    const std::vector<double> residual =
        replay_on_echo(res.trace, sc.echo, sc.far_end, cfg);
    terle_db[idx++] = steady_state_mean(terle(sc.echo, residual));
  }
  const double gap = std::abs(terle_db[0] - terle_db[1]);
  const bool ok = gap <= 1.0 && terle_db[0] > 10.0 && terle_db[1] > 10.0;
  std::ostringstream d;
  d << "steady-state tERLE: IP " << terle_db[0] << " dB, EISS " << terle_db[1]
    << " dB, gap " << gap << " dB (<= 1, both > 10)";
  report(4, "IP and EISS are equivalent online", ok, d.str(), timer.seconds(), 120.0);
}

// --- 5. Complexity separation -------------------------------------------------

void criterion_5() {
  // The fitted slope is a stochastic wall-clock estimator; the verdict uses
  // the median over independent benchmark runs so scheduler drift on a busy
  // host cannot flip a value that sits inside the window.
  Timer timer;
  const std::vector<int> P{3, 4};
  std::vector<int> L;
  for (int l = 2; l <= 12; ++l) L.push_back(l);

  std::vector<double> ip_slopes, eiss_slopes;
  int faster_votes = 0;
  const int runs = 3;
  for (int r = 0; r < runs; ++r) {
    const BenchResult result = bench(P, L, 2000, 9, 4, 1234 + 101 * r);
    ip_slopes.push_back(result.ip_slope);
    eiss_slopes.push_back(result.eiss_slope);
    if (result.eiss_faster_everywhere) ++faster_votes;
  }
  std::sort(ip_slopes.begin(), ip_slopes.end());
  std::sort(eiss_slopes.begin(), eiss_slopes.end());
  const double ip = ip_slopes[runs / 2];
  const double eiss = eiss_slopes[runs / 2];

  const bool ok =
      ip >= 2.5 && ip <= 3.5 && eiss >= 1.5 && eiss <= 2.5 && faster_votes > runs / 2;
  std::ostringstream d;
  d << "median log-log slopes over " << runs << " runs: IP " << ip
    << " (in [2.5,3.5]), EISS " << eiss << " (in [1.5,2.5]); EISS faster at every "
    << "PL+1 >= 7 in " << faster_votes << "/" << runs << " runs";
  report(5, "cubic vs quadratic complexity separation", ok, d.str(), timer.seconds(),
         600.0);
}

// --- 6. Model-exact recovery --------------------------------------------------

void criterion_6() {
  Timer timer;
  const int P = 2, L = 3, frames = 1200;
  AecConfig cfg;
  cfg.frame_len = 256;
  cfg.fft_size = 256;
  cfg.hop = 64;
  cfg.order = P;
  cfg.ctf_len = L;
  const int bins = cfg.bins();

  std::mt19937 rng(600);
  const int len = frames * cfg.hop;
  const std::vector<double> far = oracle::random_signal(len, rng, 0.5);
  const ExpandedReference expanded = expand_reference(far, P);
  std::vector<Spectrogram> refs(P);
  for (int p = 0; p < P; ++p) refs[p] = analyze(expanded.channels[p], cfg);

  // Known CTF filters, decaying across taps.
  std::vector<std::vector<cpx>> ctf(bins);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (auto& c : ctf) {
    c.resize(P * L);
    for (int p = 0; p < P; ++p)
      for (int l = 0; l < L; ++l)
        c[static_cast<size_t>(p) * L + l] =
            cpx(gauss(rng), gauss(rng)) * (0.5 / ((1 + p) * (1 + l)));
  }
  const Spectrogram echo_spec = ctf_exact_echo(refs, ctf, L);

  // White near end ~20 dB below the echo.
  const std::vector<double> near = oracle::random_signal(len, rng, 0.5);
  Spectrogram near_spec = analyze(near, cfg);
  double p_echo = 0.0, p_near = 0.0;
  for (const cpx& v : echo_spec.data) p_echo += std::norm(v);
  for (const cpx& v : near_spec.data) p_near += std::norm(v);
  const double near_gain = std::sqrt(0.01 * p_echo / p_near);
  for (cpx& v : near_spec.data) v *= near_gain;

  bool all_ok = true;
  std::ostringstream d;
  for (Solver solver : {Solver::IP, Solver::EISS}) {
    cfg.solver = solver;
    AecState state(cfg);
    std::vector<cpx> mic(bins);
    std::vector<std::span<const cpx>> ref_cols(P);

    double resid_power = 0.0, echo_power = 0.0;
    const int tail_start = (3 * frames) / 4;
    for (int j = 0; j < frames; ++j) {
      for (int i = 0; i < bins; ++i) mic[i] = echo_spec.at(i, j) + near_spec.at(i, j);
      for (int p = 0; p < P; ++p) ref_cols[p] = refs[p].frame(j);
      const std::vector<cpx> s_hat = process_frame(state, mic, ref_cols);
      if (j >= tail_start) {
        for (int i = 0; i < bins; ++i) {
          resid_power += std::norm(s_hat[i] - near_spec.at(i, j));
          echo_power += std::norm(echo_spec.at(i, j));
        }
      }
    }
    const double suppression_db = 10.0 * std::log10(echo_power / resid_power);
    d << to_string(solver) << " " << suppression_db << " dB ";
    if (!(suppression_db >= 20.0)) all_ok = false;
  }
  d << "(each >= 20 dB echo suppression on the converged tail)";
  report(6, "model-exact recovery on CTF-generated mixtures", all_ok, d.str(),
         timer.seconds(), 60.0);
}

// --- 7. Covariance integrity --------------------------------------------------

void criterion_7() {
  Timer timer;
  std::mt19937 rng(700);
  const int n = 16;
  WeightedCovariance V = WeightedCovariance::scaled_identity(n, 1e-3);
  for (int it = 0; it < 100000; ++it) {
    const std::vector<cpx> y = oracle::random_cvec(n, rng);
    double r = 0.0;
    for (const cpx& v : y) r += std::norm(v);
    update_covariance(V, y, weight(std::sqrt(r), 0.4, 1e-6), 0.992);
  }
  const double defect = V.max_hermitian_defect();
  const double min_eig = oracle::min_eigenvalue(V);
  const double bound = -1e-10 * V.trace_real();
  const bool ok = defect <= 1e-12 && min_eig >= bound;
  std::ostringstream d;
  d << "after 1e5 updates: Hermitian defect " << defect << " (<= 1e-12), min eigenvalue "
    << min_eig << " (>= " << bound << ")";
  report(7, "covariance integrity under the recursion", ok, d.str(), timer.seconds(),
         30.0);
}

// --- 8. CLI determinism ---------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

bool same_bytes(const fs::path& a, const fs::path& b) {
  const std::string sa = slurp(a), sb = slurp(b);
  return !sa.empty() && sa == sb;
}

void criterion_8() {
  Timer timer;
  const char* cli = std::getenv("AEC_CLI_BIN");
  if (cli == nullptr) {
    report(8, "cmd_process / cmd_simulate determinism", false,
           "AEC_CLI_BIN not set (run through ctest)", timer.seconds(), 120.0);
    return;
  }

  const fs::path tmp =
      fs::temp_directory_path() / ("aec_accept_" + std::to_string(std::random_device{}()));
  fs::create_directories(tmp);
  const std::string quiet = " > /dev/null 2>&1";
  auto sh = [&](const std::string& cmd) { return std::system((cmd + quiet).c_str()) == 0; };

  bool ok = true;
  std::string detail;
  const std::string bin = std::string("\"") + cli + "\"";
  for (const char* dir : {"simA", "simB"}) {
    if (!sh(bin + " simulate " + (tmp / dir).string() + " --duration 1.5 --seed 42")) {
      ok = false;
      detail = "simulate run failed";
    }
  }
  if (ok) {
    for (const char* name : {"farend.wav", "near.wav", "echo.wav", "mixture.wav",
                             "manifest.json"}) {
      if (!same_bytes(tmp / "simA" / name, tmp / "simB" / name)) {
        ok = false;
        detail = std::string("simulate outputs differ: ") + name;
      }
    }
  }
  if (ok) {
    const std::string mix = (tmp / "simA" / "mixture.wav").string();
    const std::string far = (tmp / "simA" / "farend.wav").string();
    for (const char* tag : {"A", "B"}) {
      const std::string out = (tmp / (std::string("out") + tag + ".wav")).string();
      const std::string trc = (tmp / (std::string("trace") + tag + ".bin")).string();
      if (!sh(bin + " process " + mix + " " + far + " " + out + " --trace " + trc)) {
        ok = false;
        detail = "process run failed";
      }
    }
    if (ok && !same_bytes(tmp / "outA.wav", tmp / "outB.wav")) {
      ok = false;
      detail = "process output WAVs differ";
    }
    if (ok && !same_bytes(tmp / "traceA.bin", tmp / "traceB.bin")) {
      ok = false;
      detail = "process traces differ";
    }
  }
  if (ok) detail = "simulate and process outputs byte-identical across reruns";
  fs::remove_all(tmp);
  report(8, "cmd_process / cmd_simulate determinism", ok, detail, timer.seconds(), 120.0);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();

  if (g_failures > 0) {
    std::cout << g_failures << " criterion(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all acceptance criteria passed" << std::endl;
  return 0;
}

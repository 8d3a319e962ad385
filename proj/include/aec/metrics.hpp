#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "aec/config.hpp"

namespace aec {

// Echo return loss enhancement over non-overlapping windows:
// 10 log10(sum y^2 / sum e^2) per window, capped at +80 dB. Windows where the
// denominator falls below 1e-12 of the total reference power hit the cap.
std::vector<double> erle(std::span<const double> mic, std::span<const double> output,
                         double window_ms = 128.0, int fs = 16000);

// Same windowing applied to the isolated echo and its residual (valid during
// double-talk).
std::vector<double> terle(std::span<const double> echo,
                          std::span<const double> residual_echo,
                          double window_ms = 128.0, int fs = 16000);

// Mean of the final fraction of a dB series (steady state).
double steady_state_mean(std::span<const double> series, double final_fraction = 0.25);

struct BenchRow {
  Solver solver;
  int P = 0;
  int L = 0;
  int frames = 0;
  int trials = 0;
  double median_us_per_frame = 0.0;  // per frame per bin, microseconds
};

struct BenchResult {
  std::vector<BenchRow> rows;
  double ip_slope = 0.0;    // log-log slope of cost vs (PL+1)
  double eiss_slope = 0.0;
  bool eiss_faster_everywhere = false;  // at every grid point with PL+1 >= 7
};

// Wall-clock cost of the per-frame kernel (covariance update + solver update
// + auxiliary variables) for each (solver, P, L); median over trials of the
// per-frame-per-bin time. `frames` is a floor: cheap grid points run more
// frames so every sample lasts long enough to average out scheduler noise.
// The measured section is strictly single-threaded.
BenchResult bench(std::span<const int> P_values, std::span<const int> L_values,
                  int frames, int trials, int bins = 4, unsigned seed = 1234);

// CSV with header: solver,P,L,frames,median_us_per_frame,trials
void write_bench_csv(std::ostream& os, std::span<const BenchRow> rows);

// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace aec

#pragma once

#include <complex>
#include <span>
#include <vector>

#include "aec/config.hpp"
#include "aec/expansion.hpp"
#include "aec/model.hpp"
#include "aec/spectral.hpp"
#include "aec/types.hpp"

namespace aec {

// Per-frame, per-bin filter snapshots recorded after normalization, stored as
// complex64 (the on-disk trace format holds them bit-identically).
struct FilterTrace {
  int n_bins = 0;
  int n_taps = 0;
  std::vector<std::vector<std::complex<float>>> frames;  // each n_bins * n_taps, bin-major

  int n_frames() const { return static_cast<int>(frames.size()); }
  std::complex<float> at(int frame, int bin, int tap) const {
    return frames[frame][static_cast<size_t>(bin) * n_taps + tap];
  }
};

// Streaming state: per-bin covariance and filter plus the reference frame
// history. Owned by exactly one processing stream.
struct AecState {
  AecConfig config;
  std::vector<WeightedCovariance> cov;     // one per bin
  std::vector<ExtractionFilter> filters;   // one per bin
  RefHistory history;
  int frame_index = 0;
  bool record_trace = false;
  FilterTrace trace;

  // Per-frame scratch, reused across frames; bins write disjoint slices.
  std::vector<cpx> stacked;
  std::vector<double> prior_power;

  explicit AecState(const AecConfig& cfg);
};

// One per-bin solver application with the online degradation rule: numeric
// failure leaves the filter unchanged. Allocation-free on the hot path; the
// runtime benchmark measures exactly this step plus the covariance update.
void solver_step(Solver solver, const WeightedCovariance& V, ExtractionFilter& filter,
                 int eiss_sweeps = 1);

// Process one STFT frame: stack observations, compute the shared auxiliary
// norm from previous-frame filters, update every bin's covariance, run the
// selected solver per bin, and emit S_hat[i] = w_i^H y_i with the updated
// filters. Solver failures degrade to the previous filter for that bin.
// Per-bin work runs under OpenMP when config.threads != 1; outputs are
// bit-identical to the serial path regardless of thread count.
std::vector<cpx> process_frame(AecState& state, std::span<const cpx> mic_bins,
                               std::span<const std::span<const cpx>> ref_bins);

struct RunResult {
  std::vector<double> output;
  FilterTrace trace;
};

// Full chain: expand the far end, analyze, run the frame loop, resynthesize.
// Inputs of unequal length are zero-padded to the longer one; the output is
// truncated to the input length.
RunResult run(std::span<const double> mic, std::span<const double> far_end,
              const AecConfig& config, bool record_trace = false);

// Apply recorded per-frame filters to the echo component alone (no adaptation)
// and resynthesize the residual echo. Requires the trace to match the config
// dimensions and frame count of the echo/far-end pair.
std::vector<double> replay_on_echo(const FilterTrace& trace,
                                   std::span<const double> echo_only,
                                   std::span<const double> far_end,
                                   const AecConfig& config);

}  // namespace aec

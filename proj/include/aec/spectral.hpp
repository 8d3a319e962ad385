#pragma once

#include <span>
#include <vector>

#include "aec/config.hpp"
#include "aec/types.hpp"

namespace aec {

// Complex time-frequency matrix, one-sided bins x frames. Stored frame-major
// so the per-frame bin vector is contiguous.
struct Spectrogram {
  int n_bins = 0;
  int n_frames = 0;
  int frame_len = 0;
  int hop = 0;
  int fft_size = 0;
  std::vector<cpx> data;  // data[j * n_bins + i]

  cpx& at(int bin, int frame) { return data[static_cast<size_t>(frame) * n_bins + bin]; }
  const cpx& at(int bin, int frame) const {
    return data[static_cast<size_t>(frame) * n_bins + bin];
  }
  std::span<cpx> frame(int j) {
    return {data.data() + static_cast<size_t>(j) * n_bins, static_cast<size_t>(n_bins)};
  }
  std::span<const cpx> frame(int j) const {
    return {data.data() + static_cast<size_t>(j) * n_bins, static_cast<size_t>(n_bins)};
  }
};

// Periodic Hann window of length n.
std::vector<double> hann_window(int n);

// Windowed analysis. Frames advance by config.hop; the signal is zero-padded
// by (frame_len - hop) samples in front so the first input sample already sees
// the full complement of overlapping windows, and the tail is zero-padded.
// J = ceil(len / hop). An empty signal yields an empty spectrogram.
Spectrogram analyze(std::span<const double> signal, const AecConfig& config);

// Weighted overlap-add resynthesis with per-sample COLA normalization
// (analysis-only windowing). Output length is n_frames * hop; callers truncate
// to the original signal length. synthesize(analyze(x)) == x wherever the
// window coverage is nonzero, up to floating-point rounding.
std::vector<double> synthesize(const Spectrogram& spec, const AecConfig& config);

// Number of leading output samples with full window overlap, i.e. the prefix
// on which perfect reconstruction holds with full COLA weight.
int full_overlap_length(int signal_len, const AecConfig& config);

}  // namespace aec

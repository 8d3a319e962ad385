#pragma once

#include <span>
#include <vector>

#include "aec/spectral.hpp"
#include "aec/types.hpp"

namespace aec {

// Odd-power expansion channels of the far-end reference: channels[p] = x^(2p+1).
struct ExpandedReference {
  std::vector<std::vector<double>> channels;
  int order = 0;
};

ExpandedReference expand_reference(std::span<const double> x, int order);

// Per-bin stacked observation: [Y, x_0(j..j-L+1), ..., x_{P-1}(j..j-L+1)],
// length P*L + 1. Entries referencing frames before the first are zero.
struct StackedObservation {
  std::vector<cpx> y;
};

// Index of expansion channel p, delay l inside the stacked vector.
constexpr int stack_index(int p, int l, int ctf_len) { return 1 + p * ctf_len + l; }

StackedObservation stack_observation(const Spectrogram& mic,
                                     std::span<const Spectrogram> refs, int bin, int frame,
                                     int ctf_len);

// Ring buffer of the last L reference frames per expansion channel; the
// streaming equivalent of gathering delayed frames from full spectrograms.
class RefHistory {
 public:
  RefHistory(int order, int ctf_len, int n_bins);

  // Push the current frame's per-channel bin vectors (frame j becomes delay 0).
  void push(std::span<const std::span<const cpx>> channel_bins);

  // Fill out[1 + p*L + l] for all (p, l); out[0] is left untouched.
  void gather(int bin, std::span<cpx> out) const;

  void reset();

 private:
  int order_;
  int ctf_len_;
  int n_bins_;
  int pos_ = 0;      // ring slot holding the most recent frame
  int filled_ = 0;   // frames pushed so far, saturating at ctf_len_
  std::vector<cpx> buf_;  // [p][slot][bin]
};

}  // namespace aec

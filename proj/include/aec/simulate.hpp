#pragma once

#include <span>
#include <vector>

#include "aec/spectral.hpp"
#include "aec/types.hpp"

namespace aec {

struct ScenarioParams {
  double duration_s = 10.0;
  int sample_rate = 16000;
  double t60_ms = 300.0;
  double ser_db = 0.0;
  double clip_frac = 0.2;   // clip level as a fraction of max|x|
  int rir_len = 4096;
  unsigned seed = 42;
};

// Synthetic double-talk scenario with exact ground-truth decomposition:
// mixture = echo + near_end, echo = rir * hard_clip(far_end).
struct Scenario {
  std::vector<double> far_end;
  std::vector<double> near_end;   // after SER scaling
  std::vector<double> echo;
  std::vector<double> mixture;
  std::vector<double> rir;
  double clip_threshold = 0.0;
  double ser_db = 0.0;
};

// Memoryless saturation at threshold_frac * max|x|. All-zero input passes
// through (degenerate zero clip level).
std::vector<double> hard_clip(std::span<const double> x, double threshold_frac);

// Seeded exponential-decay noise RIR: white noise shaped by a T60 envelope,
// normalized to unit energy.
std::vector<double> synth_rir(double t60_ms, int fs, int length, unsigned seed);

// Direct time-domain convolution, truncated to the input length.
std::vector<double> convolve(std::span<const double> x, std::span<const double> h);

struct MixResult {
  std::vector<double> near_scaled;
  std::vector<double> mixture;
  double scale = 1.0;
};

// Scale near_end so 10 log10(P_near / P_echo) = ser_db, then add.
MixResult mix(std::span<const double> near_end, std::span<const double> echo,
              double ser_db);

// Deterministic speech-like test signal: lowpassed noise with a slow random
// amplitude envelope, peak-normalized to 0.5.
std::vector<double> speech_like(int length, unsigned seed, int fs = 16000);

Scenario make_scenario(const ScenarioParams& params);

// Echo synthesized directly in the STFT domain through known per-bin CTF
// filters: echo[i][j] = sum_{p,l} ctf[i][p*L + l] * refs[p].at(i, j - l).
// Exact by construction; used to test the pipeline with zero model mismatch.
Spectrogram ctf_exact_echo(std::span<const Spectrogram> refs,
                           const std::vector<std::vector<cpx>>& ctf, int ctf_len);

}  // namespace aec

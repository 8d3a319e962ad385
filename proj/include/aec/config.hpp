#pragma once

#include <string>

#include "aec/errors.hpp"
#include "aec/types.hpp"

namespace aec {

enum class Solver { IP, EISS };

std::string to_string(Solver s);
Solver solver_from_string(const std::string& name);

// Shared configuration for the STFT front end and the per-bin adaptive models.
// Defaults follow the reference operating point: 1024-sample Hann frames with
// 75% overlap at 16 kHz, expansion order 3, CTF length 5, alpha 0.992, beta 0.4.
struct AecConfig {
  int frame_len = 1024;
  int hop = 256;
  int fft_size = 1024;
  int order = 3;            // P: number of odd-power expansion channels
  int ctf_len = 5;          // L: CTF filter length in frames
  double alpha = 0.992;     // forgetting factor, in (0,1)
  double beta = 0.4;        // generalized-Gaussian shape parameter
  double r_floor = 1e-6;    // floor on the auxiliary norm before weighting
  double v_init_scale = 1e-3;
  Solver solver = Solver::EISS;
  int eiss_sweeps = 1;      // sweeps per frame; >1 only for fixed-point studies
  int threads = 1;          // 1: serial reference path; 0: OpenMP default; >1: that many

  int taps() const { return order * ctf_len + 1; }   // stacked vector length PL+1
  int bins() const { return fft_size / 2 + 1; }      // one-sided spectrum size

  // Throws ConfigError on any violated invariant.
  void validate() const;
};

}  // namespace aec

#pragma once

#include <span>
#include <vector>

#include "aec/types.hpp"

namespace aec {

// Iterative radix-2 FFT with precomputed twiddles. Power-of-two sizes only.
// Convention: unnormalized forward, 1/n inverse.
class Fft {
 public:
  explicit Fft(int n);

  void forward(std::span<cpx> buf) const;
  void inverse(std::span<cpx> buf) const;
  int size() const { return n_; }

 private:
  void transform_(std::span<cpx> buf, bool inv) const;

  int n_;
  std::vector<int> rev_;
  std::vector<cpx> tw_;   // forward twiddles e^{-2 pi i k / n}
};

// One-sided spectrum (n/2+1 bins) of a real frame of length n.
std::vector<cpx> real_fft(const Fft& fft, std::span<const double> frame);

// Real frame from a one-sided spectrum, Hermitian-extended; includes 1/n scaling.
std::vector<double> real_ifft(const Fft& fft, std::span<const cpx> half);

}  // namespace aec

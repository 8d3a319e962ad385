#include "aec/fft.hpp"

#include <cmath>
#include <numbers>

#include "aec/errors.hpp"

namespace aec {

Fft::Fft(int n) : n_(n) {
  if (n <= 0 || (n & (n - 1)) != 0) throw ConfigError("FFT size must be a power of two");
  rev_.resize(n);
  int log2n = 0;
  while ((1 << log2n) < n) ++log2n;
  for (int i = 0; i < n; ++i) {
    int r = 0;
    for (int b = 0; b < log2n; ++b)
      if (i & (1 << b)) r |= 1 << (log2n - 1 - b);
    rev_[i] = r;
  }
  tw_.resize(n / 2);
  for (int k = 0; k < n / 2; ++k) {
    double ang = -2.0 * std::numbers::pi * k / n;
    tw_[k] = {std::cos(ang), std::sin(ang)};
  }
}

void Fft::transform_(std::span<cpx> buf, bool inv) const {
  for (int i = 0; i < n_; ++i) {
    int r = rev_[i];
    if (i < r) std::swap(buf[i], buf[r]);
  }
  for (int len = 2; len <= n_; len <<= 1) {
    int step = n_ / len;
    for (int i = 0; i < n_; i += len) {
      for (int k = 0; k < len / 2; ++k) {
        cpx w = tw_[static_cast<size_t>(k) * step];
        if (inv) w = std::conj(w);
        cpx u = buf[i + k];
        cpx t = w * buf[i + k + len / 2];
        buf[i + k] = u + t;
        buf[i + k + len / 2] = u - t;
      }
    }
  }
  if (inv) {
    double s = 1.0 / n_;
    for (int i = 0; i < n_; ++i) buf[i] *= s;
  }
}

void Fft::forward(std::span<cpx> buf) const { transform_(buf, false); }

void Fft::inverse(std::span<cpx> buf) const { transform_(buf, true); }

std::vector<cpx> real_fft(const Fft& fft, std::span<const double> frame) {
  const int n = fft.size();
  std::vector<cpx> buf(n);
  const int m = std::min<int>(n, static_cast<int>(frame.size()));
  for (int i = 0; i < m; ++i) buf[i] = frame[i];
  fft.forward(buf);
  buf.resize(n / 2 + 1);
  return buf;
}

std::vector<double> real_ifft(const Fft& fft, std::span<const cpx> half) {
  const int n = fft.size();
  std::vector<cpx> buf(n);
  for (int k = 0; k <= n / 2; ++k) buf[k] = half[k];
  for (int k = n / 2 + 1; k < n; ++k) buf[k] = std::conj(half[n - k]);
  fft.inverse(buf);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = buf[i].real();
  return out;
}

}  // namespace aec

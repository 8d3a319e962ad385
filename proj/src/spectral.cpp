#include "aec/spectral.hpp"

#include <cmath>
#include <numbers>

#include "aec/fft.hpp"

namespace aec {

std::vector<double> hann_window(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
  return w;
}

Spectrogram analyze(std::span<const double> signal, const AecConfig& config) {
  config.validate();
  const int frame_len = config.frame_len;
  const int hop = config.hop;
  const int pad = frame_len - hop;  // leading zeros so sample 0 gets full overlap

  Spectrogram spec;
  spec.n_bins = config.bins();
  spec.frame_len = frame_len;
  spec.hop = hop;
  spec.fft_size = config.fft_size;

  const long len = static_cast<long>(signal.size());
  if (len == 0) return spec;

  spec.n_frames = static_cast<int>((len + hop - 1) / hop);
  spec.data.resize(static_cast<size_t>(spec.n_frames) * spec.n_bins);

  const Fft fft(config.fft_size);
  const std::vector<double> win = hann_window(frame_len);
  std::vector<double> frame(frame_len);

  for (int j = 0; j < spec.n_frames; ++j) {
    const long start = static_cast<long>(j) * hop - pad;  // signal-domain offset
    for (int t = 0; t < frame_len; ++t) {
      const long s = start + t;
      frame[t] = (s >= 0 && s < len) ? signal[s] * win[t] : 0.0;
    }
    std::vector<cpx> bins = real_fft(fft, frame);
    std::copy(bins.begin(), bins.end(), spec.frame(j).begin());
  }
  return spec;
}

std::vector<double> synthesize(const Spectrogram& spec, const AecConfig& config) {
  config.validate();
  if (spec.n_frames == 0) return {};
  if (spec.frame_len != config.frame_len || spec.hop != config.hop ||
      spec.fft_size != config.fft_size || spec.n_bins != config.bins())
    throw ConfigError("spectrogram metadata does not match config");

  const int frame_len = config.frame_len;
  const int hop = config.hop;
  const int pad = frame_len - hop;
  const long out_len = static_cast<long>(spec.n_frames) * hop;
  const long acc_len = out_len + frame_len;  // padded-domain length

  std::vector<double> acc(acc_len, 0.0);
  std::vector<double> wsum(acc_len, 0.0);
  const Fft fft(config.fft_size);
  const std::vector<double> win = hann_window(frame_len);

  for (int j = 0; j < spec.n_frames; ++j) {
    std::vector<double> frame = real_ifft(fft, spec.frame(j));
    const long off = static_cast<long>(j) * hop;
    for (int t = 0; t < frame_len; ++t) {
      acc[off + t] += frame[t];
      wsum[off + t] += win[t];
    }
  }

  // The frames carry analysis-windowed samples, so acc = x * wsum pointwise;
  // dividing by the per-sample COLA weight recovers x wherever coverage exists.
  std::vector<double> out(out_len, 0.0);
  for (long t = 0; t < out_len; ++t) {
    const double w = wsum[t + pad];
    out[t] = (w > 1e-8) ? acc[t + pad] / w : 0.0;
  }
  return out;
}

int full_overlap_length(int signal_len, const AecConfig& config) {
  if (signal_len <= 0) return 0;
  const int hop = config.hop;
  const int n_frames = (signal_len + hop - 1) / hop;
  // Padded-domain positions [frame_len - hop, n_frames * hop) see every
  // overlapping window; subtracting the front pad maps to signal coordinates.
  const long full = static_cast<long>(n_frames) * hop - (config.frame_len - hop);
  return static_cast<int>(std::max(0L, std::min<long>(full, signal_len)));
}

}  // namespace aec

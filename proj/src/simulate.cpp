#include "aec/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "aec/errors.hpp"

namespace aec {

std::vector<double> hard_clip(std::span<const double> x, double threshold_frac) {
  if (!(threshold_frac > 0.0 && threshold_frac <= 1.0))
    throw ConfigError("hard_clip: threshold fraction must lie in (0, 1]");
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  const double c = threshold_frac * peak;
  std::vector<double> out(x.size());
  for (size_t t = 0; t < x.size(); ++t) out[t] = std::clamp(x[t], -c, c);
  return out;
}

std::vector<double> synth_rir(double t60_ms, int fs, int length, unsigned seed) {
  if (!(t60_ms > 0.0)) throw ConfigError("synth_rir: T60 must be positive");
  if (length <= 0) throw ConfigError("synth_rir: length must be positive");

  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  // 60 dB amplitude decay over t60 seconds: envelope exp(-3 ln10 * t / (t60 fs)).
  const double rate = 3.0 * std::log(10.0) / (t60_ms * 1e-3 * fs);
  std::vector<double> h(length);
  double energy = 0.0;
  for (int t = 0; t < length; ++t) {
    h[t] = gauss(rng) * std::exp(-rate * t);
    energy += h[t] * h[t];
  }
  const double s = 1.0 / std::sqrt(energy);
  for (double& v : h) v *= s;
  return h;
}

std::vector<double> convolve(std::span<const double> x, std::span<const double> h) {
  std::vector<double> out(x.size(), 0.0);
  for (size_t t = 0; t < x.size(); ++t) {
    const size_t kmax = std::min(h.size() - 1, t);
    double acc = 0.0;
    for (size_t k = 0; k <= kmax; ++k) acc += h[k] * x[t - k];
    out[t] = acc;
  }
  return out;
}

namespace {

double power(std::span<const double> x) {
  double p = 0.0;
  for (double v : x) p += v * v;
  return x.empty() ? 0.0 : p / static_cast<double>(x.size());
}

}  // namespace

MixResult mix(std::span<const double> near_end, std::span<const double> echo,
              double ser_db) {
  const double p_near = power(near_end);
  const double p_echo = power(echo);
  if (!(p_near > 0.0)) throw DataError("mix: zero-power near end with finite SER");
  if (!(p_echo > 0.0)) throw DataError("mix: zero-power echo with finite SER");

  MixResult r;
  r.scale = std::sqrt(std::pow(10.0, ser_db / 10.0) * p_echo / p_near);
  r.near_scaled.resize(near_end.size());
  r.mixture.resize(near_end.size());
  for (size_t t = 0; t < near_end.size(); ++t) {
    r.near_scaled[t] = near_end[t] * r.scale;
    r.mixture[t] = r.near_scaled[t] + echo[t];
  }
  return r;
}

std::vector<double> speech_like(int length, unsigned seed, int fs) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> out(length);

  // Lowpassed noise carrier with a slowly wandering amplitude envelope.
  const double pole = std::exp(-2.0 * std::numbers::pi * 400.0 / fs);
  const double env_pole = std::exp(-2.0 * std::numbers::pi * 3.0 / fs);
  double carrier = 0.0, env_state = 0.0;
  for (int t = 0; t < length; ++t) {
    carrier = pole * carrier + (1.0 - pole) * gauss(rng) * 8.0;
    env_state = env_pole * env_state + (1.0 - env_pole) * gauss(rng) * 30.0;
    const double env = 0.15 + std::abs(env_state);
    out[t] = carrier * env;
  }
  double peak = 0.0;
  for (double v : out) peak = std::max(peak, std::abs(v));
  if (peak > 0.0)
    for (double& v : out) v *= 0.5 / peak;
  return out;
}

Scenario make_scenario(const ScenarioParams& params) {
  if (!(params.duration_s > 0.0)) throw ConfigError("scenario duration must be positive");
  const int len = static_cast<int>(params.duration_s * params.sample_rate);

  Scenario sc;
  sc.ser_db = params.ser_db;
  sc.far_end = speech_like(len, params.seed, params.sample_rate);
  std::vector<double> near_raw = speech_like(len, params.seed + 1, params.sample_rate);

  double peak = 0.0;
  for (double v : sc.far_end) peak = std::max(peak, std::abs(v));
  sc.clip_threshold = params.clip_frac * peak;

  const std::vector<double> clipped = hard_clip(sc.far_end, params.clip_frac);
  sc.rir = synth_rir(params.t60_ms, params.sample_rate, params.rir_len, params.seed + 2);
  sc.echo = convolve(clipped, sc.rir);

  MixResult mixed = mix(near_raw, sc.echo, params.ser_db);
  sc.near_end = std::move(mixed.near_scaled);
  sc.mixture = std::move(mixed.mixture);
  return sc;
}

Spectrogram ctf_exact_echo(std::span<const Spectrogram> refs,
                           const std::vector<std::vector<cpx>>& ctf, int ctf_len) {
  if (refs.empty()) throw DataError("ctf_exact_echo: no reference spectrograms");
  const int order = static_cast<int>(refs.size());
  const int bins = refs[0].n_bins;
  const int frames = refs[0].n_frames;
  for (const Spectrogram& r : refs)
    if (r.n_bins != bins || r.n_frames != frames)
      throw DataError("ctf_exact_echo: spectrogram dimensions differ");
  if (static_cast<int>(ctf.size()) != bins)
    throw DataError("ctf_exact_echo: one CTF filter per bin required");

  Spectrogram echo = refs[0];
  std::fill(echo.data.begin(), echo.data.end(), cpx{});
  for (int i = 0; i < bins; ++i) {
    if (static_cast<int>(ctf[i].size()) != order * ctf_len)
      throw DataError("ctf_exact_echo: CTF filter length mismatch");
    for (int j = 0; j < frames; ++j) {
      cpx acc{};
      for (int p = 0; p < order; ++p)
        for (int l = 0; l < ctf_len && l <= j; ++l)
          acc += ctf[i][static_cast<size_t>(p) * ctf_len + l] * refs[p].at(i, j - l);
      echo.at(i, j) = acc;
    }
  }
  return echo;
}

}  // namespace aec

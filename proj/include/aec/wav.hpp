#pragma once

#include <span>
#include <string>
#include <vector>

namespace aec {

enum class WavFormat { Pcm16, Pcm24, Float32 };

struct WavData {
  std::vector<double> samples;  // mono, normalized to [-1, 1]
  int sample_rate = 0;
};

// Reads a mono RIFF WAV (16/24-bit PCM or 32-bit float). Throws DataError with
// the offending byte offset on malformed input; multichannel files rejected.
WavData read_wav(const std::string& path);

void write_wav(const std::string& path, std::span<const double> samples, int sample_rate,
               WavFormat format = WavFormat::Float32);

}  // namespace aec

#include "aec/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "aec/errors.hpp"

namespace aec {

namespace {

[[noreturn]] void parse_fail(const std::string& path, size_t offset,
                             const std::string& what) {
  throw DataError(path + ": " + what + " (byte offset " + std::to_string(offset) + ")");
}

uint32_t rd_u32(const std::vector<char>& b, size_t off) {
  uint32_t v;
  std::memcpy(&v, b.data() + off, 4);
  return v;
}

uint16_t rd_u16(const std::vector<char>& b, size_t off) {
  uint16_t v;
  std::memcpy(&v, b.data() + off, 2);
  return v;
}

void wr_u32(std::string& out, uint32_t v) { out.append(reinterpret_cast<char*>(&v), 4); }
void wr_u16(std::string& out, uint16_t v) { out.append(reinterpret_cast<char*>(&v), 2); }

}  // namespace

WavData read_wav(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError(path + ": cannot open file");
  std::vector<char> bytes((std::istreambuf_iterator<char>(f)),
                          std::istreambuf_iterator<char>());

  if (bytes.size() < 12) parse_fail(path, bytes.size(), "truncated RIFF header");
  if (std::memcmp(bytes.data(), "RIFF", 4) != 0) parse_fail(path, 0, "missing RIFF tag");
  if (std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    parse_fail(path, 8, "missing WAVE tag");

  uint16_t format_tag = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  bool have_fmt = false;
  size_t data_off = 0, data_len = 0;

  size_t off = 12;
  while (off + 8 <= bytes.size()) {
    char id[5] = {0};
    std::memcpy(id, bytes.data() + off, 4);
    const uint32_t sz = rd_u32(bytes, off + 4);
    const size_t body = off + 8;
    if (body + sz > bytes.size()) parse_fail(path, off, "chunk overruns file");
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (sz < 16) parse_fail(path, off, "fmt chunk too small");
      format_tag = rd_u16(bytes, body);
      channels = rd_u16(bytes, body + 2);
      sample_rate = rd_u32(bytes, body + 4);
      bits = rd_u16(bytes, body + 14);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data_off = body;
      data_len = sz;
    }
    off = body + sz + (sz & 1);  // chunks are word-aligned
  }

  if (!have_fmt) parse_fail(path, bytes.size(), "no fmt chunk");
  if (data_off == 0) parse_fail(path, bytes.size(), "no data chunk");
  if (channels != 1)
    throw DataError(path + ": only mono WAV supported (got " +
                    std::to_string(channels) + " channels)");

  WavData wav;
  wav.sample_rate = static_cast<int>(sample_rate);

  if (format_tag == 1 && bits == 16) {
    const size_t count = data_len / 2;
    wav.samples.resize(count);
    for (size_t i = 0; i < count; ++i) {
      int16_t s;
      std::memcpy(&s, bytes.data() + data_off + 2 * i, 2);
      wav.samples[i] = s / 32768.0;
    }
  } else if (format_tag == 1 && bits == 24) {
    const size_t count = data_len / 3;
    wav.samples.resize(count);
    for (size_t i = 0; i < count; ++i) {
      const unsigned char* p =
          reinterpret_cast<const unsigned char*>(bytes.data() + data_off + 3 * i);
      int32_t s = (p[0] << 8) | (p[1] << 16) | (static_cast<int32_t>(p[2]) << 24);
      s >>= 8;  // sign-extend from 24 bits
      wav.samples[i] = s / 8388608.0;
    }
  } else if (format_tag == 3 && bits == 32) {
    const size_t count = data_len / 4;
    wav.samples.resize(count);
    for (size_t i = 0; i < count; ++i) {
      float s;
      std::memcpy(&s, bytes.data() + data_off + 4 * i, 4);
      wav.samples[i] = s;
    }
  } else {
    parse_fail(path, data_off, "unsupported format (tag " + std::to_string(format_tag) +
                                   ", " + std::to_string(bits) + " bits)");
  }
  return wav;
}

void write_wav(const std::string& path, std::span<const double> samples, int sample_rate,
               WavFormat format) {
  const uint16_t bits = format == WavFormat::Pcm16   ? 16
                        : format == WavFormat::Pcm24 ? 24
                                                     : 32;
  const uint16_t tag = format == WavFormat::Float32 ? 3 : 1;
  const uint32_t bytes_per = bits / 8;
  const uint32_t data_len = static_cast<uint32_t>(samples.size() * bytes_per);

  std::string out;
  out.reserve(44 + data_len);
  out.append("RIFF");
  wr_u32(out, 36 + data_len);
  out.append("WAVE");
  out.append("fmt ");
  wr_u32(out, 16);
  wr_u16(out, tag);
  wr_u16(out, 1);  // mono
  wr_u32(out, static_cast<uint32_t>(sample_rate));
  wr_u32(out, static_cast<uint32_t>(sample_rate) * bytes_per);
  wr_u16(out, static_cast<uint16_t>(bytes_per));
  wr_u16(out, bits);
  out.append("data");
  wr_u32(out, data_len);

  for (double v : samples) {
    if (format == WavFormat::Pcm16) {
      const double c = std::clamp(v, -1.0, 32767.0 / 32768.0);
      const int16_t s = static_cast<int16_t>(std::lrint(c * 32768.0));
      out.append(reinterpret_cast<const char*>(&s), 2);
    } else if (format == WavFormat::Pcm24) {
      const double c = std::clamp(v, -1.0, 8388607.0 / 8388608.0);
      const int32_t s = static_cast<int32_t>(std::lrint(c * 8388608.0));
      const char b[3] = {static_cast<char>(s & 0xff), static_cast<char>((s >> 8) & 0xff),
                         static_cast<char>((s >> 16) & 0xff)};
      out.append(b, 3);
    } else {
      const float s = static_cast<float>(v);
      out.append(reinterpret_cast<const char*>(&s), 4);
    }
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError(path + ": cannot open for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw DataError(path + ": write failed");
}

}  // namespace aec

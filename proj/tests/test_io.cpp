#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "aec/pipeline.hpp"
#include "aec/trace_io.hpp"
#include "aec/wav.hpp"
#include "oracles.hpp"

using namespace aec;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("aec_io_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const char* name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("float32 WAV round-trips within 1 ulp") {
  TempDir tmp;
  std::mt19937 rng(1);
  const std::vector<double> x = oracle::random_signal(2000, rng, 0.8);
  write_wav(tmp.file("f32.wav"), x, 16000, WavFormat::Float32);
  const WavData back = read_wav(tmp.file("f32.wav"));
  CHECK(back.sample_rate == 16000);
  REQUIRE(back.samples.size() == x.size());
  for (size_t t = 0; t < x.size(); ++t)
    CHECK(back.samples[t] == static_cast<double>(static_cast<float>(x[t])));
}

TEST_CASE("pcm16 WAV round-trips exactly after quantization") {
  TempDir tmp;
  std::mt19937 rng(2);
  std::vector<double> x(1000);
  for (double& v : x)
    v = static_cast<int16_t>(rng() % 65536 - 32768) / 32768.0;  // already on the grid
  write_wav(tmp.file("p16.wav"), x, 16000, WavFormat::Pcm16);
  const WavData back = read_wav(tmp.file("p16.wav"));
  REQUIRE(back.samples.size() == x.size());
  for (size_t t = 0; t < x.size(); ++t) CHECK(back.samples[t] == x[t]);
}

TEST_CASE("pcm24 WAV round-trips exactly after quantization") {
  TempDir tmp;
  std::mt19937 rng(3);
  std::vector<double> x(500);
  for (double& v : x)
    v = static_cast<double>(static_cast<int32_t>(rng() % 16777216) - 8388608) / 8388608.0;
  write_wav(tmp.file("p24.wav"), x, 16000, WavFormat::Pcm24);
  const WavData back = read_wav(tmp.file("p24.wav"));
  REQUIRE(back.samples.size() == x.size());
  for (size_t t = 0; t < x.size(); ++t) CHECK(back.samples[t] == x[t]);
}

TEST_CASE("malformed WAV reports a byte offset") {
  TempDir tmp;
  std::ofstream f(tmp.file("bad.wav"), std::ios::binary);
  f << "RIFFxxxxNOTW";
  f.close();
  try {
    read_wav(tmp.file("bad.wav"));
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("byte offset") != std::string::npos);
  }
}

TEST_CASE("multichannel WAV is rejected") {
  TempDir tmp;
  // hand-build a stereo 16-bit PCM header
  std::string bytes;
  auto u32 = [&](uint32_t v) { bytes.append(reinterpret_cast<char*>(&v), 4); };
  auto u16 = [&](uint16_t v) { bytes.append(reinterpret_cast<char*>(&v), 2); };
  bytes += "RIFF";
  u32(36 + 8);
  bytes += "WAVEfmt ";
  u32(16);
  u16(1);
  u16(2);  // stereo
  u32(16000);
  u32(16000 * 4);
  u16(4);
  u16(16);
  bytes += "data";
  u32(8);
  bytes.append(8, '\0');
  std::ofstream f(tmp.file("stereo.wav"), std::ios::binary);
  f << bytes;
  f.close();
  CHECK_THROWS_AS(read_wav(tmp.file("stereo.wav")), DataError);
}

TEST_CASE("truncated data chunk is caught") {
  TempDir tmp;
  std::string bytes;
  auto u32 = [&](uint32_t v) { bytes.append(reinterpret_cast<char*>(&v), 4); };
  auto u16 = [&](uint16_t v) { bytes.append(reinterpret_cast<char*>(&v), 2); };
  bytes += "RIFF";
  u32(1000);
  bytes += "WAVEfmt ";
  u32(16);
  u16(1);
  u16(1);
  u32(16000);
  u32(32000);
  u16(2);
  u16(16);
  bytes += "data";
  u32(4000);  // claims more than the file holds
  bytes.append(10, '\0');
  std::ofstream f(tmp.file("trunc.wav"), std::ios::binary);
  f << bytes;
  f.close();
  CHECK_THROWS_AS(read_wav(tmp.file("trunc.wav")), DataError);
}

TEST_CASE("filter trace round-trips bit-exactly") {
  TempDir tmp;
  std::mt19937 rng(4);
  FilterTrace trace;
  trace.n_bins = 5;
  trace.n_taps = 3;
  for (int j = 0; j < 7; ++j) {
    std::vector<std::complex<float>> frame(15);
    for (auto& v : frame)
      v = {static_cast<float>(rng()) / 1e9f, static_cast<float>(rng()) / 1e9f};
    trace.frames.push_back(std::move(frame));
  }
  save_trace(tmp.file("t.bin"), trace);
  const FilterTrace back = load_trace(tmp.file("t.bin"));
  CHECK(back.n_bins == trace.n_bins);
  CHECK(back.n_taps == trace.n_taps);
  REQUIRE(back.n_frames() == trace.n_frames());
  for (int j = 0; j < trace.n_frames(); ++j) CHECK(back.frames[j] == trace.frames[j]);
}

TEST_CASE("trace loader rejects foreign files") {
  TempDir tmp;
  std::ofstream f(tmp.file("junk.bin"), std::ios::binary);
  f << "this is not a trace";
  f.close();
  CHECK_THROWS_AS(load_trace(tmp.file("junk.bin")), DataError);
}

#include "aec/trace_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "aec/errors.hpp"

namespace aec {

namespace {
constexpr char kMagic[4] = {'A', 'E', 'C', 'T'};
constexpr uint32_t kVersion = 1;
}  // namespace

void save_trace(const std::string& path, const FilterTrace& trace) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError(path + ": cannot open for writing");

  f.write(kMagic, 4);
  const uint32_t header[4] = {kVersion, static_cast<uint32_t>(trace.n_bins),
                              static_cast<uint32_t>(trace.n_frames()),
                              static_cast<uint32_t>(trace.n_taps)};
  f.write(reinterpret_cast<const char*>(header), sizeof(header));

  for (const auto& frame : trace.frames)
    f.write(reinterpret_cast<const char*>(frame.data()),
            static_cast<std::streamsize>(frame.size() * sizeof(std::complex<float>)));
  if (!f) throw DataError(path + ": write failed");
}

FilterTrace load_trace(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError(path + ": cannot open file");

  char magic[4];
  uint32_t header[4];
  f.read(magic, 4);
  f.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!f || std::memcmp(magic, kMagic, 4) != 0)
    throw DataError(path + ": not a filter trace (bad magic)");
  if (header[0] != kVersion)
    throw DataError(path + ": unsupported trace version " + std::to_string(header[0]));

  FilterTrace trace;
  trace.n_bins = static_cast<int>(header[1]);
  const int n_frames = static_cast<int>(header[2]);
  trace.n_taps = static_cast<int>(header[3]);
  if (trace.n_bins <= 0 || trace.n_taps <= 0 || n_frames < 0)
    throw DataError(path + ": corrupt trace header");

  const size_t per_frame = static_cast<size_t>(trace.n_bins) * trace.n_taps;
  trace.frames.resize(n_frames);
  for (int j = 0; j < n_frames; ++j) {
    trace.frames[j].resize(per_frame);
    f.read(reinterpret_cast<char*>(trace.frames[j].data()),
           static_cast<std::streamsize>(per_frame * sizeof(std::complex<float>)));
    if (!f) throw DataError(path + ": truncated trace payload (frame " +
                            std::to_string(j) + ")");
  }
  return trace;
}

}  // namespace aec

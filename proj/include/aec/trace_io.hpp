#pragma once

#include <string>

#include "aec/pipeline.hpp"

namespace aec {

// Binary filter-trace format, little-endian:
//   magic "AECT", u32 version (1), u32 n_bins, u32 n_frames, u32 n_taps,
//   then n_frames * n_bins * n_taps complex64 snapshots, frame-major,
//   bin-major within a frame.
void save_trace(const std::string& path, const FilterTrace& trace);
FilterTrace load_trace(const std::string& path);

}  // namespace aec

#pragma once

#include <stdexcept>

namespace aec {

// Invalid or inconsistent configuration (hop not dividing frame length, P = 0, ...).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or mismatched data: WAV parse failures, dimension mismatches,
// trace/config disagreements.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure: singular solve, non-finite weight, degenerate filter.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace aec

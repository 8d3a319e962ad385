#include "aec/config.hpp"

namespace aec {

std::string to_string(Solver s) { return s == Solver::IP ? "ip" : "eiss"; }

Solver solver_from_string(const std::string& name) {
  if (name == "ip" || name == "IP") return Solver::IP;
  if (name == "eiss" || name == "EISS") return Solver::EISS;
  throw ConfigError("unknown solver '" + name + "' (expected 'ip' or 'eiss')");
}

void AecConfig::validate() const {
  if (frame_len <= 0 || hop <= 0 || fft_size <= 0)
    throw ConfigError("frame_len, hop and fft_size must be positive");
  if (fft_size != frame_len)
    throw ConfigError("fft_size must equal frame_len");
  if ((fft_size & (fft_size - 1)) != 0)
    throw ConfigError("fft_size must be a power of two");
  if (frame_len % hop != 0)
    throw ConfigError("hop must divide frame_len");
  if (order < 1) throw ConfigError("expansion order P must be >= 1");
  if (ctf_len < 1) throw ConfigError("CTF length L must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ConfigError("forgetting factor alpha must lie in (0,1)");
  if (!(beta > 0.0)) throw ConfigError("shape parameter beta must be positive");
  if (!(r_floor > 0.0)) throw ConfigError("r_floor must be positive");
  if (!(v_init_scale > 0.0)) throw ConfigError("v_init_scale must be positive");
  if (eiss_sweeps < 1) throw ConfigError("eiss_sweeps must be >= 1");
  if (threads < 0) throw ConfigError("threads must be >= 0");
}

}  // namespace aec

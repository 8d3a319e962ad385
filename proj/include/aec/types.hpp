#pragma once

#include <complex>

namespace aec {

using cpx = std::complex<double>;

}  // namespace aec

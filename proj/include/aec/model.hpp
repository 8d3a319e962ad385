#pragma once

#include <span>
#include <vector>

#include "aec/expansion.hpp"
#include "aec/types.hpp"

namespace aec {

// Near-end extraction filter w for one bin, stored as the column vector applied
// Hermitian to the stacked observation: output = sum_m conj(w[m]) * y[m].
// After normalization w[0] == 1 and conj(w[1..]) are the echo-path coefficients.
struct ExtractionFilter {
  std::vector<cpx> w;

  static ExtractionFilter identity(int n);  // e_1
};

// Recursively weighted observation covariance for one bin, Hermitian PSD.
struct WeightedCovariance {
  int n = 0;
  std::vector<cpx> v;  // row-major n x n

  static WeightedCovariance scaled_identity(int n, double scale);

  cpx& at(int r, int c) { return v[static_cast<size_t>(r) * n + c]; }
  const cpx& at(int r, int c) const { return v[static_cast<size_t>(r) * n + c]; }

  double trace_real() const;
  double max_hermitian_defect() const;  // max |V - V^H| entrywise
};

// Source-prior weight: max(r, r_floor)^(beta - 2).
double weight(double r, double beta, double r_floor);

// Hermitian filter output conj(w) . y.
cpx filter_output(std::span<const cpx> w, std::span<const cpx> y);

// Frame-level auxiliary norm: l2 norm across bins of previous-frame filter
// outputs on current observations.
double aux_norm(std::span<const ExtractionFilter> filters,
                std::span<const StackedObservation> observations);

// In-place rank-1 recursion V <- alpha V + (1 - alpha) phi y y^H, followed by
// exact re-symmetrization. Throws NumericError on non-finite phi.
void update_covariance(WeightedCovariance& V, std::span<const cpx> y, double phi,
                       double alpha);

// Quadratic form w^H V w (real for Hermitian V). Throws NumericError if V is
// not Hermitian within tolerance. The structured demixing matrix is unit
// upper-triangular, so its log-determinant term is zero; the overload taking
// `first` adds the -2 log|first| term needed when the first element has been
// steered away from 1 mid-sweep.
double aux_value(const ExtractionFilter& w, const WeightedCovariance& V);
double aux_value(const ExtractionFilter& w, const WeightedCovariance& V, cpx first);

}  // namespace aec

#include "aec/model.hpp"

#include <cmath>

#include "aec/errors.hpp"

namespace aec {

ExtractionFilter ExtractionFilter::identity(int n) {
  ExtractionFilter f;
  f.w.assign(n, cpx{});
  f.w[0] = 1.0;
  return f;
}

WeightedCovariance WeightedCovariance::scaled_identity(int n, double scale) {
  WeightedCovariance V;
  V.n = n;
  V.v.assign(static_cast<size_t>(n) * n, cpx{});
  for (int i = 0; i < n; ++i) V.at(i, i) = scale;
  return V;
}

double WeightedCovariance::trace_real() const {
  double t = 0.0;
  for (int i = 0; i < n; ++i) t += at(i, i).real();
  return t;
}

double WeightedCovariance::max_hermitian_defect() const {
  double m = 0.0;
  for (int r = 0; r < n; ++r)
    for (int c = r; c < n; ++c)
      m = std::max(m, std::abs(at(r, c) - std::conj(at(c, r))));
  return m;
}

double weight(double r, double beta, double r_floor) {
  return std::pow(std::max(r, r_floor), beta - 2.0);
}

cpx filter_output(std::span<const cpx> w, std::span<const cpx> y) {
  cpx acc{};
  const size_t n = w.size();
  for (size_t m = 0; m < n; ++m) acc += std::conj(w[m]) * y[m];
  return acc;
}

double aux_norm(std::span<const ExtractionFilter> filters,
                std::span<const StackedObservation> observations) {
  if (filters.size() != observations.size())
    throw DataError("aux_norm: one filter per observation required");
  double sum = 0.0;
  for (size_t i = 0; i < filters.size(); ++i) {
    if (filters[i].w.size() != observations[i].y.size())
      throw DataError("aux_norm: filter/observation length mismatch");
    sum += std::norm(filter_output(filters[i].w, observations[i].y));
  }
  return std::sqrt(sum);
}

void update_covariance(WeightedCovariance& V, std::span<const cpx> y, double phi,
                       double alpha) {
  if (!std::isfinite(phi)) throw NumericError("update_covariance: non-finite weight");
  const int n = V.n;
  const double g = (1.0 - alpha) * phi;
  // Update the lower triangle and mirror; symmetry stays exact by
  // construction, so rounding cannot accumulate over long runs.
  for (int r = 0; r < n; ++r) {
    const cpx gyr = g * y[r];
    cpx* row = V.v.data() + static_cast<size_t>(r) * n;
    for (int c = 0; c < r; ++c) {
      const cpx v = alpha * row[c] + gyr * std::conj(y[c]);
      row[c] = v;
      V.v[static_cast<size_t>(c) * n + r] = std::conj(v);
    }
    row[r] = alpha * row[r].real() + gyr.real() * y[r].real() + gyr.imag() * y[r].imag();
  }
}

static double quadratic_form(std::span<const cpx> w, const WeightedCovariance& V) {
  const int n = V.n;
  cpx acc{};
  for (int r = 0; r < n; ++r) {
    const cpx* row = V.v.data() + static_cast<size_t>(r) * n;
    cpx inner{};
    for (int c = 0; c < n; ++c) inner += row[c] * w[c];
    acc += std::conj(w[r]) * inner;
  }
  return acc.real();
}

double aux_value(const ExtractionFilter& w, const WeightedCovariance& V) {
  if (static_cast<int>(w.w.size()) != V.n)
    throw DataError("aux_value: dimension mismatch");
  const double scale = std::max(1.0, std::abs(V.trace_real()));
  if (V.max_hermitian_defect() > 1e-8 * scale)
    throw NumericError("aux_value: covariance is not Hermitian");
  return quadratic_form(w.w, V);
}

double aux_value(const ExtractionFilter& w, const WeightedCovariance& V, cpx first) {
  return aux_value(w, V) - 2.0 * std::log(std::abs(first));
}

}  // namespace aec

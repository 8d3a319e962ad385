#include "aec/solver_eiss.hpp"

#include <cmath>

#include "aec/errors.hpp"
#include "aec/solver_ip.hpp"

namespace aec {

cpx eiss_coeff(const ExtractionFilter& w, const WeightedCovariance& V, int k) {
  const int n = V.n;
  if (static_cast<int>(w.w.size()) != n) throw DataError("eiss_coeff: dimension mismatch");
  if (k < 1 || k > n) throw DataError("eiss_coeff: coordinate out of range");

  if (k == 1) {
    // u_1 = 1 - (w^H V w)^{-1/2}, principal root; the quadratic form is real
    // positive for PSD V so u_1 is real. Hermitian symmetry: diagonal terms
    // plus twice the real part of the upper triangle.
    double q = 0.0;
    cpx cross{};
    for (int r = 0; r < n; ++r) {
      const cpx* row = V.v.data() + static_cast<size_t>(r) * n;
      q += std::norm(w.w[r]) * row[r].real();
      cpx inner{};
      for (int c = r + 1; c < n; ++c) inner += row[c] * w.w[c];
      cross += std::conj(w.w[r]) * inner;
    }
    q += 2.0 * cross.real();
    if (!(q > 0.0) || !std::isfinite(q))
      throw NumericError("eiss_coeff: non-positive quadratic form");
    return cpx{1.0 - 1.0 / std::sqrt(q), 0.0};
  }

  const int c = k - 1;
  const cpx* row = V.v.data() + static_cast<size_t>(c) * n;
  const double diag = row[c].real();
  if (!(diag > 0.0) || !std::isfinite(diag))
    throw NumericError("eiss_coeff: zero diagonal");
  // w^H v_k = conj(row_k . w) for Hermitian V; the row read is contiguous.
  cpx g{};
  for (int m = 0; m < n; ++m) g += row[m] * w.w[m];
  return std::conj(g) / diag;
}

void eiss_apply(ExtractionFilter& w, cpx u, int k) {
  const int n = static_cast<int>(w.w.size());
  if (k == 1) {
    const cpx s = cpx{1.0, 0.0} - u;
    w.w[0] -= u;
    for (int m = 1; m < n; ++m) w.w[m] *= s;
    return;
  }
  // The coefficient steers the row vector w^H; on the stored column that is a
  // conjugated subtraction.
  w.w[k - 1] -= std::conj(u);
}

ExtractionFilter eiss_update(ExtractionFilter w, const WeightedCovariance& V,
                             const EissOptions& opts) {
  const int n = V.n;
  static thread_local std::vector<cpx> entry;
  entry.assign(w.w.begin(), w.w.end());

  ExtractionFilter frozen_start;
  for (int sweep = 0; sweep < opts.sweeps; ++sweep) {
    if (opts.frozen) frozen_start = w;
    for (int k = 1; k <= n; ++k) {
      cpx u{};
      try {
        u = eiss_coeff(opts.frozen ? frozen_start : w, V, k);
      } catch (const NumericError&) {
        continue;  // no-op coordinate
      }
      eiss_apply(w, u, k);
    }

    // Each sweep ends with the second-stage normalization so the next one
    // starts from a unit first element, same as the online frame update.
    // normalize rejects degenerate and non-finite states alike.
    try {
      normalize_in_place(w.w);
    } catch (const NumericError&) {
      w.w.assign(entry.begin(), entry.end());  // keep the previous filter
      return w;
    }
  }
  return w;
}

}  // namespace aec

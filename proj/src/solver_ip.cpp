#include "aec/solver_ip.hpp"

#include <cmath>

#include "aec/errors.hpp"

namespace aec {

namespace {

// Lower Cholesky V = L L^H, factor written out of place into l (lower
// triangle only; the strict upper part of l is never read). Pivot reciprocals
// are saved so the substitutions can multiply instead of divide. Returns
// false on a non-positive or non-finite pivot.
bool cholesky(const std::vector<cpx>& v, std::vector<cpx>& l, std::vector<double>& inv_diag,
              int n) {
  inv_diag.resize(n);
  for (int j = 0; j < n; ++j) {
    const cpx* lj = l.data() + static_cast<size_t>(j) * n;
    double d = v[static_cast<size_t>(j) * n + j].real();
    for (int k = 0; k < j; ++k) d -= std::norm(lj[k]);
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    const double ljj = std::sqrt(d);
    l[static_cast<size_t>(j) * n + j] = ljj;
    const double inv = 1.0 / ljj;
    inv_diag[j] = inv;
    for (int i = j + 1; i < n; ++i) {
      const cpx* li = l.data() + static_cast<size_t>(i) * n;
      cpx s = v[static_cast<size_t>(i) * n + j];
      for (int k = 0; k < j; ++k) s -= li[k] * std::conj(lj[k]);
      l[static_cast<size_t>(i) * n + j] = s * inv;
    }
  }
  return true;
}

// LDL^H (unit lower l, real diagonal d), also out of place. Returns false on
// a pivot too close to zero relative to the matrix scale.
bool ldlh(const std::vector<cpx>& v, std::vector<cpx>& l, std::vector<double>& d, int n,
          double scale) {
  d.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const cpx* lj = l.data() + static_cast<size_t>(j) * n;
    double dj = v[static_cast<size_t>(j) * n + j].real();
    for (int k = 0; k < j; ++k) dj -= std::norm(lj[k]) * d[k];
    if (!std::isfinite(dj) || std::abs(dj) < 1e-300 + 1e-14 * scale) return false;
    d[j] = dj;
    l[static_cast<size_t>(j) * n + j] = 1.0;
    for (int i = j + 1; i < n; ++i) {
      const cpx* li = l.data() + static_cast<size_t>(i) * n;
      cpx s = v[static_cast<size_t>(i) * n + j];
      for (int k = 0; k < j; ++k) s -= li[k] * std::conj(lj[k]) * d[k];
      l[static_cast<size_t>(i) * n + j] = s / dj;
    }
  }
  return true;
}

void solve_lower_e1(const std::vector<cpx>& l, const double* inv_diag, int n,
                    std::vector<cpx>& x) {
  // Forward substitution specialized to the right-hand side e_1. inv_diag
  // holds the reciprocal pivots (null for a unit-diagonal factor).
  x.resize(n);
  x[0] = inv_diag ? cpx{inv_diag[0], 0.0} : cpx{1.0, 0.0};
  for (int i = 1; i < n; ++i) {
    const cpx* row = l.data() + static_cast<size_t>(i) * n;
    cpx s = -(row[0] * x[0]);
    for (int k = 1; k < i; ++k) s -= row[k] * x[k];
    x[i] = inv_diag ? s * inv_diag[i] : s;
  }
}

void solve_upper_from_lower(const std::vector<cpx>& l, const double* inv_diag, int n,
                            std::vector<cpx>& x) {
  // Back substitution against L^H.
  for (int i = n - 1; i >= 0; --i) {
    cpx s = x[i];
    for (int k = i + 1; k < n; ++k)
      s -= std::conj(l[static_cast<size_t>(k) * n + i]) * x[k];
    x[i] = inv_diag ? s * inv_diag[i] : s;
  }
}

}  // namespace

void ip_solve(const WeightedCovariance& V, std::vector<cpx>& w) {
  const int n = V.n;
  static thread_local std::vector<cpx> fac;
  static thread_local std::vector<double> diag;

  fac.resize(static_cast<size_t>(n) * n);

  if (cholesky(V.v, fac, diag, n)) {
    solve_lower_e1(fac, diag.data(), n, w);
    solve_upper_from_lower(fac, diag.data(), n, w);
    return;
  }

  if (ldlh(V.v, fac, diag, n, std::abs(V.trace_real()) / n)) {
    solve_lower_e1(fac, nullptr, n, w);
    for (int i = 0; i < n; ++i) w[i] /= diag[i];
    solve_upper_from_lower(fac, nullptr, n, w);
    return;
  }

  throw NumericError("ip_solve: covariance factorization failed (singular V)");
}

void ip_solve_regularized(const WeightedCovariance& V, std::vector<cpx>& w,
                          double delta) {
  try {
    ip_solve(V, w);
  } catch (const NumericError&) {
    WeightedCovariance jittered = V;
    const double jitter = delta * jittered.trace_real() / jittered.n;
    for (int i = 0; i < jittered.n; ++i) jittered.at(i, i) += jitter;
    ip_solve(jittered, w);
  }
}

std::vector<cpx> ip_update(const WeightedCovariance& V) {
  std::vector<cpx> w;
  ip_solve(V, w);
  return w;
}

std::vector<cpx> ip_update_regularized(const WeightedCovariance& V, double delta) {
  std::vector<cpx> w;
  ip_solve_regularized(V, w, delta);
  return w;
}

void normalize_in_place(std::vector<cpx>& w) {
  double peak_sq = 0.0, total = 0.0;  // total propagates NaN/Inf, max would not
  for (const cpx& c : w) {
    const double m = std::norm(c);
    peak_sq = std::max(peak_sq, m);
    total += m;
  }
  const cpx w0 = w[0];
  const double w0_sq = std::norm(w0);
  if (!(w0_sq > 1e-24 * peak_sq) || !std::isfinite(total))
    throw NumericError("normalize: degenerate or non-finite filter");
  const cpx inv = std::conj(w0) * (1.0 / w0_sq);
  for (cpx& c : w) c *= inv;
  w[0] = 1.0;  // exact, not merely up to rounding
}

std::vector<cpx> normalize(std::vector<cpx> w) {
  normalize_in_place(w);
  return w;
}

}  // namespace aec

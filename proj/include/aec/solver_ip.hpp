#pragma once

#include <vector>

#include "aec/model.hpp"
#include "aec/types.hpp"

namespace aec {

// Iterative-projection update: solve V w = e_1 by complex Cholesky with an
// LDL^H fallback (never an explicit inverse). Throws NumericError if the
// factorization breaks down.
//
// The in-place forms reuse thread-local scratch and write into an existing
// buffer; the per-frame loop calls them once per bin, so they must not
// allocate. The value-returning forms are thin convenience wrappers.
void ip_solve(const WeightedCovariance& V, std::vector<cpx>& w);
void ip_solve_regularized(const WeightedCovariance& V, std::vector<cpx>& w,
                          double delta = 1e-10);
std::vector<cpx> ip_update(const WeightedCovariance& V);
std::vector<cpx> ip_update_regularized(const WeightedCovariance& V, double delta = 1e-10);

// Second-stage normalization: divide by w[0] so the first element is exactly 1.
// Throws NumericError (before mutating) when |w[0]| <= 1e-12 * max|w|.
void normalize_in_place(std::vector<cpx>& w);
std::vector<cpx> normalize(std::vector<cpx> w);

}  // namespace aec

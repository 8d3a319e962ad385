#pragma once

#include "aec/model.hpp"
#include "aec/types.hpp"

namespace aec {

// Element-wise iterative source steering: one inverse-free sweep of closed-form
// coordinate updates replaces the per-frame linear solve of the IP method.
//
// Coefficients act on the row vector w^H = [1 b^T]; with the filter stored as
// the column w this means u_k is subtracted conjugated from w[k-1]. u_1 is the
// exception: it rescales the whole filter and is real by construction.

struct EissOptions {
  int sweeps = 1;
  bool frozen = false;  // compute every u_k from the sweep-start filter (study only)
};

// Closed-form steering coefficient for coordinate k (1-based):
//   u_1 = 1 - (w^H V w)^{-1/2}   (principal root, real)
//   u_k = w^H v_k / V(k,k)       for k != 1
// evaluated on the current filter state. Throws NumericError on a zero
// diagonal or non-positive quadratic form.
cpx eiss_coeff(const ExtractionFilter& w, const WeightedCovariance& V, int k);

// Apply one coefficient. k == 1 steers every element: w[0] -= u, w[m] *= (1-u)
// for m >= 1. Other k touch only w[k-1].
void eiss_apply(ExtractionFilter& w, cpx u, int k);

// Full sweep k = 1..n on the running state, each coefficient applied before
// the next is computed, followed by first-element normalization. Coordinates
// whose coefficient is numerically undefined are skipped; if normalization
// degenerates the input filter is returned unchanged.
ExtractionFilter eiss_update(ExtractionFilter w, const WeightedCovariance& V,
                             const EissOptions& opts = {});

}  // namespace aec

#pragma once

#include "pmpqoc/core/types.hpp"

namespace pmpqoc::dynamics {

// exp(A) by scaling and squaring: s chosen so |A|_1 / 2^s <= 0.5, Taylor series
// truncated once a term's 1-norm drops below 1e-16.
Mat expm(const Mat& a);
CMat expm(const CMat& a);

// Frechet derivative L(A, E) = d/dh exp(A + hE) at h = 0, read off the
// upper-right block of exp([[A, E], [0, A]]).
Mat expm_frechet(const Mat& a, const Mat& e);
CMat expm_frechet(const CMat& a, const CMat& e);

// Number of squarings chosen for A (exposed for tests).
int expm_squarings(double norm1);

}  // namespace pmpqoc::dynamics

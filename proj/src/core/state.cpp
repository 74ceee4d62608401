#include "pmpqoc/core/state.hpp"

#include <cmath>

#include "pmpqoc/core/errors.hpp"

namespace pmpqoc {

StateVector::StateVector(Representation rep, CVec v, bool sphere)
    : representation(rep), entries(std::move(v)), on_sphere(sphere) {
  if (entries.size() == 0) throw ValidationError("empty state vector");
  if (!entries.allFinite()) throw ValidationError("state vector has non-finite entries");
  if (is_real(rep) && entries.imag().cwiseAbs().maxCoeff() != 0.0)
    throw ValidationError("real state vector has imaginary entries");
  if (on_sphere && std::abs(entries.norm() - 1.0) > 1e-9)
    throw ValidationError("state vector on the sphere must have unit norm (|q| = " +
                          std::to_string(entries.norm()) + ")");
}

StateVector StateVector::real(Representation rep, const Vec& v, bool sphere) {
  return StateVector(rep, v.cast<cplx>(), sphere);
}

}  // namespace pmpqoc

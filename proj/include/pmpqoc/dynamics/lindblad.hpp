#pragma once

#include "pmpqoc/core/lindblad_model.hpp"
#include "pmpqoc/dynamics/propagate.hpp"

namespace pmpqoc::dynamics {

// Propagates the column-stacked density matrix. States in the returned
// trajectory are vec(rho(t_k)) of length N^2.
// Throws ValidationError if the coefficient matrix is not positive (unless waived)
// and NumericError if |Tr rho - 1| or the Hermiticity defect exceeds trace_tol.
Trajectory propagate_lindblad(const LindbladModel& model, const ControlLaw& control, const CMat& rho0,
                              bool waive_positivity = false, double trace_tol = 1e-8);

}  // namespace pmpqoc::dynamics

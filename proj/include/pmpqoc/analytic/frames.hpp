#pragma once

#include <span>

#include "pmpqoc/core/types.hpp"

namespace pmpqoc::analytic {

// Diagonal phase frame diag(exp(-i (E_k t + c_k))).
CMat phase_frame(std::span<const double> energies, std::span<const double> offsets, double t);

// H' = Y^-1 H Y - i Y^-1 Y' for the phase frame Y above.
CMat rotating_frame_hamiltonian(const CMat& h_lab, std::span<const double> energies,
                                std::span<const double> offsets, double t);

// Two-level lab Hamiltonian [[E0, u e^{i(E1-E0)t}], [c.c., E1]]; the frame is Upsilon = diag(e^{-iE0 t}, e^{-iE1 t}).
CMat two_level_lab_hamiltonian(double e0, double e1, double u, double t);
CMat upsilon_frame(double e0, double e1, double t);

// Resonant three-level ladder driven by u1 e^{i(E2-E1)t} and u2 e^{i(E3-E2)t};
// the frame is Y = diag(e^{-iE1 t}, e^{-i(E2 t + pi/2)}, e^{-i(E3 t + pi)}).
CMat three_level_lab_hamiltonian(double e1, double e2, double e3, double u1, double u2, double t);
CMat ladder_frame(double e1, double e2, double e3, double t);
CMat ladder_rotating_hamiltonian(double e1, double e2, double e3, double u1, double u2, double t);

}  // namespace pmpqoc::analytic

#pragma once

#include <string>
#include <vector>

#include "pmpqoc/core/scenario.hpp"

namespace pmpqoc::grape {

// J(u) = 1/2 sum_k dt |u_k|^2 - |<psi_fi|psi(T)>|^2 on the piecewise-constant grid.
double grape_cost(const Scenario& s, const ControlLaw& u);
double fidelity(const Scenario& s, const ControlLaw& u);

struct GradientDetail {
  Mat gradient;              // m x n_steps
  std::vector<CVec> psi;     // forward states at nodes
  std::vector<CVec> chi;     // adjoint states at nodes, chi(T) = 2<psi_fi|psi(T)> psi_fi
};

// dH/du per interval: the interval average of Im<chi|H_j|psi> minus u_j. Computed
// exactly for the discretization, so it equals -(1/dt) dJ/du_jk.
Mat grape_gradient(const Scenario& s, const ControlLaw& u);
GradientDetail grape_gradient_detail(const Scenario& s, const ControlLaw& u);

// Interval averages of Im<chi(t)|H_j|psi(t)> by 5-point Gauss-Legendre quadrature
// on the continuous forward/backward flows.
Mat interval_average_normal_control(const Scenario& s, const ControlLaw& u);

struct GrapeOptions {
  int max_iters = 500;
  double eps0 = 1.0;
  double grad_tol = 1e-8;
  int max_halvings = 30;
};

struct GrapeRun {
  ControlLaw control;
  std::vector<double> cost_history;  // cost of every accepted iterate, starting with the guess
  std::vector<double> eps_history;   // accepted step sizes
  Mat final_gradient;
  int iterations = 0;
  std::string stop_reason;
  double final_fidelity = 0.0;
  bool converged = false;            // stopped on the gradient criterion
};

GrapeRun grape_optimize(const Scenario& s, const ControlLaw& guess, const GrapeOptions& opt = {});

}  // namespace pmpqoc::grape

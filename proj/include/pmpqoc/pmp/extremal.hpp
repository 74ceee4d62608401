#pragma once

#include <vector>

#include "pmpqoc/core/control_law.hpp"
#include "pmpqoc/core/scenario.hpp"
#include "pmpqoc/pmp/hamiltonian.hpp"

namespace pmpqoc::pmp {

enum class ExtremalClass { Normal, Abnormal };
enum class ControlType { Regular, BangPlus, BangMinus, Singular };

struct ExtremalOptions {
  int steps = 0;            // 0: take the scenario's step count
  double phi_tol = 1e-8;    // |Phi| below this counts as zero
  double touch_dphi = 1e-4; // |Phi'| below this at a zero marks a tangential touch
  double switch_tol = 1e-12;  // bisection width in time
  bool allow_singular = true;
  bool switch_at_touch = false;  // a tangential zero of Phi off the singular branch flips the bang sign
};

// Joint state/costate trajectory in realified coordinates.
struct Extremal {
  TimeGrid grid;
  Representation representation;
  ExtremalClass cls;
  double p0;
  std::vector<Vec> q{};        // per node
  std::vector<Vec> p{};        // per node
  Mat controls{};              // m x (n_steps+1), control in force right after each node
  Mat phi{};                   // m x (n_steps+1), Phi_j = <p, A_j q>
  std::vector<double> hamiltonian{};  // pre-Hamiltonian at the applied control, per node
  std::vector<ControlType> types{};   // per interval, type in force at its start
  std::vector<double> switch_times{};
  double singular_entry = -1.0;     // entry time of a singular arc, -1 if none
  double running_cost = 0.0;        // integral of f0

  const Vec& endpoint() const { return q.back(); }
  // Piecewise-constant control from interval-midpoint averages of the node samples.
  ControlLaw control_law() const;
  // Relative spread (max - min) / max(1, |mean|) of the Hamiltonian trace.
  double hamiltonian_spread() const;
};

// Integrates the PMP Hamiltonian system with classical RK4 on a uniform grid of
// [0, T]. p_in is a realified ambient covector; p0 = 0 gives an abnormal extremal.
Extremal integrate_extremal(const ControlModel& model, const Vec& q_in, const Vec& p_in, double p0, double T,
                            int steps, const ExtremalOptions& opt = {});

// Normal extremal of the scenario with p0 fixed by the cost normalization.
Extremal integrate_extremal(const Scenario& s, const Vec& p_in, double T, const ExtremalOptions& opt = {});

// Residual of the singular-locus condition: sqrt(Gram det(Gq, [G,F]q)) / (|G|_2 |[G,F]|_2).
// For the spin system this equals |z|.
double singular_locus_residual(const ControlModel& model, const Vec& q);

}  // namespace pmpqoc::pmp

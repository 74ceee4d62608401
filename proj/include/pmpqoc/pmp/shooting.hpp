#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pmpqoc/pmp/extremal.hpp"

namespace pmpqoc::pmp {

// Residual map z -> defect for normal extremals. z holds the coordinates of
// p_in in an orthonormal basis of the admissible covector space (tangent to
// the sphere at q_in, or the full space for free endpoints), followed by T
// when the final time is free.
class ShootingProblem {
 public:
  explicit ShootingProblem(const Scenario& s, ExtremalOptions opt = {});

  int n_unknowns() const;
  int n_equations() const;
  bool free_time() const { return free_time_; }
  double p0() const { return p0_; }
  const ControlModel& model() const { return model_; }
  const Vec& q_in() const { return q_in_; }
  const Scenario& scenario() const { return scenario_; }
  const Mat& covector_basis() const { return basis_; }

  Vec residual(const Vec& z) const;
  Vec covector(const Vec& z) const;
  double horizon(const Vec& z) const;
  Vec encode(const Vec& p_in, double T) const;
  Extremal extremal(const Vec& z) const;

  // Seeded start: direction uniform on the unit sphere of covector coordinates,
  // scaled to H_M = 0 (free time) or to `radius` (fixed time); T uniform in [T_min, T_max].
  Vec sample_start(std::mt19937_64& rng, double radius) const;

  // Terminal covector required by transversality for the fidelity cost:
  // p(T) = -2 p0 <psi_fi|psi(T)> psi_fi in realified coordinates.
  Vec terminal_covector(const Vec& q_T) const;
  // H_M at (q, p) with the normal control.
  double maximized_hamiltonian(const Vec& q, const Vec& p) const;
  // Whether q(T) sits on the requested target (not merely on its antipode).
  bool on_target(const Vec& q_T, double tol) const;

 private:
  Vec residual_at(const Extremal& ex, const Vec& z) const;

  Scenario scenario_;
  ControlModel model_;
  ExtremalOptions opt_;
  Vec q_in_;
  Vec q_fi_;
  double p0_;
  bool free_time_;
  Mat basis_;        // covector coordinates -> ambient covector
  Mat target_perp_;  // orthonormal basis of q_fi^perp (point targets on spheres)
  Mat orbit_perp_;   // realified basis of the complex complement of psi_fi
};

struct ShootingOptions {
  int max_iter = 60;
  double damping = 1.0;
  double tol = 1e-9;
  double fd_step = 1e-7;
  double max_condition = 1e12;
  int starts = 64;
  std::uint64_t seed = 1;
  double covector_radius = 1.0;
};

struct ShootResult {
  bool converged = false;
  Vec z;
  Vec p_in;
  double T = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
  std::string reason;
};

ShootResult shoot(const ShootingProblem& problem, const Vec& guess, const ShootingOptions& opt = {});

struct StartOutcome {
  int start_index;
  ShootResult result;
  double cost = 0.0;
};

struct ExtremalFamily {
  Vec p_in;
  double T;
  double cost;
  double residual_norm;
  int start_index;  // representative
  int members;
  ExtremalClass cls;
  Vec endpoint;
};

struct MultiStartResult {
  std::vector<StartOutcome> starts;     // sorted by residual, then start index
  std::vector<ExtremalFamily> families; // converged, deduplicated, sorted by cost
};

MultiStartResult multi_start(const ShootingProblem& problem, const ShootingOptions& opt = {});

// Orthonormal basis of the orthogonal complement of v (Gram-Schmidt on unit vectors).
Mat orthonormal_complement(const Vec& v);

}  // namespace pmpqoc::pmp

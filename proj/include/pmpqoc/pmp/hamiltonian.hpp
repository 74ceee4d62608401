#pragma once

#include <optional>
#include <vector>

#include "pmpqoc/core/scenario.hpp"

namespace pmpqoc::pmp {

// Realified view of a bilinear optimal control problem: q' = (A0 + sum u_j A_j) q,
// running cost f0(u) = 1 (time) or sum_j c_j u_j^2, covector pairing <p, v> = p . v.
class ControlModel {
 public:
  ControlModel(const BilinearSystem& system, ControlBounds bounds, CostKind cost, Vec weights);
  static ControlModel from(const Scenario& s);

  Representation representation() const { return rep_; }
  bool on_sphere() const { return sphere_; }
  int dim() const { return static_cast<int>(a0_.rows()); }
  int channels() const { return static_cast<int>(a_.size()); }
  const Mat& drift() const { return a0_; }
  const std::vector<Mat>& controls() const { return a_; }
  const ControlBounds& bounds() const { return bounds_; }
  CostKind cost_kind() const { return cost_; }
  const Vec& weights() const { return c_; }

  Mat generator(const Vec& u) const;
  // Phi_j = <p, A_j q>.
  Vec phi(const Vec& q, const Vec& p) const;
  double running_cost(const Vec& u) const;

  // True when the maximizing control is bang-bang selected by sign(Phi).
  bool is_bang(double p0) const;

  // Pointwise maximizer of the pre-Hamiltonian; nullopt when not determined
  // by (q, p) alone (Phi = 0 on a bang problem, or abnormal with unbounded U and singular R).
  std::optional<Vec> maximizing_control(const Vec& q, const Vec& p, double p0) const;

 private:
  Representation rep_;
  bool sphere_;
  Mat a0_;
  std::vector<Mat> a_;
  ControlBounds bounds_;
  CostKind cost_;
  Vec c_;
};

// Normalization of p0 for normal extremals by cost kind: -1/2 for energy and
// custom-quadratic costs, -1 for time and fidelity costs.
double normal_p0(CostKind kind);

// H = <p, f(q, u)> + p0 f0(u).
double pre_hamiltonian(const ControlModel& m, const Vec& q, const Vec& p, const Vec& u, double p0);
// Complex overload with the real-part pairing Re<chi|v>.
double pre_hamiltonian(const Scenario& s, const CVec& q, const CVec& p, const Vec& u, double p0);

// Im<chi|H|psi>.
double normal_control_bilinear(const CVec& psi, const CVec& chi, const CMat& h);

struct AbnormalControl {
  Mat R;  // R_kj = Re<chi|[H_k, H_j]|psi>
  Vec s;  // s_k = Re<chi|[H_0, H_k]|psi>
  bool singular = false;
  Vec u;  // R^{-1} s when R is invertible
  double constraint = 0.0;  // Re<chi|[H_0, H_1]|psi> for m = 1
};

// Abnormal (p0 = 0) control for a complex-unitary system with unbounded controls.
AbnormalControl abnormal_control_system(const CVec& psi, const CVec& chi, const BilinearSystem& system);

// Phi = p G q for the spin system, G the rotation generator about x.
double switching_function(const Vec& p, const Vec& q);
Mat spin_drift(double delta);
Mat spin_control();

}  // namespace pmpqoc::pmp

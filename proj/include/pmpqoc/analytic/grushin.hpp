#pragma once

#include <array>
#include <functional>

#include "pmpqoc/core/types.hpp"

namespace pmpqoc::analytic {

using Point3 = std::array<double, 3>;
using Control2 = std::array<double, 2>;

// Closed-form extremal from (1,0,0) with r = sqrt(1+a^2):
//   x1 = a sin(at) sin(rt)/r + cos(at) cos(rt)
//   x2 = -p_theta0 sin(rt)/r
//   x3 = sin(at) cos(rt) - a sin(rt) cos(at)/r
Point3 grushin_extremal(double a, int p_theta0, double t);

// Controls of the same extremal: u1 = -p_theta0 cos(at), u2 = p_theta0 sin(at).
Control2 grushin_extremal_controls(double a, int p_theta0, double t);

struct GrushinQuantized {
  double a;
  double T;
};

// a = q / sqrt(1 - q^2), T = pi n1 sqrt(1 - q^2) with q = (n2 + 1/2) / n1.
GrushinQuantized grushin_quantized(int n1, int n2);

// Step-4 optimal controls: u1 = sign_u1 cos(t/sqrt3), u2 = -sign_u1 epsilon sin(t/sqrt3).
Control2 grushin_optimal_controls(int sign_u1, int epsilon, double t);

inline constexpr double grushin_optimal_time = 2.7206990463513265;  // pi sqrt(3) / 2

struct GrushinSolution {
  double a;
  int p_theta0;
  int n1 = 0;
  int n2 = 0;
  double T;
  std::function<Point3(double)> trajectory;
  std::function<Control2(double)> controls;
};

GrushinSolution grushin_solution(int n1, int n2, int p_theta0);

// Ambient covector at (1,0,0) whose extremal reproduces grushin_extremal(a, p_theta0, .).
// The closed forms correspond to the spherical covector p_phi = -a.
Vec grushin_covector(double a, int p_theta0);

// Spherical covector components at (1,0,0) read from an ambient covector:
// p_phi = <p, d/dphi> = p_3, p_theta = <p, d/dtheta> = -p_2.
double grushin_p_phi(const Vec& p_in);
double grushin_p_theta(const Vec& p_in);

// Residuals of sqrt(1+a^2) T = n1 pi and a T = pi/2 + n2 pi at the nearest integers.
struct QuantizationFit {
  int n1;
  int n2;
  double residual1;
  double residual2;
  bool admissible;  // |n2 + 1/2| < n1
};
QuantizationFit grushin_quantization_fit(double a, double T);

}  // namespace pmpqoc::analytic

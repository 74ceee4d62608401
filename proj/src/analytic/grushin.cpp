#include "pmpqoc/analytic/grushin.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pmpqoc/core/errors.hpp"

namespace pmpqoc::analytic {
namespace {

int checked_sign(int s, const char* what) {
  if (s != 1 && s != -1) throw ArgumentError(std::string(what) + " must be +1 or -1");
  return s;
}

}  // namespace

Point3 grushin_extremal(double a, int p_theta0, double t) {
  checked_sign(p_theta0, "p_theta0");
  const double r = std::sqrt(1.0 + a * a);
  const double sa = std::sin(a * t), ca = std::cos(a * t);
  const double sr = std::sin(r * t), cr = std::cos(r * t);
  return {a * sa * sr / r + ca * cr, -p_theta0 * sr / r, sa * cr - a * sr * ca / r};
}

Control2 grushin_extremal_controls(double a, int p_theta0, double t) {
  checked_sign(p_theta0, "p_theta0");
  return {-p_theta0 * std::cos(a * t), p_theta0 * std::sin(a * t)};
}

GrushinQuantized grushin_quantized(int n1, int n2) {
  const double half = n2 + 0.5;
  if (n1 <= 0 || std::abs(half) >= n1)
    throw ArgumentError("grushin_quantized needs n1 > 0 and |n2 + 1/2| < n1, got n1=" + std::to_string(n1) +
                        ", n2=" + std::to_string(n2));
  const double q = half / n1;
  const double s = std::sqrt(1.0 - q * q);
  return {q / s, std::numbers::pi * n1 * s};
}

Control2 grushin_optimal_controls(int sign_u1, int epsilon, double t) {
  checked_sign(sign_u1, "sign_u1");
  checked_sign(epsilon, "epsilon");
  const double w = t / std::numbers::sqrt3;
  return {sign_u1 * std::cos(w), -sign_u1 * epsilon * std::sin(w)};
}

GrushinSolution grushin_solution(int n1, int n2, int p_theta0) {
  checked_sign(p_theta0, "p_theta0");
  const auto [a, T] = grushin_quantized(n1, n2);
  return {a,
          p_theta0,
          n1,
          n2,
          T,
          [a, p_theta0](double t) { return grushin_extremal(a, p_theta0, t); },
          [a, p_theta0](double t) { return grushin_extremal_controls(a, p_theta0, t); }};
}

Vec grushin_covector(double a, int p_theta0) {
  checked_sign(p_theta0, "p_theta0");
  return Vec{{0.0, -static_cast<double>(p_theta0), -a}};
}

double grushin_p_phi(const Vec& p_in) {
  if (p_in.size() != 3) throw ArgumentError("Grushin covector must have 3 entries");
  return p_in(2);
}

double grushin_p_theta(const Vec& p_in) {
  if (p_in.size() != 3) throw ArgumentError("Grushin covector must have 3 entries");
  return -p_in(1);
}

QuantizationFit grushin_quantization_fit(double a, double T) {
  const double pi = std::numbers::pi;
  const double k1 = std::sqrt(1.0 + a * a) * T / pi;
  const double k2 = (a * T - pi / 2.0) / pi;
  QuantizationFit f{static_cast<int>(std::lround(k1)), static_cast<int>(std::lround(k2)), 0.0, 0.0, false};
  f.residual1 = std::abs(std::sqrt(1.0 + a * a) * T - f.n1 * pi);
  f.residual2 = std::abs(a * T - (pi / 2.0 + f.n2 * pi));
  f.admissible = f.n1 > 0 && std::abs(f.n2 + 0.5) < f.n1;
  return f;
}

}  // namespace pmpqoc::analytic

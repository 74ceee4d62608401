#include "pmpqoc/analytic/frames.hpp"

#include <array>
#include <numbers>

#include "pmpqoc/core/errors.hpp"

namespace pmpqoc::analytic {
namespace {

const cplx I{0.0, 1.0};

}  // namespace

CMat phase_frame(std::span<const double> energies, std::span<const double> offsets, double t) {
  if (energies.size() != offsets.size()) throw ArgumentError("phase_frame: energies and offsets differ in size");
  const auto n = static_cast<Eigen::Index>(energies.size());
  CMat y = CMat::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) y(k, k) = std::exp(-I * (energies[k] * t + offsets[k]));
  return y;
}

CMat rotating_frame_hamiltonian(const CMat& h_lab, std::span<const double> energies,
                                std::span<const double> offsets, double t) {
  const CMat y = phase_frame(energies, offsets, t);
  if (h_lab.rows() != y.rows() || h_lab.cols() != y.cols())
    throw ArgumentError("rotating_frame_hamiltonian: dimension mismatch");
  // Y' = -i diag(E) Y, so -i Y^-1 Y' = -diag(E).
  CMat h = y.adjoint() * h_lab * y;
  for (Eigen::Index k = 0; k < h.rows(); ++k) h(k, k) -= energies[k];
  return h;
}

CMat two_level_lab_hamiltonian(double e0, double e1, double u, double t) {
  const cplx omega = u * std::exp(I * ((e1 - e0) * t));
  CMat h(2, 2);
  h << e0, omega, std::conj(omega), e1;
  return h;
}

CMat upsilon_frame(double e0, double e1, double t) {
  const std::array<double, 2> e{e0, e1}, c{0.0, 0.0};
  return phase_frame(e, c, t);
}

CMat three_level_lab_hamiltonian(double e1, double e2, double e3, double u1, double u2, double t) {
  const cplx o1 = u1 * std::exp(I * ((e2 - e1) * t));
  const cplx o2 = u2 * std::exp(I * ((e3 - e2) * t));
  CMat h = CMat::Zero(3, 3);
  h(0, 0) = e1;
  h(1, 1) = e2;
  h(2, 2) = e3;
  h(0, 1) = o1;
  h(1, 0) = std::conj(o1);
  h(1, 2) = o2;
  h(2, 1) = std::conj(o2);
  return h;
}

CMat ladder_frame(double e1, double e2, double e3, double t) {
  const std::array<double, 3> e{e1, e2, e3}, c{0.0, std::numbers::pi / 2.0, std::numbers::pi};
  return phase_frame(e, c, t);
}

CMat ladder_rotating_hamiltonian(double e1, double e2, double e3, double u1, double u2, double t) {
  const std::array<double, 3> e{e1, e2, e3}, c{0.0, std::numbers::pi / 2.0, std::numbers::pi};
  return rotating_frame_hamiltonian(three_level_lab_hamiltonian(e1, e2, e3, u1, u2, t), e, c, t);
}

}  // namespace pmpqoc::analytic

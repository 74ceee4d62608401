#include <doctest.h>

#include <random>
#include <vector>

#include "pmpqoc/algebra/lie.hpp"
#include "pmpqoc/analytic/frames.hpp"
#include "pmpqoc/analytic/spin.hpp"
#include "pmpqoc/core/builtins.hpp"

using namespace pmpqoc;
using namespace pmpqoc::algebra;

namespace {

CMat pauli(char c) {
  CMat s(2, 2);
  if (c == 'x') s << 0, 1, 1, 0;
  if (c == 'y') s << 0, cplx(0, -1), cplx(0, 1), 0;
  if (c == 'z') s << 1, 0, 0, -1;
  return s;
}

const cplx I(0, 1);

// Projector onto the span of a basis, as a matrix acting on flattened real coordinates.
Mat span_projector(const LieAlgebraBasis& b, int n) {
  Mat m(2 * n * n, b.dimension());
  for (int i = 0; i < b.dimension(); ++i) {
    const CMat& x = b.basis[i];
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        m(r * n + c, i) = x(r, c).real();
        m(n * n + r * n + c, i) = x(r, c).imag();
      }
  }
  return m * m.transpose();
}

}  // namespace

TEST_CASE("su(2) from i sigma_z and i sigma_x") {
  const std::vector<CMat> g = {I * pauli('z'), I * pauli('x')};
  const auto b = lie_closure(g);
  CHECK(b.dimension() == 3);
  CHECK(b.residual(I * pauli('y')) < 1e-9);
}

TEST_CASE("Grushin rotations close on so(3)") {
  const Scenario s = builtin_scenario("grushin");
  const auto& sys = s.bilinear();
  const auto b = lie_closure(sys.controls());
  CHECK(b.dimension() == 3);
}

TEST_CASE("a single generator spans one dimension") {
  const std::vector<CMat> g = {I * pauli('x')};
  CHECK(lie_closure(g).dimension() == 1);
}

TEST_CASE("closure is closed under commutators") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  auto rand_ah = [&] {
    CMat m(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = cplx(nd(rng), nd(rng));
    return CMat(m - m.adjoint());
  };
  const std::vector<CMat> g = {rand_ah(), rand_ah()};
  const auto b = lie_closure(g);
  for (const auto& x : b.basis)
    for (const auto& y : b.basis) CHECK(b.residual(x * y - y * x) < 1e-9);
  CHECK(b.dimension() <= 9);
  CHECK(traceless_dimension(b) <= 8);
}

TEST_CASE("closure is idempotent, monotone and order independent") {
  const std::vector<CMat> g = {I * pauli('z'), I * pauli('x')};
  const auto b = lie_closure(g);
  CHECK(lie_closure(b.basis).dimension() == b.dimension());
  const std::vector<CMat> rev = {g[1], g[0]};
  CHECK((span_projector(lie_closure(rev), 2) - span_projector(b, 2)).norm() < 1e-9);
  const std::vector<CMat> one = {g[0]};
  CHECK(lie_closure(one).dimension() <= b.dimension());
  const std::vector<CMat> more = {g[0], g[1], CMat(I * CMat::Identity(2, 2))};
  CHECK(lie_closure(more).dimension() >= b.dimension());
}

TEST_CASE("spin system is controllable on the sphere") {
  const auto r = check_controllability(analytic::spin_system(0.5), ControllabilityMode::Drifted);
  CHECK(r.controllable);
  CHECK(r.min_rank == 2);
  CHECK(r.samples == 50);
  CHECK(r.drift_recurrent);
  CHECK(r.algebra_name == "so(3)");
}

TEST_CASE("resonant three-level ladder is controllable on the real sphere") {
  // The rotating-frame generator -i H' is real, so real states stay on S^2.
  const double e1 = 0.0, e2 = 1.3, e3 = 2.9, t = 0.7;
  const CMat h0 = analytic::ladder_rotating_hamiltonian(e1, e2, e3, 0, 0, t);
  const CMat a1 = -I * (analytic::ladder_rotating_hamiltonian(e1, e2, e3, 1, 0, t) - h0);
  const CMat a2 = -I * (analytic::ladder_rotating_hamiltonian(e1, e2, e3, 0, 1, t) - h0);
  CHECK(h0.norm() < 1e-12);
  CHECK(a1.imag().norm() < 1e-12);
  CHECK(a2.imag().norm() < 1e-12);
  const auto real_sys =
      BilinearSystem::real(Representation::RealOrthogonal, Mat::Zero(3, 3), {a1.real(), a2.real()});
  CHECK(check_controllability(real_sys, ControllabilityMode::Driftless).controllable);
  // The same generators span only so(3) inside su(3): not controllable on the complex sphere.
  const BilinearSystem complex_sys(Representation::ComplexUnitary, CMat::Zero(3, 3),
                                   {CMat(I * a1), CMat(I * a2)});
  CHECK_FALSE(check_controllability(complex_sys, ControllabilityMode::Driftless).controllable);
}

TEST_CASE("two-level with two Pauli controls reports su(2)") {
  const BilinearSystem sys(Representation::ComplexUnitary, pauli('z'), {pauli('x')});
  const auto r = check_controllability(sys, ControllabilityMode::Drifted);
  CHECK(r.full_special_algebra);
  CHECK(r.algebra_name == "su(2)");
  CHECK(r.controllable);
}

TEST_CASE("drift alone is not controllable") {
  Mat f = Mat::Zero(3, 3);
  f(0, 1) = -1;
  f(1, 0) = 1;
  const auto sys = BilinearSystem::real(Representation::RealOrthogonal, f, {});
  CHECK_FALSE(check_controllability(sys, ControllabilityMode::Drifted).controllable);
  const BilinearSystem c(Representation::ComplexUnitary, pauli('z'), {});
  CHECK_FALSE(check_controllability(c, ControllabilityMode::Drifted).controllable);
}

TEST_CASE("sampling is deterministic for a fixed seed") {
  const auto a = check_controllability(analytic::spin_system(0.5), ControllabilityMode::Drifted, 20, 99);
  const auto b = check_controllability(analytic::spin_system(0.5), ControllabilityMode::Drifted, 20, 99);
  CHECK(a.min_singular_values == b.min_singular_values);
}

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include "pmpqoc/analytic/grushin.hpp"
#include "pmpqoc/analytic/spin.hpp"
#include "pmpqoc/core/builtins.hpp"
#include "pmpqoc/core/errors.hpp"
#include "pmpqoc/dynamics/expm.hpp"
#include "pmpqoc/dynamics/propagate.hpp"
#include "pmpqoc/pmp/arcs.hpp"
#include "pmpqoc/pmp/shooting.hpp"

using namespace pmpqoc;
using namespace pmpqoc::pmp;

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0, 1);

ControlModel spin_model(double delta, BoundsKind kind = BoundsKind::Box) {
  ControlBounds b;
  b.kind = kind;
  if (kind == BoundsKind::Box) b.intervals = {{-1, 1}};
  return ControlModel(analytic::spin_system(delta), b, CostKind::Time, Vec::Zero(1));
}

// Rotation generator about x2, the third direction of the Grushin algebra.
Mat rot_y() {
  Mat a = Mat::Zero(3, 3);
  a(0, 2) = 1;
  a(2, 0) = -1;
  return a;
}

std::vector<ArcLabel> labels(const ArcClassification& c) {
  std::vector<ArcLabel> out;
  for (const auto& a : c.arcs) out.push_back(a.label);
  return out;
}

}  // namespace

TEST_CASE("normal p0 follows the cost normalization") {
  CHECK(normal_p0(CostKind::Energy) == -0.5);
  CHECK(normal_p0(CostKind::CustomQuadratic) == -0.5);
  CHECK(normal_p0(CostKind::Time) == -1.0);
  CHECK(normal_p0(CostKind::Fidelity) == -1.0);
}

TEST_CASE("pre-Hamiltonian formulas") {
  const auto m = spin_model(0.5);
  Vec q(3), p(3);
  q << 0.3, -0.4, std::sqrt(0.75);
  p << 0.7, 0.2, -1.1;
  SUBCASE("abnormal, zero control: drift pairing") {
    CHECK(pre_hamiltonian(m, q, p, Vec::Zero(1), 0.0) == doctest::Approx(p.dot(spin_drift(0.5) * q)));
  }
  SUBCASE("time cost: p (F + u G) q + p0") {
    const double u = -0.3, p0 = -1.0;
    const double expect = p.dot((spin_drift(0.5) + u * spin_control()) * q) + p0;
    CHECK(pre_hamiltonian(m, q, p, Vec::Constant(1, u), p0) == doctest::Approx(expect));
  }
  SUBCASE("energy cost on the Grushin sphere") {
    const auto g = ControlModel::from(builtin_scenario("grushin-energy"));
    const Vec u{{0.4, -0.9}};
    const double expect = p.dot((0.4 * g.controls()[0] - 0.9 * g.controls()[1]) * q) - 0.5 * u.squaredNorm();
    CHECK(pre_hamiltonian(g, q, p, u, -0.5) == doctest::Approx(expect));
  }
}

TEST_CASE("spherical form at the Grushin start point") {
  // At (1,0,0): d/dtheta = -e2 and d/dphi = e3, and the x1 rotation has zero velocity.
  const auto g = ControlModel::from(builtin_scenario("grushin-energy"));
  const Vec q = Vec::Unit(3, 0);
  const double a = 0.3, pt = 1.0;
  const Vec p = analytic::grushin_covector(a, static_cast<int>(pt));
  CHECK(analytic::grushin_p_theta(p) == pt);
  CHECK(analytic::grushin_p_phi(p) == -a);
  const Vec u{{0.6, 0.2}};
  // v1 = -u1 along d/dtheta, v2 term vanishes on the chart equator (cot theta = 0).
  CHECK(pre_hamiltonian(g, q, p, u, -0.5) == doctest::Approx(-u(0) * pt - 0.5 * u.squaredNorm()));
}

TEST_CASE("normal control Im<chi|H|psi>") {
  CMat sx(2, 2);
  sx << 0, 1, 1, 0;
  const CVec psi = CVec::Unit(2, 0);
  CHECK(normal_control_bilinear(psi, psi, sx) == 0.0);
  CHECK(normal_control_bilinear(psi, CVec::Unit(2, 1), sx) == 0.0);
  CVec chi(2);
  chi << 0, I;
  CHECK(normal_control_bilinear(psi, chi, sx) == doctest::Approx(-1.0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  CMat h(2, 2);
  h << nd(rng), cplx(nd(rng), nd(rng)), 0, nd(rng);
  h(1, 0) = std::conj(h(0, 1));
  CVec v(2);
  v << cplx(nd(rng), nd(rng)), cplx(nd(rng), nd(rng));
  CHECK(std::abs(normal_control_bilinear(v, v, h)) < 1e-14);
}

TEST_CASE("normal control is the vertex of the quadratic pre-Hamiltonian") {
  const Scenario s = builtin_scenario("two-level");
  CVec psi(2), chi(2);
  psi << cplx(0.6, 0.0), cplx(0.0, 0.8);
  chi << cplx(0.3, -0.5), cplx(0.9, 0.2);
  const double u = normal_control_bilinear(psi, chi, s.bilinear().controls()[0]);
  auto h = [&](double x) { return pre_hamiltonian(s, psi, chi, Vec::Constant(1, x), -0.5); };
  const double e = 1e-4;
  CHECK(std::abs((h(u + e) - h(u - e)) / (2 * e)) < 1e-9);
  CHECK(h(u) > h(u + 0.1));
  CHECK(h(u) > h(u - 0.1));
}

TEST_CASE("abnormal control system") {
  CMat sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, -I, I, 0;
  sz << 1, 0, 0, -1;
  CVec psi(2), chi(2);
  psi << cplx(0.6, 0.1), cplx(-0.2, 0.77);
  chi << cplx(0.1, 0.4), cplx(0.5, -0.3);
  SUBCASE("single input is always singular") {
    const auto r = abnormal_control_system(psi, chi, BilinearSystem(Representation::ComplexUnitary, sz, {sx}));
    CHECK(r.singular);
    CHECK(r.R(0, 0) == 0.0);
    const CMat c = sz * sx - sx * sz;
    CHECK(r.constraint == doctest::Approx((chi.adjoint() * c * psi)(0).real()));
  }
  SUBCASE("two inputs give a finite solve") {
    const auto r = abnormal_control_system(psi, chi, BilinearSystem(Representation::ComplexUnitary, sz, {sx, sy}));
    REQUIRE_FALSE(r.singular);
    CHECK((r.R * r.u - r.s).norm() < 1e-10);
  }
  SUBCASE("no drift gives u = 0") {
    const auto r =
        abnormal_control_system(psi, chi, BilinearSystem(Representation::ComplexUnitary, CMat::Zero(2, 2), {sx, sy}));
    REQUIRE_FALSE(r.singular);
    CHECK(r.s.norm() == 0.0);
    CHECK(r.u.norm() == 0.0);
  }
}

TEST_CASE("switching function") {
  const Vec north = Vec::Unit(3, 2);
  const Vec p{{0.3, 0.7, -0.2}};
  CHECK(switching_function(p, north) == doctest::Approx(-0.7));
  const Vec q{{std::sqrt(0.5), std::sqrt(0.5), 0.0}};
  const Vec gq = spin_control() * q;
  const Vec perp = Vec{{1.0, 0.0, 0.0}} - gq.dot(Vec::Unit(3, 0)) / gq.squaredNorm() * gq;
  CHECK(std::abs(switching_function(perp, q)) < 1e-15);
}

TEST_CASE("dPhi/dt equals p[G,F]q along an extremal") {
  const double d = 0.5;
  const auto m = spin_model(d);
  const Mat gf = spin_control() * spin_drift(d) - spin_drift(d) * spin_control();
  const Vec p{{3.0, -1.0, 0.0}};
  const auto ex = integrate_extremal(m, Vec::Unit(3, 2), p, -1.0, 6.0, 6000);
  const double dt = ex.grid.dt();
  double worst = 0.0;
  for (int k = 1; k < ex.grid.n_steps(); ++k) {
    bool straddles = false;
    for (double ts : ex.switch_times) straddles = straddles || std::abs(ts - ex.grid.node(k)) <= 1.5 * dt;
    if (straddles) continue;
    const double fd = (ex.phi(0, k + 1) - ex.phi(0, k - 1)) / (2 * dt);
    worst = std::max(worst, std::abs(fd - ex.p[k].dot(gf * ex.q[k])));
  }
  CHECK(worst < 1e-6);
  CHECK_FALSE(ex.switch_times.empty());
}

TEST_CASE("maximizing control by bound type") {
  const Vec q = Vec::Unit(3, 2);
  const Vec p{{0.0, -2.0, 0.0}};  // Phi = 2
  SUBCASE("box with time cost is bang") {
    const auto u = spin_model(0.5).maximizing_control(q, p, -1.0);
    REQUIRE(u);
    CHECK((*u)(0) == 1.0);
    CHECK_FALSE(spin_model(0.5).maximizing_control(q, Vec::Zero(3) + Vec::Unit(3, 0), -1.0));
  }
  SUBCASE("box with energy cost clamps") {
    ControlBounds b;
    b.kind = BoundsKind::Box;
    b.intervals = {{-1, 1}};
    const ControlModel m(analytic::spin_system(0.5), b, CostKind::Energy, Vec::Ones(1));
    CHECK((*m.maximizing_control(q, p, -0.5))(0) == 1.0);
    CHECK((*m.maximizing_control(q, 0.25 * p, -0.5))(0) == doctest::Approx(0.5));
  }
  SUBCASE("unbounded energy is Phi / (-2 p0)") {
    const ControlModel m(analytic::spin_system(0.5), ControlBounds{}, CostKind::Energy, Vec::Ones(1));
    CHECK((*m.maximizing_control(q, p, -0.5))(0) == doctest::Approx(2.0));
    CHECK((*m.maximizing_control(q, p, -1.0))(0) == doctest::Approx(1.0));
  }
  SUBCASE("ball with time cost is Phi / |Phi|") {
    const auto g = ControlModel::from(builtin_scenario("grushin"));
    const Vec pg{{0.0, 3.0, 4.0}};
    const auto u = g.maximizing_control(Vec::Unit(3, 0), pg, -1.0);
    REQUIRE(u);
    CHECK(u->norm() == doctest::Approx(1.0));
  }
  SUBCASE("discrete set picks the best point") {
    const auto c = ControlModel::from(builtin_scenario("chattering-2d"));
    const Vec qc{{1.0, 0.0}};
    const Vec pc{{0.0, -1.0}};  // Phi = p . [[0,1],[-1,0]] q = 1
    CHECK((*c.maximizing_control(qc, pc, -0.5))(0) == 1.0);
    CHECK((*c.maximizing_control(qc, -pc, -0.5))(0) == -1.0);
  }
}

TEST_CASE("spin singular locus residual is |z|") {
  const auto m = spin_model(0.5);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 20; ++i) {
    Vec q{{nd(rng), nd(rng), nd(rng)}};
    q.normalize();
    CHECK(singular_locus_residual(m, q) == doctest::Approx(std::abs(q(2))).epsilon(1e-12));
  }
}

TEST_CASE("costate norm is conserved on the spin system") {
  const auto m = spin_model(0.5);
  const auto ex = integrate_extremal(m, Vec::Unit(3, 2), Vec{{1.3, -1.0, 0.0}}, -1.0, 8.0, 8000);
  double lo = 1e300, hi = 0;
  for (const auto& p : ex.p) {
    lo = std::min(lo, p.norm());
    hi = std::max(hi, p.norm());
  }
  CHECK(hi - lo < 1e-9);
}

TEST_CASE("abnormal extremals switch every pi/Omega") {
  const double d = 0.5, w = std::sqrt(1 + d * d);
  const Vec q = Vec{{0.2, 0.5, 0.6}}.normalized();
  const auto ex = integrate_extremal(spin_model(d), q, analytic::spin_abnormal_covector(d, q), 0.0, 4 * pi / w, 4000);
  REQUIRE(ex.switch_times.size() >= 2);
  for (std::size_t k = 1; k < ex.switch_times.size(); ++k)
    CHECK(std::abs(ex.switch_times[k] - ex.switch_times[k - 1] - pi / w) < 1e-6);
  CHECK(ex.cls == ExtremalClass::Abnormal);
}

TEST_CASE("P2 covector enters the singular arc and reaches (1,0,0)") {
  const double d = 0.5;
  const auto syn = analytic::spin_p2(d);
  const auto ex =
      integrate_extremal(spin_model(d), Vec::Unit(3, 2), analytic::spin_p2_covector(d), -1.0, syn.total_duration(), 4000);
  CHECK(std::abs(ex.singular_entry - syn.arcs[0].duration) < 1e-6);
  CHECK((ex.endpoint() - Vec::Unit(3, 0)).norm() < 1e-6);
  CHECK(labels(classify_arcs(ex, spin_model(d))) == std::vector<ArcLabel>{ArcLabel::BangPlus, ArcLabel::Singular});
  CHECK(ex.hamiltonian_spread() < 1e-6);
}

TEST_CASE("P1 covector with a switch at the equator reaches the south pole") {
  const double d = 0.5;
  const auto syn = analytic::spin_p1(d);
  ExtremalOptions eo;
  eo.allow_singular = false;
  eo.switch_at_touch = true;
  const auto ex = integrate_extremal(spin_model(d), Vec::Unit(3, 2), analytic::spin_p1_covector(d), -1.0,
                                     syn.total_duration(), 4000, eo);
  REQUIRE(ex.switch_times.size() == 1);
  CHECK(std::abs(ex.switch_times[0] - analytic::spin_t1(d)) < 1e-6);
  CHECK((ex.endpoint() + Vec::Unit(3, 2)).norm() < 1e-6);
  CHECK(labels(classify_arcs(ex, spin_model(d))) ==
        std::vector<ArcLabel>{ArcLabel::BangPlus, ArcLabel::Switch, ArcLabel::BangMinus});
  // With singular arcs allowed the same covector follows the equator instead.
  const auto alt =
      integrate_extremal(spin_model(d), Vec::Unit(3, 2), analytic::spin_p1_covector(d), -1.0, syn.total_duration(), 4000);
  CHECK(alt.singular_entry > 0.0);
}

TEST_CASE("positive Phi trace is a single bang") {
  const auto ex = integrate_extremal(spin_model(0.5), Vec::Unit(3, 2), Vec{{0.0, -1.0, 0.0}}, -1.0, 0.5, 100);
  CHECK(labels(classify_arcs(ex, spin_model(0.5))) == std::vector<ArcLabel>{ArcLabel::BangPlus});
}

TEST_CASE("Grushin extremals: H = 1/2 and the x2-rotation momentum is constant") {
  const Scenario s = builtin_scenario("grushin-energy");
  for (int pt : {1, -1}) {
    const double a = 1.0 / std::sqrt(3.0);
    ExtremalOptions eo;
    eo.steps = 2000;
    const auto ex = integrate_extremal(s, analytic::grushin_covector(a, pt), analytic::grushin_optimal_time, eo);
    for (std::size_t k = 0; k < ex.q.size(); ++k) {
      CHECK(std::abs(ex.hamiltonian[k] - 0.5) < 1e-6);
      CHECK(std::abs(ex.p[k].dot(rot_y() * ex.q[k]) - ex.p[0].dot(rot_y() * ex.q[0])) < 1e-9);
    }
    CHECK(std::abs(std::abs(ex.endpoint()(2)) - 1.0) < 1e-6);
  }
}

TEST_CASE("Grushin reachability table") {
  const Scenario s = builtin_scenario("grushin");
  for (auto [n1, n2] : {std::pair{1, 0}, std::pair{2, 0}, std::pair{2, 1}}) {
    const auto qz = analytic::grushin_quantized(n1, n2);
    ExtremalOptions eo;
    eo.steps = 4000;
    const auto ex = integrate_extremal(s, analytic::grushin_covector(qz.a, 1), qz.T, eo);
    CHECK(std::abs(ex.endpoint()(0)) < 1e-6);
    CHECK(std::abs(ex.endpoint()(1)) < 1e-6);
  }
}

TEST_CASE("scale equivariance of normal extremals") {
  const auto g = ControlModel::from(builtin_scenario("grushin-energy"));
  const Vec p = analytic::grushin_covector(0.4, 1);
  const auto a = integrate_extremal(g, Vec::Unit(3, 0), p, -0.5, 2.0, 500);
  const auto b = integrate_extremal(g, Vec::Unit(3, 0), 3.0 * p, -1.5, 2.0, 500);
  for (std::size_t k = 0; k < a.q.size(); ++k) {
    CHECK((a.q[k] - b.q[k]).norm() < 1e-9);
    CHECK((a.controls.col(k) - b.controls.col(k)).norm() < 1e-9);
  }
}

TEST_CASE("integration rejects a vanishing pair") {
  CHECK_THROWS_AS(integrate_extremal(spin_model(0.5), Vec::Unit(3, 2), Vec::Zero(3), 0.0, 1.0, 10), ArgumentError);
}

TEST_CASE("unknown and equation counts agree") {
  for (const char* name : {"warmup", "warmup-time", "two-level", "two-level-grape", "grushin", "grushin-energy",
                           "spin-p1", "spin-p2"}) {
    CAPTURE(name);
    const ShootingProblem prob(builtin_scenario(name));
    CHECK(prob.n_unknowns() == prob.n_equations());
  }
}

TEST_CASE("warmup energy shooting gives u = pi/2") {
  const ShootingProblem prob(builtin_scenario("warmup"));
  ShootingOptions opt;
  opt.starts = 8;
  const auto r = multi_start(prob, opt);
  REQUIRE_FALSE(r.families.empty());
  const auto& best = r.families.front();
  CHECK(best.residual_norm < 1e-9);
  CHECK(best.cost == doctest::Approx(pi * pi / 4).epsilon(1e-9));
  const auto ex = prob.extremal(prob.encode(best.p_in, best.T));
  for (int k = 0; k <= ex.grid.n_steps(); ++k) CHECK(std::abs(std::abs(ex.controls(0, k)) - pi / 2) < 1e-6);
  CHECK_THROWS_AS(shoot(prob, Vec::Zero(prob.n_unknowns())), ArgumentError);
}

TEST_CASE("trivial target: a small covector converges to u = 0") {
  const char* json = R"({
  "system": {"representation": "real-orthogonal",
             "drift": [[0, 0, 1], [0, 0, 0], [-1, 0, 0]],
             "controls": [[[0, -1, 0], [1, 0, 0], [0, 0, 0]],
                          [[0, 0, 0], [0, 0, -1], [0, 1, 0]]]},
  "initial_state": [1, 0, 0],
  "target": {"kind": "point", "state": [0.54030230586813977, 0, -0.8414709848078965]},
  "cost": {"kind": "energy"},
  "time": {"mode": "fixed", "T": 1, "steps": 400},
  "bounds": {"kind": "unbounded"}
})";
  const Scenario s = parse_scenario(json);
  // Oracle: the drift-only endpoint exp(A0) q_in.
  const auto free = dynamics::propagate(s.bilinear(), ControlLaw::zero(s.time.grid(), 2), s.initial());
  CHECK((free.endpoint() - s.target.state).norm() < 1e-12);
  const ShootingProblem prob(s);
  const auto r = shoot(prob, Vec::Constant(prob.n_unknowns(), 1e-2));
  REQUIRE(r.converged);
  CHECK(r.residual_norm < 1e-9);
  const auto ex = prob.extremal(r.z);
  CHECK(ex.controls.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("multi-start results do not depend on the thread count") {
  const ShootingProblem prob(builtin_scenario("grushin"));
  ShootingOptions opt;
  opt.starts = 12;
  opt.seed = 5;
  const char* old = std::getenv("PMP_QOC_THREADS");
  const std::string saved = old ? old : "";
  setenv("PMP_QOC_THREADS", "1", 1);
  const auto a = multi_start(prob, opt);
  setenv("PMP_QOC_THREADS", "4", 1);
  const auto b = multi_start(prob, opt);
  if (old) setenv("PMP_QOC_THREADS", saved.c_str(), 1); else unsetenv("PMP_QOC_THREADS");
  REQUIRE(a.starts.size() == b.starts.size());
  for (std::size_t i = 0; i < a.starts.size(); ++i) {
    CHECK(a.starts[i].start_index == b.starts[i].start_index);
    CHECK(a.starts[i].result.z == b.starts[i].result.z);
  }
  REQUIRE(a.families.size() == b.families.size());
  for (std::size_t i = 0; i < a.families.size(); ++i) CHECK(a.families[i].p_in == b.families[i].p_in);
  for (std::size_t i = 1; i < a.starts.size(); ++i) {
    const auto& x = a.starts[i - 1];
    const auto& y = a.starts[i];
    CHECK((x.result.residual_norm < y.result.residual_norm ||
           (x.result.residual_norm == y.result.residual_norm && x.start_index < y.start_index)));
  }
}

TEST_CASE("fidelity transversality at convergence") {
  Scenario s = builtin_scenario("two-level-grape");
  s.time.steps = 100;
  const ShootingProblem prob(s);
  ShootingOptions opt;
  opt.starts = 16;
  opt.seed = 3;
  const auto r = multi_start(prob, opt);
  REQUIRE_FALSE(r.families.empty());
  for (const auto& f : r.families) {
    const auto ex = prob.extremal(prob.encode(f.p_in, f.T));
    CHECK((ex.p.back() - prob.terminal_covector(ex.q.back())).norm() < 1e-8);
  }
}

TEST_CASE("orthonormal complement") {
  const Vec v = Vec{{1.0, 2.0, -2.0, 0.5}}.normalized();
  const Mat b = orthonormal_complement(v);
  CHECK(b.cols() == 3);
  CHECK((b.transpose() * b - Mat::Identity(3, 3)).norm() < 1e-12);
  CHECK((b.transpose() * v).norm() < 1e-12);
}

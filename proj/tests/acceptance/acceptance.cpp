// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pmpqoc/algebra/lie.hpp"
#include "pmpqoc/analytic/grushin.hpp"
#include "pmpqoc/analytic/spin.hpp"
#include "pmpqoc/analytic/warmup.hpp"
#include "pmpqoc/core/builtins.hpp"
#include "pmpqoc/dynamics/lindblad.hpp"
#include "pmpqoc/dynamics/propagate.hpp"
#include "pmpqoc/existence/chattering.hpp"
#include "pmpqoc/existence/filippov.hpp"
#include "pmpqoc/grape/grape.hpp"
#include "pmpqoc/pmp/shooting.hpp"

using namespace pmpqoc;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

std::vector<pmp::Extremal> stored_extremals;  // collected for the Hamiltonian check
std::vector<bool> stored_free_time;

void store(const pmp::Extremal& ex, bool free_time) {
  stored_extremals.push_back(ex);
  stored_free_time.push_back(free_time);
}

pmp::MultiStartResult grushin_shoot() {
  static const pmp::MultiStartResult r = [] {
    const pmp::ShootingProblem prob(builtin_scenario("grushin"));
    pmp::ShootingOptions opt;
    opt.starts = 64;
    opt.seed = 7;
    return pmp::multi_start(prob, opt);
  }();
  return r;
}

void criterion1(Outcome& o) {
  const auto r = grushin_shoot();
  o.require(!r.families.empty(), "at least one converged family");
  if (r.families.empty()) return;
  const auto& best = r.families.front();
  const double a = analytic::grushin_p_phi(best.p_in);
  const double T = best.T;
  o.detail << "families=" << r.families.size() << " |a|=" << std::abs(a) << " T=" << T << " cost=" << best.cost
           << " |x3(T)|=" << std::abs(best.endpoint(2)) << " ";
  o.require(std::abs(std::abs(a) - 1.0 / std::sqrt(3.0)) < 1e-6, "|a| = 1/sqrt3");
  o.require(std::abs(T - analytic::grushin_optimal_time) < 1e-6, "T = pi sqrt3/2");
  o.require(std::abs(std::abs(best.endpoint(2)) - 1.0) < 1e-6, "|x3(T)| = 1");
  o.require(std::abs(best.cost - T) < 1e-6, "cost = T");
  const pmp::ShootingProblem prob(builtin_scenario("grushin"));
  for (const auto& f : r.families) store(prob.extremal(prob.encode(f.p_in, f.T)), true);
}

void criterion2(Outcome& o) {
  const Scenario s = builtin_scenario("grushin");
  const double T = analytic::grushin_optimal_time;
  double worst = 0.0;
  for (double a : {0.0, 1.0 / std::sqrt(3.0), -1.0 / std::sqrt(3.0), 1.0}) {
    for (int pt : {1, -1}) {
      pmp::ExtremalOptions eo;
      eo.steps = 2000;
      const auto ex = pmp::integrate_extremal(s, analytic::grushin_covector(a, pt), T, eo);
      for (int k = 0; k <= ex.grid.n_steps(); ++k) {
        const auto x = analytic::grushin_extremal(a, pt, ex.grid.node(k));
        for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(ex.q[k](i) - x[i]));
      }
      store(ex, true);
    }
  }
  o.detail << "max node deviation=" << worst << " ";
  o.require(worst < 1e-6, "node-wise agreement 1e-6");
}

void criterion3(Outcome& o) {
  const auto r = grushin_shoot();
  int checked = 0;
  double worst = 0.0;
  for (const auto& s : r.starts) {
    if (!s.result.converged) continue;
    const auto fit = analytic::grushin_quantization_fit(analytic::grushin_p_phi(s.result.p_in), s.result.T);
    worst = std::max({worst, fit.residual1, fit.residual2});
    o.require(fit.admissible, "|n2 + 1/2| < n1");
    ++checked;
  }
  o.detail << "converged=" << checked << " max residual=" << worst << " ";
  o.require(checked > 0, "some converged solutions");
  o.require(worst < 1e-5, "quantization residual 1e-5");
}

void criterion4(Outcome& o) {
  const double d = 0.5;
  const auto p1 = analytic::spin_p1(d);
  const auto p1s = analytic::spin_p1(d, true);
  const double w = std::sqrt(1.0 + d * d);
  const Vec north = Vec::Unit(3, 2), south = -Vec::Unit(3, 2);
  const double z1 = analytic::spin_bang_arc(d, 1, p1.arcs[0].duration)(2);
  const double e1 = (analytic::spin_endpoint(p1, north) - south).norm();
  const double e2 = (analytic::spin_endpoint(p1s, north) - south).norm();
  o.detail << "t1=" << p1.arcs[0].duration << " t2=" << p1.arcs[1].duration << " |z(t1)|=" << std::abs(z1)
           << " endpoint errors=" << e1 << "," << e2 << " ";
  o.require(std::abs(p1.total_duration() - 2.0 * pi / w) < 1e-10, "t1 + t2 = 2pi/Omega");
  o.require(std::abs(z1) < 1e-8, "switch on equator");
  o.require(e1 < 1e-8 && e2 < 1e-8, "endpoint (0,0,-1)");
  o.require(std::abs(p1.total_duration() - p1s.total_duration()) < 1e-12, "symmetric variants equal");
}

void criterion5(Outcome& o) {
  const double d = 0.5;
  const auto p2 = analytic::spin_p2(d);
  const Vec bang_end = analytic::spin_bang_arc(d, 1, p2.arcs[0].duration);
  const Vec expect{{d, -std::sqrt(1.0 - d * d), 0.0}};
  const double ef = (analytic::spin_endpoint(p2, Vec::Unit(3, 2)) - Vec::Unit(3, 0)).norm();
  const double ts1 = analytic::spin_p2(1.0).arcs[1].duration;
  o.detail << "t_s=" << p2.arcs[1].duration << " bang endpoint error=" << (bang_end - expect).norm()
           << " final error=" << ef << " t_s(1)=" << ts1 << " ";
  o.require(std::abs(p2.arcs[1].duration - 2.0 * pi / 3.0) < 1e-10, "t_s = 2pi/3");
  o.require((bang_end - expect).norm() < 1e-8, "bang endpoint");
  o.require(ef < 1e-8, "final state (1,0,0)");
  o.require(ts1 == 0.0, "t_s = 0 at delta = 1");
}

void criterion6(Outcome& o) {
  const double d = 0.5, w2 = 1.0 + d * d;
  const Scenario s = builtin_scenario("spin-p1");
  const auto model = pmp::ControlModel::from(s);
  const Vec north = Vec::Unit(3, 2);
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g;
  double worst_law = 0.0, worst_norm = 0.0;
  for (int i = 0; i < 10; ++i) {
    // Tangent covector at the pole scaled so that H_M = |Phi| - 1 = 0.
    Vec p{{g(rng), g(rng), 0.0}};
    p /= std::abs(pmp::switching_function(p, north));
    const double T = 12.0;
    const int n = 12000;
    const auto ex = pmp::integrate_extremal(model, north, p, -1.0, T, n);
    store(ex, true);
    const double dt = ex.grid.dt();
    for (int k = 1; k < n; ++k) {
      const double t0 = ex.grid.node(k - 1), t1 = ex.grid.node(k + 1);
      bool straddles = ex.singular_entry >= 0.0 && ex.grid.node(k + 1) >= ex.singular_entry;
      for (double ts : ex.switch_times) straddles = straddles || (ts >= t0 - 1e-12 && ts <= t1 + 1e-12);
      if (straddles) continue;
      const double ddphi = (ex.phi(0, k + 1) - 2.0 * ex.phi(0, k) + ex.phi(0, k - 1)) / (dt * dt);
      worst_law = std::max(worst_law, std::abs(ddphi + w2 * ex.phi(0, k) + ex.p0 * ex.controls(0, k)));
    }
    double lo = 1e300, hi = 0.0;
    for (const auto& pk : ex.p) {
      lo = std::min(lo, pk.norm());
      hi = std::max(hi, pk.norm());
    }
    worst_norm = std::max(worst_norm, hi - lo);
  }
  // Abnormal extremals from generic points.
  double worst_gap = 0.0;
  int gaps = 0;
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    Vec q{{uni(rng), uni(rng), uni(rng)}};
    q.normalize();
    const Vec p = analytic::spin_abnormal_covector(d, q, 1.0);
    const auto ex = pmp::integrate_extremal(model, q, p, 0.0, 5.0 * pi / std::sqrt(w2), 8000);
    store(ex, false);
    for (std::size_t k = 1; k < ex.switch_times.size(); ++k) {
      worst_gap = std::max(worst_gap, std::abs(ex.switch_times[k] - ex.switch_times[k - 1] - pi / std::sqrt(w2)));
      ++gaps;
    }
  }
  o.detail << "law residual=" << worst_law << " |p| spread=" << worst_norm << " abnormal gaps=" << gaps
           << " max gap error=" << worst_gap << " ";
  o.require(worst_law < 1e-4, "Phi'' + Omega^2 Phi + p0 u residual 1e-4");
  o.require(worst_norm < 1e-9, "|p| spread 1e-9");
  o.require(gaps > 0 && worst_gap < 1e-6, "abnormal gaps pi/Omega");
}

void criterion7(Outcome& o) {
  double worst_spread = 0.0, worst_zero = 0.0;
  for (std::size_t i = 0; i < stored_extremals.size(); ++i) {
    const auto& ex = stored_extremals[i];
    worst_spread = std::max(worst_spread, ex.hamiltonian_spread());
    if (stored_free_time[i])
      for (double h : ex.hamiltonian) worst_zero = std::max(worst_zero, std::abs(h));
  }
  o.detail << "extremals=" << stored_extremals.size() << " max spread=" << worst_spread
           << " max |H_M| (free time)=" << worst_zero << " ";
  o.require(!stored_extremals.empty(), "extremals stored");
  o.require(worst_spread < 1e-6, "relative spread 1e-6");
  o.require(worst_zero < 1e-6, "H_M = 0 in free time");
}

Scenario random_two_level(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  auto herm = [&] {
    CMat a(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) a(i, j) = cplx(g(rng), g(rng));
    return CMat(0.5 * (a + a.adjoint()));
  };
  auto unit = [&] {
    CVec v(2);
    v << cplx(g(rng), g(rng)), cplx(g(rng), g(rng));
    return CVec(v.normalized());
  };
  Scenario s = builtin_scenario("two-level-grape");
  s.system = BilinearSystem(Representation::ComplexUnitary, herm(), {herm()});
  s.initial_state = StateVector(Representation::ComplexUnitary, unit(), true);
  s.target.state = unit();
  s.time.T = 2.0;
  s.time.steps = 40;
  validate(s);
  return s;
}

double theta_oracle(double T) {
  // Root of theta / T = sin(2 theta) on the branch maximizing sin^2(theta) - theta^2 / (2T).
  double best = 0.0, best_j = 0.0;
  for (int i = 1; i < 20000; ++i) {
    const double th = pi * i / 20000.0;
    const double j = th * th / (2.0 * T) - std::sin(th) * std::sin(th);
    if (j < best_j) {
      best_j = j;
      best = th;
    }
  }
  double lo = best - pi / 20000.0, hi = best + pi / 20000.0;
  auto f = [T](double th) { return th / T - std::sin(2.0 * th); };
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(lo) * f(mid) <= 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

void criterion8(Outcome& o) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  double worst_rel = 0.0;
  for (int c = 0; c < 5; ++c) {
    const Scenario s = random_two_level(rng);
    Mat u(1, s.time.steps);
    for (int k = 0; k < u.cols(); ++k) u(0, k) = g(rng);
    const ControlLaw law(s.time.grid(), u);
    const Mat grad = grape::grape_gradient(s, law);
    const double dt = law.grid().dt();
    for (int k = 0; k < u.cols(); ++k) {
      auto jat = [&](double h) {
        Mat v = u;
        v(0, k) += h;
        return grape::grape_cost(s, ControlLaw(law.grid(), v));
      };
      const double h = 1e-6;
      const double dj = (jat(h) - jat(-h)) / (2 * h);
      const double fd = -dj / dt;
      worst_rel = std::max(worst_rel, std::abs(grad(0, k) - fd) / std::abs(fd));
    }
  }
  const Scenario s = builtin_scenario("two-level-grape");
  const ControlLaw guess = ControlLaw::constant(s.time.grid(), Vec::Constant(1, 0.1));
  grape::GrapeOptions opt;
  opt.max_iters = 2000;
  const auto run = grape::grape_optimize(s, guess, opt);
  bool decreasing = true;
  for (std::size_t i = 1; i < run.cost_history.size(); ++i)
    decreasing = decreasing && run.cost_history[i] < run.cost_history[i - 1];
  const Mat avg = grape::interval_average_normal_control(s, run.control);
  const double stat = (avg - run.control.values()).lpNorm<Eigen::Infinity>();
  const double th = theta_oracle(s.time.T);
  o.detail << "max relative gradient error=" << worst_rel << " iterations=" << run.iterations
           << " stop=" << run.stop_reason << " fidelity=" << run.final_fidelity
           << " oracle=" << std::sin(th) * std::sin(th) << " stationarity=" << stat << " ";
  o.require(worst_rel < 1e-5, "gradient vs finite differences 1e-5");
  o.require(decreasing && run.cost_history.size() > 1, "cost strictly decreasing");
  o.require(run.converged || run.stop_reason == "backtracking exhausted", "GRAPE stopped at a stationary point");
  o.require(stat < 1e-6, "u = Im<chi|H|psi> at stationarity");
  o.require(std::abs(run.final_fidelity - std::sin(th) * std::sin(th)) < 1e-6, "1-D oracle fidelity");
}

void criterion9(Outcome& o) {
  const cplx I{0.0, 1.0};
  CMat sz(2, 2), sx(2, 2);
  sz << 1, 0, 0, -1;
  sx << 0, 1, 1, 0;
  const std::vector<CMat> gens{I * sz, I * sx};
  const auto lie = algebra::lie_closure(gens);
  const auto spin = algebra::check_controllability(analytic::spin_system(0.5), algebra::ControllabilityMode::Drifted);
  const auto grushin =
      algebra::check_controllability(builtin_scenario("grushin").bilinear(), algebra::ControllabilityMode::Driftless);
  Mat rz = Mat::Zero(3, 3);
  rz(0, 1) = -1.0;
  rz(1, 0) = 1.0;
  const auto drift_only = algebra::check_controllability(
      BilinearSystem::real(Representation::RealOrthogonal, rz, {}), algebra::ControllabilityMode::Drifted);
  const auto drift_only_c = algebra::check_controllability(
      BilinearSystem(Representation::ComplexUnitary, sz, {}), algebra::ControllabilityMode::Drifted);
  o.detail << "dim{i sz, i sx}=" << lie.dimension() << " spin=" << spin.controllable
           << " grushin=" << grushin.controllable << " drift-only=" << drift_only.controllable << ","
           << drift_only_c.controllable << " ";
  o.require(lie.dimension() == 3, "su(2) dimension 3");
  o.require(spin.controllable, "spin controllable");
  o.require(grushin.controllable, "Grushin controllable");
  o.require(!drift_only.controllable && !drift_only_c.controllable, "drift-only not controllable");
}

void criterion10(Outcome& o) {
  using existence::Verdict;
  const auto g = existence::check_filippov(builtin_scenario("grushin"));
  const auto u = existence::check_filippov(builtin_scenario("unbounded-time-optimal"));
  const auto c = existence::check_filippov(builtin_scenario("chattering-2d"));
  const double d1 = existence::chattering_demo(1).distance;
  const double d8 = existence::chattering_demo(8).distance;
  const double d256 = existence::chattering_demo(256).distance;
  o.detail << "grushin=" << existence::to_string(g.verdict) << " unbounded=" << existence::to_string(u.verdict)
           << " chattering=" << existence::to_string(c.verdict) << " d(1)=" << d1 << " d(8)=" << d8
           << " d(256)=" << d256 << " ";
  o.require(g.verdict == Verdict::Exists, "Grushin exists");
  o.require(u.verdict == Verdict::CannotConclude, "unbounded cannot-conclude");
  o.require(c.verdict == Verdict::CannotConclude, "discrete cannot-conclude");
  o.require(d256 < d8 && d8 < d1 && d256 < 0.05, "chattering decay");
}

void criterion11(Outcome& o) {
  const Scenario s = builtin_scenario("warmup");
  const auto& sys = s.bilinear();
  double worst_e = 0.0, worst_t = 0.0;
  for (double T : {0.5, 1.0, pi / 2.0, 2.0, 3.0}) {
    const double u = analytic::warmup_energy_optimal(T);
    const auto tr = dynamics::propagate(sys, ControlLaw::constant(TimeGrid(0.0, T, 1000), Vec::Constant(1, u)),
                                        s.initial());
    const double theta = std::atan2(tr.endpoint()(1).real(), tr.endpoint()(0).real());
    worst_e = std::max(worst_e, std::abs(theta + pi / 2.0));
  }
  for (double um : {0.5, 1.0, 2.0, 3.0, 7.5}) {
    const double T = analytic::warmup_time_optimal(um);
    const auto tr = dynamics::propagate(sys, ControlLaw::constant(TimeGrid(0.0, T, 1000), Vec::Constant(1, um)),
                                        s.initial());
    const CVec target = s.target.state;
    worst_t = std::max(worst_t, (tr.endpoint() - target).norm());
  }
  o.detail << "energy-optimal theta error=" << worst_e << " time-optimal endpoint error=" << worst_t << " ";
  o.require(worst_e < 1e-12, "theta(T) = -pi/2 within 1e-12");
  o.require(worst_t < 1e-10, "time-optimal propagation within 1e-10");
}

void criterion12(Outcome& o) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  CMat h0(3, 3), h1(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      h0(i, j) = cplx(g(rng), g(rng));
      h1(i, j) = cplx(g(rng), g(rng));
    }
  const BilinearSystem sys(Representation::ComplexUnitary, 0.5 * (h0 + h0.adjoint()), {CMat(0.5 * (h1 + h1.adjoint()))});
  const int n = 10000;
  Mat u(1, n);
  for (int k = 0; k < n; ++k) u(0, k) = g(rng);
  const ControlLaw law(TimeGrid(0.0, 10.0, n), u);
  CVec psi(3), chi(3);
  psi << cplx(g(rng), g(rng)), cplx(g(rng), g(rng)), cplx(g(rng), g(rng));
  chi << cplx(g(rng), g(rng)), cplx(g(rng), g(rng)), cplx(g(rng), g(rng));
  psi.normalize();
  chi.normalize();
  const auto tp = dynamics::propagate(sys, law, StateVector(Representation::ComplexUnitary, psi, true));
  const auto tc = dynamics::propagate(sys, law, StateVector(Representation::ComplexUnitary, chi, true));
  double unit = 0.0, overlap = 0.0;
  const cplx c0 = chi.dot(psi);
  for (int k = 0; k <= n; ++k) {
    unit = std::max(unit, std::abs(tp.states[k].norm() - 1.0));
    overlap = std::max(overlap, std::abs(tc.states[k].dot(tp.states[k]) - c0));
  }

  const Scenario ls = builtin_scenario("lindblad-damping");
  const auto tl = dynamics::propagate_lindblad(ls.lindblad(), ControlLaw::constant(ls.time.grid(), Vec::Constant(1, 0.7)),
                                               *ls.initial_density);
  double trace = 0.0;
  for (const auto& v : tl.states) trace = std::max(trace, std::abs(unvectorize(v, 2).trace() - 1.0));

  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  const TimeGrid grid(0.0, 1.5, 60);
  bool cs = true, eq = true, strict = true;
  for (int i = 0; i < 100; ++i) {
    Mat v(2, grid.n_steps());
    const bool constant_norm = i % 2 == 0;
    for (int k = 0; k < v.cols(); ++k) {
      v(0, k) = uni(rng);
      v(1, k) = uni(rng);
      if (constant_norm) v.col(k) *= 1.3 / v.col(k).norm();
    }
    const ControlLaw c(grid, v);
    const double l2 = c.length() * c.length(), et = c.energy() * grid.duration();
    cs = cs && l2 <= et * (1.0 + 1e-12);
    if (constant_norm)
      eq = eq && std::abs(et - l2) <= 1e-9 * et;
    else
      strict = strict && (et - l2) > 1e-9 * et;
  }
  o.detail << "unitarity=" << unit << " overlap drift=" << overlap << " lindblad trace=" << trace << " ";
  o.require(unit < 1e-9, "unitarity 1e-9 over 1e4 steps");
  o.require(overlap < 1e-9, "<chi|psi> constant 1e-9");
  o.require(trace < 1e-8, "Lindblad trace 1e-8");
  o.require(cs, "L^2 <= E T");
  o.require(eq && strict, "equality iff constant norm");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"Grushin optimum reproduced", criterion1},
      {"Grushin analytic/numeric cross-check", criterion2},
      {"Grushin quantization", criterion3},
      {"Spin P1 bang-bang synthesis", criterion4},
      {"Spin P2 bang-singular synthesis", criterion5},
      {"Switching-function law", criterion6},
      {"Maximized-Hamiltonian constancy", criterion7},
      {"GRAPE gradient correctness", criterion8},
      {"Controllability", criterion9},
      {"Existence gating and chattering", criterion10},
      {"Warmup numbers", criterion11},
      {"Conservation suite", criterion12},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "[exception: " << e.what() << "]";
    }
    std::printf("criterion %2zu %s: %s | %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.str().c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}

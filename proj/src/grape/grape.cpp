#include "pmpqoc/grape/grape.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "pmpqoc/core/errors.hpp"
#include "pmpqoc/dynamics/expm.hpp"

namespace pmpqoc::grape {
namespace {

const BilinearSystem& checked_system(const Scenario& s, const ControlLaw& u) {
  const BilinearSystem& sys = s.bilinear();
  if (sys.representation() != Representation::ComplexUnitary)
    throw ArgumentError("GRAPE requires a complex-unitary system");
  if (s.target.kind != TargetKind::Free || s.cost.kind != CostKind::Fidelity)
    throw ArgumentError("GRAPE requires a free-endpoint scenario with fidelity cost");
  if (u.channels() != sys.channels()) throw ArgumentError("control channel count differs from the system");
  return sys;
}

std::vector<CMat> propagators(const BilinearSystem& sys, const ControlLaw& u) {
  const double dt = u.grid().dt();
  std::vector<CMat> out;
  out.reserve(u.grid().n_steps());
  for (int k = 0; k < u.grid().n_steps(); ++k)
    out.push_back(dynamics::expm(CMat(sys.generator(u.on_interval(k)) * dt)));
  return out;
}

CVec final_state(const Scenario& s, const ControlLaw& u) {
  const BilinearSystem& sys = checked_system(s, u);
  CVec psi = s.initial().entries;
  for (const auto& U : propagators(sys, u)) psi = U * psi;
  return psi;
}

}  // namespace

double fidelity(const Scenario& s, const ControlLaw& u) { return std::norm(s.target.state.dot(final_state(s, u))); }

double grape_cost(const Scenario& s, const ControlLaw& u) { return 0.5 * u.energy() - fidelity(s, u); }

GradientDetail grape_gradient_detail(const Scenario& s, const ControlLaw& u) {
  const BilinearSystem& sys = checked_system(s, u);
  const int n = u.grid().n_steps();
  const int m = sys.channels();
  const double dt = u.grid().dt();
  const auto props = propagators(sys, u);

  GradientDetail d;
  d.psi.reserve(n + 1);
  d.psi.push_back(s.initial().entries);
  for (int k = 0; k < n; ++k) d.psi.push_back(props[k] * d.psi.back());

  const CVec& fi = s.target.state;
  d.chi.assign(n + 1, CVec());
  d.chi[n] = 2.0 * fi.dot(d.psi[n]) * fi;
  for (int k = n - 1; k >= 0; --k) d.chi[k] = props[k].adjoint() * d.chi[k + 1];

  d.gradient.resize(m, n);
  for (int k = 0; k < n; ++k) {
    const CMat x = sys.generator(u.on_interval(k)) * dt;
    for (int j = 0; j < m; ++j) {
      const CMat e = sys.control_generator(j) * dt;
      const CMat l = dynamics::expm_frechet(x, e);
      d.gradient(j, k) = d.chi[k + 1].dot(l * d.psi[k]).real() / dt - u.values()(j, k);
    }
  }
  return d;
}

Mat grape_gradient(const Scenario& s, const ControlLaw& u) { return grape_gradient_detail(s, u).gradient; }

Mat interval_average_normal_control(const Scenario& s, const ControlLaw& u) {
  const BilinearSystem& sys = checked_system(s, u);
  const GradientDetail d = grape_gradient_detail(s, u);
  const int n = u.grid().n_steps();
  const int m = sys.channels();
  const double dt = u.grid().dt();
  static const std::array<double, 5> node{-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                          0.9061798459386640};
  static const std::array<double, 5> weight{0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                            0.4786286704993665, 0.2369268850561891};
  Mat out = Mat::Zero(m, n);
  for (int k = 0; k < n; ++k) {
    const CMat g = sys.generator(u.on_interval(k));
    for (std::size_t i = 0; i < node.size(); ++i) {
      const double tau = 0.5 * dt * (1.0 + node[i]);
      const CVec psi = dynamics::expm(CMat(g * tau)) * d.psi[k];
      const CVec chi = dynamics::expm(CMat(g * (tau - dt))) * d.chi[k + 1];
      for (int j = 0; j < m; ++j) out(j, k) += 0.5 * weight[i] * chi.dot(sys.controls()[j] * psi).imag();
    }
  }
  return out;
}

GrapeRun grape_optimize(const Scenario& s, const ControlLaw& guess, const GrapeOptions& opt) {
  checked_system(s, guess);
  GrapeRun run{guess};
  Mat u = guess.values();
  const TimeGrid grid = guess.grid();
  auto cost_of = [&](const Mat& v) {
    const double c = grape_cost(s, ControlLaw(grid, v));
    if (!std::isfinite(c)) {
      std::ostringstream os;
      os << "GRAPE: non-finite cost; iterate dump:\n" << v;
      throw NumericError(os.str());
    }
    return c;
  };
  double j = cost_of(u);
  run.cost_history.push_back(j);
  run.stop_reason = "max_iters";
  for (int it = 0; it < opt.max_iters; ++it) {
    const Mat g = grape_gradient(s, ControlLaw(grid, u));
    run.final_gradient = g;
    if (g.lpNorm<Eigen::Infinity>() < opt.grad_tol) {
      run.stop_reason = "gradient below tolerance";
      run.converged = true;
      break;
    }
    double eps = opt.eps0;
    bool accepted = false;
    for (int h = 0; h <= opt.max_halvings; ++h) {
      const Mat trial = u + eps * g;
      const double jt = cost_of(trial);
      if (jt < j) {
        u = trial;
        j = jt;
        accepted = true;
        break;
      }
      eps *= 0.5;
    }
    if (!accepted) {
      run.stop_reason = "backtracking exhausted";
      break;
    }
    run.iterations = it + 1;
    run.cost_history.push_back(j);
    run.eps_history.push_back(eps);
  }
  run.control = ControlLaw(grid, u);
  if (run.final_gradient.size() == 0 || run.stop_reason != "gradient below tolerance")
    run.final_gradient = grape_gradient(s, run.control);
  if (!run.converged && run.final_gradient.lpNorm<Eigen::Infinity>() < opt.grad_tol) {
    run.converged = true;
    run.stop_reason = "gradient below tolerance";
  }
  run.final_fidelity = fidelity(s, run.control);
  return run;
}

}  // namespace pmpqoc::grape

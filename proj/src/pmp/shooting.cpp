#include "pmpqoc/pmp/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "pmpqoc/core/errors.hpp"
#include "pmpqoc/core/parallel.hpp"

namespace pmpqoc::pmp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class V>
auto complement_impl(const V& v) {
  using M = Eigen::Matrix<typename V::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const auto n = v.size();
  Eigen::HouseholderQR<M> qr(M(v.normalized()));
  M q = qr.householderQ() * M::Identity(n, n);
  return M(q.rightCols(n - 1));
}

}  // namespace

Mat orthonormal_complement(const Vec& v) { return complement_impl(v); }

ShootingProblem::ShootingProblem(const Scenario& s, ExtremalOptions opt)
    : scenario_(s),
      model_(ControlModel::from(s)),
      opt_(opt),
      q_in_(s.initial().realified()),
      q_fi_(realify(s.target.state, s.bilinear().representation())),
      p0_(normal_p0(s.cost.kind)),
      free_time_(s.time.free) {
  if (opt_.steps <= 0) opt_.steps = s.time.steps;
  const int nr = model_.dim();
  const bool sphere = model_.on_sphere();
  if (s.target.kind == TargetKind::Free || !sphere)
    basis_ = Mat::Identity(nr, nr);
  else
    basis_ = orthonormal_complement(q_in_);
  if (sphere && s.target.kind == TargetKind::Point) target_perp_ = orthonormal_complement(q_fi_);
  if (s.target.kind == TargetKind::PhaseOrbit) {
    const CVec& psi = s.target.state;
    const CMat e = complement_impl(psi);
    orbit_perp_.resize(nr, 2 * e.cols());
    for (Eigen::Index k = 0; k < e.cols(); ++k) {
      orbit_perp_.col(2 * k) = realify(e.col(k), Representation::ComplexUnitary);
      orbit_perp_.col(2 * k + 1) = realify(CVec(cplx(0.0, 1.0) * e.col(k)), Representation::ComplexUnitary);
    }
  }
  if (n_unknowns() != n_equations())
    throw ValidationError("shooting problem is not square: " + std::to_string(n_unknowns()) + " unknowns, " +
                          std::to_string(n_equations()) + " equations");
}

int ShootingProblem::n_unknowns() const { return static_cast<int>(basis_.cols()) + (free_time_ ? 1 : 0); }

int ShootingProblem::n_equations() const {
  const int nr = model_.dim();
  int e = 0;
  switch (scenario_.target.kind) {
    case TargetKind::Point: e = model_.on_sphere() ? nr - 1 : nr; break;
    case TargetKind::PhaseOrbit: e = static_cast<int>(orbit_perp_.cols()) + 1; break;
    case TargetKind::Free: e = nr; break;
  }
  return e + (free_time_ ? 1 : 0);
}

Vec ShootingProblem::covector(const Vec& z) const { return basis_ * z.head(basis_.cols()); }

double ShootingProblem::horizon(const Vec& z) const { return free_time_ ? z(z.size() - 1) : scenario_.time.T; }

Vec ShootingProblem::encode(const Vec& p_in, double T) const {
  Vec z(n_unknowns());
  z.head(basis_.cols()) = basis_.transpose() * p_in;
  if (free_time_) z(z.size() - 1) = T;
  return z;
}

Extremal ShootingProblem::extremal(const Vec& z) const {
  return integrate_extremal(model_, q_in_, covector(z), p0_, horizon(z), opt_.steps, opt_);
}

Vec ShootingProblem::terminal_covector(const Vec& q_T) const {
  const Representation r = model_.representation();
  const CVec psi = complexify(q_T, r);
  const CVec& fi = scenario_.target.state;
  const cplx c = fi.dot(psi);
  return realify(CVec(-2.0 * p0_ * c * fi), r);
}

double ShootingProblem::maximized_hamiltonian(const Vec& q, const Vec& p) const {
  auto u = model_.maximizing_control(q, p, p0_);
  return pre_hamiltonian(model_, q, p, u ? *u : Vec::Zero(model_.channels()), p0_);
}

bool ShootingProblem::on_target(const Vec& q_T, double tol) const {
  switch (scenario_.target.kind) {
    case TargetKind::Point:
      return (q_T - q_fi_).norm() <= tol || (scenario_.target.up_to_sign && (q_T + q_fi_).norm() <= tol);
    case TargetKind::PhaseOrbit: {
      const CVec psi = complexify(q_T, model_.representation());
      return 1.0 - std::abs(scenario_.target.state.dot(psi)) <= tol;
    }
    case TargetKind::Free: return true;
  }
  return false;
}

Vec ShootingProblem::residual_at(const Extremal& ex, const Vec& z) const {
  const Vec& qT = ex.q.back();
  const Vec& pT = ex.p.back();
  Vec r(n_equations());
  int at = 0;
  switch (scenario_.target.kind) {
    case TargetKind::Point:
      if (model_.on_sphere()) {
        r.head(target_perp_.cols()) = target_perp_.transpose() * qT;
        at = static_cast<int>(target_perp_.cols());
      } else {
        r.head(qT.size()) = qT - q_fi_;
        at = static_cast<int>(qT.size());
      }
      break;
    case TargetKind::PhaseOrbit: {
      r.head(orbit_perp_.cols()) = orbit_perp_.transpose() * qT;
      at = static_cast<int>(orbit_perp_.cols());
      const Representation rep = model_.representation();
      r(at++) = complexify(pT, rep).dot(complexify(qT, rep)).imag();
      break;
    }
    case TargetKind::Free:
      r.head(pT.size()) = pT - terminal_covector(qT);
      at = static_cast<int>(pT.size());
      break;
  }
  if (free_time_) r(at++) = maximized_hamiltonian(q_in_, covector(z));
  return r;
}

Vec ShootingProblem::residual(const Vec& z) const {
  if (z.size() != n_unknowns()) throw ArgumentError("shooting residual: wrong number of unknowns");
  const Vec bad = Vec::Constant(n_equations(), kInf);
  if (free_time_ && !(horizon(z) > 0.0)) return bad;
  if (covector(z).norm() == 0.0 && p0_ == 0.0) return bad;
  try {
    return residual_at(extremal(z), z);
  } catch (const NumericError&) {
    return bad;
  }
}

Vec ShootingProblem::sample_start(std::mt19937_64& rng, double radius) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto d = basis_.cols();
  for (int attempt = 0; attempt < 100; ++attempt) {
    Vec x(d);
    for (Eigen::Index i = 0; i < d; ++i) x(i) = normal(rng);
    x.normalize();
    double T = scenario_.time.T;
    if (free_time_) {
      std::uniform_real_distribution<double> ut(scenario_.time.T_min, scenario_.time.T_max);
      T = ut(rng);
      const Vec p = basis_ * x;
      double alpha = 0.0;
      if (scenario_.cost.kind == CostKind::Time) {
        // H_M is degree-1 homogeneous in p apart from the constant p0.
        double slope = maximized_hamiltonian(q_in_, p) - p0_;
        if (slope <= 0.0) {
          x = -x;
          slope = maximized_hamiltonian(q_in_, -p) - p0_;
        }
        if (slope <= 0.0) continue;
        alpha = -p0_ / slope;
      } else {
        const double h1 = maximized_hamiltonian(q_in_, p);
        const double h2 = maximized_hamiltonian(q_in_, 2.0 * p);
        const double a = 0.5 * (h2 - 2.0 * h1);
        const double b = h1 - a;
        if (a == 0.0 || -b / a <= 0.0) continue;
        alpha = -b / a;
      }
      Vec z(d + 1);
      z.head(d) = alpha * x;
      z(d) = T;
      return z;
    }
    return Vec(radius * x);
  }
  throw NumericError("could not sample a normalizable initial covector");
}

ShootResult shoot(const ShootingProblem& problem, const Vec& guess, const ShootingOptions& opt) {
  ShootResult res;
  if (guess.size() != problem.n_unknowns()) throw ArgumentError("shoot: guess has the wrong size");
  if (problem.covector(guess).norm() == 0.0)
    throw ArgumentError("shoot: initial covector must be nonzero");
  Vec z = guess;
  Vec r = problem.residual(z);
  const int n = static_cast<int>(z.size());
  auto finish = [&](bool ok, std::string why) {
    res.converged = ok;
    res.reason = std::move(why);
    res.z = z;
    res.p_in = problem.covector(z);
    res.T = problem.horizon(z);
    res.residual_norm = r.allFinite() ? r.lpNorm<Eigen::Infinity>() : kInf;
    return res;
  };
  if (!r.allFinite()) return finish(false, "residual not finite at the initial guess");

  for (int it = 0; it <= opt.max_iter; ++it) {
    res.iterations = it;
    if (r.lpNorm<Eigen::Infinity>() < opt.tol) {
      const Extremal ex = problem.extremal(z);
      if (!problem.on_target(ex.endpoint(), 1e-6)) return finish(false, "converged onto the antipode of the target");
      const TimeSpec& ts = problem.scenario().time;
      if (problem.free_time() && (problem.horizon(z) < ts.T_min || problem.horizon(z) > ts.T_max))
        return finish(false, "converged outside the time window [T_min, T_max]");
      return finish(true, "residual below tolerance");
    }
    if (it == opt.max_iter) break;
    Mat jac(r.size(), n);
    for (int i = 0; i < n; ++i) {
      Vec zi = z;
      const double h = opt.fd_step * std::max(1.0, std::abs(z(i)));
      zi(i) += h;
      const Vec ri = problem.residual(zi);
      if (!ri.allFinite()) return finish(false, "residual not finite while forming the Jacobian");
      jac.col(i) = (ri - r) / h;
    }
    Eigen::JacobiSVD<Mat> svd(jac, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec sv = svd.singularValues();
    if (sv(sv.size() - 1) == 0.0 || sv(0) / sv(sv.size() - 1) > opt.max_condition)
      return finish(false, "Jacobian numerically singular");
    const Vec step = -svd.solve(r);

    double lambda = opt.damping;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls) {
      const Vec zn = z + lambda * step;
      const Vec rn = problem.residual(zn);
      if (rn.allFinite() && rn.norm() < r.norm()) {
        z = zn;
        r = rn;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) return finish(false, "line search could not reduce the residual");
  }
  return finish(false, "max_iter reached");
}

MultiStartResult multi_start(const ShootingProblem& problem, const ShootingOptions& opt) {
  MultiStartResult out;
  out.starts.resize(opt.starts);
  parallel_for(opt.starts, [&](int i) {
    std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                      static_cast<std::uint32_t>(i)};
    std::mt19937_64 rng(seq);
    StartOutcome so{i, {}, 0.0};
    try {
      const Vec z0 = problem.sample_start(rng, opt.covector_radius);
      so.result = shoot(problem, z0, opt);
      if (so.result.converged) {
        const Extremal ex = problem.extremal(so.result.z);
        so.cost = ex.running_cost;
        if (problem.scenario().cost.has_terminal_term()) {
          const CVec psi = complexify(ex.endpoint(), ex.representation);
          so.cost -= std::norm(problem.scenario().target.state.dot(psi));
        }
      }
    } catch (const Error& e) {
      so.result.converged = false;
      so.result.reason = e.what();
      so.result.residual_norm = kInf;
    }
    out.starts[i] = std::move(so);
  });
  std::stable_sort(out.starts.begin(), out.starts.end(), [](const StartOutcome& a, const StartOutcome& b) {
    if (a.result.residual_norm != b.result.residual_norm) return a.result.residual_norm < b.result.residual_norm;
    return a.start_index < b.start_index;
  });

  for (const auto& s : out.starts) {
    if (!s.result.converged) continue;
    bool merged = false;
    for (auto& f : out.families) {
      const double dt = std::abs(f.T - s.result.T);
      const double dp = (f.p_in - s.result.p_in).norm();
      if (dt <= 1e-6 * std::max(1.0, f.T) && dp <= 1e-6 * std::max(1.0, f.p_in.norm())) {
        ++f.members;
        merged = true;
        break;
      }
    }
    if (merged) continue;
    const Extremal ex = problem.extremal(s.result.z);
    out.families.push_back({s.result.p_in, s.result.T, s.cost, s.result.residual_norm, s.start_index, 1, ex.cls,
                            ex.endpoint()});
  }
  std::stable_sort(out.families.begin(), out.families.end(), [](const ExtremalFamily& a, const ExtremalFamily& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.T != b.T) return a.T < b.T;
    return a.start_index < b.start_index;
  });
  return out;
}

}  // namespace pmpqoc::pmp

#include "pmpqoc/analytic/spin.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "pmpqoc/core/errors.hpp"
#include "pmpqoc/dynamics/expm.hpp"
#include "pmpqoc/dynamics/propagate.hpp"

namespace pmpqoc::analytic {
namespace {

constexpr double pi = std::numbers::pi;

void check_delta(double delta) {
  if (!std::isfinite(delta) || std::abs(delta) > 1.0)
    throw ArgumentError("spin synthesis assumes |delta| <= 1, got " + std::to_string(delta));
}

double omega_of(double delta) { return std::sqrt(1.0 + delta * delta); }

Mat drift(double delta) {
  Mat f = Mat::Zero(3, 3);
  f(0, 1) = -delta;
  f(1, 0) = delta;
  return f;
}

Mat control() {
  Mat g = Mat::Zero(3, 3);
  g(1, 2) = -1.0;
  g(2, 1) = 1.0;
  return g;
}

Vec north() { return Vec::Unit(3, 2); }

Vec flow(double delta, double u, double t, const Vec& q) {
  return dynamics::expm(Mat((drift(delta) + u * control()) * t)) * q;
}

Vec run_arcs(double delta, const std::vector<SpinArc>& arcs, const Vec& q0) {
  Vec q = q0;
  for (const auto& a : arcs) q = flow(delta, a.control, a.duration, q);
  return q;
}

// Orthonormal basis of the plane orthogonal to a unit vector.
Mat complement(const Vec& v) {
  Eigen::HouseholderQR<Mat> qr(v);
  return Mat(qr.householderQ()).rightCols(v.size() - 1);
}

// Newton on two durations so that the endpoint hits target (not its antipode).
std::optional<Vec> solve_pair(const std::function<Vec(const Vec&)>& endpoint, const Vec& target, const Vec& start) {
  const Mat b = complement(target);
  Vec x = start;
  for (int it = 0; it < 60; ++it) {
    const Vec r = b.transpose() * endpoint(x);
    if (r.norm() < 1e-11) {
      if ((x.array() < -1e-9).any() || endpoint(x).dot(target) <= 0.0) return std::nullopt;
      return x.cwiseMax(0.0);
    }
    Mat j(2, 2);
    for (int c = 0; c < 2; ++c) {
      const double h = 1e-7 * std::max(1.0, std::abs(x(c)));
      Vec xp = x, xm = x;
      xp(c) += h;
      xm(c) -= h;
      j.col(c) = b.transpose() * (endpoint(xp) - endpoint(xm)) / (2.0 * h);
    }
    Eigen::JacobiSVD<Mat> svd(j, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.singularValues()(1) < 1e-12 * std::max(1.0, svd.singularValues()(0))) return std::nullopt;
    Vec step = svd.solve(-r);
    double lambda = 1.0;
    const double r0 = r.norm();
    while (lambda > 1e-6 && (b.transpose() * endpoint(x + lambda * step)).norm() >= r0) lambda *= 0.5;
    x += lambda * step;
  }
  return std::nullopt;
}

CompetitorFamily best_of(std::string name, const std::function<std::vector<SpinArc>(const Vec&)>& make, double delta,
                         const Vec& target, double range0, double range1, int grid) {
  CompetitorFamily fam;
  fam.name = std::move(name);
  auto endpoint = [&](const Vec& x) { return run_arcs(delta, make(x), north()); };
  fam.total = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= grid; ++i) {
    for (int k = 1; k <= grid; ++k) {
      const Vec start{{range0 * i / (grid + 1.0), range1 * k / (grid + 1.0)}};
      const auto sol = solve_pair(endpoint, target, start);
      if (!sol) continue;
      double total = 0.0;
      for (const auto& a : make(*sol)) total += a.duration;
      if (total < fam.total) {
        fam.found = true;
        fam.total = total;
        fam.durations.clear();
        for (const auto& a : make(*sol)) fam.durations.push_back(a.duration);
      }
    }
  }
  if (!fam.found) fam.total = 0.0;
  return fam;
}

}  // namespace

std::string_view to_string(SpinProblem p) { return p == SpinProblem::P1 ? "P1" : "P2"; }

double SpinSynthesis::total_duration() const {
  double t = 0.0;
  for (const auto& a : arcs) t += a.duration;
  return t;
}

std::vector<double> SpinSynthesis::switch_times() const {
  std::vector<double> out;
  double t = 0.0;
  for (std::size_t i = 0; i + 1 < arcs.size(); ++i) {
    t += arcs[i].duration;
    out.push_back(t);
  }
  return out;
}

BilinearSystem spin_system(double delta) {
  return BilinearSystem::real(Representation::RealOrthogonal, drift(delta), {control()});
}

Vec spin_bang_arc(double delta, int epsilon, double t) {
  check_delta(delta);
  if (epsilon != 1 && epsilon != -1) throw ArgumentError("epsilon must be +1 or -1");
  const double w = omega_of(delta);
  const double c = std::cos(w * t), s = std::sin(w * t);
  return Vec{{epsilon * delta * (1.0 - c) / (w * w), -epsilon * s / w, 1.0 + (c - 1.0) / (w * w)}};
}

double spin_t1(double delta) {
  check_delta(delta);
  return (pi - std::acos(delta * delta)) / omega_of(delta);
}

double spin_t2(double delta) {
  check_delta(delta);
  return (pi + std::acos(delta * delta)) / omega_of(delta);
}

SpinSynthesis spin_p1(double delta, bool symmetric, int epsilon) {
  check_delta(delta);
  if (epsilon != 1 && epsilon != -1) throw ArgumentError("epsilon must be +1 or -1");
  const double t1 = spin_t1(delta), t2 = spin_t2(delta);
  const double e = epsilon;
  SpinSynthesis s{delta, omega_of(delta), SpinProblem::P1, {}};
  s.arcs = {{SpinArcType::Bang, e, symmetric ? t2 : t1}, {SpinArcType::Bang, -e, symmetric ? t1 : t2}};
  return s;
}

SpinSynthesis spin_p2(double delta) {
  if (!(delta > 0.0))
    throw ArgumentError("spin_p2 needs delta > 0: the singular duration arctan(sqrt(1-delta^2)/delta)/delta "
                        "diverges as delta -> 0");
  check_delta(delta);
  const double ts = std::atan(std::sqrt(1.0 - delta * delta) / delta) / delta;
  SpinSynthesis s{delta, omega_of(delta), SpinProblem::P2, {}};
  s.arcs = {{SpinArcType::Bang, 1.0, spin_t1(delta)}, {SpinArcType::Singular, 0.0, ts}};
  return s;
}

Vec spin_endpoint(const SpinSynthesis& s, const Vec& q0) {
  if (q0.size() != 3) throw ArgumentError("spin state must have 3 entries");
  return run_arcs(s.delta, s.arcs, q0);
}

std::vector<SpinSample> spin_sample(const SpinSynthesis& s, int n) {
  if (n < 1) throw ArgumentError("spin_sample needs n >= 1");
  const double total = s.total_duration();
  std::vector<double> start_t;
  std::vector<Vec> start_q;
  double t = 0.0;
  Vec q = north();
  for (const auto& a : s.arcs) {
    start_t.push_back(t);
    start_q.push_back(q);
    q = flow(s.delta, a.control, a.duration, q);
    t += a.duration;
  }
  std::vector<SpinSample> out;
  out.reserve(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double tk = total * k / n;
    std::size_t i = 0;
    while (i + 1 < s.arcs.size() && tk >= start_t[i + 1]) ++i;
    const auto& arc = s.arcs[i];
    out.push_back({tk, flow(s.delta, arc.control, tk - start_t[i], start_q[i]), arc.control});
  }
  return out;
}

namespace {

// Covector at the north pole whose u = +1 bang reaches the equator at t1 with Phi = Phi' = 0 and H = 0.
Vec equator_switch_covector(double delta, double t1) {
  const Vec q1 = spin_bang_arc(delta, 1, t1);
  const Mat f = drift(delta), g = control();
  const Mat gf = g * f - f * g;
  Mat m(4, 3);
  m.row(0) = (g * q1).transpose();
  m.row(1) = (gf * q1).transpose();
  m.row(2) = (f * q1).transpose();
  m.row(3) = q1.transpose();
  const Vec rhs{{0.0, 0.0, 1.0, 0.0}};
  const Vec p1 = m.colPivHouseholderQr().solve(rhs);
  if ((m * p1 - rhs).norm() > 1e-10) throw NumericError("spin_p2_covector: inconsistent switching conditions");
  return dynamics::expm(Mat(-(f + g) * t1)) * p1;
}

}  // namespace

Vec spin_p1_covector(double delta) {
  check_delta(delta);
  if (!(delta > 0.0) || delta > 1.0) throw ArgumentError("spin_p1_covector needs 0 < delta <= 1");
  return equator_switch_covector(delta, spin_t1(delta));
}

Vec spin_p2_covector(double delta) { return equator_switch_covector(delta, spin_p2(delta).arcs[0].duration); }

Vec spin_abnormal_covector(double delta, const Vec& q, double beta) {
  check_delta(delta);
  if (q.size() != 3) throw ArgumentError("spin state must have 3 entries");
  const Vec fq = drift(delta) * q, gq = control() * q;
  Mat basis(3, 2);
  basis << fq, gq;
  const Mat gram = basis.transpose() * basis;
  if (std::abs(gram.determinant()) < 1e-12)
    throw ArgumentError("spin_abnormal_covector: Fq and Gq are parallel at this state");
  // p = basis c with (p.Fq, p.Gq) = (-beta, beta).
  const Vec c = gram.ldlt().solve(Vec{{-beta, beta}});
  return basis * c;
}

CompetitorReport spin_competitors(double delta, SpinProblem problem, int grid) {
  check_delta(delta);
  if (grid < 2) throw ArgumentError("spin_competitors needs grid >= 2");
  CompetitorReport rep{problem, delta, 0.0, {}, true};
  const double w = omega_of(delta);
  const double bang_range = 2.0 * pi / w;
  const double sing_range = 2.0 * pi / std::max(std::abs(delta), 0.25);
  using Arcs = std::vector<SpinArc>;
  Vec target;
  if (problem == SpinProblem::P1) {
    rep.synthesized = spin_p1(delta).total_duration();
    target = -north();
    const double t1 = spin_t1(delta);
    for (int e : {1, -1}) {
      rep.families.push_back(best_of("bang-bang(" + std::string(e > 0 ? "+" : "-") + ")",
                                     [e](const Vec& x) -> Arcs {
                                       return {{SpinArcType::Bang, double(e), x(0)}, {SpinArcType::Bang, double(-e), x(1)}};
                                     },
                                     delta, target, bang_range, bang_range, grid));
      for (int e2 : {1, -1}) {
        rep.families.push_back(best_of(
            "bang-singular-bang(" + std::string(e > 0 ? "+" : "-") + std::string(e2 > 0 ? "+" : "-") + ")",
            [e, e2, t1](const Vec& x) -> Arcs {
              return {{SpinArcType::Bang, double(e), t1}, {SpinArcType::Singular, 0.0, x(0)},
                      {SpinArcType::Bang, double(e2), x(1)}};
            },
            delta, target, sing_range, bang_range, grid));
      }
    }
  } else {
    rep.synthesized = spin_p2(delta).total_duration();
    target = Vec::Unit(3, 0);
    for (int e : {1, -1}) {
      const std::string sign = e > 0 ? "+" : "-";
      rep.families.push_back(best_of("bang-bang(" + sign + ")",
                                     [e](const Vec& x) -> Arcs {
                                       return {{SpinArcType::Bang, double(e), x(0)}, {SpinArcType::Bang, double(-e), x(1)}};
                                     },
                                     delta, target, bang_range, bang_range, grid));
      rep.families.push_back(best_of("bang-singular(" + sign + ")",
                                     [e](const Vec& x) -> Arcs {
                                       return {{SpinArcType::Bang, double(e), x(0)}, {SpinArcType::Singular, 0.0, x(1)}};
                                     },
                                     delta, target, bang_range, sing_range, grid));
    }
  }
  for (const auto& f : rep.families)
    if (f.found && f.total < rep.synthesized - 1e-8) rep.synthesized_is_best = false;
  return rep;
}

}  // namespace pmpqoc::analytic

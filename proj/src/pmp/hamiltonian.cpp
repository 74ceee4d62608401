#include "pmpqoc/pmp/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pmpqoc/core/errors.hpp"

namespace pmpqoc::pmp {

ControlModel::ControlModel(const BilinearSystem& system, ControlBounds bounds, CostKind cost, Vec weights)
    : rep_(system.representation()),
      sphere_(system.on_sphere()),
      a0_(system.real_drift()),
      a_(system.real_controls()),
      bounds_(std::move(bounds)),
      cost_(cost),
      c_(std::move(weights)) {
  if (c_.size() != channels()) throw ArgumentError("running-cost weights need one entry per channel");
  if (bounds_.kind == BoundsKind::Ball && cost_ != CostKind::Time && channels() > 1 &&
      (c_.array() != c_(0)).any())
    throw ArgumentError("ball bounds with unequal quadratic weights are not supported");
}

ControlModel ControlModel::from(const Scenario& s) {
  const BilinearSystem& sys = s.bilinear();
  return ControlModel(sys, s.bounds, s.cost.kind, s.cost.running_weights(sys.channels()));
}

Mat ControlModel::generator(const Vec& u) const {
  Mat g = a0_;
  for (int j = 0; j < channels(); ++j) g += u(j) * a_[j];
  return g;
}

Vec ControlModel::phi(const Vec& q, const Vec& p) const {
  Vec out(channels());
  for (int j = 0; j < channels(); ++j) out(j) = p.dot(a_[j] * q);
  return out;
}

double ControlModel::running_cost(const Vec& u) const {
  if (cost_ == CostKind::Time) return 1.0;
  return (c_.array() * u.array().square()).sum();
}

bool ControlModel::is_bang(double p0) const {
  if (bounds_.kind != BoundsKind::Box) return false;
  return cost_ == CostKind::Time || p0 == 0.0;
}

std::optional<Vec> ControlModel::maximizing_control(const Vec& q, const Vec& p, double p0) const {
  const int m = channels();
  const Vec f = phi(q, p);
  const bool quadratic = cost_ != CostKind::Time && p0 < 0.0;

  if (quadratic) {
    Vec u = (f.array() / (-2.0 * p0 * c_.array())).matrix();
    switch (bounds_.kind) {
      case BoundsKind::Unbounded: return u;
      case BoundsKind::Box:
        for (int j = 0; j < m; ++j) u(j) = std::clamp(u(j), bounds_.intervals[j].lo, bounds_.intervals[j].hi);
        return u;
      case BoundsKind::Ball:
        if (u.norm() > bounds_.radius) u *= bounds_.radius / u.norm();
        return u;
      case BoundsKind::Discrete: break;
    }
  }

  switch (bounds_.kind) {
    case BoundsKind::Box: {
      Vec u(m);
      for (int j = 0; j < m; ++j) {
        if (f(j) == 0.0) return std::nullopt;
        u(j) = f(j) > 0.0 ? bounds_.intervals[j].hi : bounds_.intervals[j].lo;
      }
      return u;
    }
    case BoundsKind::Ball: {
      const double nf = f.norm();
      if (nf == 0.0) return std::nullopt;
      return Vec(bounds_.radius * f / nf);
    }
    case BoundsKind::Discrete: {
      double best = -std::numeric_limits<double>::infinity();
      Vec arg;
      for (const auto& pt : bounds_.points) {
        const double h = f.dot(pt) + p0 * running_cost(pt);
        if (h > best) {
          best = h;
          arg = pt;
        }
      }
      return arg;
    }
    case BoundsKind::Unbounded: {
      // Abnormal with unbounded U: Phi = 0 and d/dt Phi = 0 give R u = s.
      Mat r(m, m);
      Vec s(m);
      for (int k = 0; k < m; ++k) {
        s(k) = p.dot((a0_ * a_[k] - a_[k] * a0_) * q);
        for (int j = 0; j < m; ++j) r(k, j) = p.dot((a_[k] * a_[j] - a_[j] * a_[k]) * q);
      }
      if (m == 0) return Vec(0);
      Eigen::JacobiSVD<Mat> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const Vec sv = svd.singularValues();
      if (sv(m - 1) == 0.0 || sv(0) / sv(m - 1) >= 1e8) return std::nullopt;
      return Vec(svd.solve(s));
    }
  }
  return std::nullopt;
}

double normal_p0(CostKind kind) {
  switch (kind) {
    case CostKind::Energy:
    case CostKind::CustomQuadratic: return -0.5;
    case CostKind::Time:
    case CostKind::Fidelity: return -1.0;
  }
  return -1.0;
}

double pre_hamiltonian(const ControlModel& m, const Vec& q, const Vec& p, const Vec& u, double p0) {
  if (q.size() != m.dim() || p.size() != m.dim() || u.size() != m.channels())
    throw ArgumentError("pre_hamiltonian: dimension mismatch");
  return p.dot(m.generator(u) * q) + p0 * m.running_cost(u);
}

double pre_hamiltonian(const Scenario& s, const CVec& q, const CVec& p, const Vec& u, double p0) {
  const ControlModel m = ControlModel::from(s);
  const Representation r = s.bilinear().representation();
  return pre_hamiltonian(m, realify(q, r), realify(p, r), u, p0);
}

double normal_control_bilinear(const CVec& psi, const CVec& chi, const CMat& h) {
  if (psi.size() != chi.size() || h.rows() != psi.size()) throw ArgumentError("normal_control: dimension mismatch");
  return chi.dot(h * psi).imag();
}

AbnormalControl abnormal_control_system(const CVec& psi, const CVec& chi, const BilinearSystem& system) {
  if (system.representation() != Representation::ComplexUnitary)
    throw ArgumentError("abnormal_control_system needs a complex-unitary system");
  const int n = system.dimension();
  if (psi.size() != n || chi.size() != n) throw ArgumentError("abnormal_control_system: dimension mismatch");
  const int m = system.channels();
  const auto& h = system.controls();
  const CMat& h0 = system.drift();
  AbnormalControl out;
  out.R.resize(m, m);
  out.s.resize(m);
  for (int k = 0; k < m; ++k) {
    out.s(k) = chi.dot((h0 * h[k] - h[k] * h0) * psi).real();
    for (int j = 0; j < m; ++j) out.R(k, j) = chi.dot((h[k] * h[j] - h[j] * h[k]) * psi).real();
  }
  if (m == 1) out.constraint = out.s(0);
  if (m == 0) {
    out.singular = true;
    return out;
  }
  Eigen::JacobiSVD<Mat> svd(out.R, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec sv = svd.singularValues();
  if (sv(m - 1) == 0.0 || sv(0) / sv(m - 1) >= 1e8) {
    out.singular = true;
    return out;
  }
  out.u = svd.solve(out.s);
  return out;
}

Mat spin_drift(double delta) {
  Mat f = Mat::Zero(3, 3);
  f(0, 1) = -delta;
  f(1, 0) = delta;
  return f;
}

Mat spin_control() {
  Mat g = Mat::Zero(3, 3);
  g(1, 2) = -1.0;
  g(2, 1) = 1.0;
  return g;
}

double switching_function(const Vec& p, const Vec& q) {
  if (p.size() != 3 || q.size() != 3) throw ArgumentError("switching_function needs 3-vectors");
  return p.dot(spin_control() * q);
}

}  // namespace pmpqoc::pmp

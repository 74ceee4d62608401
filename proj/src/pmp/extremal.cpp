#include "pmpqoc/pmp/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "pmpqoc/core/errors.hpp"

namespace pmpqoc::pmp {
namespace {

struct Joint {
  Vec q;
  Vec p;
  double cost;
};

using Law = std::function<Vec(const Vec&, const Vec&)>;

Joint rk4(const ControlModel& m, const Joint& y, double h, const Law& law) {
  auto deriv = [&](const Vec& q, const Vec& p, Vec& dq, Vec& dp, double& dc) {
    const Vec u = law(q, p);
    const Mat a = m.generator(u);
    dq = a * q;
    dp = -a.transpose() * p;
    dc = m.running_cost(u);
  };
  Vec k1q, k1p, k2q, k2p, k3q, k3p, k4q, k4p;
  double c1, c2, c3, c4;
  deriv(y.q, y.p, k1q, k1p, c1);
  deriv(y.q + 0.5 * h * k1q, y.p + 0.5 * h * k1p, k2q, k2p, c2);
  deriv(y.q + 0.5 * h * k2q, y.p + 0.5 * h * k2p, k3q, k3p, c3);
  deriv(y.q + h * k3q, y.p + h * k3p, k4q, k4p, c4);
  return {y.q + h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q), y.p + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
          y.cost + h / 6.0 * (c1 + 2.0 * c2 + 2.0 * c3 + c4)};
}

Mat comm(const Mat& a, const Mat& b) { return a * b - b * a; }

enum class Mode { Feedback, Bang, Singular };

class Integrator {
 public:
  Integrator(const ControlModel& m, double p0, const ExtremalOptions& opt) : m_(m), p0_(p0), opt_(opt) {
    if (m_.channels() == 1) {
      const Mat& f = m_.drift();
      const Mat& g = m_.controls()[0];
      gf_ = comm(g, f);
      gff_ = comm(gf_, f);
      gfg_ = comm(gf_, g);
    }
  }

  Extremal run(const Vec& q_in, const Vec& p_in, double T, int steps) {
    const TimeGrid grid(0.0, T, steps);
    const int m = m_.channels();
    Extremal ex{.grid = grid,
                .representation = m_.representation(),
                .cls = p0_ == 0.0 ? ExtremalClass::Abnormal : ExtremalClass::Normal,
                .p0 = p0_};
    ex.q.reserve(steps + 1);
    ex.p.reserve(steps + 1);
    ex.controls.resize(m, steps + 1);
    ex.phi.resize(m, steps + 1);
    ex.types.reserve(steps);

    Joint y{q_in, p_in, 0.0};
    init_mode(y, ex, 0.0);
    record(y, ex, 0);
    for (int k = 0; k < steps; ++k) {
      ex.types.push_back(current_type());
      const double t0 = grid.node(k);
      const double h = grid.node(k + 1) - t0;
      if (mode_ == Mode::Bang) {
        y = bang_step(y, t0, h, ex);
      } else {
        y = rk4(m_, y, h, law());
      }
      if (!y.q.allFinite() || !y.p.allFinite())
        throw NumericError("extremal integration produced non-finite values at t = " + std::to_string(grid.node(k + 1)));
      record(y, ex, k + 1);
    }
    ex.running_cost = y.cost;
    return ex;
  }

 private:
  Law law() const {
    switch (mode_) {
      case Mode::Bang: {
        const Vec u = bang_u_;
        return [u](const Vec&, const Vec&) { return u; };
      }
      case Mode::Singular: return [this](const Vec& q, const Vec& p) { return singular_u(q, p); };
      case Mode::Feedback: break;
    }
    return [this](const Vec& q, const Vec& p) {
      auto u = m_.maximizing_control(q, p, p0_);
      if (!u) throw NumericError("maximizing control is undetermined along the extremal (Phi = 0)");
      return *u;
    };
  }

  ControlType current_type() const {
    switch (mode_) {
      case Mode::Singular: return ControlType::Singular;
      case Mode::Bang:
        if (m_.channels() == 1) return sign_(0) > 0 ? ControlType::BangPlus : ControlType::BangMinus;
        return ControlType::BangPlus;
      case Mode::Feedback: break;
    }
    return ControlType::Regular;
  }

  Vec singular_u(const Vec& q, const Vec& p) const {
    const double den = p.dot(gfg_ * q);
    if (den == 0.0) throw NumericError("singular control undefined: p[[G,F],G]q = 0");
    return Vec::Constant(1, -p.dot(gff_ * q) / den);
  }

  // d/dt Phi_j under the current bang control.
  double dphi(const Joint& y, int j) const {
    const Mat a = m_.generator(bang_u_);
    return y.p.dot(comm(m_.controls()[j], a) * y.q);
  }

  void set_bang_u() {
    const auto& iv = m_.bounds().intervals;
    bang_u_.resize(m_.channels());
    for (int j = 0; j < m_.channels(); ++j) bang_u_(j) = sign_(j) > 0 ? iv[j].hi : iv[j].lo;
  }

  bool singular_admissible(const Joint& y) const {
    if (!opt_.allow_singular || m_.channels() != 1) return false;
    const double den = y.p.dot(gfg_ * y.q);
    if (den == 0.0) return false;
    const double us = -y.p.dot(gff_ * y.q) / den;
    const auto& iv = m_.bounds().intervals[0];
    return us >= iv.lo - 1e-9 && us <= iv.hi + 1e-9;
  }

  // Phi and Phi' both vanish: enter the singular arc, or halt if off the locus.
  bool try_enter_singular(const Joint& y, double t, Extremal& ex) {
    if (!singular_admissible(y)) return false;
    const double loc = singular_locus_residual(m_, y.q);
    if (loc > 10.0 * opt_.phi_tol)
      throw NumericError("singular-control ambiguity at t = " + std::to_string(t) +
                         ": Phi and Phi' vanish but the state is off the singular locus (residual " +
                         std::to_string(loc) + ")");
    mode_ = Mode::Singular;
    ex.singular_entry = t;
    return true;
  }

  void init_mode(const Joint& y, Extremal& ex, double t) {
    if (!m_.is_bang(p0_)) {
      mode_ = Mode::Feedback;
      return;
    }
    mode_ = Mode::Bang;
    const int m = m_.channels();
    const Vec f = m_.phi(y.q, y.p);
    sign_ = Eigen::VectorXi::Ones(m);
    bang_u_ = Vec::Zero(m);
    bool flat = false;
    for (int j = 0; j < m; ++j) {
      const double dj = y.p.dot(comm(m_.controls()[j], m_.drift()) * y.q);
      if (f(j) != 0.0 && std::abs(f(j)) > opt_.phi_tol) {
        sign_(j) = f(j) > 0.0 ? 1 : -1;
      } else if (std::abs(dj) > opt_.touch_dphi) {
        sign_(j) = dj > 0.0 ? 1 : -1;
      } else {
        sign_(j) = f(j) < 0.0 ? -1 : 1;
        flat = true;
      }
    }
    set_bang_u();
    if (flat && m == 1) try_enter_singular(y, t, ex);
  }

  template <class F>
  double bisect(double lo, double hi, F&& positive_at) const {
    // positive_at(lo) holds, positive_at(hi) fails.
    while (hi - lo > opt_.switch_tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (positive_at(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  Joint bang_step(Joint y, double t, double h, Extremal& ex) {
    double remaining = h;
    const int m = m_.channels();
    for (int guard = 0; remaining > 0.0 && guard < 64; ++guard) {
      if (mode_ != Mode::Bang) return rk4(m_, y, remaining, law());
      const Law lw = law();
      const Joint y1 = rk4(m_, y, remaining, lw);
      const Vec f1 = m_.phi(y1.q, y1.p);

      // Earliest crossing over all channels.
      double tau = remaining + 1.0;
      int chan = -1;
      for (int j = 0; j < m; ++j) {
        if (sign_(j) * f1(j) >= 0.0) continue;
        const double s = sign_(j);
        const double r = bisect(0.0, remaining, [&](double x) {
          const Joint z = rk4(m_, y, x, lw);
          return s * m_.phi(z.q, z.p)(j) >= 0.0;
        });
        if (r < tau) {
          tau = r;
          chan = j;
        }
      }

      // Interior minimum of s * Phi without crossing (single input only).
      bool touch = false;
      if (chan < 0 && m == 1 && (opt_.allow_singular || opt_.switch_at_touch)) {
        const double s = sign_(0);
        const double d0 = s * dphi(y, 0);
        const double d1 = s * dphi(y1, 0);
        if (d0 < 0.0 && d1 > 0.0) {
          const double r = bisect(0.0, remaining, [&](double x) { return s * dphi(rk4(m_, y, x, lw), 0) < 0.0; });
          const Joint z = rk4(m_, y, r, lw);
          const bool just_switched = !ex.switch_times.empty() && t + r - ex.switch_times.back() < 1e-9;
          if (!just_switched && std::abs(m_.phi(z.q, z.p)(0)) <= opt_.phi_tol &&
              (singular_admissible(z) || opt_.switch_at_touch)) {
            tau = r;
            chan = 0;
            touch = true;
          }
        }
      }

      if (chan < 0) return y1;

      y = rk4(m_, y, tau, lw);
      t += tau;
      remaining -= tau;
      const double d = dphi(y, chan);
      if (m == 1 && (touch || std::abs(d) <= opt_.touch_dphi) && std::abs(m_.phi(y.q, y.p)(0)) <= opt_.phi_tol &&
          try_enter_singular(y, t, ex))
        continue;
      if (touch && !opt_.switch_at_touch) continue;
      sign_(chan) = -sign_(chan);
      set_bang_u();
      ex.switch_times.push_back(t);
    }
    if (remaining > 0.0) y = rk4(m_, y, remaining, law());
    return y;
  }

  Vec node_control(const Joint& y) const {
    switch (mode_) {
      case Mode::Bang: return bang_u_;
      case Mode::Singular: return singular_u(y.q, y.p);
      case Mode::Feedback: break;
    }
    auto u = m_.maximizing_control(y.q, y.p, p0_);
    if (!u) throw NumericError("maximizing control is undetermined along the extremal (Phi = 0)");
    return *u;
  }

  void record(const Joint& y, Extremal& ex, int k) {
    const Vec u = node_control(y);
    ex.q.push_back(y.q);
    ex.p.push_back(y.p);
    ex.controls.col(k) = u;
    ex.phi.col(k) = m_.phi(y.q, y.p);
    ex.hamiltonian.push_back(pre_hamiltonian(m_, y.q, y.p, u, p0_));
  }

  const ControlModel& m_;
  double p0_;
  ExtremalOptions opt_;
  Mode mode_ = Mode::Feedback;
  Eigen::VectorXi sign_;
  Vec bang_u_;
  Mat gf_, gff_, gfg_;
};

}  // namespace

double singular_locus_residual(const ControlModel& model, const Vec& q) {
  if (model.channels() != 1) return 0.0;
  const Mat& f = model.drift();
  const Mat& g = model.controls()[0];
  const Mat gf = comm(g, f);
  const double ng = Eigen::JacobiSVD<Mat>(g).singularValues()(0);
  const double ngf = Eigen::JacobiSVD<Mat>(gf).singularValues()(0);
  if (ng == 0.0 || ngf == 0.0) return 0.0;
  const Vec a = g * q;
  const Vec b = gf * q;
  const double det = a.squaredNorm() * b.squaredNorm() - std::pow(a.dot(b), 2);
  return std::sqrt(std::max(0.0, det)) / (ng * ngf);
}

Extremal integrate_extremal(const ControlModel& model, const Vec& q_in, const Vec& p_in, double p0, double T,
                            int steps, const ExtremalOptions& opt) {
  if (q_in.size() != model.dim() || p_in.size() != model.dim())
    throw ArgumentError("integrate_extremal: covector/state dimension mismatch");
  if (p0 > 0.0) throw ArgumentError("integrate_extremal: p0 must be <= 0");
  if (p_in.norm() + std::abs(p0) <= 1e-12) throw ArgumentError("integrate_extremal: (p, p0) must not vanish");
  if (!(T > 0.0)) throw ArgumentError("integrate_extremal: T must be positive");
  if (model.bounds().kind == BoundsKind::Discrete && p0 != 0.0 && model.cost_kind() == CostKind::Time)
    throw ArgumentError("integrate_extremal: discrete control sets are not supported");
  Integrator in(model, p0, opt);
  return in.run(q_in, p_in, T, steps);
}

Extremal integrate_extremal(const Scenario& s, const Vec& p_in, double T, const ExtremalOptions& opt) {
  const ControlModel model = ControlModel::from(s);
  const int steps = opt.steps > 0 ? opt.steps : s.time.steps;
  return integrate_extremal(model, s.initial().realified(), p_in, normal_p0(s.cost.kind), T, steps, opt);
}

ControlLaw Extremal::control_law() const {
  const int n = grid.n_steps();
  Mat v(controls.rows(), n);
  for (int k = 0; k < n; ++k) {
    const bool bang = types[k] == ControlType::BangPlus || types[k] == ControlType::BangMinus;
    v.col(k) = bang ? Vec(controls.col(k)) : Vec(0.5 * (controls.col(k) + controls.col(k + 1)));
  }
  return ControlLaw(grid, std::move(v));
}

double Extremal::hamiltonian_spread() const {
  const auto [lo, hi] = std::minmax_element(hamiltonian.begin(), hamiltonian.end());
  double mean = 0.0;
  for (double h : hamiltonian) mean += h;
  mean /= static_cast<double>(hamiltonian.size());
  return (*hi - *lo) / std::max(1.0, std::abs(mean));
}

}  // namespace pmpqoc::pmp

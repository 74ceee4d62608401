#include "pmpqoc/pmp/arcs.hpp"

#include <cmath>

#include "pmpqoc/core/errors.hpp"

namespace pmpqoc::pmp {

std::string to_string(ArcLabel l) {
  switch (l) {
    case ArcLabel::BangPlus: return "bang(+1)";
    case ArcLabel::BangMinus: return "bang(-1)";
    case ArcLabel::Singular: return "singular";
    case ArcLabel::Switch: return "switch";
  }
  return "?";
}

ArcClassification classify_arcs(const Extremal& ex, const ControlModel& model, double phi_tol, int window) {
  if (ex.phi.rows() != 1) throw ArgumentError("classify_arcs needs a single-input extremal");
  const int nodes = static_cast<int>(ex.phi.cols());
  const int n = nodes - 1;

  // Node signs: +1, -1, or 0 when |Phi| <= phi_tol.
  std::vector<int> sign(nodes);
  for (int k = 0; k < nodes; ++k) {
    const double f = ex.phi(0, k);
    sign[k] = std::abs(f) <= phi_tol ? 0 : (f > 0.0 ? 1 : -1);
  }

  std::vector<bool> singular_node(nodes, false);
  for (int k = 0; k < nodes;) {
    if (sign[k] != 0) {
      ++k;
      continue;
    }
    int e = k;
    while (e < nodes && sign[e] == 0) ++e;
    if (e - k >= window) {
      for (int j = k; j < e; ++j) {
        const double loc = singular_locus_residual(model, ex.q[j]);
        if (loc > 10.0 * phi_tol)
          throw NumericError("inconsistent extremal: singular window at t = " + std::to_string(ex.grid.node(j)) +
                             " lies off the singular locus (residual " + std::to_string(loc) + ")");
        singular_node[j] = true;
      }
    }
    k = e;
  }

  ArcClassification out;
  out.intervals.resize(n);
  std::size_t sw = 0;
  ArcLabel prev = sign[0] < 0 ? ArcLabel::BangMinus : ArcLabel::BangPlus;
  for (int k = 0; k < n; ++k) {
    const double a = ex.grid.node(k);
    const double b = ex.grid.node(k + 1);
    bool has_switch = false;
    while (sw < ex.switch_times.size() && ex.switch_times[sw] < b) {
      if (ex.switch_times[sw] >= a) has_switch = true;
      ++sw;
    }
    ArcLabel l;
    if (singular_node[k] && singular_node[k + 1]) {
      l = ArcLabel::Singular;
    } else if (has_switch) {
      l = ArcLabel::Switch;
    } else if (sign[k] != 0) {
      l = sign[k] > 0 ? ArcLabel::BangPlus : ArcLabel::BangMinus;
    } else if (sign[k + 1] != 0 && !singular_node[k + 1]) {
      l = sign[k + 1] > 0 ? ArcLabel::BangPlus : ArcLabel::BangMinus;
    } else {
      l = prev == ArcLabel::Switch ? ArcLabel::BangPlus : prev;
    }
    out.intervals[k] = l;
    if (l != ArcLabel::Switch) prev = l;
  }

  for (int k = 0; k < n; ++k) {
    const double a = ex.grid.node(k);
    const double b = ex.grid.node(k + 1);
    if (!out.arcs.empty() && out.arcs.back().label == out.intervals[k])
      out.arcs.back().t_end = b;
    else
      out.arcs.push_back({out.intervals[k], a, b});
  }
  return out;
}

}  // namespace pmpqoc::pmp

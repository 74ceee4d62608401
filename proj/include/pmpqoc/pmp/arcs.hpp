#pragma once

#include <string>
#include <vector>

#include "pmpqoc/pmp/extremal.hpp"

namespace pmpqoc::pmp {

enum class ArcLabel { BangPlus, BangMinus, Singular, Switch };

std::string to_string(ArcLabel l);

struct Arc {
  ArcLabel label;
  double t_start;
  double t_end;
};

struct ArcClassification {
  std::vector<ArcLabel> intervals;  // one label per grid interval
  std::vector<Arc> arcs;            // runs of equal labels
};

// Single-input extremals with a stored Phi trace. Windows of at least `window`
// nodes with |Phi| <= phi_tol are singular and must satisfy the singular-locus
// check (|z| <= 10 phi_tol for the spin system); otherwise NumericError.
ArcClassification classify_arcs(const Extremal& ex, const ControlModel& model, double phi_tol = 1e-8,
                                int window = 3);

}  // namespace pmpqoc::pmp

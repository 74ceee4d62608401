#include "pmpqoc/existence/filippov.hpp"

namespace pmpqoc::existence {

std::string_view to_string(Verdict v) { return v == Verdict::Exists ? "exists" : "cannot-conclude"; }

FilippovReport check_filippov(const Scenario& scenario) {
  const BilinearSystem& sys = scenario.bilinear();
  const ControlBounds& b = scenario.bounds;
  FilippovReport r;

  switch (b.kind) {
    case BoundsKind::Unbounded:
      r.u_compact = false;
      r.u_compact_reason = "U = R^m is not bounded";
      break;
    case BoundsKind::Box:
      r.u_compact = true;
      r.u_compact_reason = "U is a product of closed finite intervals";
      break;
    case BoundsKind::Ball:
      r.u_compact = true;
      r.u_compact_reason = "U is a closed ball of finite radius";
      break;
    case BoundsKind::Discrete:
      r.u_compact = true;
      r.u_compact_reason = "U is a finite set";
      break;
  }

  // Control-affine dynamics: F(q) is an affine image of U.
  if (b.kind == BoundsKind::Discrete && b.points.size() > 1) {
    r.velocity_set_convex = false;
    r.convexity_witness = "U is a finite set of " + std::to_string(b.points.size()) +
                          " points; F(q) is the affine image of U and misses the segment between them";
  } else {
    r.velocity_set_convex = true;
    r.convexity_witness = "F(q) is the affine image of the convex set U";
  }

  switch (scenario.cost.kind) {
    case CostKind::Time:
      r.augmented_convex = r.velocity_set_convex;
      r.augmented_rule = "time cost: f0 = 1, augmented set convex iff F(q) convex";
      break;
    case CostKind::Energy:
    case CostKind::CustomQuadratic:
    case CostKind::Fidelity:
      r.augmented_convex = r.velocity_set_convex;
      r.augmented_rule = "quadratic running cost is convex in u; augmented set convex iff F(q) convex";
      break;
  }

  switch (sys.representation()) {
    case Representation::ComplexUnitary:
      r.solutions_global = true;
      r.global_reason = "anti-Hermitian generators keep the state on the compact unit sphere";
      break;
    case Representation::RealOrthogonal:
      r.solutions_global = true;
      r.global_reason = "skew-symmetric generators keep the state on the compact unit sphere";
      break;
    case Representation::RealLinear:
      r.solutions_global = true;
      r.global_reason = "linear dynamics with bounded generators have no finite-time blow-up";
      break;
  }

  const bool ok = r.u_compact && r.velocity_set_convex && r.augmented_convex && r.solutions_global;
  r.verdict = ok ? Verdict::Exists : Verdict::CannotConclude;
  return r;
}

}  // namespace pmpqoc::existence

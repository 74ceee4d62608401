#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pmpqoc/core/bilinear_system.hpp"

namespace pmpqoc::algebra {

struct LieAlgebraBasis {
  std::vector<CMat> generators;
  std::vector<CMat> basis;  // orthonormal for <A, B> = Re tr(A^+ B)
  bool capped = false;      // stopped at the n^2 hard cap

  int dimension() const { return static_cast<int>(basis.size()); }
  // Norm of the component of m orthogonal to the span.
  double residual(const CMat& m) const;
};

LieAlgebraBasis lie_closure(std::span<const CMat> generators, double rank_tol = 1e-10);

// Real dimension of the traceless part of the span.
int traceless_dimension(const LieAlgebraBasis& lie, double rank_tol = 1e-10);

enum class ControllabilityMode { Drifted, Driftless };

struct ControllabilityReport {
  ControllabilityMode mode;
  int algebra_dimension = 0;
  int manifold_dimension = 0;
  std::string algebra_name;        // "su(N)", "so(n)", or "dim d"
  bool full_special_algebra = false;
  bool drift_recurrent = false;
  int samples = 0;
  int min_rank = 0;
  std::vector<double> min_singular_values;  // per sample, the dim(M)-th singular value
  bool controllable = false;
  std::string rule;
};

ControllabilityReport check_controllability(const BilinearSystem& system, ControllabilityMode mode,
                                            int samples = 50, std::uint64_t seed = 20240917,
                                            double rank_tol = 1e-10);

int manifold_dimension(const BilinearSystem& system);

}  // namespace pmpqoc::algebra

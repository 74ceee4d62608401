#pragma once

#include "pmpqoc/core/types.hpp"

namespace pmpqoc {

struct StateVector {
  Representation representation;
  CVec entries;
  bool on_sphere;

  StateVector(Representation rep, CVec v, bool sphere);
  static StateVector real(Representation rep, const Vec& v, bool sphere);

  int dimension() const { return static_cast<int>(entries.size()); }
  Vec realified() const { return realify(entries, representation); }
};

}  // namespace pmpqoc

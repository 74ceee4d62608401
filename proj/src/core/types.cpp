#include "pmpqoc/core/types.hpp"

#include "pmpqoc/core/errors.hpp"

namespace pmpqoc {

std::string_view to_string(Representation rep) {
  switch (rep) {
    case Representation::ComplexUnitary: return "complex-unitary";
    case Representation::RealOrthogonal: return "real-orthogonal";
    case Representation::RealLinear: return "real-linear";
  }
  return "?";
}

Representation representation_from_string(std::string_view name) {
  if (name == "complex-unitary") return Representation::ComplexUnitary;
  if (name == "real-orthogonal") return Representation::RealOrthogonal;
  if (name == "real-linear") return Representation::RealLinear;
  throw ValidationError("unknown representation '" + std::string(name) + "'");
}

Vec realify(const CVec& v, Representation rep) {
  const auto n = v.size();
  if (is_real(rep)) return v.real();
  Vec out(2 * n);
  out.head(n) = v.real();
  out.tail(n) = v.imag();
  return out;
}

CVec complexify(const Vec& v, Representation rep) {
  if (is_real(rep)) return v.cast<cplx>();
  const auto n = v.size() / 2;
  CVec out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = cplx(v(i), v(n + i));
  return out;
}

Mat realify_operator(const CMat& g, Representation rep) {
  if (is_real(rep)) return g.real();
  const auto n = g.rows();
  Mat out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = g.real();
  out.topRightCorner(n, n) = -g.imag();
  out.bottomLeftCorner(n, n) = g.imag();
  out.bottomRightCorner(n, n) = g.real();
  return out;
}

}  // namespace pmpqoc

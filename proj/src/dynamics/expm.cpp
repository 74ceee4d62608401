#include "pmpqoc/dynamics/expm.hpp"

#include <cmath>

#include "pmpqoc/core/errors.hpp"

namespace pmpqoc::dynamics {
namespace {

template <class M>
double norm1(const M& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

template <class M>
M expm_impl(const M& a) {
  if (a.rows() != a.cols()) throw ArgumentError("expm needs a square matrix");
  if (!a.allFinite()) throw NumericError("expm: non-finite matrix entries");
  const Eigen::Index n = a.rows();
  if (n == 0) return a;
  const int s = expm_squarings(norm1(a));
  const M x = a / std::ldexp(1.0, s);
  M sum = M::Identity(n, n);
  M term = M::Identity(n, n);
  for (int k = 1; k < 64; ++k) {
    term = (term * x) / static_cast<double>(k);
    sum += term;
    if (norm1(term) < 1e-16) break;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

template <class M>
M frechet_impl(const M& a, const M& e) {
  const Eigen::Index n = a.rows();
  if (e.rows() != n || e.cols() != n) throw ArgumentError("expm_frechet: size mismatch");
  M big = M::Zero(2 * n, 2 * n);
  big.topLeftCorner(n, n) = a;
  big.topRightCorner(n, n) = e;
  big.bottomRightCorner(n, n) = a;
  return expm_impl(big).topRightCorner(n, n);
}

}  // namespace

int expm_squarings(double norm) {
  int s = 0;
  while (norm / std::ldexp(1.0, s) > 0.5) ++s;
  return s;
}

Mat expm(const Mat& a) { return expm_impl(a); }
CMat expm(const CMat& a) { return expm_impl(a); }
Mat expm_frechet(const Mat& a, const Mat& e) { return frechet_impl(a, e); }
CMat expm_frechet(const CMat& a, const CMat& e) { return frechet_impl(a, e); }

}  // namespace pmpqoc::dynamics

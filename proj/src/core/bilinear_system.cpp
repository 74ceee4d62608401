#include "pmpqoc/core/bilinear_system.hpp"

#include <string>

#include "pmpqoc/core/errors.hpp"

namespace pmpqoc {
namespace {

constexpr double kSymmetryTol = 1e-12;

void check_generator(const CMat& g, Representation rep, int n, const std::string& name) {
  if (g.rows() != n || g.cols() != n)
    throw ValidationError(name + " must be " + std::to_string(n) + "x" + std::to_string(n));
  if (!g.allFinite()) throw ValidationError(name + " has non-finite entries");
  switch (rep) {
    case Representation::ComplexUnitary:
      if ((g - g.adjoint()).cwiseAbs().maxCoeff() > kSymmetryTol)
        throw ValidationError(name + " is not Hermitian within 1e-12");
      break;
    case Representation::RealOrthogonal:
      if (g.imag().cwiseAbs().maxCoeff() != 0.0) throw ValidationError(name + " must be real");
      if ((g + g.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol)
        throw ValidationError(name + " is not skew-symmetric within 1e-12");
      break;
    case Representation::RealLinear:
      if (g.imag().cwiseAbs().maxCoeff() != 0.0) throw ValidationError(name + " must be real");
      break;
  }
}

}  // namespace

BilinearSystem::BilinearSystem(Representation rep, CMat drift, std::vector<CMat> controls)
    : rep_(rep), drift_(std::move(drift)), controls_(std::move(controls)) {
  const auto n = static_cast<int>(drift_.rows());
  if (n < 1) throw ValidationError("system dimension must be positive");
  check_generator(drift_, rep_, n, "drift");
  for (std::size_t j = 0; j < controls_.size(); ++j)
    check_generator(controls_[j], rep_, n, "control generator " + std::to_string(j + 1));
}

BilinearSystem BilinearSystem::real(Representation rep, const Mat& drift, const std::vector<Mat>& controls) {
  std::vector<CMat> c;
  c.reserve(controls.size());
  for (const auto& a : controls) c.push_back(a.cast<cplx>());
  return BilinearSystem(rep, drift.cast<cplx>(), std::move(c));
}

CMat BilinearSystem::generator(const Vec& u) const {
  if (u.size() != channels()) throw ArgumentError("control vector size differs from channel count");
  CMat g = drift_;
  for (int j = 0; j < channels(); ++j) g += u(j) * controls_[j];
  if (rep_ == Representation::ComplexUnitary) g *= cplx(0.0, -1.0);
  return g;
}

CMat BilinearSystem::drift_generator() const {
  return rep_ == Representation::ComplexUnitary ? CMat(cplx(0.0, -1.0) * drift_) : drift_;
}

CMat BilinearSystem::control_generator(int j) const {
  const CMat& h = controls_.at(j);
  return rep_ == Representation::ComplexUnitary ? CMat(cplx(0.0, -1.0) * h) : h;
}

Mat BilinearSystem::real_drift() const { return realify_operator(drift_generator(), rep_); }

std::vector<Mat> BilinearSystem::real_controls() const {
  std::vector<Mat> out;
  for (int j = 0; j < channels(); ++j) out.push_back(realify_operator(control_generator(j), rep_));
  return out;
}

bool operator==(const BilinearSystem& a, const BilinearSystem& b) {
  if (a.representation() != b.representation() || a.dimension() != b.dimension() ||
      a.channels() != b.channels() || a.drift() != b.drift())
    return false;
  for (int j = 0; j < a.channels(); ++j)
    if (a.controls()[j] != b.controls()[j]) return false;
  return true;
}

}  // namespace pmpqoc

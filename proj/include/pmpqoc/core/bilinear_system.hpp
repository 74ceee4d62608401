#pragma once

#include <vector>

#include "pmpqoc/core/types.hpp"

namespace pmpqoc {

class BilinearSystem {
 public:
  // Generators are Hermitian H_j for complex-unitary systems, real matrices otherwise.
  BilinearSystem(Representation rep, CMat drift, std::vector<CMat> controls);
  static BilinearSystem real(Representation rep, const Mat& drift, const std::vector<Mat>& controls);

  Representation representation() const { return rep_; }
  int dimension() const { return static_cast<int>(drift_.rows()); }
  int channels() const { return static_cast<int>(controls_.size()); }
  bool on_sphere() const { return rep_ != Representation::RealLinear; }

  const CMat& drift() const { return drift_; }
  const std::vector<CMat>& controls() const { return controls_; }

  // Instantaneous generator G(u) with q' = G(u) q.
  CMat generator(const Vec& u) const;
  CMat drift_generator() const;
  CMat control_generator(int j) const;

  int real_dimension() const { return pmpqoc::real_dimension(rep_, dimension()); }
  Mat real_drift() const;
  std::vector<Mat> real_controls() const;

 private:
  Representation rep_;
  CMat drift_;
  std::vector<CMat> controls_;
};

bool operator==(const BilinearSystem& a, const BilinearSystem& b);

}  // namespace pmpqoc

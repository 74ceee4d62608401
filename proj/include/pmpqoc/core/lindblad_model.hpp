#pragma once

#include <vector>

#include "pmpqoc/core/bilinear_system.hpp"

namespace pmpqoc {

// rho' = -i[H(u), rho] + sum_{k,l} a_kl (V_k rho V_l^+ - 1/2 {V_l^+ V_k, rho}).
class LindbladModel {
 public:
  LindbladModel(BilinearSystem hamiltonian, std::vector<CMat> basis, CMat coefficients);

  const BilinearSystem& hamiltonian() const { return hamiltonian_; }
  const std::vector<CMat>& basis() const { return basis_; }
  const CMat& coefficients() const { return coefficients_; }
  int dimension() const { return hamiltonian_.dimension(); }

  // Column-stacked superoperator L(u) with vec(rho)' = L(u) vec(rho):
  // L = -i (I (x) H - H^T (x) I) + D.
  CMat superoperator(const Vec& u) const;
  CMat dissipator() const;

 private:
  BilinearSystem hamiltonian_;
  std::vector<CMat> basis_;
  CMat coefficients_;
};

bool operator==(const LindbladModel& a, const LindbladModel& b);

// Trace-zero generalized Gell-Mann matrices scaled to unit Hilbert-Schmidt norm.
std::vector<CMat> gell_mann_basis(int n);

struct PositivityReport {
  bool positive;
  double min_eigenvalue;
};

PositivityReport validate_lindblad_positivity(const LindbladModel& model);

// Column stacking.
CVec vectorize(const CMat& rho);
CMat unvectorize(const CVec& v, int n);

}  // namespace pmpqoc

#include "pmpqoc/core/lindblad_model.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "pmpqoc/core/errors.hpp"

namespace pmpqoc {
namespace {

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

LindbladModel::LindbladModel(BilinearSystem hamiltonian, std::vector<CMat> basis, CMat coefficients)
    : hamiltonian_(std::move(hamiltonian)), basis_(std::move(basis)), coefficients_(std::move(coefficients)) {
  if (hamiltonian_.representation() != Representation::ComplexUnitary)
    throw ValidationError("Lindblad Hamiltonian part must be complex-unitary");
  const int n = hamiltonian_.dimension();
  const auto k = static_cast<Eigen::Index>(basis_.size());
  if (k > n * n - 1) throw ValidationError("dissipator basis has more than N^2-1 elements");
  if (coefficients_.rows() != k || coefficients_.cols() != k)
    throw ValidationError("coefficient matrix must be " + std::to_string(k) + "x" + std::to_string(k));
  if (k > 0 && (coefficients_ - coefficients_.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw ValidationError("coefficient matrix is not Hermitian within 1e-12");
  for (Eigen::Index i = 0; i < k; ++i) {
    const CMat& v = basis_[i];
    if (v.rows() != n || v.cols() != n) throw ValidationError("dissipator basis element has wrong size");
    if (std::abs(v.trace()) > 1e-12)
      throw ValidationError("dissipator basis element " + std::to_string(i + 1) + " is not trace-zero");
    for (Eigen::Index j = 0; j < k; ++j) {
      const cplx ip = (basis_[i].adjoint() * basis_[j]).trace();
      const double expected = i == j ? 1.0 : 0.0;
      if (std::abs(ip - expected) > 1e-10)
        throw ValidationError("dissipator basis is not Hilbert-Schmidt orthonormal within 1e-10");
    }
  }
}

CMat LindbladModel::dissipator() const {
  const int n = dimension();
  const CMat id = CMat::Identity(n, n);
  CMat d = CMat::Zero(n * n, n * n);
  const auto k = basis_.size();
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      const cplx c = coefficients_(a, b);
      if (c == cplx(0.0)) continue;
      const CMat& va = basis_[a];
      const CMat& vb = basis_[b];
      const CMat prod = vb.adjoint() * va;
      d += c * (kron(vb.conjugate(), va) - 0.5 * kron(id, prod) - 0.5 * kron(prod.transpose(), id));
    }
  }
  return d;
}

CMat LindbladModel::superoperator(const Vec& u) const {
  const int n = dimension();
  const CMat id = CMat::Identity(n, n);
  CMat h = hamiltonian_.drift();
  for (int j = 0; j < hamiltonian_.channels(); ++j) h += u(j) * hamiltonian_.controls()[j];
  return cplx(0.0, -1.0) * (kron(id, h) - kron(h.transpose(), id)) + dissipator();
}

bool operator==(const LindbladModel& a, const LindbladModel& b) {
  if (!(a.hamiltonian() == b.hamiltonian()) || a.basis().size() != b.basis().size() ||
      a.coefficients() != b.coefficients())
    return false;
  for (std::size_t i = 0; i < a.basis().size(); ++i)
    if (a.basis()[i] != b.basis()[i]) return false;
  return true;
}

std::vector<CMat> gell_mann_basis(int n) {
  if (n < 2) throw ArgumentError("Gell-Mann basis needs n >= 2");
  std::vector<CMat> out;
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      CMat sym = CMat::Zero(n, n);
      sym(j, k) = s;
      sym(k, j) = s;
      out.push_back(sym);
      CMat asym = CMat::Zero(n, n);
      asym(j, k) = cplx(0.0, -s);
      asym(k, j) = cplx(0.0, s);
      out.push_back(asym);
    }
  }
  for (int l = 1; l < n; ++l) {
    CMat diag = CMat::Zero(n, n);
    const double c = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int j = 0; j < l; ++j) diag(j, j) = c;
    diag(l, l) = -l * c;
    out.push_back(diag);
  }
  return out;
}

PositivityReport validate_lindblad_positivity(const LindbladModel& model) {
  const CMat& a = model.coefficients();
  if (a.rows() == 0) return {true, 0.0};
  Eigen::SelfAdjointEigenSolver<CMat> es(a, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  return {lo >= -1e-10, lo};
}

CVec vectorize(const CMat& rho) { return Eigen::Map<const CVec>(rho.data(), rho.size()); }

CMat unvectorize(const CVec& v, int n) {
  if (v.size() != static_cast<Eigen::Index>(n) * n) throw ArgumentError("vectorized size is not N^2");
  return Eigen::Map<const CMat>(v.data(), n, n);
}

}  // namespace pmpqoc

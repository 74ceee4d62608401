#pragma once

#include <complex>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace pmpqoc {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// complex-unitary: q' = -i(H0 + sum u_j H_j) q, generators stored as Hermitian H.
// real-orthogonal: q' = (A0 + sum u_j A_j) q, skew-symmetric generators.
// real-linear: same form, arbitrary real generators, state not on a sphere.
enum class Representation { ComplexUnitary, RealOrthogonal, RealLinear };

std::string_view to_string(Representation rep);
Representation representation_from_string(std::string_view name);

inline bool is_real(Representation rep) { return rep != Representation::ComplexUnitary; }

// Dimension of the realified state for an n-dimensional system.
inline int real_dimension(Representation rep, int n) { return is_real(rep) ? n : 2 * n; }

// Complex psi -> (Re psi; Im psi); real states drop the (zero) imaginary part.
Vec realify(const CVec& v, Representation rep);
CVec complexify(const Vec& v, Representation rep);

// Real matrix of the linear map v -> G v in realified coordinates.
Mat realify_operator(const CMat& g, Representation rep);

}  // namespace pmpqoc

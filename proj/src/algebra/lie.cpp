#include "pmpqoc/algebra/lie.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <random>

#include "pmpqoc/core/errors.hpp"

namespace pmpqoc::algebra {
namespace {

double inner(const CMat& a, const CMat& b) { return (a.array().conjugate() * b.array()).sum().real(); }

// Appends the normalized orthogonal remainder of m; returns true if it was independent.
bool try_append(std::vector<CMat>& basis, const CMat& m, double rank_tol) {
  const double scale = std::max(1.0, m.norm());
  CMat r = m;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis) r -= inner(b, r) * b;
  const double nr = r.norm();
  if (nr <= rank_tol * scale) return false;
  basis.push_back(r / nr);
  return true;
}

bool is_skew_like(const CMat& g) { return (g + g.adjoint()).cwiseAbs().maxCoeff() <= 1e-12; }

}  // namespace

double LieAlgebraBasis::residual(const CMat& m) const {
  CMat r = m;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis) r -= inner(b, r) * b;
  return r.norm();
}

LieAlgebraBasis lie_closure(std::span<const CMat> generators, double rank_tol) {
  if (generators.empty()) throw ArgumentError("lie_closure needs at least one generator");
  const auto n = generators.front().rows();
  for (const auto& g : generators)
    if (g.rows() != n || g.cols() != n) throw ArgumentError("lie_closure: generators differ in size");

  LieAlgebraBasis out;
  out.generators.assign(generators.begin(), generators.end());
  const auto cap = static_cast<std::size_t>(n * n);
  for (const auto& g : generators) {
    if (out.basis.size() >= cap) break;
    try_append(out.basis, g, rank_tol);
  }
  // Every new element is bracketed with all earlier ones exactly once.
  for (std::size_t k = 1; k < out.basis.size() && out.basis.size() < cap; ++k) {
    for (std::size_t i = 0; i < k && out.basis.size() < cap; ++i) {
      const CMat c = out.basis[i] * out.basis[k] - out.basis[k] * out.basis[i];
      try_append(out.basis, c, rank_tol);
    }
  }
  out.capped = out.basis.size() >= cap;
  return out;
}

int traceless_dimension(const LieAlgebraBasis& lie, double rank_tol) {
  if (lie.basis.empty()) return 0;
  const auto n = lie.basis.front().rows();
  const CMat id = CMat::Identity(n, n);
  std::vector<CMat> proj;
  for (const auto& b : lie.basis) try_append(proj, CMat(b - (b.trace() / static_cast<double>(n)) * id), rank_tol);
  return static_cast<int>(proj.size());
}

int manifold_dimension(const BilinearSystem& system) {
  const int n = system.dimension();
  switch (system.representation()) {
    case Representation::ComplexUnitary: return 2 * n - 1;
    case Representation::RealOrthogonal: return n - 1;
    case Representation::RealLinear: return n;
  }
  return n;
}

ControllabilityReport check_controllability(const BilinearSystem& system, ControllabilityMode mode, int samples,
                                            std::uint64_t seed, double rank_tol) {
  ControllabilityReport rep;
  rep.mode = mode;
  rep.manifold_dimension = manifold_dimension(system);
  rep.samples = samples;
  const int n = system.dimension();
  const Representation r = system.representation();

  std::vector<CMat> gens;
  if (mode == ControllabilityMode::Drifted) {
    const CMat d = system.drift_generator();
    if (d.cwiseAbs().maxCoeff() > 0.0) gens.push_back(d);
  }
  for (int j = 0; j < system.channels(); ++j) gens.push_back(system.control_generator(j));

  rep.drift_recurrent = is_skew_like(system.drift_generator());
  LieAlgebraBasis lie;
  if (!gens.empty()) lie = lie_closure(gens, rank_tol);
  rep.algebra_dimension = lie.dimension();

  if (r == Representation::ComplexUnitary) {
    const int su = n * n - 1;
    rep.full_special_algebra = traceless_dimension(lie, rank_tol) >= su;
    rep.algebra_name = rep.full_special_algebra ? "su(" + std::to_string(n) + ")" : "dim " + std::to_string(lie.dimension());
  } else if (r == Representation::RealOrthogonal) {
    rep.full_special_algebra = lie.dimension() >= n * (n - 1) / 2;
    rep.algebra_name = rep.full_special_algebra ? "so(" + std::to_string(n) + ")" : "dim " + std::to_string(lie.dimension());
  } else {
    rep.algebra_name = "dim " + std::to_string(lie.dimension());
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int nr = system.real_dimension();
  rep.min_rank = std::numeric_limits<int>::max();
  for (int s = 0; s < samples; ++s) {
    Vec x(nr);
    for (int i = 0; i < nr; ++i) x(i) = normal(rng);
    x.normalize();
    const CVec q = complexify(x, r);
    Mat tangent(nr, std::max(1, lie.dimension()));
    tangent.setZero();
    for (int b = 0; b < lie.dimension(); ++b) tangent.col(b) = realify(CVec(lie.basis[b] * q), r);
    const Vec sv = Eigen::JacobiSVD<Mat>(tangent).singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (smax > 0.0 && sv(i) > rank_tol * smax) ++rank;
    rep.min_rank = std::min(rep.min_rank, rank);
    const int idx = rep.manifold_dimension - 1;
    rep.min_singular_values.push_back(idx < sv.size() ? sv(idx) : 0.0);
  }
  if (samples == 0) rep.min_rank = 0;

  const bool full_rank = rep.min_rank >= rep.manifold_dimension;
  if (mode == ControllabilityMode::Drifted) {
    rep.controllable = full_rank && rep.drift_recurrent;
    rep.rule = "drifted: rank of L0(q) = dim M at all samples and recurrent drift";
    if (!rep.drift_recurrent) rep.rule += " (drift is not skew/anti-Hermitian; recurrence not established)";
  } else {
    rep.controllable = full_rank;
    rep.rule = "driftless: rank of L1(q) = dim M at all samples, assuming U = R^m";
  }
  return rep;
}

}  // namespace pmpqoc::algebra

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pmpqoc/core/bilinear_system.hpp"

namespace pmpqoc::analytic {

enum class SpinProblem { P1, P2 };
std::string_view to_string(SpinProblem p);

enum class SpinArcType { Bang, Singular };

struct SpinArc {
  SpinArcType type;
  double control;  // +-1 on bangs, 0 on singular arcs
  double duration;
};

struct SpinSynthesis {
  double delta;
  double omega;
  SpinProblem problem;
  std::vector<SpinArc> arcs;

  double total_duration() const;
  std::vector<double> switch_times() const;
};

// x' = (F + u G) x with F the drift rotation about z at rate delta and G the
// control rotation about x.
BilinearSystem spin_system(double delta);

// Bang arc with u = epsilon from the north pole:
//   (eps delta (1 - cos wt) / w^2, -eps sin(wt) / w, 1 + (cos wt - 1) / w^2).
Vec spin_bang_arc(double delta, int epsilon, double t);

// First two equator crossings of a bang arc from the north pole.
double spin_t1(double delta);
double spin_t2(double delta);

// North pole to south pole: [bang(eps, t1), bang(-eps, t2)], or [bang(eps, t2), bang(-eps, t1)] when symmetric.
SpinSynthesis spin_p1(double delta, bool symmetric = false, int epsilon = 1);

// North pole to (1,0,0): [bang(+1, t1), singular(t_s)] with t_s = arctan(sqrt(1-delta^2)/delta) / delta.
SpinSynthesis spin_p2(double delta);

// Endpoint of the synthesis propagated from q0 with exact per-arc exponentials.
Vec spin_endpoint(const SpinSynthesis& s, const Vec& q0);

struct SpinSample {
  double t;
  Vec q;
  double u;
};
// n + 1 equispaced samples over the synthesis, starting from the north pole.
std::vector<SpinSample> spin_sample(const SpinSynthesis& s, int n);

// Normal time-optimal covector at the north pole (p0 = -1) whose extremal reproduces P2:
// the bang arc ends on the equator where Phi and Phi' vanish together.
Vec spin_p2_covector(double delta);
// Same covector for P1: the first bang ends on the equator with Phi = Phi' = 0, where the
// extremal may either enter the singular arc or switch to u = -1 (ExtremalOptions::switch_at_touch).
Vec spin_p1_covector(double delta);

// Abnormal covector at q (p0 = 0, H = 0): p in span{Fq, Gq} with Phi = p.Gq = beta and p.Fq = -beta.
Vec spin_abnormal_covector(double delta, const Vec& q, double beta = 1.0);

struct CompetitorFamily {
  std::string name;
  bool found = false;
  std::vector<double> durations;
  double total = 0.0;
};

struct CompetitorReport {
  SpinProblem problem;
  double delta;
  double synthesized;
  std::vector<CompetitorFamily> families;
  bool synthesized_is_best = true;
};

// Numeric comparison of the synthesized duration against two-parameter competitor
// families, solved from a grid of starts. Reported, not a proof.
CompetitorReport spin_competitors(double delta, SpinProblem problem, int grid = 12);

}  // namespace pmpqoc::analytic

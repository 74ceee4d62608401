#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pmpqoc/core/bilinear_system.hpp"
#include "pmpqoc/core/control_law.hpp"
#include "pmpqoc/core/lindblad_model.hpp"
#include "pmpqoc/core/state.hpp"
#include "pmpqoc/core/time_grid.hpp"

namespace pmpqoc {

enum class TargetKind { Point, PhaseOrbit, Free };

struct Target {
  TargetKind kind = TargetKind::Free;
  CVec state;  // q_fi; for Free the reference state of the terminal cost
  bool up_to_sign = false;
};

enum class CostKind { Energy, Time, Fidelity, CustomQuadratic };

struct Cost {
  CostKind kind = CostKind::Energy;
  Vec weights;  // per-channel weights for CustomQuadratic

  bool has_terminal_term() const { return kind == CostKind::Fidelity; }
  bool is_quadratic() const { return kind != CostKind::Time; }
  // c_j in the running cost sum_j c_j u_j^2 (zero vector for time).
  Vec running_weights(int channels) const;
};

struct TimeSpec {
  bool free = false;
  double T = 1.0;
  double T_min = 0.0;
  double T_max = 0.0;
  int steps = 1000;

  TimeGrid grid() const { return TimeGrid(0.0, T, steps); }
  TimeGrid grid(double horizon) const { return TimeGrid(0.0, horizon, steps); }
};

enum class BoundsKind { Unbounded, Box, Ball, Discrete };

struct ControlBounds {
  BoundsKind kind = BoundsKind::Unbounded;
  std::vector<Interval> intervals;  // Box
  double radius = 0.0;              // Ball
  std::vector<Vec> points;          // Discrete

  bool contains(const Vec& u, double tol = 1e-12) const;
  std::vector<std::optional<Interval>> per_channel(int channels) const;
};

struct Tolerances {
  double integration = 1e-8;
  double shooting = 1e-9;
  double rank = 1e-10;
};

struct Scenario {
  std::string name;
  std::variant<BilinearSystem, LindbladModel> system;
  std::optional<StateVector> initial_state;
  std::optional<CMat> initial_density;
  Target target;
  Cost cost;
  TimeSpec time;
  ControlBounds bounds;
  Tolerances tolerances;

  bool is_lindblad() const { return std::holds_alternative<LindbladModel>(system); }
  // Throws ArgumentError for Lindblad scenarios.
  const BilinearSystem& bilinear() const;
  const LindbladModel& lindblad() const;
  const StateVector& initial() const;
};

bool operator==(const Scenario& a, const Scenario& b);

std::string_view to_string(TargetKind k);
std::string_view to_string(CostKind k);
std::string_view to_string(BoundsKind k);

Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);
std::string serialize_scenario(const Scenario& s);

// Re-checks every cross-field invariant; parse_scenario calls it.
void validate(const Scenario& s);

}  // namespace pmpqoc

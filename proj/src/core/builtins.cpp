#include "pmpqoc/core/builtins.hpp"

#include <map>

#include "pmpqoc/core/errors.hpp"

namespace pmpqoc {
namespace {

const std::map<std::string, std::string, std::less<>>& table() {
  static const std::map<std::string, std::string, std::less<>> t = {
      {"warmup", R"({
  "name": "warmup",
  "system": {"representation": "real-orthogonal",
             "drift": [[0, 0], [0, 0]],
             "controls": [[[0, 1], [-1, 0]]]},
  "initial_state": [1, 0],
  "target": {"kind": "point", "state": [0, -1]},
  "cost": {"kind": "energy"},
  "time": {"mode": "fixed", "T": 1, "steps": 1000},
  "bounds": {"kind": "unbounded"}
})"},
      {"unbounded-time-optimal", R"({
  "name": "unbounded-time-optimal",
  "system": {"representation": "real-orthogonal",
             "drift": [[0, 0], [0, 0]],
             "controls": [[[0, 1], [-1, 0]]]},
  "initial_state": [1, 0],
  "target": {"kind": "point", "state": [0, -1]},
  "cost": {"kind": "time"},
  "time": {"mode": "free", "T_min": 0.01, "T_max": 3, "steps": 1000},
  "bounds": {"kind": "unbounded"}
})"},
      {"warmup-time", R"({
  "name": "warmup-time",
  "system": {"representation": "real-orthogonal",
             "drift": [[0, 0], [0, 0]],
             "controls": [[[0, 1], [-1, 0]]]},
  "initial_state": [1, 0],
  "target": {"kind": "point", "state": [0, -1]},
  "cost": {"kind": "time"},
  "time": {"mode": "free", "T_min": 0.5, "T_max": 3, "steps": 1000},
  "bounds": {"kind": "box", "intervals": [[-1, 1]]}
})"},
      {"two-level", R"({
  "name": "two-level",
  "system": {"representation": "complex-unitary",
             "drift": [[[0, 0], [0, 0]], [[0, 0], [1, 0]]],
             "controls": [[[[0, 0], [1, 0]], [[1, 0], [0, 0]]]]},
  "initial_state": [[1, 0], [0, 0]],
  "target": {"kind": "phase_orbit", "state": [[0, 0], [1, 0]]},
  "cost": {"kind": "energy"},
  "time": {"mode": "fixed", "T": 3, "steps": 600},
  "bounds": {"kind": "unbounded"}
})"},
      {"two-level-grape", R"({
  "name": "two-level-grape",
  "system": {"representation": "complex-unitary",
             "drift": [[[0, 0], [0, 0]], [[0, 0], [0, 0]]],
             "controls": [[[[0, 0], [1, 0]], [[1, 0], [0, 0]]]]},
  "initial_state": [[1, 0], [0, 0]],
  "target": {"kind": "free", "state": [[0, 0], [1, 0]]},
  "cost": {"kind": "fidelity"},
  "time": {"mode": "fixed", "T": 3, "steps": 300},
  "bounds": {"kind": "unbounded"}
})"},
      {"grushin", R"({
  "name": "grushin",
  "system": {"representation": "real-orthogonal",
             "drift": [[0, 0, 0], [0, 0, 0], [0, 0, 0]],
             "controls": [[[0, -1, 0], [1, 0, 0], [0, 0, 0]],
                          [[0, 0, 0], [0, 0, -1], [0, 1, 0]]]},
  "initial_state": [1, 0, 0],
  "target": {"kind": "point", "state": [0, 0, 1], "up_to_sign": true},
  "cost": {"kind": "time"},
  "time": {"mode": "free", "T_min": 1.5, "T_max": 7, "steps": 2000},
  "bounds": {"kind": "ball", "radius": 1}
})"},
      {"grushin-energy", R"({
  "name": "grushin-energy",
  "system": {"representation": "real-orthogonal",
             "drift": [[0, 0, 0], [0, 0, 0], [0, 0, 0]],
             "controls": [[[0, -1, 0], [1, 0, 0], [0, 0, 0]],
                          [[0, 0, 0], [0, 0, -1], [0, 1, 0]]]},
  "initial_state": [1, 0, 0],
  "target": {"kind": "point", "state": [0, 0, 1], "up_to_sign": true},
  "cost": {"kind": "energy"},
  "time": {"mode": "fixed", "T": 2.7206990463513265, "steps": 2000},
  "bounds": {"kind": "unbounded"}
})"},
      {"spin-p1", R"({
  "name": "spin-p1",
  "system": {"representation": "real-orthogonal",
             "drift": [[0, -0.5, 0], [0.5, 0, 0], [0, 0, 0]],
             "controls": [[[0, 0, 0], [0, 0, -1], [0, 1, 0]]]},
  "initial_state": [0, 0, 1],
  "target": {"kind": "point", "state": [0, 0, -1]},
  "cost": {"kind": "time"},
  "time": {"mode": "free", "T_min": 1, "T_max": 10, "steps": 2000},
  "bounds": {"kind": "box", "intervals": [[-1, 1]]}
})"},
      {"spin-p2", R"({
  "name": "spin-p2",
  "system": {"representation": "real-orthogonal",
             "drift": [[0, -0.5, 0], [0.5, 0, 0], [0, 0, 0]],
             "controls": [[[0, 0, 0], [0, 0, -1], [0, 1, 0]]]},
  "initial_state": [0, 0, 1],
  "target": {"kind": "point", "state": [1, 0, 0]},
  "cost": {"kind": "time"},
  "time": {"mode": "free", "T_min": 1, "T_max": 10, "steps": 2000},
  "bounds": {"kind": "box", "intervals": [[-1, 1]]}
})"},
      {"chattering-2d", R"({
  "name": "chattering-2d",
  "system": {"representation": "real-linear",
             "drift": [[-1, 0], [0, 0]],
             "controls": [[[0, 1], [-1, 0]]]},
  "initial_state": [1, 0],
  "target": {"kind": "point", "state": [0.36787944117144233, 0]},
  "cost": {"kind": "energy"},
  "time": {"mode": "fixed", "T": 1, "steps": 256},
  "bounds": {"kind": "discrete", "points": [[-1], [1]]}
})"},
      {"lindblad-damping", R"({
  "name": "lindblad-damping",
  "system": {"representation": "lindblad",
             "drift": [[[0, 0], [0, 0]], [[0, 0], [0, 0]]],
             "controls": [[[[0, 0], [1, 0]], [[1, 0], [0, 0]]]],
             "dissipators": [[[[0, 0], [1, 0]], [[0, 0], [0, 0]]]],
             "coefficients": [[[1, 0]]]},
  "initial_state": [[[0, 0], [0, 0]], [[0, 0], [1, 0]]],
  "target": {"kind": "free", "state": [[1, 0], [0, 0]]},
  "cost": {"kind": "fidelity"},
  "time": {"mode": "fixed", "T": 2, "steps": 200},
  "bounds": {"kind": "unbounded"}
})"},
  };
  return t;
}

}  // namespace

std::vector<std::string> builtin_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : table()) out.push_back(k);
  return out;
}

std::string builtin_scenario_json(std::string_view name) {
  const auto& t = table();
  auto it = t.find(name);
  if (it == t.end()) throw ArgumentError("unknown builtin scenario '" + std::string(name) + "'");
  return it->second;
}

Scenario builtin_scenario(std::string_view name) { return parse_scenario(builtin_scenario_json(name)); }

}  // namespace pmpqoc

#pragma once

#include <string>

#include "pmpqoc/core/scenario.hpp"

namespace pmpqoc::existence {

enum class Verdict { Exists, CannotConclude };

struct FilippovReport {
  bool u_compact = false;
  std::string u_compact_reason;
  bool velocity_set_convex = false;
  std::string convexity_witness;
  bool augmented_convex = false;
  std::string augmented_rule;
  bool solutions_global = false;
  std::string global_reason;
  Verdict verdict = Verdict::CannotConclude;
};

std::string_view to_string(Verdict v);

FilippovReport check_filippov(const Scenario& scenario);

}  // namespace pmpqoc::existence

#pragma once

// Randomized and exhaustive comparison suites. The acceptance binary runs them
// at full size; the unit tests run reduced versions.

#include <cstddef>
#include <cstdint>
#include <string>

namespace riskpath::suites {

struct Report {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;
  double seconds = 0.0;
  std::string note;

  bool ok() const { return failures == 0 && cases > 0; }
  void fail(const std::string& what) {
    if (failures++ == 0) first_failure = what;
  }
};

/// Non-negativity, monotone prefix totals and the prefix-decomposition identity.
Report risk_axioms(std::size_t instances, std::uint64_t seed);

/// Every step_total within [0, 3] when wa = ws = wp = 1.
Report step_range(std::size_t instances, std::uint64_t seed);

/// All 3x3 layouts with <= max_obstacles obstacles, every anchor, every walk of
/// <= max_steps moves (equivalent tether configurations are expanded once).
Report tether_exhaustive(std::size_t max_steps, std::size_t max_obstacles);

/// Random walks on 12x12 grids checked at every step.
Report tether_random(std::size_t walks, std::size_t steps, std::uint64_t seed);

/// Finish checkers against brute-force quantifier evaluation.
Report checker_agreement(std::size_t instances, std::uint64_t seed);

/// Planner minimum against path enumeration on every grid up to max_side x
/// max_side, every layout with <= max_obstacles obstacles, every start/goal pair.
Report planner_exhaustive(int max_side, std::size_t max_obstacles, std::size_t max_len);

}  // namespace riskpath::suites

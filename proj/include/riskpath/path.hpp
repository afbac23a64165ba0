#pragma once

#include <cmath>
#include <istream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "riskpath/grid.hpp"

namespace riskpath {

/// Displacement between two consecutive states.
struct Action {
  int dx = 0;
  int dy = 0;

  double length() const { return std::hypot(dx, dy); }
  friend constexpr bool operator==(const Action&, const Action&) = default;
};

inline constexpr double kDefaultConnectivityRadius = 1.4142135623730951;  // sqrt(2)

/// Ordered lattice states s_0 .. s_n.
struct PathPlan {
  std::vector<Cell> states;
  double connectivity_radius = kDefaultConnectivityRadius;

  std::size_t steps() const { return states.empty() ? 0 : states.size() - 1; }
};

/// The prefix p_i = {s_0, ..., s_i} of a plan. Views the plan; does not own it.
struct PrefixPath {
  const PathPlan* plan = nullptr;
  std::size_t end_index = 0;

  std::span<const Cell> states() const {
    return std::span<const Cell>(plan->states).first(end_index + 1);
  }
  Cell end() const { return plan->states[end_index]; }
};

struct Violation {
  enum class Kind { kEmpty, kRepeatedState, kInfeasibleStep, kOutOfBounds, kCollision };
  Kind kind;
  std::size_t index;  // offending state index
  std::string message;
};

/// Every feasibility and collision violation of a plan. Empty means valid.
struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

ValidationReport validate(const PathPlan& plan, const OccupancyGrid& grid);
/// Throws ValidationError when the report is not empty.
void require_valid(const PathPlan& plan, const OccupancyGrid& grid);

/// a_i = s_i - s_{i-1} for i = 1..n.
std::vector<Action> derive_actions(const PathPlan& plan);
/// Inverse of derive_actions.
PathPlan integrate(Cell origin, std::span<const Action> actions,
                   double connectivity_radius = kDefaultConnectivityRadius);
std::vector<PrefixPath> prefixes(const PathPlan& plan);

class PathParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Path CSV: one "x,y" integer pair per line, no header.
PathPlan read_path_csv(std::istream& in);
PathPlan read_path_csv_file(const std::string& path);
std::string write_path_csv(const PathPlan& plan);

}  // namespace riskpath

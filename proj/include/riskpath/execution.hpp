#pragma once

#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "riskpath/grid.hpp"
#include "riskpath/path.hpp"
#include "riskpath/risk.hpp"

namespace riskpath {

/// Positions actually visited, e_0 .. e_m, in the continuous map frame.
struct Execution {
  std::vector<Point> states;
};

/// Radii of the reachability (plan-side, rp) and stability (execution-side,
/// re) conditions. re may be infinite, which disables stability.
struct FinishCriteria {
  double rp = 0.5;
  double re = 1.5;

  void validate() const;
};

class StartMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Outcome of one condition: ok, or the first index whose pair fails.
struct ConditionResult {
  bool ok = true;
  std::optional<std::size_t> first_failure;
};

struct FinishViolation {
  enum class Condition { kReachability, kStability };
  Condition condition;
  std::size_t index;
  std::string detail;
};

struct FinishVerdict {
  bool finished = false;
  bool reachability_ok = false;
  bool stability_ok = false;
  std::optional<FinishViolation> first_violation;
};

/// For every 0 <= i < n there must be j1 <= j2 with e_j1 within rp of s_i and
/// e_j2 within rp of s_{i+1}. Throws StartMismatchError unless e_0 = s_0.
ConditionResult check_reachability(const PathPlan& plan, const Execution& exec,
                                   const FinishCriteria& c);
/// Mirror of reachability with roles swapped and radius re.
ConditionResult check_stability(const PathPlan& plan, const Execution& exec,
                                const FinishCriteria& c);
FinishVerdict finishes(const PathPlan& plan, const Execution& exec, const FinishCriteria& c);

/// Built-in disturbance model. Step j is perturbed uniformly within a disk of
/// radius sigma * (1 + step_total_j) and fails outright with probability
/// kappa * step_total_j / 3.
struct NoiseModel {
  double sigma = 0.2;
  double kappa = 0.2;
};

/// Replays deterministically from (plan, profile, noise, seed). The execution
/// stops before a failed step or a step whose position lands in an obstacle.
Execution simulate_execution(const PathPlan& plan, const OccupancyGrid& grid,
                             const RiskProfile& profile, const NoiseModel& noise,
                             std::uint64_t seed);

struct MonteCarloResult {
  std::size_t trials = 0;
  std::size_t failures = 0;
  double rate = 0.0;
  double ci_halfwidth = 0.0;  // normal approximation, 95 %
  std::uint64_t seed = 0;
};

/// Seed of trial k, derived only from (base seed, k).
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial);

MonteCarloResult monte_carlo_failure_rate(const PathPlan& plan, const OccupancyGrid& grid,
                                          const RiskConfig& cfg, const NoiseModel& noise,
                                          std::size_t trials, const FinishCriteria& criteria,
                                          std::uint64_t seed);

/// Execution CSV: one "x,y" real pair per line, no header.
Execution read_execution_csv(std::istream& in);
Execution read_execution_csv_file(const std::string& path);
std::string write_execution_csv(const Execution& exec);

}  // namespace riskpath

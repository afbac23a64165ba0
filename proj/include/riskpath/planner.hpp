#pragma once

#include <cstddef>
#include <stdexcept>

#include "riskpath/grid.hpp"
#include "riskpath/path.hpp"
#include "riskpath/risk.hpp"

namespace riskpath {

struct PlannerLimits {
  std::size_t max_contacts = 10;
  std::size_t max_expansions = 2'000'000;
};

struct PlanResult {
  PathPlan plan;
  RiskProfile profile;
  double search_cost = 0.0;  // g at the goal; equals profile.total
  std::size_t expansions = 0;
  std::size_t nodes = 0;
  PlannerLimits limits;
};

class PlanningError : public std::runtime_error {
 public:
  enum class Kind { kUnreachable, kBudgetExhausted };
  PlanningError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Minimum total-risk path from start to goal. Uniform-cost search over
/// (cell, incoming action, tether contact stack) so the turn and tether terms
/// are exact per node. The tether is anchored at the start cell.
PlanResult plan_min_risk(const OccupancyGrid& grid, Cell start, Cell goal, const RiskConfig& cfg,
                         const PlannerLimits& limits = {});
/// Same search reusing precomputed state risks; the table must outlive the call.
PlanResult plan_min_risk(const StateRiskTable& states, Cell start, Cell goal,
                         const PlannerLimits& limits = {});

}  // namespace riskpath

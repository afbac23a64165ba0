#pragma once

#include <optional>
#include <span>
#include <vector>

#include "riskpath/grid.hpp"
#include "riskpath/path.hpp"
#include "riskpath/tether.hpp"

namespace riskpath {

/// Normalization constants mapping raw risk elements onto [0, 1].
struct Normalization {
  double action_max_len = kDefaultConnectivityRadius;
  double turn_max_deg = 180.0;
  double dist_lo = 1.0;  // distance at or below which distance risk saturates
  double dist_hi = 4.0;  // distance at or above which distance risk vanishes
  double vis_range = 5.0;
  int vis_rays = 16;
  double tether_max = 20.0;
  int contacts_max = 10;
};

/// Weights of every risk element and category. Category scores are weighted
/// means of their elements; the step total is wa*action + ws*state + wp*path.
struct RiskConfig {
  double wa1 = 1.0;  // action length
  double wa2 = 1.0;  // turn between consecutive actions
  double w_distance = 1.0;
  double w_visibility = 1.0;
  double w_tether_length = 1.0;
  double w_contacts = 1.0;
  double wa = 1.0;
  double ws = 1.0;
  double wp = 1.0;
  Normalization norm;

  /// Throws std::invalid_argument on negative weights, an all-zero category,
  /// or inconsistent normalization.
  void validate() const;
};

struct ActionElements {
  double length_risk = 0.0;
  double turn_deg = 0.0;
  double turn_risk = 0.0;
};

struct StateElements {
  double distance = 0.0;
  double distance_risk = 0.0;
  double visibility_risk = 0.0;
};

struct PathElements {
  double tether_length = 0.0;
  double tether_risk = 0.0;
  std::size_t contacts = 0;
  double contact_risk = 0.0;
};

/// Risk contributed by one step i (state s_i reached by action a_i).
struct StepRisk {
  std::size_t index = 0;
  Cell cell;
  double action_score = 0.0;  // 0 at step 0, which has no action
  double state_score = 0.0;
  double path_score = 0.0;
  double step_total = 0.0;
  double cumulative = 0.0;
  ActionElements action;
  StateElements state;
  PathElements path;
};

struct RiskProfile {
  std::vector<StepRisk> steps;
  double total = 0.0;
  // Weighted category sums: wa * sum(action), ws * sum(state), wp * sum(path).
  double action_subtotal = 0.0;
  double state_subtotal = 0.0;
  double path_subtotal = 0.0;
};

/// Action elements for `action` following `previous` (nullopt for a_1).
ActionElements action_elements(std::optional<Action> previous, Action action,
                               const RiskConfig& cfg);
double action_score(const ActionElements& e, const RiskConfig& cfg);

/// Score of a_i for 1 <= i <= n; throws std::out_of_range otherwise.
double action_category(std::size_t i, std::span<const Action> actions, const RiskConfig& cfg);

StateElements state_elements(Cell s, const OccupancyGrid& grid, const RiskConfig& cfg);
double state_score(const StateElements& e, const RiskConfig& cfg);
double state_category(Cell s, const OccupancyGrid& grid, const RiskConfig& cfg);

PathElements path_elements(const TetherState& tether, const RiskConfig& cfg);
double path_score(const PathElements& e, const RiskConfig& cfg);
/// `tether` must be the state reached by walking exactly the states of `p`;
/// throws std::invalid_argument when its head is not p's end state.
double path_category(const PrefixPath& p, const TetherState& tether, const RiskConfig& cfg);

/// Cached state elements of every free cell for one (grid, config) pair.
class StateRiskTable {
 public:
  StateRiskTable(const OccupancyGrid& grid, const RiskConfig& cfg);
  const StateElements& elements(Cell c) const;
  double score(Cell c) const;
  const OccupancyGrid& grid() const { return *grid_; }
  const RiskConfig& config() const { return cfg_; }

 private:
  const OccupancyGrid* grid_;
  RiskConfig cfg_;
  std::vector<StateElements> elements_;
  std::vector<double> scores_;
};

/// Initial tether for a plan: anchored at the grid's anchor cell when the map
/// names one, otherwise at s_0. A distinct anchor must see s_0 directly.
TetherState initial_tether(Cell start, const OccupancyGrid& grid);

/// Full per-step risk breakdown and the total risk index of a plan.
/// Throws ValidationError for invalid plans.
RiskProfile evaluate(const PathPlan& plan, const OccupancyGrid& grid, const RiskConfig& cfg);

}  // namespace riskpath

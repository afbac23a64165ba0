#include "riskpath/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace riskpath {

namespace {

void require_non_negative(double w, const char* name) {
  if (!(w >= 0.0) || !std::isfinite(w)) {
    throw std::invalid_argument(std::string("weight ") + name + " must be finite and >= 0");
  }
}

double weighted_mean(double w1, double v1, double w2, double v2) {
  return (w1 * v1 + w2 * v2) / (w1 + w2);
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

void RiskConfig::validate() const {
  require_non_negative(wa1, "wa1");
  require_non_negative(wa2, "wa2");
  require_non_negative(w_distance, "state.distance");
  require_non_negative(w_visibility, "state.visibility");
  require_non_negative(w_tether_length, "path.tether_length");
  require_non_negative(w_contacts, "path.contacts");
  require_non_negative(wa, "wa");
  require_non_negative(ws, "ws");
  require_non_negative(wp, "wp");
  if (wa1 + wa2 <= 0.0) throw std::invalid_argument("action weights wa1, wa2 are both zero");
  if (w_distance + w_visibility <= 0.0) throw std::invalid_argument("state weights are all zero");
  if (w_tether_length + w_contacts <= 0.0) throw std::invalid_argument("path weights are all zero");
  if (!(norm.action_max_len > 0.0)) throw std::invalid_argument("norm.action_max_len must be > 0");
  if (!(norm.turn_max_deg > 0.0)) throw std::invalid_argument("norm.turn_max_deg must be > 0");
  if (!(norm.dist_lo < norm.dist_hi)) throw std::invalid_argument("norm.dist_lo must be < dist_hi");
  if (!(norm.vis_range > 0.0)) throw std::invalid_argument("norm.vis_range must be > 0");
  if (norm.vis_rays < 4) throw std::invalid_argument("norm.vis_rays must be >= 4");
  if (!(norm.tether_max > 0.0)) throw std::invalid_argument("norm.tether_max must be > 0");
  if (norm.contacts_max < 1) throw std::invalid_argument("norm.contacts_max must be >= 1");
}

ActionElements action_elements(std::optional<Action> previous, Action action,
                               const RiskConfig& cfg) {
  ActionElements e;
  e.length_risk = clamp01(action.length() / cfg.norm.action_max_len);
  if (previous) {
    const double cross = double(previous->dx) * action.dy - double(previous->dy) * action.dx;
    const double dot = double(previous->dx) * action.dx + double(previous->dy) * action.dy;
    e.turn_deg = std::atan2(std::abs(cross), dot) * 180.0 / std::numbers::pi;
    e.turn_risk = clamp01(e.turn_deg / cfg.norm.turn_max_deg);
  }
  return e;
}

double action_score(const ActionElements& e, const RiskConfig& cfg) {
  return weighted_mean(cfg.wa1, e.length_risk, cfg.wa2, e.turn_risk);
}

double action_category(std::size_t i, std::span<const Action> actions, const RiskConfig& cfg) {
  if (i == 0 || i > actions.size()) {
    throw std::out_of_range("action index " + std::to_string(i) + " outside 1.." +
                            std::to_string(actions.size()));
  }
  const std::optional<Action> previous =
      i >= 2 ? std::optional<Action>(actions[i - 2]) : std::nullopt;
  return action_score(action_elements(previous, actions[i - 1], cfg), cfg);
}

StateElements state_elements(Cell s, const OccupancyGrid& grid, const RiskConfig& cfg) {
  StateElements e;
  e.distance = grid.distance_to_closest_obstacle(s);
  e.distance_risk = clamp01((cfg.norm.dist_hi - e.distance) / (cfg.norm.dist_hi - cfg.norm.dist_lo));
  e.visibility_risk = grid.visibility_risk(s, cfg.norm.vis_range, cfg.norm.vis_rays);
  return e;
}

double state_score(const StateElements& e, const RiskConfig& cfg) {
  return weighted_mean(cfg.w_distance, e.distance_risk, cfg.w_visibility, e.visibility_risk);
}

double state_category(Cell s, const OccupancyGrid& grid, const RiskConfig& cfg) {
  return state_score(state_elements(s, grid, cfg), cfg);
}

PathElements path_elements(const TetherState& tether, const RiskConfig& cfg) {
  PathElements e;
  e.tether_length = tether.length();
  e.tether_risk = std::min(1.0, e.tether_length / cfg.norm.tether_max);
  e.contacts = tether.contact_count();
  e.contact_risk = std::min(1.0, double(e.contacts) / cfg.norm.contacts_max);
  return e;
}

double path_score(const PathElements& e, const RiskConfig& cfg) {
  return weighted_mean(cfg.w_tether_length, e.tether_risk, cfg.w_contacts, e.contact_risk);
}

double path_category(const PrefixPath& p, const TetherState& tether, const RiskConfig& cfg) {
  if (tether.head_cell() != p.end()) {
    throw std::invalid_argument("tether head does not match the prefix end state");
  }
  return path_score(path_elements(tether, cfg), cfg);
}

StateRiskTable::StateRiskTable(const OccupancyGrid& grid, const RiskConfig& cfg)
    : grid_(&grid), cfg_(cfg) {
  const std::size_t n = static_cast<std::size_t>(grid.width()) * grid.height();
  elements_.resize(n);
  scores_.assign(n, 0.0);
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      if (grid.is_obstacle({x, y})) continue;
      const std::size_t k = static_cast<std::size_t>(y) * grid.width() + x;
      elements_[k] = state_elements({x, y}, grid, cfg);
      scores_[k] = state_score(elements_[k], cfg);
    }
  }
}

const StateElements& StateRiskTable::elements(Cell c) const {
  if (!grid_->in_bounds(c) || grid_->is_obstacle(c)) {
    throw std::invalid_argument("state risk requested for a blocked cell");
  }
  return elements_[static_cast<std::size_t>(c.y) * grid_->width() + c.x];
}

double StateRiskTable::score(Cell c) const {
  if (!grid_->in_bounds(c) || grid_->is_obstacle(c)) {
    throw std::invalid_argument("state risk requested for a blocked cell");
  }
  return scores_[static_cast<std::size_t>(c.y) * grid_->width() + c.x];
}

TetherState initial_tether(Cell start, const OccupancyGrid& grid) {
  const Cell anchor = grid.anchor().value_or(start);
  if (anchor == start) return TetherState::init(anchor, grid);
  return TetherState::straight(anchor, start, grid);
}

RiskProfile evaluate(const PathPlan& plan, const OccupancyGrid& grid, const RiskConfig& cfg) {
  cfg.validate();
  require_valid(plan, grid);

  const std::vector<Action> actions = derive_actions(plan);
  RiskProfile profile;
  profile.steps.reserve(plan.states.size());
  TetherState tether = initial_tether(plan.states.front(), grid);
  double cumulative = 0.0;
  for (std::size_t i = 0; i < plan.states.size(); ++i) {
    const Cell s = plan.states[i];
    if (i > 0) tether = tether.advance(s, grid);

    StepRisk step;
    step.index = i;
    step.cell = s;
    if (i > 0) {
      step.action = action_elements(
          i >= 2 ? std::optional<Action>(actions[i - 2]) : std::nullopt, actions[i - 1], cfg);
      step.action_score = action_score(step.action, cfg);
    }
    step.state = state_elements(s, grid, cfg);
    step.state_score = state_score(step.state, cfg);
    step.path = path_elements(tether, cfg);
    step.path_score = path_score(step.path, cfg);

    const double weighted_action = cfg.wa * step.action_score;
    const double weighted_state = cfg.ws * step.state_score;
    const double weighted_path = cfg.wp * step.path_score;
    step.step_total = weighted_action + weighted_state + weighted_path;
    cumulative += step.step_total;
    step.cumulative = cumulative;

    profile.action_subtotal += weighted_action;
    profile.state_subtotal += weighted_state;
    profile.path_subtotal += weighted_path;
    profile.steps.push_back(step);
  }
  profile.total = cumulative;
  return profile;
}

}  // namespace riskpath

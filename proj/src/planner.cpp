#include "riskpath/planner.hpp"

#include <cmath>
#include <optional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "riskpath/tether.hpp"

namespace riskpath {

namespace {

// Neighbor order fixes the tie-break between equal-cost paths.
constexpr Action kMoves[8] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
constexpr int kNoAction = 8;

struct NodeKey {
  Cell cell;
  int incoming;  // index into kMoves, kNoAction at the start
  std::vector<Contact> contacts;

  friend bool operator==(const NodeKey&, const NodeKey&) = default;
};

struct NodeKeyHash {
  std::size_t operator()(const NodeKey& k) const {
    std::size_t h = hash_contacts(k.contacts);
    h ^= (static_cast<std::size_t>(k.cell.x) * 73856093u) ^ (static_cast<std::size_t>(k.cell.y) * 19349663u) ^
         (static_cast<std::size_t>(k.incoming) * 83492791u);
    return h;
  }
};

struct Node {
  TetherState tether;
  int incoming;
  double g;
  std::size_t steps;
  long parent;
  bool closed = false;
};

struct QueueEntry {
  double g;
  std::size_t steps;
  std::size_t seq;
  std::size_t node;

  bool operator>(const QueueEntry& o) const {
    if (g != o.g) return g > o.g;
    if (steps != o.steps) return steps > o.steps;
    return seq > o.seq;
  }
};

bool connected(const OccupancyGrid& grid, Cell start, Cell goal) {
  std::vector<bool> seen(static_cast<std::size_t>(grid.width()) * grid.height(), false);
  std::vector<Cell> stack{start};
  seen[static_cast<std::size_t>(start.y) * grid.width() + start.x] = true;
  while (!stack.empty()) {
    const Cell c = stack.back();
    stack.pop_back();
    if (c == goal) return true;
    for (const Action& a : kMoves) {
      const Cell n{c.x + a.dx, c.y + a.dy};
      if (grid.is_obstacle(n)) continue;
      const std::size_t k = static_cast<std::size_t>(n.y) * grid.width() + n.x;
      if (seen[k]) continue;
      seen[k] = true;
      stack.push_back(n);
    }
  }
  return false;
}

}  // namespace

PlanResult plan_min_risk(const OccupancyGrid& grid, Cell start, Cell goal, const RiskConfig& cfg,
                         const PlannerLimits& limits) {
  cfg.validate();
  return plan_min_risk(StateRiskTable(grid, cfg), start, goal, limits);
}

PlanResult plan_min_risk(const StateRiskTable& states, Cell start, Cell goal,
                         const PlannerLimits& limits) {
  const OccupancyGrid& grid = states.grid();
  const RiskConfig& cfg = states.config();
  cfg.validate();
  for (const auto& [cell, name] : {std::pair{start, "start"}, std::pair{goal, "goal"}}) {
    if (!grid.in_bounds(cell) || grid.is_obstacle(cell)) {
      throw std::invalid_argument(std::string(name) + " cell is blocked or out of bounds");
    }
  }
  if (grid.anchor() && *grid.anchor() != start) {
    throw std::invalid_argument("planning requires the tether anchor at the start cell");
  }
  if (!connected(grid, start, goal)) {
    throw PlanningError(PlanningError::Kind::kUnreachable, "goal is not reachable from start");
  }

  std::vector<Node> nodes;
  std::unordered_map<NodeKey, std::size_t, NodeKeyHash> index;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> open;
  std::size_t seq = 0;

  {
    TetherState t = TetherState::init(start, grid);
    const double g0 = cfg.ws * states.score(start) + cfg.wp * path_score(path_elements(t, cfg), cfg);
    nodes.push_back({std::move(t), kNoAction, g0, 0, -1});
    index.emplace(NodeKey{start, kNoAction, {}}, 0);
    open.push({g0, 0, seq++, 0});
  }

  std::size_t expansions = 0;
  bool pruned_by_contacts = false;
  std::optional<std::size_t> reached;
  while (!open.empty()) {
    const QueueEntry top = open.top();
    open.pop();
    Node& node = nodes[top.node];
    if (node.closed || top.g > node.g || top.steps != node.steps) continue;
    node.closed = true;
    if (node.tether.head_cell() == goal) {
      reached = top.node;
      break;
    }
    if (++expansions > limits.max_expansions) {
      throw PlanningError(PlanningError::Kind::kBudgetExhausted,
                          "expansion budget of " + std::to_string(limits.max_expansions) +
                              " exhausted before reaching the goal");
    }

    const Cell here = node.tether.head_cell();
    const std::optional<Action> previous =
        node.incoming == kNoAction ? std::nullopt : std::optional<Action>(kMoves[node.incoming]);
    for (int m = 0; m < 8; ++m) {
      const Cell next{here.x + kMoves[m].dx, here.y + kMoves[m].dy};
      if (grid.is_obstacle(next)) continue;
      // `node` may dangle after nodes.push_back below; re-fetch by index.
      TetherState t = nodes[top.node].tether.advance(next, grid);
      if (t.contact_count() > limits.max_contacts) {
        pruned_by_contacts = true;
        continue;
      }
      const double edge = cfg.wa * action_score(action_elements(previous, kMoves[m], cfg), cfg) +
                          cfg.ws * states.score(next) +
                          cfg.wp * path_score(path_elements(t, cfg), cfg);
      const double g = nodes[top.node].g + edge;
      const std::size_t steps = nodes[top.node].steps + 1;

      NodeKey key{next, m, t.contacts()};
      auto it = index.find(key);
      if (it == index.end()) {
        nodes.push_back({std::move(t), m, g, steps, static_cast<long>(top.node)});
        index.emplace(std::move(key), nodes.size() - 1);
        open.push({g, steps, seq++, nodes.size() - 1});
      } else {
        Node& other = nodes[it->second];
        if (other.closed) continue;
        if (g < other.g || (g == other.g && steps < other.steps)) {
          other.g = g;
          other.steps = steps;
          other.parent = static_cast<long>(top.node);
          open.push({g, steps, seq++, it->second});
        }
      }
    }
  }

  if (!reached) {
    throw PlanningError(PlanningError::Kind::kUnreachable,
                        pruned_by_contacts
                            ? "goal unreachable within max_contacts=" +
                                  std::to_string(limits.max_contacts)
                            : "goal unreachable");
  }

  PlanResult result;
  std::vector<Cell> reversed;
  for (long k = static_cast<long>(*reached); k >= 0; k = nodes[static_cast<std::size_t>(k)].parent) {
    reversed.push_back(nodes[static_cast<std::size_t>(k)].tether.head_cell());
  }
  result.plan.states.assign(reversed.rbegin(), reversed.rend());
  result.search_cost = nodes[*reached].g;
  result.profile = evaluate(result.plan, grid, cfg);
  result.expansions = expansions;
  result.nodes = nodes.size();
  result.limits = limits;
  if (std::abs(result.profile.total - result.search_cost) > 1e-9) {
    throw std::logic_error("planner cost disagrees with evaluate()");
  }
  return result;
}

}  // namespace riskpath

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <numeric>

#include "riskpath/tether.hpp"

namespace riskpath::oracle {

namespace {

using i128 = __int128;

struct P {
  std::int64_t x;
  std::int64_t y;
  bool operator==(const P&) const = default;
  bool operator<(const P& o) const { return x != o.x ? x < o.x : y < o.y; }
};

i128 cross3(P o, P a, P b) {
  return i128(a.x - o.x) * (b.y - o.y) - i128(a.y - o.y) * (b.x - o.x);
}

int sgn(i128 v) { return (v > 0) - (v < 0); }

// Strict convex hull, counter-clockwise (Andrew's monotone chain).
std::vector<P> convex_hull(std::vector<P> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<P> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross3(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross3(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

// Interiors of the triangle and the axis-aligned square overlap?
bool interiors_overlap(const P (&tri)[3], std::int64_t x0, std::int64_t y0, std::int64_t side) {
  const P sq[4] = {{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}};
  std::vector<std::pair<std::int64_t, std::int64_t>> axes = {{1, 0}, {0, 1}};
  for (int i = 0; i < 3; ++i) {
    const P a = tri[i], b = tri[(i + 1) % 3];
    axes.push_back({b.y - a.y, a.x - b.x});
  }
  for (const auto& [nx, ny] : axes) {
    i128 lo1 = 0, hi1 = 0, lo2 = 0, hi2 = 0;
    for (int i = 0; i < 3; ++i) {
      const i128 v = i128(tri[i].x) * nx + i128(tri[i].y) * ny;
      if (i == 0 || v < lo1) lo1 = v;
      if (i == 0 || v > hi1) hi1 = v;
    }
    for (int i = 0; i < 4; ++i) {
      const i128 v = i128(sq[i].x) * nx + i128(sq[i].y) * ny;
      if (i == 0 || v < lo2) lo2 = v;
      if (i == 0 || v > hi2) hi2 = v;
    }
    if (hi1 <= lo2 || hi2 <= lo1) return false;
  }
  return true;
}

// Taut replacement for v between u and w: obstacle corners on the hull of the
// material inside triangle (u, v, w), on v's side of u-w, in order from u.
std::vector<P> taut_replacement(P u, P v, P w, const OccupancyGrid& grid, std::int64_t scale) {
  const int turn = sgn(cross3(u, v, w));
  if (turn == 0) return {};
  const P tri[3] = {u, v, w};
  const std::int64_t min_x = std::min({u.x, v.x, w.x}), max_x = std::max({u.x, v.x, w.x});
  const std::int64_t min_y = std::min({u.y, v.y, w.y}), max_y = std::max({u.y, v.y, w.y});

  std::vector<P> pts{u, w};
  for (int cy = static_cast<int>(min_y / scale) - 1; cy <= max_y / scale; ++cy) {
    for (int cx = static_cast<int>(min_x / scale) - 1; cx <= max_x / scale; ++cx) {
      if (!grid.in_bounds({cx, cy}) || !grid.is_obstacle({cx, cy})) continue;
      if (!interiors_overlap(tri, cx * scale, cy * scale, scale)) continue;
      for (int k = 0; k < 4; ++k) {
        const P c{(cx + (k & 1)) * scale, (cy + (k >> 1)) * scale};
        const bool inside = sgn(cross3(u, v, c)) * turn >= 0 && sgn(cross3(v, w, c)) * turn >= 0 &&
                            sgn(cross3(w, u, c)) * turn >= 0;
        if (inside && sgn(cross3(u, w, c)) == -turn) pts.push_back(c);
      }
    }
  }
  if (pts.size() == 2) return {};

  const std::vector<P> hull = convex_hull(pts);
  const auto iu = static_cast<std::size_t>(std::find(hull.begin(), hull.end(), u) - hull.begin());
  const auto iw = static_cast<std::size_t>(std::find(hull.begin(), hull.end(), w) - hull.begin());
  if (iu == hull.size() || iw == hull.size()) throw OracleError("triangle endpoints left the hull");
  std::vector<P> forward, backward;
  for (std::size_t k = (iu + 1) % hull.size(); k != iw; k = (k + 1) % hull.size()) forward.push_back(hull[k]);
  for (std::size_t k = (iu + hull.size() - 1) % hull.size(); k != iw;
       k = (k + hull.size() - 1) % hull.size()) {
    backward.push_back(hull[k]);
  }
  if (!forward.empty() && !backward.empty()) throw OracleError("material on both sides of u-w");
  return forward.empty() ? backward : forward;
}

}  // namespace

StraightenedTether straighten(const std::vector<Cell>& walk, const OccupancyGrid& grid,
                              double max_step, std::size_t iteration_cap) {
  if (walk.empty()) throw OracleError("empty walk");
  const auto subdivisions = static_cast<std::int64_t>(std::ceil(std::numbers::sqrt2 / max_step));
  const std::int64_t scale = 2 * subdivisions;  // units per cell
  auto center = [&](Cell c) { return P{c.x * scale + subdivisions, c.y * scale + subdivisions}; };

  std::vector<P> poly{center(walk.front())};
  for (std::size_t i = 0; i < walk.size(); ++i) {
    if (!grid.in_bounds(walk[i]) || grid.is_obstacle(walk[i])) throw OracleError("walk collides");
    if (i == 0) continue;
    const int dx = walk[i].x - walk[i - 1].x, dy = walk[i].y - walk[i - 1].y;
    if (std::max(std::abs(dx), std::abs(dy)) != 1) throw OracleError("walk step is not 8-connected");
    const P a = center(walk[i - 1]);
    for (std::int64_t t = 1; t <= subdivisions; ++t) {
      poly.push_back({a.x + 2 * dx * t, a.y + 2 * dy * t});
    }
  }

  std::size_t iterations = 0;
  std::size_t i = 1;
  while (i + 1 < poly.size()) {
    std::vector<P> repl = taut_replacement(poly[i - 1], poly[i], poly[i + 1], grid, scale);
    if (repl.size() == 1 && repl.front() == poly[i]) {
      ++i;
      continue;
    }
    poly.erase(poly.begin() + static_cast<std::ptrdiff_t>(i));
    poly.insert(poly.begin() + static_cast<std::ptrdiff_t>(i), repl.begin(), repl.end());
    i = std::max<std::size_t>(1, i - 1);
    if (++iterations > iteration_cap) throw OracleError("straightening did not converge");
  }

  StraightenedTether out;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    out.vertices.push_back({double(poly[k].x) / scale, double(poly[k].y) / scale});
    if (k > 0) {
      out.length += std::hypot(double(poly[k].x - poly[k - 1].x), double(poly[k].y - poly[k - 1].y));
    }
  }
  out.length /= double(scale);
  out.contacts = poly.size() >= 2 ? poly.size() - 2 : 0;
  return out;
}

double brute_force_distance(const OccupancyGrid& grid, Cell c) {
  double best = INFINITY;
  for (int y = -1; y <= grid.height(); ++y) {
    for (int x = -1; x <= grid.width(); ++x) {
      if (grid.is_obstacle({x, y})) best = std::min(best, std::hypot(x - c.x, y - c.y));
    }
  }
  return best;
}

double ray_march_visibility(const OccupancyGrid& grid, Cell c, double range, int rays,
                            double step) {
  const double ox = c.x + 0.5, oy = c.y + 0.5;
  int blocked = 0;
  for (int k = 0; k < rays; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / rays;
    const double dx = std::cos(theta), dy = std::sin(theta);
    for (double t = step; t <= range + 1.0; t += step) {
      const Cell at{static_cast<int>(std::floor(ox + t * dx)), static_cast<int>(std::floor(oy + t * dy))};
      if (at == c) continue;
      if (grid.is_obstacle(at) && std::hypot(at.x - c.x, at.y - c.y) <= range) {
        ++blocked;
        break;
      }
    }
  }
  return double(blocked) / rays;
}

bool rational_line_of_sight(const OccupancyGrid& grid, Point a, Point b, std::int64_t scale) {
  auto to_int = [&](double v) {
    const double s = v * double(scale);
    if (s != std::round(s)) throw OracleError("point is not on the rational lattice");
    return static_cast<std::int64_t>(s);
  };
  const std::int64_t ax = to_int(a.x), ay = to_int(a.y), bx = to_int(b.x), by = to_int(b.y);
  const std::int64_t dx = bx - ax, dy = by - ay;
  if (dx == 0 && dy == 0) return true;

  for (int cy = 0; cy < grid.height(); ++cy) {
    for (int cx = 0; cx < grid.width(); ++cx) {
      if (!grid.is_obstacle({cx, cy})) continue;
      const std::int64_t x0 = cx * scale, x1 = x0 + scale, y0 = cy * scale, y1 = y0 + scale;
      // Breakpoints t = num/den where the segment meets a box line, plus 0 and 1.
      std::vector<std::pair<i128, i128>> ts = {{0, 1}, {1, 1}};
      for (std::int64_t xl : {x0, x1}) {
        if (dx != 0) ts.push_back(dx > 0 ? std::pair<i128, i128>{xl - ax, dx} : std::pair<i128, i128>{ax - xl, -dx});
      }
      for (std::int64_t yl : {y0, y1}) {
        if (dy != 0) ts.push_back(dy > 0 ? std::pair<i128, i128>{yl - ay, dy} : std::pair<i128, i128>{ay - yl, -dy});
      }
      std::erase_if(ts, [](const auto& t) { return t.first < 0 || t.first > t.second; });
      std::sort(ts.begin(), ts.end(), [](const auto& p, const auto& q) {
        return p.first * q.second < q.first * p.second;
      });
      for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        const i128 num = ts[k].first * ts[k + 1].second + ts[k + 1].first * ts[k].second;
        const i128 den = 2 * ts[k].second * ts[k + 1].second;
        // Midpoint of the sub-interval; strictly inside the box means a hit.
        const i128 px = i128(ax) * den + num * dx;
        const i128 py = i128(ay) * den + num * dy;
        if (i128(x0) * den < px && px < i128(x1) * den && i128(y0) * den < py && py < i128(y1) * den) {
          return false;
        }
      }
    }
  }
  return true;
}

bool brute_force_reachability(const PathPlan& plan, const std::vector<Point>& exec, double rp) {
  const std::size_t n = plan.states.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    bool found = false;
    for (std::size_t j1 = 0; j1 < exec.size() && !found; ++j1) {
      if (distance(center_of(plan.states[i]), exec[j1]) > rp) continue;
      for (std::size_t j2 = j1; j2 < exec.size() && !found; ++j2) {
        if (distance(center_of(plan.states[i + 1]), exec[j2]) <= rp) found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

bool brute_force_stability(const PathPlan& plan, const std::vector<Point>& exec, double re) {
  if (std::isinf(re)) return true;
  for (std::size_t j = 0; j + 1 < exec.size(); ++j) {
    bool found = false;
    for (std::size_t i1 = 0; i1 < plan.states.size() && !found; ++i1) {
      if (distance(exec[j], center_of(plan.states[i1])) > re) continue;
      for (std::size_t i2 = i1; i2 < plan.states.size() && !found; ++i2) {
        if (distance(exec[j + 1], center_of(plan.states[i2])) <= re) found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

EnumerationResult enumerate_paths(const OccupancyGrid& grid, Cell start, Cell goal,
                                  const RiskConfig& cfg, std::size_t max_len, bool bound,
                                  std::size_t node_cap) {
  return enumerate_paths(StateRiskTable(grid, cfg), start, goal, max_len, bound, node_cap);
}

EnumerationResult enumerate_paths(const StateRiskTable& states, Cell start, Cell goal,
                                  std::size_t max_len, bool bound, std::size_t node_cap) {
  const OccupancyGrid& grid = states.grid();
  const RiskConfig& cfg = states.config();
  static constexpr Action kMoves[8] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1},
                                       {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
  EnumerationResult result;
  result.min_risk = INFINITY;

  // Admissible per-step lower bound: cheapest action, cheapest state, zero path risk.
  double min_action = INFINITY;
  for (const Action& a : kMoves) {
    min_action = std::min(min_action, action_score(action_elements(std::nullopt, a, cfg), cfg));
  }
  auto state_at = [&](Cell c) { return states.score(c); };
  double min_state = INFINITY;
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      if (grid.is_free({x, y})) min_state = std::min(min_state, states.score({x, y}));
    }
  }
  const double min_step = cfg.wa * min_action + cfg.ws * min_state;

  // Fewest moves from each cell to the goal (breadth-first over free cells).
  std::vector<std::size_t> hops(static_cast<std::size_t>(grid.width()) * grid.height(), SIZE_MAX);
  auto hop = [&](Cell c) -> std::size_t& { return hops[static_cast<std::size_t>(c.y) * grid.width() + c.x]; };
  if (grid.in_bounds(goal) && grid.is_free(goal)) {
    std::vector<Cell> frontier{goal};
    hop(goal) = 0;
    for (std::size_t head = 0; head < frontier.size(); ++head) {
      const Cell c = frontier[head];
      for (const Action& a : kMoves) {
        const Cell n{c.x + a.dx, c.y + a.dy};
        if (!grid.in_bounds(n) || grid.is_obstacle(n) || hop(n) != SIZE_MAX) continue;
        hop(n) = hop(c) + 1;
        frontier.push_back(n);
      }
    }
  }
  auto remaining_bound = [&](Cell c) { return double(hop(c)) * min_step; };

  PathPlan path;
  path.states.push_back(start);
  double best_sum = INFINITY;
  std::vector<std::pair<double, PathPlan>> candidates;
  const double start_cost = cfg.ws * state_at(start);

  std::function<void(const TetherState&, double, std::optional<Action>)> dfs =
      [&](const TetherState& tether, double prefix, std::optional<Action> previous) {
        if (++result.nodes_visited > node_cap) throw EnumerationCapExceeded("enumeration cap exceeded");
        const Cell here = path.states.back();
        if (here == goal) {
          ++result.paths_scored;
          if (prefix < best_sum + 1e-9) {
            candidates.push_back({prefix, path});
            best_sum = std::min(best_sum, prefix);
          }
        }
        if (path.states.size() > max_len) return;
        for (const Action& a : kMoves) {
          const Cell next{here.x + a.dx, here.y + a.dy};
          if (!grid.in_bounds(next) || grid.is_obstacle(next)) continue;
          if (hop(next) == SIZE_MAX || hop(next) + path.states.size() > max_len) continue;
          const TetherState t = tether.advance(next, grid);
          const double step = cfg.wa * action_score(action_elements(previous, a, cfg), cfg) +
                              cfg.ws * state_at(next) +
                              cfg.wp * path_score(path_elements(t, cfg), cfg);
          if (bound && prefix + step + remaining_bound(next) > best_sum + 1e-9) continue;
          path.states.push_back(next);
          dfs(t, prefix + step, a);
          path.states.pop_back();
        }
      };
  dfs(TetherState::init(start, grid), start_cost, std::nullopt);

  // Running sums only screen candidates; the recorded score is evaluate()'s.
  for (const auto& [sum, plan] : candidates) {
    if (sum > best_sum + 1e-9) continue;
    const double total = evaluate(plan, grid, cfg).total;
    if (std::abs(total - sum) > 1e-9) throw OracleError("running sum disagrees with evaluate()");
    if (total < result.min_risk) {
      result.min_risk = total;
      result.argmin = plan;
    }
  }
  return result;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = (double(i) + double(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const std::vector<double> ra = ranks(a), rb = ranks(b);
  const double n = double(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace riskpath::oracle

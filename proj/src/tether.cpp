#include "riskpath/tether.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "riskpath/segment.hpp"

namespace riskpath {

namespace {

// Geometry runs in half-cell units so centers and corners are both integral:
// cell (x, y) has center (2x+1, 2y+1) and corner (i, j) sits at (2i, 2j).
struct HalfPoint {
  std::int64_t x;
  std::int64_t y;
  friend constexpr bool operator==(const HalfPoint&, const HalfPoint&) = default;
};

HalfPoint half_center(Cell c) { return {2 * std::int64_t{c.x} + 1, 2 * std::int64_t{c.y} + 1}; }
HalfPoint half_corner(const Contact& c) { return {2 * std::int64_t{c.x}, 2 * std::int64_t{c.y}}; }

int orient(HalfPoint a, HalfPoint b, HalfPoint c) {
  return detail::orientation(a.x, a.y, b.x, b.y, c.x, c.y);
}

double half_distance(HalfPoint a, HalfPoint b) {
  return std::hypot(double(a.x - b.x), double(a.y - b.y)) / 2.0;
}

bool half_line_of_sight(HalfPoint a, HalfPoint b, const OccupancyGrid& grid) {
  if (a == b) return true;
  const auto floor_half = [](std::int64_t v) { return static_cast<int>(v >= 0 ? v / 2 : -((-v + 1) / 2)); };
  const int x_lo = std::max(0, floor_half(std::min(a.x, b.x)) - 1);
  const int x_hi = std::min(grid.width() - 1, floor_half(std::max(a.x, b.x)) + 1);
  const int y_lo = std::max(0, floor_half(std::min(a.y, b.y)) - 1);
  const int y_hi = std::min(grid.height() - 1, floor_half(std::max(a.y, b.y)) + 1);
  for (int y = y_lo; y <= y_hi; ++y) {
    for (int x = x_lo; x <= x_hi; ++x) {
      if (!grid.is_obstacle({x, y})) continue;
      if (detail::open_segment_hits_open_box<std::int64_t>(a.x, a.y, b.x, b.y, 2 * x, 2 * y,
                                                           2 * x + 2, 2 * y + 2)) {
        return false;
      }
    }
  }
  return true;
}

// Do the interiors of triangle (a, b, c) and the box [x0, x1] x [y0, y1]
// overlap? Separating-axis test over the box axes and the triangle edge normals.
bool triangle_meets_box(const HalfPoint (&tri)[3], std::int64_t x0, std::int64_t y0,
                        std::int64_t x1, std::int64_t y1) {
  const HalfPoint box[4] = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  auto separated = [&](std::int64_t nx, std::int64_t ny) {
    std::int64_t tmin = INT64_MAX, tmax = INT64_MIN, bmin = INT64_MAX, bmax = INT64_MIN;
    for (const HalfPoint& p : tri) {
      const std::int64_t v = p.x * nx + p.y * ny;
      tmin = std::min(tmin, v);
      tmax = std::max(tmax, v);
    }
    for (const HalfPoint& p : box) {
      const std::int64_t v = p.x * nx + p.y * ny;
      bmin = std::min(bmin, v);
      bmax = std::max(bmax, v);
    }
    return tmax <= bmin || bmax <= tmin;
  };
  if (separated(1, 0) || separated(0, 1)) return false;
  for (int i = 0; i < 3; ++i) {
    const HalfPoint& p = tri[i];
    const HalfPoint& q = tri[(i + 1) % 3];
    if (separated(q.y - p.y, p.x - q.x)) return false;
  }
  return true;
}

// Corners the cable u -> w catches on when it is pulled taut from u -> v -> w:
// the convex chain, bulging toward v, around the obstacle material inside the
// triangle. Excludes u and w; empty when the triangle is clear or degenerate.
std::vector<HalfPoint> catch_corners(HalfPoint u, HalfPoint v, HalfPoint w,
                                     const OccupancyGrid& grid) {
  const int turn = orient(u, v, w);
  if (turn == 0) return {};

  const HalfPoint tri[3] = {u, v, w};
  const std::int64_t min_x = std::min({u.x, v.x, w.x});
  const std::int64_t max_x = std::max({u.x, v.x, w.x});
  const std::int64_t min_y = std::min({u.y, v.y, w.y});
  const std::int64_t max_y = std::max({u.y, v.y, w.y});
  const int cx_lo = std::max<std::int64_t>(0, min_x / 2 - 1);
  const int cx_hi = std::min<std::int64_t>(grid.width() - 1, max_x / 2);
  const int cy_lo = std::max<std::int64_t>(0, min_y / 2 - 1);
  const int cy_hi = std::min<std::int64_t>(grid.height() - 1, max_y / 2);

  auto in_closed_triangle = [&](HalfPoint p) {
    return orient(u, v, p) * turn >= 0 && orient(v, w, p) * turn >= 0 &&
           orient(w, u, p) * turn >= 0;
  };

  std::vector<HalfPoint> candidates;
  for (int y = cy_lo; y <= cy_hi; ++y) {
    for (int x = cx_lo; x <= cx_hi; ++x) {
      if (!grid.is_obstacle({x, y})) continue;
      if (!triangle_meets_box(tri, 2 * x, 2 * y, 2 * x + 2, 2 * y + 2)) continue;
      const HalfPoint corners[4] = {
          {2 * x, 2 * y}, {2 * x + 2, 2 * y}, {2 * x, 2 * y + 2}, {2 * x + 2, 2 * y + 2}};
      for (const HalfPoint& c : corners) {
        if (c == u || c == w) continue;
        // Material on the baseline u-w never bends the cable.
        if (orient(u, w, c) != -turn) continue;
        if (!in_closed_triangle(c)) continue;
        if (std::find(candidates.begin(), candidates.end(), c) == candidates.end()) {
          candidates.push_back(c);
        }
      }
    }
  }

  // Gift-wrap from u to w keeping every candidate on the inner side.
  std::vector<HalfPoint> chain;
  HalfPoint from = u;
  while (true) {
    HalfPoint best = w;
    auto sq = [&](HalfPoint p) {
      const std::int64_t dx = p.x - from.x, dy = p.y - from.y;
      return dx * dx + dy * dy;
    };
    for (const HalfPoint& c : candidates) {
      if (c == from) continue;
      const int o = orient(from, best, c);
      if (o == -turn) {
        best = c;
      } else if (o == 0) {
        const std::int64_t dot = (c.x - from.x) * (best.x - from.x) + (c.y - from.y) * (best.y - from.y);
        if (dot > 0 && sq(c) > sq(best)) best = c;
      }
    }
    if (best == w) break;
    chain.push_back(best);
    from = best;
    if (chain.size() > candidates.size()) {
      throw TetherInvariantError("corner chain did not terminate");
    }
  }
  return chain;
}

struct Vertex {
  HalfPoint p;
  int turn;  // 0 for the anchor and for the free (robot) vertices
};

std::string point_str(HalfPoint p) {
  return "(" + std::to_string(p.x / 2.0) + "," + std::to_string(p.y / 2.0) + ")";
}

}  // namespace

TetherState TetherState::init(Cell anchor, const OccupancyGrid& grid) {
  if (!grid.in_bounds(anchor) || grid.is_obstacle(anchor)) {
    throw std::invalid_argument("tether anchor must be a free in-bounds cell");
  }
  return TetherState(anchor, anchor, {}, 0.0);
}

TetherState TetherState::straight(Cell anchor, Cell head, const OccupancyGrid& grid) {
  TetherState t = init(anchor, grid);
  if (!grid.in_bounds(head) || grid.is_obstacle(head)) {
    throw std::invalid_argument("tether head must be a free in-bounds cell");
  }
  if (!half_line_of_sight(half_center(anchor), half_center(head), grid)) {
    throw std::invalid_argument("tether anchor has no line of sight to the head");
  }
  t.head_ = head;
  t.length_ = half_distance(half_center(anchor), half_center(head));
  return t;
}

TetherState TetherState::advance(Cell next, const OccupancyGrid& grid) const {
  const int dx = next.x - head_.x;
  const int dy = next.y - head_.y;
  if (std::abs(dx) > 1 || std::abs(dy) > 1 || (dx == 0 && dy == 0)) {
    throw std::invalid_argument("tether advance must be a single 8-connected step");
  }
  if (!grid.in_bounds(next) || grid.is_obstacle(next)) {
    throw std::invalid_argument("tether advance target must be a free in-bounds cell");
  }

  std::vector<Vertex> chain;
  chain.reserve(contacts_.size() + 4);
  chain.push_back({half_center(anchor_), 0});
  for (const Contact& c : contacts_) chain.push_back({half_corner(c), c.turn});
  chain.push_back({half_center(head_), 0});
  chain.push_back({half_center(next), 0});

  // The old head is a free vertex: pull it taut, then walk down the stack
  // releasing contacts whose turn no longer wraps their obstacle.
  std::size_t i = chain.size() - 2;
  std::size_t lowest_touched = i - 1;
  while (true) {
    const HalfPoint u = chain[i - 1].p;
    const HalfPoint v = chain[i].p;
    const HalfPoint w = chain[i + 1].p;
    const int turn = orient(u, v, w);
    std::vector<HalfPoint> caught = catch_corners(u, v, w, grid);
    chain.erase(chain.begin() + static_cast<std::ptrdiff_t>(i));
    for (std::size_t k = 0; k < caught.size(); ++k) {
      chain.insert(chain.begin() + static_cast<std::ptrdiff_t>(i + k), Vertex{caught[k], turn});
    }
    lowest_touched = std::min(lowest_touched, i - 1);

    const std::size_t j = i - 1;
    if (j == 0) break;
    const Vertex& top = chain[j];
    if (orient(chain[j - 1].p, top.p, chain[j + 1].p) == top.turn) break;
    i = j;
  }

  std::vector<Contact> contacts;
  contacts.reserve(chain.size() - 2);
  double length = 0.0;
  for (std::size_t k = 1; k < chain.size(); ++k) {
    length += half_distance(chain[k - 1].p, chain[k].p);
    if (k + 1 < chain.size()) {
      contacts.push_back({static_cast<int>(chain[k].p.x / 2), static_cast<int>(chain[k].p.y / 2),
                          chain[k].turn});
    }
  }

  for (std::size_t k = lowest_touched; k + 1 < chain.size(); ++k) {
    if (!half_line_of_sight(chain[k].p, chain[k + 1].p, grid)) {
      throw TetherInvariantError("tether segment " + point_str(chain[k].p) + " -> " +
                                 point_str(chain[k + 1].p) + " crosses an obstacle");
    }
    if (k > 0 && orient(chain[k - 1].p, chain[k].p, chain[k + 1].p) != chain[k].turn) {
      throw TetherInvariantError("tether contact " + point_str(chain[k].p) + " is slack");
    }
  }

  return TetherState(anchor_, next, std::move(contacts), length);
}

std::vector<Point> TetherState::polyline() const {
  std::vector<Point> out;
  out.reserve(contacts_.size() + 2);
  out.push_back(anchor());
  for (const Contact& c : contacts_) out.push_back(c.point());
  out.push_back(head());
  return out;
}

TetherState tether_along(const std::vector<Cell>& cells, const OccupancyGrid& grid) {
  if (cells.empty()) throw std::invalid_argument("tether walk is empty");
  TetherState t = TetherState::init(cells.front(), grid);
  for (std::size_t i = 1; i < cells.size(); ++i) t = t.advance(cells[i], grid);
  return t;
}

std::size_t hash_contacts(const std::vector<Contact>& contacts) {
  std::size_t h = 0xcbf29ce484222325ull;
  for (const Contact& c : contacts) {
    for (int v : {c.x, c.y, c.turn}) {
      h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(v));
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

}  // namespace riskpath

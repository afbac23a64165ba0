#include "riskpath/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "riskpath/segment.hpp"

namespace riskpath {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

OccupancyGrid::OccupancyGrid(int width, int height, std::vector<bool> cells)
    : width_(width), height_(height), cells_(std::move(cells)) {
  if (width_ < 1 || height_ < 1) {
    throw std::invalid_argument("grid dimensions must be at least 1x1");
  }
  if (cells_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_)) {
    throw std::invalid_argument("cell count does not match width*height");
  }
  compute_distance_field();
}

bool OccupancyGrid::is_obstacle(Cell c) const {
  if (!in_bounds(c)) return true;
  return cells_[static_cast<std::size_t>(c.y) * width_ + c.x];
}

std::size_t OccupancyGrid::obstacle_count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), true));
}

void OccupancyGrid::require_free(Cell c, const char* what) const {
  if (!in_bounds(c)) {
    throw std::invalid_argument(std::string(what) + " cell (" + std::to_string(c.x) + "," +
                                std::to_string(c.y) + ") is out of bounds");
  }
  if (is_obstacle(c)) {
    throw std::invalid_argument(std::string(what) + " cell (" + std::to_string(c.x) + "," +
                                std::to_string(c.y) + ") is an obstacle");
  }
}

void OccupancyGrid::set_start(Cell c) {
  require_free(c, "start");
  start_ = c;
}

void OccupancyGrid::set_goal(Cell c) {
  require_free(c, "goal");
  goal_ = c;
}

void OccupancyGrid::set_anchor(Cell c) {
  require_free(c, "anchor");
  anchor_ = c;
}

namespace {

// One-dimensional squared distance transform (lower envelope of parabolas,
// Felzenszwalb & Huttenlocher). f holds 0 at obstacles and kFar elsewhere.
constexpr double kFar = 1e20;

void squared_edt_1d(const std::vector<double>& f, std::vector<double>& d) {
  const int n = static_cast<int>(f.size());
  std::vector<int> v(n);
  std::vector<double> z(n + 1);
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  auto intersect = [&](int q, int p) {
    return ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * q - 2.0 * p);
  };
  for (int q = 1; q < n; ++q) {
    double s = intersect(q, v[k]);
    while (s <= z[k]) {
      --k;
      s = intersect(q, v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

void OccupancyGrid::compute_distance_field() {
  // Padded by the virtual border ring, which is always obstacle.
  const int pw = width_ + 2;
  const int ph = height_ + 2;
  std::vector<double> field(static_cast<std::size_t>(pw) * ph, kFar);
  for (int y = -1; y <= height_; ++y) {
    for (int x = -1; x <= width_; ++x) {
      if (is_obstacle({x, y})) field[static_cast<std::size_t>(y + 1) * pw + (x + 1)] = 0.0;
    }
  }
  std::vector<double> f, d;
  f.resize(ph);
  d.resize(ph);
  for (int x = 0; x < pw; ++x) {
    for (int y = 0; y < ph; ++y) f[y] = field[static_cast<std::size_t>(y) * pw + x];
    squared_edt_1d(f, d);
    for (int y = 0; y < ph; ++y) field[static_cast<std::size_t>(y) * pw + x] = d[y];
  }
  f.resize(pw);
  d.resize(pw);
  for (int y = 0; y < ph; ++y) {
    for (int x = 0; x < pw; ++x) f[x] = field[static_cast<std::size_t>(y) * pw + x];
    squared_edt_1d(f, d);
    for (int x = 0; x < pw; ++x) field[static_cast<std::size_t>(y) * pw + x] = d[x];
  }
  distance_.assign(cells_.size(), 0.0);
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      distance_[static_cast<std::size_t>(y) * width_ + x] =
          std::sqrt(field[static_cast<std::size_t>(y + 1) * pw + (x + 1)]);
    }
  }
}

double OccupancyGrid::distance_to_closest_obstacle(Cell c) const {
  require_free(c, "query");
  return distance_[static_cast<std::size_t>(c.y) * width_ + c.x];
}

double OccupancyGrid::visibility_risk(Cell c, double range, int ray_count) const {
  require_free(c, "query");
  if (!(range > 0.0)) throw std::invalid_argument("visibility range must be positive");
  if (ray_count < 4) throw std::invalid_argument("visibility needs at least 4 rays");

  // Obstacle cells (border included) whose centers lie within range.
  const Point origin = center_of(c);
  const int reach = static_cast<int>(std::ceil(range));
  std::vector<Cell> blockers;
  for (int dy = -reach; dy <= reach; ++dy) {
    for (int dx = -reach; dx <= reach; ++dx) {
      if (dx == 0 && dy == 0) continue;
      if (dx * dx + dy * dy > range * range) continue;
      const Cell o{c.x + dx, c.y + dy};
      if (is_obstacle(o)) blockers.push_back(o);
    }
  }
  if (blockers.empty()) return 0.0;
  // Nearest first: most rays stop at their first test.
  std::stable_sort(blockers.begin(), blockers.end(), [&](Cell a, Cell b) {
    const int da = (a.x - c.x) * (a.x - c.x) + (a.y - c.y) * (a.y - c.y);
    const int db = (b.x - c.x) * (b.x - c.x) + (b.y - c.y) * (b.y - c.y);
    return da < db;
  });

  // Rays only need to run as far as the far side of the farthest candidate.
  constexpr double kShrink = 1e-9;
  const double length = range + 1.0;
  int blocked = 0;
  for (int k = 0; k < ray_count; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / ray_count;
    const Point tip{origin.x + length * std::cos(theta), origin.y + length * std::sin(theta)};
    for (const Cell& o : blockers) {
      if (detail::open_segment_hits_open_box(origin.x, origin.y, tip.x, tip.y, o.x + kShrink,
                                             o.y + kShrink, o.x + 1.0 - kShrink,
                                             o.y + 1.0 - kShrink)) {
        ++blocked;
        break;
      }
    }
  }
  return static_cast<double>(blocked) / ray_count;
}

bool OccupancyGrid::line_of_sight(Point a, Point b) const {
  if (a == b) return true;
  const int x_lo = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x))) - 1);
  const int x_hi = std::min(width_ - 1, static_cast<int>(std::floor(std::max(a.x, b.x))) + 1);
  const int y_lo = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y))) - 1);
  const int y_hi = std::min(height_ - 1, static_cast<int>(std::floor(std::max(a.y, b.y))) + 1);
  for (int y = y_lo; y <= y_hi; ++y) {
    for (int x = x_lo; x <= x_hi; ++x) {
      if (!cells_[static_cast<std::size_t>(y) * width_ + x]) continue;
      if (detail::open_segment_hits_open_box(a.x, a.y, b.x, b.y, double(x), double(y),
                                             double(x + 1), double(y + 1))) {
        return false;
      }
    }
  }
  return true;
}

OccupancyGrid load_map(std::istream& in) {
  std::vector<std::string> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    rows.push_back(line);
  }
  // Trailing blank lines are ignored.
  while (!rows.empty() && rows.back().empty()) rows.pop_back();
  if (rows.empty()) throw MapParseError("map is empty");

  const std::size_t width = rows.front().size();
  if (width == 0) throw MapParseError("map row 0 is empty");
  std::vector<bool> cells;
  cells.reserve(width * rows.size());
  std::optional<Cell> start, goal, anchor;
  auto mark = [](std::optional<Cell>& slot, Cell c, char ch) {
    if (slot) throw MapParseError(std::string("duplicate '") + ch + "' in map");
    slot = c;
  };
  for (std::size_t y = 0; y < rows.size(); ++y) {
    const std::string& row = rows[y];
    if (row.size() != width) {
      throw MapParseError("ragged map: row " + std::to_string(y) + " has length " +
                          std::to_string(row.size()) + ", expected " + std::to_string(width));
    }
    for (std::size_t x = 0; x < width; ++x) {
      const Cell c{static_cast<int>(x), static_cast<int>(y)};
      switch (row[x]) {
        case '.': cells.push_back(false); break;
        case '#': cells.push_back(true); break;
        case 'S': cells.push_back(false); mark(start, c, 'S'); break;
        case 'G': cells.push_back(false); mark(goal, c, 'G'); break;
        case 'A': cells.push_back(false); mark(anchor, c, 'A'); break;
        default:
          throw MapParseError("invalid map character '" + std::string(1, row[x]) + "' at (" +
                              std::to_string(x) + "," + std::to_string(y) + ")");
      }
    }
  }
  OccupancyGrid grid(static_cast<int>(width), static_cast<int>(rows.size()), std::move(cells));
  if (start) grid.set_start(*start);
  if (goal) grid.set_goal(*goal);
  if (anchor) {
    grid.set_anchor(*anchor);
  } else if (start) {
    grid.set_anchor(*start);
  }
  return grid;
}

OccupancyGrid load_map_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_map(in);
}

OccupancyGrid load_map_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MapParseError("cannot open map file: " + path);
  return load_map(in);
}

}  // namespace riskpath

#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace riskpath {

/// Lattice cell. x is the column, y the row (y grows downward).
struct Cell {
  int x = 0;
  int y = 0;

  friend constexpr bool operator==(const Cell&, const Cell&) = default;
  friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
};

/// Point in the continuous map frame. Cell (x, y) covers [x, x+1] x [y, y+1].
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const Point&, const Point&) = default;
};

inline Point center_of(Cell c) { return {c.x + 0.5, c.y + 0.5}; }

double distance(Point a, Point b);

class MapParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable free/obstacle field. Everything outside the rectangle behaves as
/// obstacle; the one-cell ring around the map is the nearest such obstacle.
class OccupancyGrid {
 public:
  /// `cells` is row-major, true = obstacle.
  OccupancyGrid(int width, int height, std::vector<bool> cells);

  int width() const { return width_; }
  int height() const { return height_; }

  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  /// Out-of-bounds cells report true.
  bool is_obstacle(Cell c) const;
  bool is_free(Cell c) const { return !is_obstacle(c); }
  std::size_t obstacle_count() const;

  const std::optional<Cell>& start() const { return start_; }
  const std::optional<Cell>& goal() const { return goal_; }
  const std::optional<Cell>& anchor() const { return anchor_; }

  /// Metadata cells must be free; throws std::invalid_argument otherwise.
  void set_start(Cell c);
  void set_goal(Cell c);
  void set_anchor(Cell c);

  /// Euclidean center-to-center distance to the nearest obstacle cell,
  /// counting the virtual border ring. Throws for obstacle or out-of-bounds cells.
  double distance_to_closest_obstacle(Cell c) const;

  /// Fraction of `ray_count` equally spaced rays of length `range` cast from
  /// the cell center that enter an obstacle cell (border included).
  double visibility_risk(Cell c, double range, int ray_count) const;

  /// True iff the open segment (a, b) misses the interior of every obstacle
  /// cell. Corner touches and sliding along cell edges are allowed.
  bool line_of_sight(Point a, Point b) const;

 private:
  void require_free(Cell c, const char* what) const;
  void compute_distance_field();

  int width_;
  int height_;
  std::vector<bool> cells_;
  std::vector<double> distance_;  // per cell, 0 for obstacles
  std::optional<Cell> start_;
  std::optional<Cell> goal_;
  std::optional<Cell> anchor_;
};

/// Parses the ASCII map format ('.', '#', 'S', 'G', 'A'; LF or CRLF rows).
/// The anchor defaults to the start cell when no 'A' is present.
OccupancyGrid load_map(std::istream& in);
OccupancyGrid load_map_string(std::string_view text);
OccupancyGrid load_map_file(const std::string& path);

}  // namespace riskpath

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "riskpath/grid.hpp"
#include "riskpath/path.hpp"
#include "riskpath/risk.hpp"
#include "riskpath/tether.hpp"

namespace riskpath {

using Rgb = std::array<std::uint8_t, 3>;

inline constexpr Rgb kFreeColor{255, 255, 255};
inline constexpr Rgb kObstacleColor{48, 48, 48};
inline constexpr Rgb kTetherColor{0, 0, 0};

/// Linear green (0) to red (3) on step_total, clamped.
Rgb risk_color(double step_total);

class Image {
 public:
  Image(int width, int height, Rgb fill);
  int width() const { return width_; }
  int height() const { return height_; }
  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb c);
  /// Plain-text P3, one pixel per line.
  std::string to_ppm() const;

 private:
  int width_;
  int height_;
  std::vector<Rgb> pixels_;
};

/// One plan drawn on the map: its step colors and the tether to overlay.
struct RenderedPath {
  const PathPlan* plan = nullptr;
  const RiskProfile* profile = nullptr;
  std::size_t upto = 0;  // last step drawn
  const TetherState* tether = nullptr;
};

/// Each cell becomes a `block` x `block` square (block even, >= 2). Path
/// cells are filled by step color inside a one-pixel free margin.
Image render_riskmap(const OccupancyGrid& grid, const std::vector<RenderedPath>& paths, int block);

/// Tether state after every step of a valid plan.
std::vector<TetherState> tether_history(const PathPlan& plan, const OccupancyGrid& grid);

/// Tether vertices as "x,y" lines.
std::string write_polyline_csv(const std::vector<Point>& vertices);

}  // namespace riskpath

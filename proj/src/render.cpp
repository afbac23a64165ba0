#include "riskpath/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace riskpath {

Rgb risk_color(double step_total) {
  const double t = std::clamp(step_total, 0.0, 3.0);
  const auto r = static_cast<std::uint8_t>(std::lround(255.0 * t / 3.0));
  return {r, static_cast<std::uint8_t>(255 - r), 0};
}

Image::Image(int width, int height, Rgb fill)
    : width_(width), height_(height), pixels_(static_cast<std::size_t>(width) * height, fill) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("image dimensions must be positive");
}

Rgb Image::at(int x, int y) const { return pixels_.at(static_cast<std::size_t>(y) * width_ + x); }

void Image::set(int x, int y, Rgb c) { pixels_.at(static_cast<std::size_t>(y) * width_ + x) = c; }

std::string Image::to_ppm() const {
  std::string out = "P3\n" + std::to_string(width_) + " " + std::to_string(height_) + "\n255\n";
  char buf[16];
  for (const Rgb& p : pixels_) {
    std::snprintf(buf, sizeof buf, "%u %u %u\n", p[0], p[1], p[2]);
    out += buf;
  }
  return out;
}

namespace {

void draw_line(Image& img, int x0, int y0, int x1, int y1, Rgb c) {
  auto plot = [&](int x, int y) {
    img.set(std::clamp(x, 0, img.width() - 1), std::clamp(y, 0, img.height() - 1), c);
  };
  const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
  const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  while (true) {
    plot(x0, y0);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

}  // namespace

Image render_riskmap(const OccupancyGrid& grid, const std::vector<RenderedPath>& paths, int block) {
  if (block < 2 || block % 2 != 0) throw std::invalid_argument("block size must be even and >= 2");
  Image img(grid.width() * block, grid.height() * block, kFreeColor);
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      if (!grid.is_obstacle({x, y})) continue;
      for (int py = 0; py < block; ++py) {
        for (int px = 0; px < block; ++px) img.set(x * block + px, y * block + py, kObstacleColor);
      }
    }
  }
  for (const RenderedPath& rp : paths) {
    const auto& states = rp.plan->states;
    for (std::size_t i = 0; i <= rp.upto && i < states.size(); ++i) {
      const Rgb c = risk_color(rp.profile->steps.at(i).step_total);
      for (int py = 1; py < block - 1; ++py) {
        for (int px = 1; px < block - 1; ++px) {
          img.set(states[i].x * block + px, states[i].y * block + py, c);
        }
      }
    }
  }
  for (const RenderedPath& rp : paths) {
    if (rp.tether == nullptr) continue;
    const std::vector<Point> poly = rp.tether->polyline();
    for (std::size_t k = 1; k < poly.size(); ++k) {
      draw_line(img, static_cast<int>(std::lround(poly[k - 1].x * block)),
                static_cast<int>(std::lround(poly[k - 1].y * block)),
                static_cast<int>(std::lround(poly[k].x * block)),
                static_cast<int>(std::lround(poly[k].y * block)), kTetherColor);
    }
  }
  return img;
}

std::vector<TetherState> tether_history(const PathPlan& plan, const OccupancyGrid& grid) {
  require_valid(plan, grid);
  std::vector<TetherState> out{initial_tether(plan.states.front(), grid)};
  for (std::size_t i = 1; i < plan.states.size(); ++i) {
    out.push_back(out.back().advance(plan.states[i], grid));
  }
  return out;
}

std::string write_polyline_csv(const std::vector<Point>& vertices) {
  std::string out;
  char buf[64];
  for (const Point& p : vertices) {
    std::snprintf(buf, sizeof buf, "%g,%g\n", p.x, p.y);
    out += buf;
  }
  return out;
}

}  // namespace riskpath

#include "riskpath/path.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace riskpath {

std::string ValidationReport::to_string() const {
  std::string out;
  for (const Violation& v : violations) {
    out += "state " + std::to_string(v.index) + ": " + v.message + "\n";
  }
  return out;
}

ValidationError::ValidationError(ValidationReport report)
    : std::runtime_error("invalid path:\n" + report.to_string()), report_(std::move(report)) {}

namespace {

std::string cell_str(Cell c) { return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; }

}  // namespace

ValidationReport validate(const PathPlan& plan, const OccupancyGrid& grid) {
  ValidationReport report;
  if (plan.states.empty()) {
    report.violations.push_back({Violation::Kind::kEmpty, 0, "path has no states"});
    return report;
  }
  for (std::size_t i = 0; i < plan.states.size(); ++i) {
    const Cell s = plan.states[i];
    if (i > 0) {
      const Cell prev = plan.states[i - 1];
      if (s == prev) {
        report.violations.push_back(
            {Violation::Kind::kRepeatedState, i, "repeats state " + cell_str(s)});
      } else {
        const double step = std::hypot(s.x - prev.x, s.y - prev.y);
        if (step > plan.connectivity_radius + 1e-12) {
          report.violations.push_back({Violation::Kind::kInfeasibleStep, i,
                                       "step " + cell_str(prev) + " -> " + cell_str(s) +
                                           " exceeds connectivity radius"});
        }
      }
    }
    if (!grid.in_bounds(s)) {
      report.violations.push_back(
          {Violation::Kind::kOutOfBounds, i, "state " + cell_str(s) + " is out of bounds"});
    } else if (grid.is_obstacle(s)) {
      report.violations.push_back(
          {Violation::Kind::kCollision, i, "state " + cell_str(s) + " collides with an obstacle"});
    }
  }
  return report;
}

void require_valid(const PathPlan& plan, const OccupancyGrid& grid) {
  ValidationReport report = validate(plan, grid);
  if (!report.ok()) throw ValidationError(std::move(report));
}

std::vector<Action> derive_actions(const PathPlan& plan) {
  std::vector<Action> actions;
  for (std::size_t i = 1; i < plan.states.size(); ++i) {
    actions.push_back({plan.states[i].x - plan.states[i - 1].x,
                       plan.states[i].y - plan.states[i - 1].y});
  }
  return actions;
}

PathPlan integrate(Cell origin, std::span<const Action> actions, double connectivity_radius) {
  PathPlan plan;
  plan.connectivity_radius = connectivity_radius;
  plan.states.reserve(actions.size() + 1);
  plan.states.push_back(origin);
  for (const Action& a : actions) {
    const Cell last = plan.states.back();
    plan.states.push_back({last.x + a.dx, last.y + a.dy});
  }
  return plan;
}

std::vector<PrefixPath> prefixes(const PathPlan& plan) {
  std::vector<PrefixPath> out;
  out.reserve(plan.states.size());
  for (std::size_t i = 0; i < plan.states.size(); ++i) out.push_back({&plan, i});
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view field, std::size_t line_no) {
  field = trim(field);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw PathParseError("line " + std::to_string(line_no) + ": '" + std::string(field) +
                         "' is not an integer");
  }
  return value;
}

}  // namespace

PathPlan read_path_csv(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();

  PathPlan plan;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view row = trim(lines[i]);
    const auto comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
      throw PathParseError("line " + std::to_string(i + 1) + ": expected \"x,y\"");
    }
    plan.states.push_back({parse_int(row.substr(0, comma), i + 1),
                           parse_int(row.substr(comma + 1), i + 1)});
  }
  if (plan.states.empty()) throw PathParseError("path file has no states");
  return plan;
}

PathPlan read_path_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PathParseError("cannot open path file: " + path);
  return read_path_csv(in);
}

std::string write_path_csv(const PathPlan& plan) {
  std::string out;
  for (const Cell& c : plan.states) out += std::to_string(c.x) + "," + std::to_string(c.y) + "\n";
  return out;
}

}  // namespace riskpath

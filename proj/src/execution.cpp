#include "riskpath/execution.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

namespace riskpath {

void FinishCriteria::validate() const {
  if (!(rp > 0.0) || std::isnan(rp) || std::isinf(rp)) {
    throw std::invalid_argument("criteria.rp must be a positive finite radius");
  }
  if (!(re > 0.0)) throw std::invalid_argument("criteria.re must be positive or infinite");
}

namespace {

void require_start_match(const PathPlan& plan, const Execution& exec) {
  if (plan.states.empty()) throw std::invalid_argument("plan has no states");
  if (exec.states.empty()) throw StartMismatchError("execution has no states");
  if (distance(exec.states.front(), center_of(plan.states.front())) > 1e-9) {
    throw StartMismatchError("execution does not start at the plan's first state");
  }
}

// first[i] / last[i]: smallest / largest index k of `targets` within radius of
// sources[i]; -1 when none is.
void nearest_indices(const std::vector<Point>& sources, const std::vector<Point>& targets,
                     double radius, std::vector<long>& first, std::vector<long>& last) {
  first.assign(sources.size(), -1);
  last.assign(sources.size(), -1);
  for (std::size_t i = 0; i < sources.size(); ++i) {
    for (std::size_t k = 0; k < targets.size(); ++k) {
      if (distance(sources[i], targets[k]) <= radius) {
        first[i] = static_cast<long>(k);
        break;
      }
    }
    for (std::size_t k = targets.size(); k-- > 0;) {
      if (distance(sources[i], targets[k]) <= radius) {
        last[i] = static_cast<long>(k);
        break;
      }
    }
  }
}

// Pairwise ordered-visit condition shared by reachability and stability.
ConditionResult ordered_cover(const std::vector<Point>& sources, const std::vector<Point>& targets,
                              double radius) {
  std::vector<long> first, last;
  nearest_indices(sources, targets, radius, first, last);
  for (std::size_t i = 0; i + 1 < sources.size(); ++i) {
    if (first[i] < 0 || last[i + 1] < 0 || first[i] > last[i + 1]) return {false, i};
  }
  return {true, std::nullopt};
}

std::vector<Point> centers(const PathPlan& plan) {
  std::vector<Point> out;
  out.reserve(plan.states.size());
  for (const Cell& c : plan.states) out.push_back(center_of(c));
  return out;
}

std::string fmt_point(Point p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "(%.6g,%.6g)", p.x, p.y);
  return buf;
}

}  // namespace

ConditionResult check_reachability(const PathPlan& plan, const Execution& exec,
                                   const FinishCriteria& c) {
  c.validate();
  require_start_match(plan, exec);
  return ordered_cover(centers(plan), exec.states, c.rp);
}

ConditionResult check_stability(const PathPlan& plan, const Execution& exec,
                                const FinishCriteria& c) {
  c.validate();
  require_start_match(plan, exec);
  if (std::isinf(c.re)) return {true, std::nullopt};
  return ordered_cover(exec.states, centers(plan), c.re);
}

FinishVerdict finishes(const PathPlan& plan, const Execution& exec, const FinishCriteria& c) {
  const ConditionResult reach = check_reachability(plan, exec, c);
  const ConditionResult stable = check_stability(plan, exec, c);
  FinishVerdict v;
  v.reachability_ok = reach.ok;
  v.stability_ok = stable.ok;
  v.finished = reach.ok && stable.ok;
  if (!reach.ok) {
    const std::size_t i = *reach.first_failure;
    v.first_violation = FinishViolation{
        FinishViolation::Condition::kReachability, i,
        "no execution positions reach plan states " + std::to_string(i) + " " +
            fmt_point(center_of(plan.states[i])) + " and " + std::to_string(i + 1) + " " +
            fmt_point(center_of(plan.states[i + 1])) + " in order within rp"};
  } else if (!stable.ok) {
    const std::size_t j = *stable.first_failure;
    v.first_violation = FinishViolation{
        FinishViolation::Condition::kStability, j,
        "execution positions " + std::to_string(j) + " " + fmt_point(exec.states[j]) + " and " +
            std::to_string(j + 1) + " " + fmt_point(exec.states[j + 1]) +
            " do not stay within re of the plan in order"};
  }
  return v;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Uniform in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
double unit_uniform(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial) {
  return splitmix64(splitmix64(base_seed) ^ static_cast<std::uint64_t>(trial));
}

Execution simulate_execution(const PathPlan& plan, const OccupancyGrid& grid,
                             const RiskProfile& profile, const NoiseModel& noise,
                             std::uint64_t seed) {
  require_valid(plan, grid);
  if (profile.steps.size() != plan.states.size()) {
    throw std::invalid_argument("risk profile does not match the plan");
  }
  if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma)) {
    throw std::invalid_argument("noise sigma must be finite and >= 0");
  }
  if (!(noise.kappa >= 0.0 && noise.kappa <= 1.0)) {
    throw std::invalid_argument("noise kappa must lie in [0, 1]");
  }

  std::mt19937_64 rng(seed);
  Execution exec;
  exec.states.reserve(plan.states.size());
  exec.states.push_back(center_of(plan.states.front()));
  for (std::size_t j = 1; j < plan.states.size(); ++j) {
    const double step_total = profile.steps[j].step_total;
    const double p_fail = std::min(1.0, noise.kappa * step_total / 3.0);
    const double fail_draw = unit_uniform(rng);
    const double radius_draw = unit_uniform(rng);
    const double angle_draw = unit_uniform(rng);
    if (fail_draw < p_fail) break;

    const double radius = noise.sigma * (1.0 + step_total) * std::sqrt(radius_draw);
    const double angle = 2.0 * std::numbers::pi * angle_draw;
    const Point c = center_of(plan.states[j]);
    const Point e = radius == 0.0 ? c
                                  : Point{c.x + radius * std::cos(angle),
                                          c.y + radius * std::sin(angle)};
    const Cell landed{static_cast<int>(std::floor(e.x)), static_cast<int>(std::floor(e.y))};
    if (grid.is_obstacle(landed)) break;
    exec.states.push_back(e);
  }
  return exec;
}

MonteCarloResult monte_carlo_failure_rate(const PathPlan& plan, const OccupancyGrid& grid,
                                          const RiskConfig& cfg, const NoiseModel& noise,
                                          std::size_t trials, const FinishCriteria& criteria,
                                          std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("monte carlo needs at least one trial");
  criteria.validate();
  const RiskProfile profile = evaluate(plan, grid, cfg);

  MonteCarloResult result;
  result.trials = trials;
  result.seed = seed;
  for (std::size_t k = 0; k < trials; ++k) {
    const Execution exec = simulate_execution(plan, grid, profile, noise, trial_seed(seed, k));
    if (!finishes(plan, exec, criteria).finished) ++result.failures;
  }
  result.rate = double(result.failures) / double(trials);
  result.ci_halfwidth = 1.96 * std::sqrt(result.rate * (1.0 - result.rate) / double(trials));
  return result;
}

Execution read_execution_csv(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();

  auto parse = [](std::string_view field, std::size_t line_no) {
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() ||
        !std::isfinite(value)) {
      throw PathParseError("execution line " + std::to_string(line_no) + ": '" +
                           std::string(field) + "' is not a real number");
    }
    return value;
  };

  Execution exec;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view row = lines[i];
    const auto comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
      throw PathParseError("execution line " + std::to_string(i + 1) + ": expected \"x,y\"");
    }
    exec.states.push_back({parse(row.substr(0, comma), i + 1), parse(row.substr(comma + 1), i + 1)});
  }
  if (exec.states.empty()) throw PathParseError("execution file has no states");
  return exec;
}

Execution read_execution_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PathParseError("cannot open execution file: " + path);
  return read_execution_csv(in);
}

std::string write_execution_csv(const Execution& exec) {
  std::string out;
  char buf[96];
  for (const Point& p : exec.states) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.x, p.y);
    out += buf;
  }
  return out;
}

}  // namespace riskpath

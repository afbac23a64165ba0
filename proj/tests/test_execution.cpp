#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "riskpath/execution.hpp"
#include "suites.hpp"

using namespace riskpath;

namespace {

PathPlan line_plan(int n) {
  PathPlan p;
  for (int x = 0; x < n; ++x) p.states.push_back({x, 0});
  return p;
}

Execution centers(const PathPlan& p) {
  Execution e;
  for (const Cell& c : p.states) e.states.push_back(center_of(c));
  return e;
}

}  // namespace

TEST(Finish, ExactTrackingFinishes) {
  const PathPlan p = line_plan(5);
  const FinishVerdict v = finishes(p, centers(p), FinishCriteria{});
  EXPECT_TRUE(v.finished);
  EXPECT_FALSE(v.first_violation.has_value());
}

TEST(Finish, TruncationFailsReachability) {
  const PathPlan p = line_plan(5);
  Execution e = centers(p);
  e.states.resize(3);
  const FinishVerdict v = finishes(p, e, FinishCriteria{});
  EXPECT_FALSE(v.finished);
  EXPECT_FALSE(v.reachability_ok);
  EXPECT_TRUE(v.stability_ok);
  ASSERT_TRUE(v.first_violation.has_value());
  EXPECT_EQ(v.first_violation->condition, FinishViolation::Condition::kReachability);
  EXPECT_EQ(v.first_violation->index, 2u);
}

TEST(Finish, DetourFailsStabilityUnlessInfinite) {
  const PathPlan p = line_plan(4);
  Execution e = centers(p);
  e.states.insert(e.states.begin() + 2, Point{1.5, 6.0});
  FinishCriteria c;
  FinishVerdict v = finishes(p, e, c);
  EXPECT_TRUE(v.reachability_ok);
  EXPECT_FALSE(v.stability_ok);
  EXPECT_EQ(v.first_violation->condition, FinishViolation::Condition::kStability);
  EXPECT_EQ(v.first_violation->index, 1u);

  c.re = INFINITY;
  EXPECT_TRUE(finishes(p, e, c).finished);
}

TEST(Finish, OrderMatters) {
  const PathPlan p = line_plan(3);
  Execution e;
  e.states = {{0.5, 0.5}, {2.5, 0.5}, {1.5, 0.5}};
  EXPECT_FALSE(check_reachability(p, e, FinishCriteria{}).ok);
}

TEST(Finish, BoundaryRadiusIsInclusive) {
  const PathPlan p = line_plan(2);
  Execution e;
  e.states = {{0.5, 0.5}, {1.5, 1.0}};
  FinishCriteria c;
  c.rp = 0.5;
  EXPECT_TRUE(check_reachability(p, e, c).ok);
}

TEST(Finish, StartMismatchAndBadCriteria) {
  const PathPlan p = line_plan(3);
  Execution e = centers(p);
  e.states[0].x += 0.01;
  EXPECT_THROW(finishes(p, e, FinishCriteria{}), StartMismatchError);
  EXPECT_THROW(finishes(p, Execution{}, FinishCriteria{}), StartMismatchError);
  FinishCriteria bad;
  bad.rp = 0.0;
  EXPECT_THROW(finishes(p, centers(p), bad), std::invalid_argument);
  bad = FinishCriteria{};
  bad.re = -1.0;
  EXPECT_THROW(finishes(p, centers(p), bad), std::invalid_argument);
}

TEST(Finish, SingleStatePlan) {
  const PathPlan p = line_plan(1);
  EXPECT_TRUE(finishes(p, centers(p), FinishCriteria{}).finished);
}

TEST(Finish, AgreesWithBruteForce) {
  const suites::Report r = suites::checker_agreement(200, 31);
  EXPECT_TRUE(r.ok()) << r.first_failure;
}

TEST(Simulate, DeterministicPerSeed) {
  const OccupancyGrid g(10, 3, std::vector<bool>(30, false));
  const PathPlan p = line_plan(10);
  const RiskProfile prof = evaluate(p, g, RiskConfig{});
  const NoiseModel noise;
  const Execution a = simulate_execution(p, g, prof, noise, 7);
  const Execution b = simulate_execution(p, g, prof, noise, 7);
  const Execution c = simulate_execution(p, g, prof, noise, 8);
  EXPECT_EQ(write_execution_csv(a), write_execution_csv(b));
  EXPECT_NE(write_execution_csv(a), write_execution_csv(c));
  EXPECT_EQ(a.states.front(), center_of(p.states.front()));
}

TEST(Simulate, NoiselessRunTracksCenters) {
  const OccupancyGrid g(10, 3, std::vector<bool>(30, false));
  const PathPlan p = line_plan(10);
  const RiskProfile prof = evaluate(p, g, RiskConfig{});
  const Execution e = simulate_execution(p, g, prof, NoiseModel{0.0, 0.0}, 1);
  EXPECT_EQ(e.states, centers(p).states);
}

TEST(Simulate, CertainFailureStopsAtFirstStep) {
  const OccupancyGrid g = load_map_string("###\n...\n###\n");
  PathPlan p;
  p.states = {{0, 1}, {1, 1}, {2, 1}};
  RiskProfile prof = evaluate(p, g, RiskConfig{});
  for (auto& s : prof.steps) s.step_total = 3.0;
  const Execution e = simulate_execution(p, g, prof, NoiseModel{0.0, 1.0}, 3);
  EXPECT_EQ(e.states.size(), 1u);
}

TEST(Simulate, RejectsBadInputs) {
  const OccupancyGrid g(3, 1, std::vector<bool>(3, false));
  const PathPlan p = line_plan(3);
  const RiskProfile prof = evaluate(p, g, RiskConfig{});
  EXPECT_THROW(simulate_execution(p, g, prof, NoiseModel{-1.0, 0.1}, 0), std::invalid_argument);
  EXPECT_THROW(simulate_execution(p, g, prof, NoiseModel{0.1, 1.5}, 0), std::invalid_argument);
  EXPECT_THROW(simulate_execution(line_plan(2), g, prof, NoiseModel{}, 0), std::invalid_argument);
}

TEST(MonteCarlo, ReproducibleAndConsistent) {
  const OccupancyGrid g(12, 5, std::vector<bool>(60, false));
  const PathPlan p = line_plan(12);
  const RiskConfig cfg;
  const MonteCarloResult a = monte_carlo_failure_rate(p, g, cfg, NoiseModel{}, 300, FinishCriteria{}, 42);
  const MonteCarloResult b = monte_carlo_failure_rate(p, g, cfg, NoiseModel{}, 300, FinishCriteria{}, 42);
  EXPECT_EQ(a.failures, b.failures);
  EXPECT_EQ(a.trials, 300u);
  EXPECT_EQ(a.seed, 42u);
  EXPECT_DOUBLE_EQ(a.rate, double(a.failures) / 300.0);
  EXPECT_DOUBLE_EQ(a.ci_halfwidth, 1.96 * std::sqrt(a.rate * (1 - a.rate) / 300.0));
  EXPECT_GT(a.failures, 0u);
  EXPECT_LT(a.failures, 300u);
  EXPECT_THROW(monte_carlo_failure_rate(p, g, cfg, NoiseModel{}, 0, FinishCriteria{}, 0), std::invalid_argument);
}

TEST(MonteCarlo, TrialSeedsAreDistinct) {
  std::set<std::uint64_t> seen;
  for (std::size_t k = 0; k < 10000; ++k) seen.insert(trial_seed(0, k));
  EXPECT_EQ(seen.size(), 10000u);
  EXPECT_NE(trial_seed(1, 0), trial_seed(0, 1));
}

TEST(ExecutionCsv, RoundTripIsExact) {
  Execution e;
  e.states = {{0.5, 0.5}, {1.0 / 3.0, 2.0 / 7.0}, {1e-17, 123456.789}};
  std::istringstream in(write_execution_csv(e));
  EXPECT_EQ(read_execution_csv(in).states, e.states);
}

TEST(ExecutionCsv, RejectsBadRows) {
  for (const char* text : {"", "1\n", "1,2,3\n", "x,1\n", "nan,1\n", "1,inf\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_execution_csv(in), PathParseError) << text;
  }
}

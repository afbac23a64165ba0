#include "riskpath/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "riskpath/config_json.hpp"
#include "riskpath/execution.hpp"
#include "riskpath/grid.hpp"
#include "riskpath/path.hpp"
#include "riskpath/planner.hpp"
#include "riskpath/render.hpp"
#include "riskpath/risk.hpp"
#include "riskpath/tether.hpp"

namespace riskpath {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string map;
  std::vector<std::string> paths;
  std::string exec;
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 0;
  std::size_t trials = 2000;
  bool frames = false;
  int block = 8;
  double sigma = NoiseModel{}.sigma;
  double kappa = NoiseModel{}.kappa;
  std::size_t max_contacts = PlannerLimits{}.max_contacts;
  std::size_t max_expansions = PlannerLimits{}.max_expansions;
};

class Run {
 public:
  Run(std::string subcommand, const Options& opt) : opt_(opt) {
    manifest_["subcommand"] = std::move(subcommand);
    manifest_["tool_version"] = kToolVersion;
    manifest_["inputs"] = ordered_json::object();
    manifest_["config"] = opt.config.empty() ? ordered_json(nullptr) : ordered_json(opt.config);
    manifest_["seed"] = nullptr;
    manifest_["parameters"] = ordered_json::object();
    manifest_["outputs"] = ordered_json::array();
    fs::create_directories(opt.out);
  }

  ordered_json& manifest() { return manifest_; }

  void write(const std::string& name, const std::string& content) {
    const fs::path p = fs::path(opt_.out) / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << content;
    manifest_["outputs"].push_back(p.generic_string());
  }

  void finish() {
    manifest_["outputs"].push_back((fs::path(opt_.out) / "manifest.json").generic_string());
    std::ofstream f(fs::path(opt_.out) / "manifest.json", std::ios::binary);
    f << manifest_.dump(2) << "\n";
  }

 private:
  const Options& opt_;
  ordered_json manifest_;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10f", v);
  return buf;
}

RunConfig load_config(const Options& opt) {
  return opt.config.empty() ? RunConfig{} : load_config_file(opt.config);
}

const std::string& single_path(const Options& opt) {
  if (opt.paths.size() != 1) throw UsageError("exactly one --path is required");
  return opt.paths.front();
}

std::string steps_csv(const RiskProfile& profile) {
  std::string out =
      "step,x,y,action_score,state_score,path_score,step_total,cumulative,length_risk,turn_deg,"
      "turn_risk,distance,distance_risk,visibility_risk,tether_length,tether_risk,contacts,"
      "contact_risk\n";
  for (const StepRisk& s : profile.steps) {
    out += std::to_string(s.index) + "," + std::to_string(s.cell.x) + "," + std::to_string(s.cell.y);
    for (double v : {s.action_score, s.state_score, s.path_score, s.step_total, s.cumulative,
                     s.action.length_risk, s.action.turn_deg, s.action.turn_risk, s.state.distance,
                     s.state.distance_risk, s.state.visibility_risk, s.path.tether_length,
                     s.path.tether_risk}) {
      out += "," + fmt(v);
    }
    out += "," + std::to_string(s.path.contacts) + "," + fmt(s.path.contact_risk) + "\n";
  }
  return out;
}

ordered_json summary_json(const RiskProfile& profile) {
  ordered_json j;
  j["total"] = profile.total;
  j["n_steps"] = profile.steps.empty() ? 0 : profile.steps.size() - 1;
  j["category_subtotals"] = {{"action", profile.action_subtotal},
                             {"state", profile.state_subtotal},
                             {"path", profile.path_subtotal}};
  return j;
}

int cmd_evaluate(const Options& opt, std::ostream& out) {
  const OccupancyGrid grid = load_map_file(opt.map);
  const std::string& path_file = single_path(opt);
  const PathPlan plan = read_path_csv_file(path_file);
  const RunConfig cfg = load_config(opt);
  const RiskProfile profile = evaluate(plan, grid, cfg.risk);

  Run run("evaluate", opt);
  run.manifest()["inputs"] = {{"map", opt.map}, {"path", path_file}};
  run.write("steps.csv", steps_csv(profile));
  run.write("summary.json", summary_json(profile).dump(2) + "\n");
  run.finish();
  out << "total " << fmt(profile.total) << " over " << plan.steps() << " steps\n";
  return exit_code::kOk;
}

int cmd_plan(const Options& opt, std::ostream& out, std::ostream& err) {
  const OccupancyGrid grid = load_map_file(opt.map);
  if (!grid.start() || !grid.goal()) throw UsageError("plan needs a map with S and G cells");
  const RunConfig cfg = load_config(opt);
  const PlannerLimits limits{opt.max_contacts, opt.max_expansions};

  Run run("plan", opt);
  run.manifest()["inputs"] = {{"map", opt.map}};
  run.manifest()["parameters"] = {{"max_contacts", limits.max_contacts},
                                  {"max_expansions", limits.max_expansions}};
  PlanResult result;
  try {
    result = plan_min_risk(grid, *grid.start(), *grid.goal(), cfg.risk, limits);
  } catch (const PlanningError& e) {
    const bool budget = e.kind() == PlanningError::Kind::kBudgetExhausted;
    ordered_json j = {{"status", budget ? "budget_exhausted" : "unreachable"}, {"message", e.what()}};
    run.write("plan_status.json", j.dump(2) + "\n");
    run.finish();
    err << (budget ? "budget exhausted: " : "unreachable: ") << e.what() << "\n";
    return budget ? exit_code::kBudgetExhausted : exit_code::kDomainFailure;
  }
  ordered_json profile = summary_json(result.profile);
  profile["search"] = {{"expansions", result.expansions},
                       {"nodes", result.nodes},
                       {"max_contacts", limits.max_contacts},
                       {"max_expansions", limits.max_expansions}};
  run.write("plan.csv", write_path_csv(result.plan));
  run.write("steps.csv", steps_csv(result.profile));
  run.write("profile.json", profile.dump(2) + "\n");
  run.finish();
  out << "planned " << result.plan.steps() << " steps, total " << fmt(result.profile.total) << "\n";
  return exit_code::kOk;
}

int cmd_check(const Options& opt, std::ostream& out, std::ostream& err) {
  const OccupancyGrid grid = load_map_file(opt.map);
  const std::string& path_file = single_path(opt);
  if (opt.exec.empty()) throw UsageError("check needs --exec");
  const PathPlan plan = read_path_csv_file(path_file);
  require_valid(plan, grid);
  const Execution exec = read_execution_csv_file(opt.exec);
  const RunConfig cfg = load_config(opt);

  Run run("check", opt);
  run.manifest()["inputs"] = {{"map", opt.map}, {"path", path_file}, {"exec", opt.exec}};
  run.manifest()["parameters"] = {
      {"rp", cfg.criteria.rp},
      {"re", std::isinf(cfg.criteria.re) ? ordered_json("inf") : ordered_json(cfg.criteria.re)}};
  FinishVerdict v;
  try {
    v = finishes(plan, exec, cfg.criteria);
  } catch (const StartMismatchError& e) {
    run.write("verdict.json", ordered_json{{"error", "start_mismatch"}, {"message", e.what()}}.dump(2) + "\n");
    run.finish();
    err << "start mismatch: " << e.what() << "\n";
    return exit_code::kDomainFailure;
  }
  ordered_json j;
  j["finished"] = v.finished;
  j["reachability_ok"] = v.reachability_ok;
  j["stability_ok"] = v.stability_ok;
  if (v.first_violation) {
    const FinishViolation& f = *v.first_violation;
    j["first_violation"] = {
        {"condition", f.condition == FinishViolation::Condition::kReachability ? "reachability" : "stability"},
        {"index", f.index},
        {"detail", f.detail}};
  } else {
    j["first_violation"] = nullptr;
  }
  run.write("verdict.json", j.dump(2) + "\n");
  run.finish();
  out << (v.finished ? "finished\n" : "not finished\n");
  return v.finished ? exit_code::kOk : exit_code::kDomainFailure;
}

int cmd_simulate(const Options& opt, std::ostream& out) {
  const OccupancyGrid grid = load_map_file(opt.map);
  const std::string& path_file = single_path(opt);
  const PathPlan plan = read_path_csv_file(path_file);
  const RunConfig cfg = load_config(opt);
  const NoiseModel noise{opt.sigma, opt.kappa};
  const MonteCarloResult mc =
      monte_carlo_failure_rate(plan, grid, cfg.risk, noise, opt.trials, cfg.criteria, opt.seed);

  Run run("simulate", opt);
  run.manifest()["inputs"] = {{"map", opt.map}, {"path", path_file}};
  run.manifest()["seed"] = opt.seed;
  run.manifest()["parameters"] = {{"trials", opt.trials}, {"sigma", opt.sigma}, {"kappa", opt.kappa}};
  ordered_json j = {{"trials", mc.trials},
                    {"failures", mc.failures},
                    {"rate", mc.rate},
                    {"ci_halfwidth", mc.ci_halfwidth},
                    {"seed", mc.seed}};
  run.write("montecarlo.json", j.dump(2) + "\n");
  run.finish();
  out << "failure rate " << fmt(mc.rate) << " +/- " << fmt(mc.ci_halfwidth) << "\n";
  return exit_code::kOk;
}

int cmd_riskmap(const Options& opt, std::ostream& out) {
  const OccupancyGrid grid = load_map_file(opt.map);
  if (opt.paths.empty()) throw UsageError("riskmap needs at least one --path");
  const RunConfig cfg = load_config(opt);

  std::vector<PathPlan> plans;
  for (const std::string& p : opt.paths) plans.push_back(read_path_csv_file(p));
  std::vector<RiskProfile> profiles;
  std::vector<std::vector<TetherState>> tethers;
  for (const PathPlan& plan : plans) {
    profiles.push_back(evaluate(plan, grid, cfg.risk));
    tethers.push_back(tether_history(plan, grid));
  }

  Run run("riskmap", opt);
  run.manifest()["inputs"] = {{"map", opt.map}, {"path", opt.paths}};
  run.manifest()["parameters"] = {{"block", opt.block}, {"frames", opt.frames}};

  std::vector<RenderedPath> layers;
  for (std::size_t k = 0; k < plans.size(); ++k) {
    layers.push_back({&plans[k], &profiles[k], plans[k].steps(), &tethers[k].back()});
  }
  run.write("riskmap.ppm", render_riskmap(grid, layers, opt.block).to_ppm());

  ordered_json legend;
  legend["block"] = opt.block;
  legend["width"] = grid.width() * opt.block;
  legend["height"] = grid.height() * opt.block;
  legend["scale"] = {{"quantity", "step_total"}, {"min", 0.0}, {"max", 3.0},
                     {"min_color", risk_color(0.0)}, {"max_color", risk_color(3.0)}};
  legend["free_color"] = kFreeColor;
  legend["obstacle_color"] = kObstacleColor;
  legend["tether_color"] = kTetherColor;
  legend["paths"] = ordered_json::array();
  for (std::size_t k = 0; k < plans.size(); ++k) {
    ordered_json p;
    p["file"] = fs::path(opt.paths[k]).filename().generic_string();
    p["total"] = profiles[k].total;
    p["steps"] = ordered_json::array();
    for (const StepRisk& s : profiles[k].steps) {
      p["steps"].push_back({{"step", s.index}, {"x", s.cell.x}, {"y", s.cell.y},
                            {"step_total", s.step_total}, {"color", risk_color(s.step_total)}});
    }
    legend["paths"].push_back(std::move(p));
    run.write("tether_" + std::to_string(k) + ".csv", write_polyline_csv(tethers[k].back().polyline()));
  }
  run.write("legend.json", legend.dump(2) + "\n");

  if (opt.frames) {
    std::size_t longest = 0;
    for (const PathPlan& plan : plans) longest = std::max(longest, plan.steps());
    for (std::size_t i = 0; i <= longest; ++i) {
      std::vector<RenderedPath> frame;
      for (std::size_t k = 0; k < plans.size(); ++k) {
        const std::size_t upto = std::min(i, plans[k].steps());
        frame.push_back({&plans[k], &profiles[k], upto, &tethers[k][upto]});
      }
      char name[32];
      std::snprintf(name, sizeof name, "frame_%03zu.ppm", i);
      run.write(name, render_riskmap(grid, frame, opt.block).to_ppm());
    }
  }
  run.finish();
  out << "rendered " << plans.size() << " path(s)\n";
  return exit_code::kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Risk evaluation and planning for tethered robots on occupancy grids", "riskpath"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  Options opt;

  auto add_map = [&](CLI::App* sub) {
    sub->add_option("--map", opt.map, "ASCII occupancy map")->required()->check(CLI::ExistingFile);
  };
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "risk config JSON")->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output directory")->capture_default_str();
  };
  auto add_path = [&](CLI::App* sub, bool many) {
    auto* o = sub->add_option("--path", opt.paths, many ? "path CSV (repeatable)" : "path CSV");
    o->required()->check(CLI::ExistingFile);
    if (!many) o->expected(1);
  };

  CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "per-step risk of a path");
  add_map(evaluate_cmd);
  add_path(evaluate_cmd, false);
  add_config(evaluate_cmd);

  CLI::App* plan_cmd = app.add_subcommand("plan", "minimum-risk path from S to G");
  add_map(plan_cmd);
  add_config(plan_cmd);
  plan_cmd->add_option("--max-contacts", opt.max_contacts, "tether contact limit")->capture_default_str();
  plan_cmd->add_option("--max-expansions", opt.max_expansions, "search budget")->capture_default_str();

  CLI::App* check_cmd = app.add_subcommand("check", "does an execution finish a plan");
  add_map(check_cmd);
  add_path(check_cmd, false);
  check_cmd->add_option("--exec", opt.exec, "execution CSV")->required()->check(CLI::ExistingFile);
  add_config(check_cmd);

  CLI::App* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo failure rate of a path");
  add_map(simulate_cmd);
  add_path(simulate_cmd, false);
  add_config(simulate_cmd);
  simulate_cmd->add_option("--trials", opt.trials, "number of trials")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--seed", opt.seed, "base seed")->capture_default_str();
  simulate_cmd->add_option("--sigma", opt.sigma, "position noise scale")->capture_default_str();
  simulate_cmd->add_option("--kappa", opt.kappa, "failure probability scale")->capture_default_str();

  CLI::App* riskmap_cmd = app.add_subcommand("riskmap", "PPM risk colormap with tether overlay");
  add_map(riskmap_cmd);
  add_path(riskmap_cmd, true);
  add_config(riskmap_cmd);
  riskmap_cmd->add_flag("--frames", opt.frames, "also write one frame per step");
  riskmap_cmd->add_option("--block", opt.block, "pixels per cell (even)")->capture_default_str();

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_code::kOk : exit_code::kUsage;
  }

  try {
    if (evaluate_cmd->parsed()) return cmd_evaluate(opt, out);
    if (plan_cmd->parsed()) return cmd_plan(opt, out, err);
    if (check_cmd->parsed()) return cmd_check(opt, out, err);
    if (simulate_cmd->parsed()) return cmd_simulate(opt, out);
    if (riskmap_cmd->parsed()) return cmd_riskmap(opt, out);
  } catch (const ValidationError& e) {
    err << "invalid path:\n" << e.report().to_string() << "\n";
    return exit_code::kDomainFailure;
  } catch (const MapParseError& e) {
    err << "map error: " << e.what() << "\n";
    return exit_code::kUsage;
  } catch (const PathParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return exit_code::kUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return exit_code::kUsage;
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << "\n";
    return exit_code::kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kDomainFailure;
  }
  return exit_code::kUsage;
}

}  // namespace riskpath

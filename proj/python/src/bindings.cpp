#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "riskpath/cli.hpp"
#include "riskpath/config_json.hpp"
#include "riskpath/execution.hpp"
#include "riskpath/grid.hpp"
#include "riskpath/path.hpp"
#include "riskpath/planner.hpp"
#include "riskpath/risk.hpp"
#include "riskpath/tether.hpp"

namespace py = pybind11;
using namespace riskpath;

namespace {

using CellTuple = std::pair<int, int>;

PathPlan to_plan(const std::vector<CellTuple>& states) {
  PathPlan p;
  for (const auto& [x, y] : states) p.states.push_back({x, y});
  return p;
}

std::vector<CellTuple> from_plan(const PathPlan& p) {
  std::vector<CellTuple> out;
  for (const Cell& c : p.states) out.emplace_back(c.x, c.y);
  return out;
}

std::optional<CellTuple> opt_cell(const std::optional<Cell>& c) {
  if (!c) return std::nullopt;
  return CellTuple{c->x, c->y};
}

py::dict profile_dict(const RiskProfile& r) {
  py::list steps;
  for (const StepRisk& s : r.steps) {
    py::dict d;
    d["step"] = s.index;
    d["cell"] = CellTuple{s.cell.x, s.cell.y};
    d["action_score"] = s.action_score;
    d["state_score"] = s.state_score;
    d["path_score"] = s.path_score;
    d["step_total"] = s.step_total;
    d["cumulative"] = s.cumulative;
    d["turn_deg"] = s.action.turn_deg;
    d["distance"] = s.state.distance;
    d["visibility_risk"] = s.state.visibility_risk;
    d["tether_length"] = s.path.tether_length;
    d["contacts"] = s.path.contacts;
    steps.append(d);
  }
  py::dict out;
  out["total"] = r.total;
  out["action_subtotal"] = r.action_subtotal;
  out["state_subtotal"] = r.state_subtotal;
  out["path_subtotal"] = r.path_subtotal;
  out["steps"] = steps;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Risk evaluation and planning for tethered robots on occupancy grids";
  m.attr("__version__") = kToolVersion;

  py::register_exception<MapParseError>(m, "MapParseError", PyExc_ValueError);
  py::register_exception<PathParseError>(m, "PathParseError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<StartMismatchError>(m, "StartMismatchError", PyExc_ValueError);
  py::register_exception<PlanningError>(m, "PlanningError", PyExc_RuntimeError);

  py::class_<OccupancyGrid>(m, "OccupancyGrid")
      .def(py::init([](int w, int h, const std::vector<bool>& cells) { return OccupancyGrid(w, h, cells); }),
           py::arg("width"), py::arg("height"), py::arg("cells"))
      .def_property_readonly("width", &OccupancyGrid::width)
      .def_property_readonly("height", &OccupancyGrid::height)
      .def_property_readonly("start", [](const OccupancyGrid& g) { return opt_cell(g.start()); })
      .def_property_readonly("goal", [](const OccupancyGrid& g) { return opt_cell(g.goal()); })
      .def_property_readonly("anchor", [](const OccupancyGrid& g) { return opt_cell(g.anchor()); })
      .def("is_obstacle", [](const OccupancyGrid& g, int x, int y) { return g.is_obstacle({x, y}); })
      .def("distance_to_closest_obstacle",
           [](const OccupancyGrid& g, int x, int y) { return g.distance_to_closest_obstacle({x, y}); })
      .def("visibility_risk", [](const OccupancyGrid& g, int x, int y, double range, int rays) {
        return g.visibility_risk({x, y}, range, rays);
      });

  m.def("load_map", [](const std::string& text) { return load_map_string(text); }, py::arg("text"));
  m.def("load_map_file", &load_map_file, py::arg("path"));

  py::class_<RiskConfig>(m, "RiskConfig")
      .def(py::init<>())
      .def_readwrite("wa1", &RiskConfig::wa1)
      .def_readwrite("wa2", &RiskConfig::wa2)
      .def_readwrite("w_distance", &RiskConfig::w_distance)
      .def_readwrite("w_visibility", &RiskConfig::w_visibility)
      .def_readwrite("w_tether_length", &RiskConfig::w_tether_length)
      .def_readwrite("w_contacts", &RiskConfig::w_contacts)
      .def_readwrite("wa", &RiskConfig::wa)
      .def_readwrite("ws", &RiskConfig::ws)
      .def_readwrite("wp", &RiskConfig::wp);

  m.def("parse_config", [](const std::string& text) { return parse_config_json(text).risk; }, py::arg("text"));

  m.def(
      "evaluate",
      [](const OccupancyGrid& g, const std::vector<CellTuple>& states, const RiskConfig& cfg) {
        return profile_dict(evaluate(to_plan(states), g, cfg));
      },
      py::arg("grid"), py::arg("states"), py::arg("config") = RiskConfig{});

  m.def(
      "plan",
      [](const OccupancyGrid& g, CellTuple start, CellTuple goal, const RiskConfig& cfg, std::size_t max_contacts,
         std::size_t max_expansions) {
        const PlanResult r = plan_min_risk(g, {start.first, start.second}, {goal.first, goal.second}, cfg,
                                           PlannerLimits{max_contacts, max_expansions});
        return py::make_tuple(from_plan(r.plan), r.profile.total);
      },
      py::arg("grid"), py::arg("start"), py::arg("goal"), py::arg("config") = RiskConfig{},
      py::arg("max_contacts") = PlannerLimits{}.max_contacts,
      py::arg("max_expansions") = PlannerLimits{}.max_expansions);

  m.def(
      "tether",
      [](const OccupancyGrid& g, const std::vector<CellTuple>& walk) {
        const TetherState t = tether_along(to_plan(walk).states, g);
        std::vector<std::pair<double, double>> poly;
        for (const Point& p : t.polyline()) poly.emplace_back(p.x, p.y);
        return py::make_tuple(t.length(), t.contact_count(), poly);
      },
      py::arg("grid"), py::arg("walk"));

  m.def(
      "finishes",
      [](const std::vector<CellTuple>& states, const std::vector<std::pair<double, double>>& exec, double rp,
         double re) {
        Execution e;
        for (const auto& [x, y] : exec) e.states.push_back({x, y});
        const FinishVerdict v = finishes(to_plan(states), e, FinishCriteria{rp, re});
        py::dict d;
        d["finished"] = v.finished;
        d["reachability_ok"] = v.reachability_ok;
        d["stability_ok"] = v.stability_ok;
        return d;
      },
      py::arg("states"), py::arg("execution"), py::arg("rp") = FinishCriteria{}.rp,
      py::arg("re") = FinishCriteria{}.re);

  m.def(
      "failure_rate",
      [](const OccupancyGrid& g, const std::vector<CellTuple>& states, std::size_t trials, std::uint64_t seed,
         double sigma, double kappa, const RiskConfig& cfg) {
        const MonteCarloResult r = monte_carlo_failure_rate(to_plan(states), g, cfg, NoiseModel{sigma, kappa},
                                                            trials, FinishCriteria{}, seed);
        return py::make_tuple(r.rate, r.ci_halfwidth);
      },
      py::arg("grid"), py::arg("states"), py::arg("trials") = 2000, py::arg("seed") = 0,
      py::arg("sigma") = NoiseModel{}.sigma, py::arg("kappa") = NoiseModel{}.kappa,
      py::arg("config") = RiskConfig{});

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "riskpath");
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}

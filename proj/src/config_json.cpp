#include "riskpath/config_json.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace riskpath {

namespace {

using nlohmann::json;

void read_number(const json& obj, const char* key, double& out, const std::string& where) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  out = v.get<double>();
}

void read_int(const json& obj, const char* key, int& out, const std::string& where) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
  out = v.get<int>();
}

const json* section(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) return nullptr;
  const json& v = obj.at(key);
  if (!v.is_object()) throw ConfigError(where + "." + key + " must be an object");
  return &v;
}

}  // namespace

RunConfig parse_config_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  RunConfig cfg;
  RiskConfig& r = cfg.risk;
  if (const json* w = section(doc, "weights", "")) {
    read_number(*w, "wa1", r.wa1, "weights");
    read_number(*w, "wa2", r.wa2, "weights");
    read_number(*w, "wa", r.wa, "weights");
    read_number(*w, "ws", r.ws, "weights");
    read_number(*w, "wp", r.wp, "weights");
    if (const json* s = section(*w, "state", "weights")) {
      read_number(*s, "distance", r.w_distance, "weights.state");
      read_number(*s, "visibility", r.w_visibility, "weights.state");
    }
    if (const json* p = section(*w, "path", "weights")) {
      read_number(*p, "tether_length", r.w_tether_length, "weights.path");
      read_number(*p, "contacts", r.w_contacts, "weights.path");
    }
  }
  if (const json* n = section(doc, "norm", "")) {
    read_number(*n, "action_max_len", r.norm.action_max_len, "norm");
    read_number(*n, "turn_max_deg", r.norm.turn_max_deg, "norm");
    read_number(*n, "dist_lo", r.norm.dist_lo, "norm");
    read_number(*n, "dist_hi", r.norm.dist_hi, "norm");
    read_number(*n, "vis_range", r.norm.vis_range, "norm");
    read_int(*n, "vis_rays", r.norm.vis_rays, "norm");
    read_number(*n, "tether_max", r.norm.tether_max, "norm");
    read_int(*n, "contacts_max", r.norm.contacts_max, "norm");
  }
  if (const json* c = section(doc, "criteria", "")) {
    read_number(*c, "rp", cfg.criteria.rp, "criteria");
    if (c->contains("re")) {
      const json& re = c->at("re");
      if (re.is_null() || (re.is_string() && re.get<std::string>() == "inf")) {
        cfg.criteria.re = std::numeric_limits<double>::infinity();
      } else {
        read_number(*c, "re", cfg.criteria.re, "criteria");
      }
    }
  }
  try {
    r.validate();
    cfg.criteria.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_json(ss.str());
}

std::string config_to_json(const RunConfig& cfg) {
  const RiskConfig& r = cfg.risk;
  json doc;
  doc["weights"] = {{"wa1", r.wa1}, {"wa2", r.wa2}, {"wa", r.wa}, {"ws", r.ws}, {"wp", r.wp},
                    {"state", {{"distance", r.w_distance}, {"visibility", r.w_visibility}}},
                    {"path", {{"tether_length", r.w_tether_length}, {"contacts", r.w_contacts}}}};
  doc["norm"] = {{"action_max_len", r.norm.action_max_len}, {"turn_max_deg", r.norm.turn_max_deg},
                 {"dist_lo", r.norm.dist_lo},               {"dist_hi", r.norm.dist_hi},
                 {"vis_range", r.norm.vis_range},           {"vis_rays", r.norm.vis_rays},
                 {"tether_max", r.norm.tether_max},         {"contacts_max", r.norm.contacts_max}};
  doc["criteria"]["rp"] = cfg.criteria.rp;
  if (std::isinf(cfg.criteria.re)) {
    doc["criteria"]["re"] = "inf";
  } else {
    doc["criteria"]["re"] = cfg.criteria.re;
  }
  return doc.dump(2) + "\n";
}

}  // namespace riskpath

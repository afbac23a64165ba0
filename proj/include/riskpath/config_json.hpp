#pragma once

#include <stdexcept>
#include <string>

#include "riskpath/execution.hpp"
#include "riskpath/risk.hpp"

namespace riskpath {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  RiskConfig risk;
  FinishCriteria criteria;
};

/// Missing keys keep their defaults. criteria.re may be null or "inf".
RunConfig parse_config_json(const std::string& text);
RunConfig load_config_file(const std::string& path);
std::string config_to_json(const RunConfig& cfg);

}  // namespace riskpath

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cptp/model.hpp"
#include "cptp/npi.hpp"

namespace cptp {

/// Transmon-network description in internal units.
///
/// JSON input uses linear frequencies in GHz (multiplied by 2 pi here), decay
/// times in microseconds and control times in nanoseconds; internally
/// everything is rad/ns and ns. With `"units": "dimensionless"` the plain
/// keys (omega, xi, rot_freq, t1, t2, j) are taken as given.
struct ModelConfig {
  std::vector<SubsystemSpec> subsystems;
  std::vector<CouplingSpec> couplings;
  std::vector<ControlPair> controls;

  LindbladModel build() const {
    return build_transmon_model(subsystems, couplings, controls);
  }
};

ModelConfig parse_model_config(const nlohmann::json& j);
ModelConfig load_model_config(const std::string& path);
nlohmann::json load_json(const std::string& path);

ControlPulse parse_control(const nlohmann::json& j, bool dimensionless);
SchemeConfig parse_scheme(const nlohmann::json& j);
FlowFamily parse_family(const std::string& s);
std::string to_string(FlowFamily f);

}  // namespace cptp

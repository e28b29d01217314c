#include "cptp/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

namespace cptp {

using nlohmann::json;

namespace {

constexpr Real kTwoPi = 2.0 * std::numbers::pi;
constexpr Real kNsPerUs = 1000.0;

Real number_or(const json& j, const char* key, Real fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  const json& v = j.at(key);
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity") return std::numeric_limits<Real>::infinity();
    throw ConfigError(std::string("field '") + key + "' must be a number or \"inf\"");
  }
  if (!v.is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
  return v.get<Real>();
}

Real required(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  return number_or(j, key, 0.0);
}

}  // namespace

FlowFamily parse_family(const std::string& s) {
  if (s == "ex" || s == "explicit") return FlowFamily::Explicit;
  if (s == "im" || s == "implicit") return FlowFamily::Implicit;
  throw ConfigError("unknown flow family '" + s + "' (expected ex|im)");
}

std::string to_string(FlowFamily f) { return f == FlowFamily::Explicit ? "explicit" : "implicit"; }

ControlPulse parse_control(const json& j, bool dimensionless) {
  const std::string kind = j.value("kind", "zero");
  const Real freq = dimensionless ? 1.0 : kTwoPi;
  if (kind == "zero") return ControlPulse::zero();
  if (kind == "tanh" || kind == "tanh-ramp") {
    if (dimensionless) {
      return ControlPulse::tanh_ramp(required(j, "amplitude"), required(j, "steepness"),
                                     required(j, "center"));
    }
    return ControlPulse::tanh_ramp(freq * required(j, "amplitude_ghz"),
                                   required(j, "steepness_per_ns"), required(j, "center_ns"));
  }
  if (kind == "super-gaussian" || kind == "super_gaussian") {
    return ControlPulse::super_gaussian(required(j, "amplitude"), required(j, "width"),
                                        required(j, "t_ref"));
  }
  if (kind == "tabulated") {
    auto times = j.at(dimensionless ? "times" : "times_ns").get<std::vector<Real>>();
    auto values = j.at(dimensionless ? "values" : "values_ghz").get<std::vector<Real>>();
    for (auto& v : values) v *= freq;
    return ControlPulse::tabulated(std::move(times), std::move(values));
  }
  throw ConfigError("unknown control kind '" + kind + "'");
}

ModelConfig parse_model_config(const json& j) {
  try {
    const std::string units = j.value("units", "ghz_ns");
    if (units != "ghz_ns" && units != "dimensionless") {
      throw ConfigError("units must be \"ghz_ns\" or \"dimensionless\"");
    }
    const bool plain = units == "dimensionless";
    const Real freq = plain ? 1.0 : kTwoPi;
    const Real time = plain ? 1.0 : kNsPerUs;
    const Real inf = std::numeric_limits<Real>::infinity();

    ModelConfig cfg;
    if (!j.contains("subsystems") || !j.at("subsystems").is_array()) {
      throw ConfigError("config needs a 'subsystems' array");
    }
    for (const auto& s : j.at("subsystems")) {
      SubsystemSpec spec;
      spec.levels = s.at("levels").get<Index>();
      spec.omega = freq * number_or(s, plain ? "omega" : "omega_ghz", 0.0);
      spec.xi = freq * number_or(s, plain ? "xi" : "xi_ghz", 0.0);
      spec.rot_freq = freq * number_or(s, plain ? "rot_freq" : "rot_freq_ghz", spec.omega / freq);
      spec.t1 = time * number_or(s, plain ? "t1" : "t1_us", inf);
      spec.t2 = time * number_or(s, plain ? "t2" : "t2_us", inf);
      cfg.subsystems.push_back(spec);
    }
    if (j.contains("couplings")) {
      for (const auto& c : j.at("couplings")) {
        CouplingSpec spec;
        spec.k = c.at("k").get<Index>();
        spec.l = c.at("l").get<Index>();
        spec.j = freq * number_or(c, plain ? "j" : "j_ghz", 0.0);
        spec.xi = freq * number_or(c, plain ? "xi" : "xi_ghz", 0.0);
        cfg.couplings.push_back(spec);
      }
    }
    cfg.controls.assign(cfg.subsystems.size(), ControlPair{});
    if (j.contains("controls")) {
      const auto& controls = j.at("controls");
      if (controls.size() > cfg.subsystems.size()) {
        throw ConfigError("more control entries than subsystems");
      }
      for (std::size_t k = 0; k < controls.size(); ++k) {
        const auto& c = controls[k];
        if (c.contains("kind")) {
          cfg.controls[k].first = parse_control(c, plain);
        } else {
          if (c.contains("p")) cfg.controls[k].first = parse_control(c.at("p"), plain);
          if (c.contains("q")) cfg.controls[k].second = parse_control(c.at("q"), plain);
        }
      }
    }
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed model config: ") + e.what());
  } catch (const ModelError& e) {
    throw ConfigError(e.what());
  }
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse '" + path + "': " + e.what());
  }
}

ModelConfig load_model_config(const std::string& path) { return parse_model_config(load_json(path)); }

SchemeConfig parse_scheme(const json& j) {
  try {
    const int order = j.value("order", 4);
    const FlowFamily family = parse_family(j.value("family", std::string("ex")));
    SchemeConfig c = j.value("lower_levels", std::string("same")) == "explicit"
                         ? SchemeConfig::top_level(order, family)
                         : SchemeConfig::uniform(order, family);
    c.kappa = j.value("kappa", c.kappa);
    c.renormalize_trace = j.value("renormalize", true);
    const std::string rule = j.value("second_order_rule", std::string("midpoint"));
    if (rule == "trapezoid") {
      c.second_order_rule = SecondOrderRule::Trapezoid;
    } else if (rule != "midpoint") {
      throw ConfigError("second_order_rule must be midpoint or trapezoid");
    }
    if (j.contains("max_rank")) c.max_rank = j.at("max_rank").get<Index>();
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed scheme config: ") + e.what());
  }
}

}  // namespace cptp

#include "jla/config.hpp"

#include <set>
#include <sstream>
#include <string>

#include <yaml-cpp/yaml.h>

namespace jla {
namespace {

[[noreturn]] void fail(const YAML::Node& node, const std::string& msg) {
  std::ostringstream out;
  out << "line " << node.Mark().line + 1 << ": " << msg;
  throw ConfigError(out.str());
}

void check_keys(const YAML::Node& node, const std::string& context,
                const std::set<std::string>& allowed) {
  if (!node.IsMap()) fail(node, "'" + context + "' must be a mapping");
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      fail(kv.first, "unknown key '" + key + "' in '" + context + "'");
    }
  }
}

Vec get_vec(const YAML::Node& node, const std::string& context) {
  if (!node.IsSequence() || node.size() == 0) {
    fail(node, "'" + context + "' must be a non-empty number list");
  }
  Vec out(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) {
    try {
      out[static_cast<Eigen::Index>(i)] = node[i].as<double>();
    } catch (const YAML::Exception&) {
      fail(node[i], "'" + context + "' entries must be numbers");
    }
  }
  return out;
}

double get_num(const YAML::Node& node, const std::string& context) {
  try {
    return node.as<double>();
  } catch (const YAML::Exception&) {
    fail(node, "'" + context + "' must be a number");
  }
}

ManipulatorModel parse_model(const YAML::Node& node) {
  check_keys(node, "model",
             {"masses", "lengths", "com_offsets", "inertias", "gravity",
              "viscous_friction"});
  ManipulatorModel m;
  if (!node["masses"] || !node["lengths"] || !node["com_offsets"] ||
      !node["inertias"]) {
    fail(node, "model requires masses, lengths, com_offsets, inertias");
  }
  m.link_mass = get_vec(node["masses"], "model.masses");
  m.link_length = get_vec(node["lengths"], "model.lengths");
  m.com_offset = get_vec(node["com_offsets"], "model.com_offsets");
  m.link_inertia = get_vec(node["inertias"], "model.inertias");
  if (node["gravity"]) m.gravity = get_num(node["gravity"], "model.gravity");
  if (node["viscous_friction"]) {
    m.viscous_friction =
        get_vec(node["viscous_friction"], "model.viscous_friction");
  } else {
    m.viscous_friction = Vec::Zero(m.link_mass.size());
  }
  return m;
}

JointLimits parse_limits(const YAML::Node& node) {
  check_keys(node, "limits_deg", {"min", "max"});
  if (!node["min"] || !node["max"]) {
    fail(node, "limits_deg requires min and max");
  }
  try {
    return JointLimits::from_degrees(get_vec(node["min"], "limits_deg.min"),
                                     get_vec(node["max"], "limits_deg.max"));
  } catch (const std::invalid_argument& e) {
    fail(node, std::string("invalid limits: ") + e.what());
  }
}

ControllerSpec parse_controller(const YAML::Node& node) {
  check_keys(node, "controller",
             {"law", "kp", "kd", "tau_max", "xi_saturation",
              "approx_coriolis_feedforward"});
  ControllerSpec spec;
  if (!node["law"]) fail(node, "controller requires 'law'");
  try {
    spec.law = parse_law(node["law"].as<std::string>());
  } catch (const ConfigError& e) {
    fail(node["law"], e.what());
  }
  if (spec.law != ControlLaw::none) {
    if (!node["kp"] || !node["kd"]) {
      fail(node, "controller requires 'kp' and 'kd' diagonals");
    }
    spec.gains = ControlGains::diagonal(get_vec(node["kp"], "controller.kp"),
                                        get_vec(node["kd"], "controller.kd"));
  }
  if (node["tau_max"]) {
    spec.tau_max = get_num(node["tau_max"], "controller.tau_max");
    if (!(spec.tau_max > 0)) fail(node["tau_max"], "tau_max must be > 0");
  }
  if (node["xi_saturation"]) {
    spec.xi_sat = get_num(node["xi_saturation"], "controller.xi_saturation");
    if (!(spec.xi_sat > 0)) {
      fail(node["xi_saturation"], "xi_saturation must be > 0");
    }
  }
  if (node["approx_coriolis_feedforward"]) {
    spec.approx_coriolis_feedforward =
        node["approx_coriolis_feedforward"].as<bool>();
  }
  return spec;
}

ReferenceGenerator parse_reference(const YAML::Node& node) {
  check_keys(node, "reference",
             {"kind", "q_d_deg", "rate_divisor", "omega", "rho"});
  ReferenceGenerator gen;
  if (!node["kind"]) fail(node, "reference requires 'kind'");
  const std::string kind = node["kind"].as<std::string>();
  if (kind == "constant") {
    gen.kind = ReferenceGenerator::Kind::constant;
    if (!node["q_d_deg"]) fail(node, "constant reference requires q_d_deg");
    gen.q_d = deg_to_rad(get_vec(node["q_d_deg"], "reference.q_d_deg"));
  } else if (kind == "sinusoid") {
    gen.kind = ReferenceGenerator::Kind::sinusoid;
    if (!node["rate_divisor"] || !node["omega"] || !node["rho"]) {
      fail(node, "sinusoid reference requires rate_divisor, omega, rho");
    }
    gen.rate_divisor = get_num(node["rate_divisor"], "reference.rate_divisor");
    gen.omega = get_vec(node["omega"], "reference.omega");
    gen.rho = get_vec(node["rho"], "reference.rho");
  } else {
    fail(node["kind"], "reference kind must be 'constant' or 'sinusoid'");
  }
  return gen;
}

ExternalForceProfile parse_force(const YAML::Node& node) {
  check_keys(node, "force", {"kind", "direction", "rate", "start_time", "cap"});
  ExternalForceProfile f;
  if (!node["kind"]) fail(node, "force requires 'kind'");
  const std::string kind = node["kind"].as<std::string>();
  if (kind == "none") {
    f.kind = ExternalForceProfile::Kind::none;
  } else if (kind == "ramp") {
    f.kind = ExternalForceProfile::Kind::ramp;
    if (!node["rate"] || !node["cap"]) {
      fail(node, "ramp force requires 'rate' and 'cap'");
    }
    f.magnitude_rate = get_num(node["rate"], "force.rate");
    f.cap = get_num(node["cap"], "force.cap");
    if (node["start_time"]) {
      f.start_time = get_num(node["start_time"], "force.start_time");
    }
    if (node["direction"]) {
      const Vec d = get_vec(node["direction"], "force.direction");
      if (d.size() != 2) fail(node["direction"], "direction must have 2 entries");
      const double norm = d.norm();
      if (!(norm > 0)) fail(node["direction"], "direction must be nonzero");
      f.direction = Vec2(d[0], d[1]) / norm;
    }
    if (f.magnitude_rate < 0 || f.cap < 0) {
      fail(node, "force rate and cap must be nonnegative");
    }
  } else {
    fail(node["kind"], "force kind must be 'none' or 'ramp'");
  }
  return f;
}

FuzzSpec parse_fuzz(const YAML::Node& node) {
  check_keys(node, "fuzz",
             {"runs", "seed", "duration", "ic_box_fraction",
              "ref_box_fraction", "sinusoid_fraction", "max_initial_speed"});
  FuzzSpec f;
  if (node["runs"]) f.runs = node["runs"].as<int>();
  if (node["seed"]) f.seed = node["seed"].as<std::uint64_t>();
  if (node["duration"]) f.duration = get_num(node["duration"], "fuzz.duration");
  if (node["ic_box_fraction"]) {
    f.ic_box_fraction = get_num(node["ic_box_fraction"], "fuzz");
  }
  if (node["ref_box_fraction"]) {
    f.ref_box_fraction = get_num(node["ref_box_fraction"], "fuzz");
  }
  if (node["sinusoid_fraction"]) {
    f.sinusoid_fraction = get_num(node["sinusoid_fraction"], "fuzz");
  }
  if (node["max_initial_speed"]) {
    f.max_initial_speed = get_num(node["max_initial_speed"], "fuzz");
  }
  if (f.runs < 1) fail(node, "fuzz.runs must be >= 1");
  if (f.ic_box_fraction <= 0 || f.ic_box_fraction >= 1 ||
      f.ref_box_fraction <= 0 || f.ref_box_fraction >= 1) {
    fail(node, "fuzz box fractions must lie in (0, 1)");
  }
  return f;
}

}  // namespace

ControlLaw parse_law(const std::string& name) {
  if (name == "none") return ControlLaw::none;
  if (name == "classical") return ControlLaw::classical;
  if (name == "proposed") return ControlLaw::proposed;
  if (name == "setpoint") return ControlLaw::setpoint;
  throw ConfigError("unknown law '" + name +
                    "' (expected classical, proposed, setpoint, or none)");
}

const char* to_string(ControlLaw law) {
  switch (law) {
    case ControlLaw::none: return "none";
    case ControlLaw::classical: return "classical";
    case ControlLaw::proposed: return "proposed";
    case ControlLaw::setpoint: return "setpoint";
  }
  return "unknown";
}

ExperimentConfig load_experiment_config(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw ConfigError("cannot read config file '" + path + "'");
  } catch (const YAML::ParserException& e) {
    throw ConfigError("parse error in '" + path + "': " + e.what());
  }

  try {
    check_keys(root, "config",
               {"name", "model", "limits_deg", "initial_deg", "controller",
                "reference", "force", "sim", "output", "seed",
                "compare_laws", "fuzz"});

    ExperimentConfig cfg;
    if (root["name"]) cfg.name = root["name"].as<std::string>();

    cfg.sim.model = root["model"] ? parse_model(root["model"]) : desk_model();

    if (!root["limits_deg"]) {
      throw ConfigError("config requires 'limits_deg'");
    }
    cfg.sim.limits = parse_limits(root["limits_deg"]);

    if (!root["initial_deg"]) {
      throw ConfigError("config requires 'initial_deg'");
    }
    check_keys(root["initial_deg"], "initial_deg", {"q", "q_dot"});
    if (!root["initial_deg"]["q"]) {
      fail(root["initial_deg"], "initial_deg requires 'q'");
    }
    cfg.sim.q0 = deg_to_rad(get_vec(root["initial_deg"]["q"], "initial_deg.q"));
    cfg.sim.q0_dot =
        root["initial_deg"]["q_dot"]
            ? deg_to_rad(
                  get_vec(root["initial_deg"]["q_dot"], "initial_deg.q_dot"))
            : Vec::Zero(cfg.sim.q0.size());

    if (!root["controller"]) throw ConfigError("config requires 'controller'");
    cfg.sim.controller = parse_controller(root["controller"]);

    if (!root["reference"]) throw ConfigError("config requires 'reference'");
    cfg.sim.reference = parse_reference(root["reference"]);

    if (root["force"]) cfg.sim.force = parse_force(root["force"]);

    if (!root["sim"]) throw ConfigError("config requires 'sim'");
    check_keys(root["sim"], "sim", {"dt", "duration", "integrator"});
    if (!root["sim"]["dt"] || !root["sim"]["duration"]) {
      fail(root["sim"], "sim requires dt and duration");
    }
    cfg.sim.dt = get_num(root["sim"]["dt"], "sim.dt");
    cfg.sim.duration = get_num(root["sim"]["duration"], "sim.duration");
    if (root["sim"]["integrator"]) {
      const std::string kind = root["sim"]["integrator"].as<std::string>();
      if (kind == "rk4") {
        cfg.sim.integrator = IntegratorKind::rk4;
      } else if (kind == "semi_implicit_euler") {
        cfg.sim.integrator = IntegratorKind::semi_implicit_euler;
      } else {
        fail(root["sim"]["integrator"],
             "integrator must be 'rk4' or 'semi_implicit_euler'");
      }
    }

    if (root["output"]) {
      check_keys(root["output"], "output", {"trace", "report", "plots"});
      if (root["output"]["trace"]) {
        cfg.trace_path = root["output"]["trace"].as<std::string>();
      }
      if (root["output"]["report"]) {
        cfg.report_path = root["output"]["report"].as<std::string>();
      }
      if (root["output"]["plots"]) {
        cfg.plots = root["output"]["plots"].as<bool>();
      }
    }
    if (root["seed"]) cfg.seed = root["seed"].as<std::uint64_t>();

    if (root["compare_laws"]) {
      const YAML::Node laws = root["compare_laws"];
      if (!laws.IsSequence() || laws.size() < 2) {
        fail(laws, "compare_laws must list at least two laws");
      }
      for (const auto& l : laws) {
        cfg.compare_laws.push_back(parse_law(l.as<std::string>()));
      }
    }

    if (root["fuzz"]) cfg.fuzz = parse_fuzz(root["fuzz"]);

    // Surface validation errors (sizes, gains, feasibility) as ConfigError.
    try {
      cfg.sim.validate();
    } catch (const std::exception& e) {
      throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
    return cfg;
  } catch (const YAML::Exception& e) {
    throw ConfigError("config error in '" + path + "': " + e.what());
  }
}

}  // namespace jla

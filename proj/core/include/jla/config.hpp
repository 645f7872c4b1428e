#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jla/simulation.hpp"

namespace jla {

/// An experiment description loaded from a YAML config file. Angles are
/// degrees in the file and radians everywhere in memory; the conversion
/// happens here at the boundary. Unknown keys are rejected.
struct ExperimentConfig {
  std::string name;
  SimConfig sim;
  std::optional<FuzzSpec> fuzz;          // present: a randomized batch
  std::vector<ControlLaw> compare_laws;  // laws `compare` pairs up
  std::uint64_t seed = 1;

  std::string trace_path = "trace.csv";
  std::string report_path = "report.txt";
  bool plots = false;
};

/// Parses and validates a config file. Throws ConfigError with key and
/// line context on unknown keys, wrong shapes, or invalid values.
ExperimentConfig load_experiment_config(const std::string& path);

ControlLaw parse_law(const std::string& name);  // throws ConfigError
const char* to_string(ControlLaw law);

}  // namespace jla

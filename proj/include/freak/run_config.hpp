#pragma once

// Run configuration for the command-line front end.  Layers, lowest first:
// built-in defaults, a named preset, a JSON config file, command-line flags.

#include <optional>
#include <string>
#include <vector>

#include "freak/curve.hpp"
#include "freak/periods.hpp"
#include "freak/solution.hpp"

namespace freak {

struct RunConfig {
  double a = 1.0 / 1.3;
  double b = 1.3;
  double phi = 0.3 * 3.14159265358979323846;
  double alpha = 0.1;
  std::string lambda0_expr = "0";  // number, "k2/(4k1)" or "k2/(4k3)"
  FieldKind field = FieldKind::kKpiU;
  GridSpec grid{{-20.0, 20.0, 401}, {-5.0, 5.0, 201}, 0.0, Plane::kXZ};
  double tol = 1e-13;
  NomeConvention nome = NomeConvention::kPi;
  std::string out_dir = ".";
  std::string name = "field";  // stem of the emitted files
  bool plot_script = true;
  bool paranoid = false;
  double corrupt_A = 1.0;
  std::vector<std::string> criteria;  // empty: all
};

std::vector<std::string> preset_names();

// Throws InvalidArgument for an unknown name.
void apply_preset(RunConfig& cfg, const std::string& name);

// Merges a JSON document (see README for the keys) into cfg.  Throws
// InvalidArgument on unknown keys or wrong types.
void apply_json(RunConfig& cfg, const std::string& text);

// Range, count and tolerance checks; throws InvalidArgument.
void check_config(const RunConfig& cfg);

// Canonical JSON rendering of the configuration.
std::string config_json(const RunConfig& cfg);

}  // namespace freak

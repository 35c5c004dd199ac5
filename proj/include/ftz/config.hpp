#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ftz/field.hpp"
#include "ftz/quadrature.hpp"
#include "ftz/symbol.hpp"

namespace ftz {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  double alpha = 1.0;
  Grid grid{16.0, 256};
  int dimension = 40;
  SymbolSpec symbol = SymbolSpec::gaussian(1.0);
  int lattice_radius = 3;
  double heat_t = 0.25;
  std::vector<double> schatten_p{1.0, 2.0, 4.0};
  QuadratureSpec quadrature;
  std::map<std::string, double> tolerances;  // every known name, defaults filled in
  std::string output_dir = "ftz_out";

  double tolerance(const std::string& name) const;
};

/// Known tolerance names and their defaults.
const std::map<std::string, double>& default_tolerances();

/// Unknown keys anywhere in the document are rejected. Relative symbol paths
/// resolve against base_dir.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

nlohmann::json to_json(const ExperimentConfig& cfg);
nlohmann::json to_json(const SymbolSpec& spec);

}  // namespace ftz

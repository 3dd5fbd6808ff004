#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace fraclab::lab {

struct ExperimentConfig {
  std::string experiment;  // subcommand name
  std::string shape = "halfplane";
  double s = 0.25;
  std::vector<double> s_list;
  double eps = 0.1;
  std::vector<double> eps_list{0.2, 0.1, 0.05};
  double h = 0.0625;
  double window = 1.0;  // half-width of the square window (interval in 1D)
  double rt = 0.0;      // 0: command default
  double r = 0.0;       // radius of U = B_r; 0: whole window
  std::vector<double> x0{0.0, 0.0};
  double rho0 = 1e-3;
  std::string mode = "to_half";
  std::string method = "maxflow";
  int iters = 2000;
  double tol = 1e-10;
  double height = 1.0;
  std::vector<double> radii{0.25, 0.5};
  std::vector<double> thetas{0.1, 0.1};
  std::uint64_t seed = 1;
  std::vector<std::string> only;
  std::string out;
  std::string report;
  std::string json;
};

// Keys that may appear in a JSON config file.
const std::vector<std::string>& config_keys();

// Overwrites fields present in j; unknown keys throw InvalidArgument.
void apply_json(ExperimentConfig& c, const nlohmann::json& j);
void load_config_file(ExperimentConfig& c, const std::string& path);

nlohmann::json to_json(const ExperimentConfig& c);
// FNV-1a over the canonical JSON dump, as 16 hex digits.
std::string config_hash(const ExperimentConfig& c);

// Range checks that do not depend on the command.
void validate(const ExperimentConfig& c);

}  // namespace fraclab::lab

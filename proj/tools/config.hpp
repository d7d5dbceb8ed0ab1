#pragma once

// Run configuration for the normwave command-line tool, read from and written
// to JSON. Unknown keys are rejected so that a typo cannot silently fall back
// to a default.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "normwave/radial.hpp"

namespace normwave::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridConfig {
  std::size_t n = 4096;
  double r_max = 0.0;  // 0 selects the natural length scale of the parameters
  bool operator==(const GridConfig&) const = default;
};

struct SolverConfig {
  int max_iter = 20000;
  double grad_tol = 1e-8;
  double newton_tol = 1e-10;
  double perturbation = 1e-3;  // seeded noise that lets the descent leave symmetric subspaces
  bool morse = true;
  std::size_t morse_nodes = 1024;
  bool operator==(const SolverConfig&) const = default;
};

struct DynamicsConfig {
  double dt = 1e-4;
  double T = 1.0;
  double s = 0.05;
  double sample_interval = 1e-2;
  bool operator==(const DynamicsConfig&) const = default;
};

struct RunConfig {
  GridConfig grid;
  std::vector<double> a{1.0, 1.0};
  std::vector<std::vector<double>> beta{{1.0, 4.0}, {4.0, 1.0}};
  SolverConfig solver;
  DynamicsConfig dynamics;
  double eps = 0.0;  // linking box parameter, 0 selects eps_max / 2
  std::uint64_t seed = 0;
  std::string constants;  // empty selects the bundled constants file
  bool operator==(const RunConfig&) const = default;

  SystemParams params() const;
};

/// Throws ConfigError on malformed JSON, unknown keys, wrong types or
/// parameters violating their ranges.
RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig& cfg);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace normwave::cli

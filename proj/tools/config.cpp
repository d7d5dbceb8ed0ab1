#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "normwave/error.hpp"

namespace normwave::cli {

using nlohmann::ordered_json;

namespace {

void only_keys(const ordered_json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

template <class T>
void read(const ordered_json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void validate(const RunConfig& c) {
  require(c.grid.n >= 16, "grid.n must be at least 16");
  require(c.grid.r_max >= 0.0, "grid.r_max must be non-negative");
  require(c.solver.max_iter > 0, "solver.max_iter must be positive");
  require(c.solver.grad_tol > 0.0 && c.solver.newton_tol > 0.0, "solver tolerances must be positive");
  require(c.solver.perturbation >= 0.0, "solver.perturbation must be non-negative");
  require(c.dynamics.dt > 0.0 && c.dynamics.T > 0.0 && c.dynamics.sample_interval > 0.0,
          "dynamics.dt, dynamics.T and dynamics.sample_interval must be positive");
  require(c.dynamics.s >= 0.0, "dynamics.s must be non-negative");
  require(c.eps >= 0.0, "eps must be non-negative");
  require(!c.a.empty(), "a must list at least one mass");
  require(c.beta.size() == c.a.size(), "beta must be k x k with k = size of a");
  for (const auto& row : c.beta) require(row.size() == c.a.size(), "beta must be k x k with k = size of a");
  try {
    c.params().validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

SystemParams RunConfig::params() const {
  std::vector<double> flat;
  for (const auto& row : beta) flat.insert(flat.end(), row.begin(), row.end());
  return SystemParams(a, flat);
}

RunConfig parse_config(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  only_keys(j, {"grid", "a", "beta", "solver", "dynamics", "eps", "seed", "constants"}, "config");
  RunConfig c;
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    only_keys(g, {"n", "r_max"}, "grid");
    read(g, "n", c.grid.n, "grid");
    read(g, "r_max", c.grid.r_max, "grid");
  }
  read(j, "a", c.a, "config");
  read(j, "beta", c.beta, "config");
  if (j.contains("solver")) {
    const auto& s = j["solver"];
    only_keys(s, {"max_iter", "grad_tol", "newton_tol", "perturbation", "morse", "morse_nodes"}, "solver");
    read(s, "max_iter", c.solver.max_iter, "solver");
    read(s, "grad_tol", c.solver.grad_tol, "solver");
    read(s, "newton_tol", c.solver.newton_tol, "solver");
    read(s, "perturbation", c.solver.perturbation, "solver");
    read(s, "morse", c.solver.morse, "solver");
    read(s, "morse_nodes", c.solver.morse_nodes, "solver");
  }
  if (j.contains("dynamics")) {
    const auto& d = j["dynamics"];
    only_keys(d, {"dt", "T", "s", "sample_interval"}, "dynamics");
    read(d, "dt", c.dynamics.dt, "dynamics");
    read(d, "T", c.dynamics.T, "dynamics");
    read(d, "s", c.dynamics.s, "dynamics");
    read(d, "sample_interval", c.dynamics.sample_interval, "dynamics");
  }
  read(j, "eps", c.eps, "config");
  read(j, "seed", c.seed, "config");
  read(j, "constants", c.constants, "config");
  validate(c);
  return c;
}

std::string serialize_config(const RunConfig& c) {
  ordered_json j;
  j["grid"] = {{"n", c.grid.n}, {"r_max", c.grid.r_max}};
  j["a"] = c.a;
  j["beta"] = c.beta;
  j["solver"] = {{"max_iter", c.solver.max_iter},         {"grad_tol", c.solver.grad_tol},
                 {"newton_tol", c.solver.newton_tol},     {"perturbation", c.solver.perturbation},
                 {"morse", c.solver.morse},               {"morse_nodes", c.solver.morse_nodes}};
  j["dynamics"] = {{"dt", c.dynamics.dt},
                   {"T", c.dynamics.T},
                   {"s", c.dynamics.s},
                   {"sample_interval", c.dynamics.sample_interval}};
  j["eps"] = c.eps;
  j["seed"] = c.seed;
  j["constants"] = c.constants;
  return j.dump(2) + "\n";
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace normwave::cli

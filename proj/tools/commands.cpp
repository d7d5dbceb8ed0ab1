#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "config.hpp"
#include "json.hpp"
#include "normwave/acceptance.hpp"
#include "normwave/dynamics.hpp"
#include "normwave/error.hpp"
#include "normwave/ground_state.hpp"
#include "normwave/linking.hpp"
#include "normwave/soliton.hpp"
#include "normwave/thresholds.hpp"
#include "output.hpp"

#ifndef NORMWAVE_CONSTANTS_FILE
#define NORMWAVE_CONSTANTS_FILE "data/w0_constants.json"
#endif
#ifndef NORMWAVE_VERSION
#define NORMWAVE_VERSION "unknown"
#endif

namespace normwave::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kCheckFailed = 2;

struct Session {
  std::string command;
  RunConfig cfg;
  fs::path out;
  bool quick = false;
  bool deterministic = false;
  std::vector<std::string> outputs;

  void write(const std::string& name, std::string_view text) {
    write_file(out / name, text);
    outputs.push_back(name);
  }
  void write_json(const std::string& name, const ordered_json& j) { write(name, j.dump(2) + "\n"); }
};

const char* kind_name(SolverError::Kind k) {
  switch (k) {
    case SolverError::Kind::bracket: return "bracket";
    case SolverError::Kind::residual: return "residual";
    case SolverError::Kind::no_convergence: return "no_convergence";
    case SolverError::Kind::collapse: return "collapse";
    case SolverError::Kind::singular: return "singular";
    case SolverError::Kind::divergence: return "divergence";
    case SolverError::Kind::blowup: return "blowup";
  }
  return "unknown";
}

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

template <class T>
ordered_json opt(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json subset_json(const std::vector<std::size_t>& s) {
  ordered_json j = ordered_json::array();
  for (std::size_t i : s) j.push_back(i + 1);
  return j;
}

ordered_json cp_json(const CriticalPoint& cp) {
  return {{"level", cp.level},
          {"lambda", cp.lambda},
          {"pohozaev_residual", cp.pohozaev_residual},
          {"grad_norm", cp.grad_norm},
          {"iterations", cp.iterations},
          {"morse_index", opt(cp.morse_index)}};
}

std::string profile_csv(const FieldList& U) {
  std::vector<std::string> header{"r"};
  for (std::size_t i = 0; i < U.size(); ++i) header.push_back("u_" + std::to_string(i + 1));
  CsvTable t(header);
  for (std::size_t j = 0; j < U[0].size(); ++j) {
    std::vector<double> row{U[0].grid->node(j)};
    for (const auto& u : U) row.push_back(u[j]);
    t.add_row(row);
  }
  return t.str();
}

std::string trajectory_csv(const TrajectoryDiagnostics& tr, std::size_t k) {
  std::vector<std::string> header{"t"};
  for (std::size_t i = 0; i < k; ++i) header.push_back("mass_" + std::to_string(i + 1));
  header.insert(header.end(), {"energy", "f", "G"});
  for (std::size_t i = 0; i < k; ++i) header.push_back("sup_" + std::to_string(i + 1));
  CsvTable t(header);
  for (std::size_t s = 0; s < tr.times.size(); ++s) {
    std::vector<double> row{tr.times[s]};
    row.insert(row.end(), tr.masses[s].begin(), tr.masses[s].end());
    row.insert(row.end(), {tr.energy[s], tr.variance[s], tr.pohozaev[s]});
    row.insert(row.end(), tr.sup_norms[s].begin(), tr.sup_norms[s].end());
    t.add_row(row);
  }
  return t.str();
}

GridPtr run_grid(const RunConfig& cfg, const SystemParams& p, const GroundStateProfile& gs) {
  return cfg.grid.r_max > 0.0 ? make_grid(cfg.grid.n, cfg.grid.r_max) : natural_grid(p, gs, cfg.grid.n);
}

CriticalPoint solve_ground(const RunConfig& cfg, const SystemParams& p, const GroundStateProfile& gs, GridPtr grid) {
  DescentOptions d;
  d.max_iter = cfg.solver.max_iter;
  d.grad_tol = cfg.solver.grad_tol;
  d.perturbation = cfg.solver.perturbation;
  d.seed = cfg.seed;
  NewtonOptions n;
  n.tol = cfg.solver.newton_tol;
  return newton_refine(minimize_rayleigh(p, product_test_state(p, gs, grid), d), p, n);
}

// Morse index on a coarser grid when the run grid is too large for the dense Hessian.
std::optional<int> coarse_morse(const CriticalPoint& cp, const SystemParams& p, const RunConfig& cfg) {
  const GridPtr fine = cp.U[0].grid;
  if (fine->size() <= cfg.solver.morse_nodes) return morse_index(cp, p, cfg.solver.morse_nodes);
  const GridPtr coarse = make_grid(cfg.solver.morse_nodes, fine->r_max());
  FieldList U;
  for (const auto& u : cp.U) {
    RadialField c(coarse);
    for (std::size_t j = 0; j < coarse->size(); ++j) c[j] = evaluate(u, coarse->node(j));
    U.push_back(std::move(c));
  }
  NewtonOptions n;
  n.tol = cfg.solver.newton_tol;
  return morse_index(newton_refine(make_critical_point(std::move(U), p), p, n), p, cfg.solver.morse_nodes);
}

// Positive at every node but the last, where the truncation may leave an exact zero.
bool positive(const FieldList& U) {
  for (const auto& u : U) {
    for (std::size_t j = 0; j + 1 < u.size(); ++j)
      if (!(u[j] > 0.0)) return false;
    if (u.values.back() < 0.0) return false;
  }
  return true;
}

int scalar_ground(Session& s, ordered_json& rep) {
  const GridPtr grid = make_grid(s.cfg.grid.n, s.cfg.grid.r_max > 0.0 ? s.cfg.grid.r_max : 30.0);
  const GroundStateProfile gs = shoot_w0(grid);
  const double gn = gs.S * gs.S * 27.0 * gs.C0 * gs.C1 / 64.0;
  rep["b0"] = gs.b0;
  rep["C0"] = gs.C0;
  rep["C1"] = gs.C1;
  rep["S"] = gs.S;
  rep["C1_over_C0"] = gs.C1 / gs.C0;
  rep["gn_identity"] = gn;
  rep["ode_residual"] = gs.ode_residual;
  rep["grid"] = {{"n", grid->size()}, {"r_max", grid->r_max()}};

  const fs::path constants = s.cfg.constants.empty() ? fs::path(NORMWAVE_CONSTANTS_FILE) : fs::path(s.cfg.constants);
  if (fs::exists(constants)) {
    const auto stored = ordered_json::parse(read_file(constants));
    const double diff = std::max({rel(gs.C0, stored.at("C0").get<double>()), rel(gs.C1, stored.at("C1").get<double>()),
                                  rel(gs.b0, stored.at("b0").get<double>())});
    rep["constants_file_rel_diff"] = diff;
  }
  s.write_json("w0_constants.json", {{"b0", gs.b0}, {"C0", gs.C0}, {"C1", gs.C1}, {"S", gs.S}, {"grid", rep["grid"]}});
  s.write("w0.csv", profile_csv({gs.w0}));

  const bool ok = gs.ode_residual < 1e-8 && std::abs(gn - 1.0) < 1e-6;
  rep["checks"] = {{"ode_residual_below_1e-8", gs.ode_residual < 1e-8}, {"gn_identity_within_1e-6", std::abs(gn - 1.0) < 1e-6}};
  return ok ? kOk : kCheckFailed;
}

int scaling_check(Session& s, ordered_json& rep) {
  const SystemParams p = s.cfg.params();
  const GroundStateProfile gs = shoot_w0(reference_grid());
  const double beta_off = p.k == 2 ? p.b(0, 1) : 0.0;
  double worst = 0.0;
  bool flips = true;
  rep["components"] = ordered_json::array();
  for (std::size_t i = 0; i < p.k; ++i) {
    const double a = p.a[i], mu = p.b(i, i);
    const double kappa = soliton_wavenumber(a, mu, gs);
    const ScaledSoliton ss = scaled_soliton(a, mu, gs, make_grid(s.cfg.grid.n, 30.0 / kappa));
    const double q = interaction(ss.w, ss.w);
    const double lambda = (kinetic(ss.w) - mu * q) / mass(ss.w);
    const ordered_json errors = {{"mass", rel(mass(ss.w), a * a)},
                                 {"kinetic", rel(kinetic(ss.w), 0.75 * gs.C0 * gs.C1 / (mu * mu * a * a))},
                                 {"quartic", rel(q, gs.C0 * gs.C1 / (mu * mu * mu * a * a))},
                                 {"energy", rel(scalar_I(mu, ss.w), gs.C0 * gs.C1 / (8.0 * mu * mu * a * a))},
                                 {"lambda", rel(lambda, -gs.C0 * gs.C0 / (mu * mu * a * a * a * a))}};
    for (const auto& [key, v] : errors.items()) worst = std::max(worst, v.get<double>());

    // G(s * w) changes sign from + to - at s* = log(4A / (3B)).
    const SystemParams single({a}, {mu});
    const FieldList W{ss.w};
    const double s_star = std::log(4.0 * kinetic_sum(W) / (3.0 * quartic_sum(W, single)));
    const double g_before = pohozaev_G(dilate(s_star - 0.1, W), single);
    const double g_after = pohozaev_G(dilate(s_star + 0.1, W), single);
    flips = flips && g_before > 0.0 && g_after < 0.0;

    std::vector<double> svals;
    for (int m = 0; m <= 40; ++m) svals.push_back(-1.0 + 0.05 * m);
    CsvTable t({"s", "phi", "psi"});
    for (const auto& row : dilation_profiles(ss.w, mu, beta_off, svals)) t.add_row({row.s, row.phi, row.psi});
    const std::string name = "dilation_" + std::to_string(i + 1) + ".csv";
    s.write(name, t.str());

    rep["components"].push_back({{"a", a},
                                 {"mu", mu},
                                 {"kappa", kappa},
                                 {"lambda", ss.lambda},
                                 {"level", ss.level},
                                 {"relative_errors", errors},
                                 {"pohozaev_flip_s", s_star},
                                 {"G_before", g_before},
                                 {"G_after", g_after}});
  }
  rep["worst_relative_error"] = worst;
  rep["checks"] = {{"closed_forms_within_1e-6", worst < 1e-6}, {"pohozaev_sign_flip", flips}};
  return worst < 1e-6 && flips ? kOk : kCheckFailed;
}

ordered_json bounds_json(const SystemParams& p, const GroundStateProfile& gs) {
  const BoundsReport b = ground_state_bounds(p, gs);
  ordered_json lower = ordered_json::array();
  for (const auto& [subset, value] : b.lower_by_subset) lower.push_back({{"subset", subset_json(subset)}, {"value", value}});
  return {{"upper", b.upper}, {"lower_by_subset", lower}, {"separated", b.separated}};
}

int ground_state(Session& s, ordered_json& rep) {
  const SystemParams p = s.cfg.params();
  const GroundStateProfile gs = shoot_w0(reference_grid());
  const GridPtr grid = run_grid(s.cfg, p, gs);
  rep["grid"] = {{"n", grid->size()}, {"r_max", grid->r_max()}};
  if (p.k == 2) rep["beta2_estimate"] = beta2_estimate(p.a[0], p.a[1], p.b(0, 0), p.b(1, 1), gs).value;
  CriticalPoint cp = solve_ground(s.cfg, p, gs, grid);
  if (s.cfg.solver.morse && !s.quick) cp.morse_index = coarse_morse(cp, p, s.cfg);
  rep["critical_point"] = cp_json(cp);
  rep["kkt_residual"] = kkt_residual(cp.U, cp.lambda, p);
  rep["bounds"] = bounds_json(p, gs);
  s.write("profile.csv", profile_csv(cp.U));

  const bool negative = std::all_of(cp.lambda.begin(), cp.lambda.end(), [](double l) { return l < 0.0; });
  const bool pos = positive(cp.U);
  const bool on_manifold = cp.pohozaev_residual < 1e-6;
  rep["checks"] = {{"multipliers_negative", negative}, {"components_positive", pos}, {"pohozaev_below_1e-6", on_manifold}};
  return negative && pos && on_manifold ? kOk : kCheckFailed;
}

int saddle(Session& s, ordered_json& rep) {
  const SystemParams p = s.cfg.params();
  const GroundStateProfile gs = shoot_w0(reference_grid());
  const LinkingGate gate = beta1_gate(p, gs);
  rep["gate"] = {{"admissible", gate.admissible}, {"eps_max", gate.eps_max}};
  const LinkingBox box = build_box(p, gs, s.cfg.eps > 0.0 ? std::optional<double>(s.cfg.eps) : std::nullopt);
  const auto violations = box_violations(box);
  const int winding = winding_number(box);
  const BoundaryReport boundary = boundary_sup(box, gs);
  SaddleOptions so;
  so.grid_nodes = s.cfg.solver.morse_nodes;
  so.compute_morse = s.cfg.solver.morse && !s.quick;
  so.newton.tol = s.cfg.solver.newton_tol;
  const SaddleResult res = saddle_search(p, gs, box, so);

  rep["box"] = {{"rho", {box.rho1, box.rho2}}, {"R", {box.R1, box.R2}}, {"eps", box.eps}, {"violations", violations}};
  rep["winding_number"] = winding;
  rep["boundary"] = {{"sup", boundary.sup}, {"side_max", boundary.side_max}, {"bound", boundary.bound}, {"ok", boundary.ok}};
  rep["gamma0_max"] = {{"t1", res.t1}, {"t2", res.t2}, {"value", res.mesh_max}};
  CsvTable trace({"t1", "t2", "F1", "F2"});
  for (const auto& tp : boundary_trace(box, 64)) trace.add_row({tp.t1, tp.t2, tp.F1, tp.F2});
  s.write("boundary_trace.csv", trace.str());

  const double lmax = std::max(box.level[0], box.level[1]);
  bool ok = violations.empty() && winding == 1 && boundary.ok && res.cp.has_value();
  if (res.cp) {
    const CriticalPoint& cp = *res.cp;
    rep["critical_point"] = cp_json(cp);
    s.write("saddle_profile.csv", profile_csv(cp.U));
    ok = ok && cp.lambda[0] < 0.0 && cp.lambda[1] < 0.0 && cp.level > lmax;
    if (cp.morse_index) ok = ok && *cp.morse_index == 2;
  } else {
    rep["critical_point"] = nullptr;
    rep["failure"] = res.failure;
  }
  rep["max_scalar_level"] = lmax;
  rep["checks_passed"] = ok;
  return ok ? kOk : kCheckFailed;
}

int thresholds(Session& s, ordered_json& rep) {
  const SystemParams p = s.cfg.params();
  const GroundStateProfile gs = shoot_w0(reference_grid());
  const ThresholdReport t = threshold_report(p, gs);
  rep["beta1"] = opt(t.beta1);
  rep["beta1_closed"] = opt(t.beta1_closed);
  if (t.beta2) {
    rep["beta2"] = {{"value", t.beta2->value}, {"s_eps", t.beta2->s_eps}, {"C2", t.beta2->C2},
                    {"l1", t.beta2->l1},       {"l2", t.beta2->l2}};
  } else {
    rep["beta2"] = nullptr;
  }
  if (t.condition16) {
    rep["condition16"] = {{"holds", t.condition16->holds},
                          {"lhs", t.condition16->lhs},
                          {"margin", t.condition16->margin},
                          {"worst_subset", subset_json(t.condition16->worst_subset)}};
  } else {
    rep["condition16"] = nullptr;
  }
  if (t.comparison) {
    ordered_json dis = ordered_json::array();
    for (const auto& d : t.comparison->disagreements) dis.push_back(subset_json(d));
    rep["comparison"] = {{"chain_holds", t.comparison->chain_holds},
                         {"condition16", t.comparison->condition16},
                         {"disagreements", dis}};
  } else {
    rep["comparison"] = nullptr;
  }
  return kOk;
}

int bounds(Session& s, ordered_json& rep) {
  const SystemParams p = s.cfg.params();
  const GroundStateProfile gs = shoot_w0(reference_grid());
  rep["bounds"] = bounds_json(p, gs);
  if (p.k >= 2) {
    const BoundsComparison c = condition_16_vs_bounds(p, gs);
    ordered_json dis = ordered_json::array();
    for (const auto& d : c.disagreements) dis.push_back(subset_json(d));
    rep["comparison"] = {{"chain_holds", c.chain_holds}, {"condition16", c.condition16}, {"disagreements", dis}};
  }
  return kOk;
}

struct Drift {
  double mass = 0.0;
  double energy = 0.0;
};

Drift drift_of(const TrajectoryDiagnostics& tr) {
  Drift d;
  const std::size_t pre = tr.blowup_flag ? tr.times.size() - 1 : tr.times.size();
  for (std::size_t s = 0; s < pre; ++s) {
    for (std::size_t i = 0; i < tr.masses[s].size(); ++i) d.mass = std::max(d.mass, rel(tr.masses[s][i], tr.masses[0][i]));
    d.energy = std::max(d.energy, rel(tr.energy[s], tr.energy[0]));
  }
  return d;
}

ordered_json virial_json(const TrajectoryDiagnostics& tr) {
  try {
    const VirialReport v = virial_check(tr);
    return {{"mismatch", v.mismatch}, {"stencils", v.samples}, {"worst_time", v.worst_time}};
  } catch (const InvalidArgument& e) {
    return {{"error", e.what()}};
  }
}

EvolveOptions evolve_options(const Session& s) {
  EvolveOptions o;
  o.dt = s.cfg.dynamics.dt;
  o.sample_interval = s.cfg.dynamics.sample_interval;
  return o;
}

int evolve_cmd(Session& s, ordered_json& rep) {
  const SystemParams p = s.cfg.params();
  const GroundStateProfile gs = shoot_w0(reference_grid());
  const CriticalPoint cp = solve_ground(s.cfg, p, gs, run_grid(s.cfg, p, gs));
  const double sd = s.cfg.dynamics.s;
  const FieldList U0 = sd > 0.0 ? dilate(sd, cp.U) : cp.U;
  const double T = s.quick ? std::min(s.cfg.dynamics.T, 0.1) : s.cfg.dynamics.T;
  EvolveOptions o = evolve_options(s);
  double modulus = 0.0;
  if (sd == 0.0) {
    o.observer = [&](const WaveState& w) {
      for (std::size_t i = 0; i < w.psi.size(); ++i)
        for (std::size_t j = 0; j < w.psi[i].size(); ++j)
          modulus = std::max(modulus, std::abs(std::abs(w.psi[i][j]) - cp.U[i][j]));
    };
  }
  const TrajectoryDiagnostics tr = evolve(U0, p, T, o);
  s.write("trajectory.csv", trajectory_csv(tr, p.k));
  const Drift d = drift_of(tr);
  rep["initial"] = {{"s", sd}, {"ground_level", cp.level}, {"J", energy_J(U0, p)}, {"G", pohozaev_G(U0, p)}};
  rep["T"] = T;
  rep["samples"] = tr.times.size();
  rep["blowup"] = {{"flag", tr.blowup_flag}, {"time", opt(tr.blowup_time)}};
  rep["mass_drift"] = d.mass;
  rep["energy_drift"] = d.energy;
  rep["modulus_drift"] = sd == 0.0 ? ordered_json(modulus) : ordered_json(nullptr);
  rep["virial"] = virial_json(tr);
  const bool ok = d.mass < 1e-8 && d.energy < 1e-6;
  rep["checks"] = {{"mass_drift_below_1e-8", d.mass < 1e-8}, {"energy_drift_below_1e-6", d.energy < 1e-6}};
  return ok ? kOk : kCheckFailed;
}

int instability_cmd(Session& s, ordered_json& rep) {
  const SystemParams p = s.cfg.params();
  const GroundStateProfile gs = shoot_w0(reference_grid());
  const CriticalPoint cp = solve_ground(s.cfg, p, gs, run_grid(s.cfg, p, gs));
  InstabilityOptions io;
  io.T = s.cfg.dynamics.T;
  io.evolve = evolve_options(s);
  const InstabilityReport r = instability_experiment(cp, s.cfg.dynamics.s, p, io);
  s.write("trajectory.csv", trajectory_csv(r.traj, p.k));
  rep["s"] = r.s;
  rep["d"] = r.d;
  rep["J0"] = r.J0;
  rep["G0"] = r.G0;
  rep["delta"] = r.delta;
  rep["f0"] = r.f0;
  rep["fprime0"] = r.fprime0;
  rep["parabola_root"] = r.parabola_root;
  rep["kinetic_growth"] = r.kinetic_growth;
  rep["g_tolerance"] = r.g_tolerance;
  rep["blowup"] = {{"flag", r.traj.blowup_flag}, {"time", opt(r.traj.blowup_time)}};
  rep["virial"] = virial_json(r.traj);
  rep["assertions"] = {{"delta_positive", r.delta > 0.0},
                       {"G_below_minus_delta", r.negative_G},
                       {"below_parabola", r.below_parabola},
                       {"breakdown", r.breakdown},
                       {"G_below_J_minus_d", r.energy_gap_bound}};
  rep["passed"] = r.passed;
  return r.passed ? kOk : kCheckFailed;
}

int suite(Session& s, ordered_json& rep) {
  AcceptanceOptions opts;
  opts.on_result = [](const CriterionResult& r) {
    std::cout << format_result(r) << std::endl;
  };
  const auto results = run_acceptance(opts);
  ordered_json list = ordered_json::array();
  bool all = true;
  for (const auto& r : results) {
    ordered_json j = {{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}};
    if (!s.deterministic) j["seconds"] = r.seconds;
    list.push_back(j);
    all = all && r.passed;
  }
  rep["criteria"] = list;
  rep["all_passed"] = all;
  return all ? kOk : kCheckFailed;
}

ordered_json manifest(const Session& s, int code, double seconds) {
  const fs::path constants = s.cfg.constants.empty() ? fs::path(NORMWAVE_CONSTANTS_FILE) : fs::path(s.cfg.constants);
  ordered_json m;
  m["command"] = s.command;
  m["version"] = NORMWAVE_VERSION;
  m["config"] = ordered_json::parse(serialize_config(s.cfg));
  m["quick"] = s.quick;
  m["constants_file"] = constants.filename().string();
  if (fs::exists(constants)) {
    m["constants_fnv1a64"] = hex64(fnv1a64(read_file(constants)));
  } else {
    m["constants_fnv1a64"] = nullptr;
  }
  m["outputs"] = s.outputs;
  m["exit_code"] = code;
  if (!s.deterministic) m["wall_time_s"] = seconds;
  return m;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Normalized solitary waves of coupled cubic Schroedinger systems", "normwave"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  bool quick = false;
  bool deterministic = false;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (default $NORMWAVE_OUT or ./normwave-out)");
  app.add_flag("--quick", quick, "skip Morse indices and cap evolve horizons at t = 0.1");
  app.add_flag("--deterministic", deterministic, "omit wall-clock times so reports are byte-identical across runs");

  using Handler = int (*)(Session&, ordered_json&);
  const std::vector<std::tuple<std::string, std::string, Handler>> commands = {
      {"scalar-ground", "shoot w0 and report C0, C1, S", scalar_ground},
      {"scaling-check", "closed forms of w_{a,mu} and dilation profiles", scaling_check},
      {"ground-state", "normalized ground state by Rayleigh descent and Newton", ground_state},
      {"saddle", "linking box, winding number and saddle for small coupling", saddle},
      {"thresholds", "beta1, beta2 estimate and the coupling condition", thresholds},
      {"bounds", "upper and subset lower bounds on the ground-state level", bounds},
      {"evolve", "time evolution from the (dilated) ground state", evolve_cmd},
      {"instability", "virial instability experiment", instability_cmd},
      {"suite", "acceptance suite", suite},
  };
  std::map<std::string, Handler> handlers;
  for (const auto& [name, help, fn] : commands) {
    app.add_subcommand(name, help)->fallthrough();
    handlers[name] = fn;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  Session s;
  s.command = app.get_subcommands().front()->get_name();
  s.quick = quick;
  s.deterministic = deterministic;
  try {
    if (!config_path.empty()) s.cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "normwave: " << e.what() << "\n";
    return kUsage;
  }
  if (!out_dir.empty()) {
    s.out = out_dir;
  } else if (const char* env = std::getenv("NORMWAVE_OUT"); env && *env) {
    s.out = env;
  } else {
    s.out = "normwave-out";
  }

  const auto start = std::chrono::steady_clock::now();
  ordered_json rep;
  rep["command"] = s.command;
  int code = kOk;
  try {
    code = handlers.at(s.command)(s, rep);
    rep["status"] = code == kOk ? "ok" : "check_failed";
  } catch (const SolverError& e) {
    rep["status"] = "solver_error";
    rep["error"] = {{"kind", kind_name(e.kind())}, {"message", e.what()}};
    std::cerr << "normwave: " << kind_name(e.kind()) << ": " << e.what() << "\n";
    code = kCheckFailed;
  } catch (const Error& e) {
    rep["status"] = "error";
    rep["error"] = {{"message", e.what()}};
    std::cerr << "normwave: " << e.what() << "\n";
    code = kCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "normwave: " << e.what() << "\n";
    return kUsage;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  try {
    s.write_json(s.command + ".json", rep);
    write_file(s.out / "manifest.json", manifest(s, code, seconds).dump(2) + "\n");
  } catch (const std::exception& e) {
    std::cerr << "normwave: " << e.what() << "\n";
    return kUsage;
  }
  if (s.command != "suite") std::cout << rep.dump(2) << "\n";
  return code;
}

}  // namespace normwave::cli

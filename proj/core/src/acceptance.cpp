#include "normwave/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <optional>
#include <random>

#include "normwave/dynamics.hpp"
#include "normwave/error.hpp"
#include "normwave/ground_state.hpp"
#include "normwave/linking.hpp"
#include "normwave/soliton.hpp"
#include "normwave/thresholds.hpp"

namespace normwave {

namespace {

std::string fmt(const char* f, ...) {
  va_list args;
  va_start(args, f);
  char buf[1024];
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Linking {
  LinkingBox box;
  std::vector<std::string> violations;
  int winding = 0;
  BoundaryReport boundary;
  SaddleResult saddle;
};

// Shared state between criteria; everything is computed on first use.
class Context {
 public:
  const GroundStateProfile& gs() {
    if (!gs_) gs_ = shoot_w0(reference_grid());
    return *gs_;
  }

  const SystemParams& p5() {
    if (!p5_) p5_ = SystemParams::two(1, 1, 1, 1, 2.0 * beta2_estimate(1, 1, 1, 1, gs()).value);
    return *p5_;
  }

  const CriticalPoint& ground() {
    if (!ground_) {
      const SystemParams& p = p5();
      const GridPtr grid = natural_grid(p, gs());
      ground_ = newton_refine(minimize_rayleigh(p, product_test_state(p, gs(), grid)), p);
    }
    return *ground_;
  }

  const Linking& linking() {
    if (!linking_) {
      const SystemParams p = SystemParams::two(1, 1, 1, 1, 0.2);
      Linking l;
      l.box = build_box(p, gs());
      l.violations = box_violations(l.box);
      l.winding = winding_number(l.box);
      l.boundary = boundary_sup(l.box, gs());
      l.saddle = saddle_search(p, gs(), l.box);
      linking_ = std::move(l);
    }
    return *linking_;
  }

  const InstabilityReport& instability(double dt) {
    auto& slot = dt == 1e-4 ? coarse_ : fine_;
    if (!slot) {
      InstabilityOptions io;
      io.T = 5.0;
      io.evolve.dt = dt;
      io.evolve.sample_interval = 1e-2;
      slot = instability_experiment(ground(), 0.05, p5(), io);
    }
    return *slot;
  }

 private:
  std::optional<GroundStateProfile> gs_;
  std::optional<SystemParams> p5_;
  std::optional<CriticalPoint> ground_;
  std::optional<Linking> linking_;
  std::optional<InstabilityReport> coarse_, fine_;
};

Outcome scalar_chain(Context& ctx) {
  const GroundStateProfile& gs = ctx.gs();
  const GroundStateProfile fine = shoot_w0(make_grid(8192, 30.0));
  const double gn = rel(gs.S * gs.S * 27.0 * gs.C0 * gs.C1, 64.0);
  const double d0 = rel(fine.C0, gs.C0);
  const double d1 = rel(fine.C1, gs.C1);
  Outcome o;
  o.passed = gs.ode_residual < 1e-8 && gn < 1e-6 && d0 < 5e-5 && d1 < 5e-5;
  o.detail = fmt("residual %.2e (<1e-8), |27 S^2 C0 C1/64 - 1| %.2e (<1e-6), grid doubling dC0 %.1e dC1 %.1e (<5e-5); "
                 "C0 = %.10f, C1 = %.10f",
                 gs.ode_residual, gn, d0, d1, gs.C0, gs.C1);
  return o;
}

Outcome closed_forms(Context& ctx) {
  const GroundStateProfile& gs = ctx.gs();
  const double pairs[6][2] = {{0.1, 5.0}, {0.3, 3.0}, {1.0, 2.0}, {3.0, 1.5}, {10.0, 1.0}, {1.0, 3.0}};
  double worst = 0.0;
  for (const auto& pr : pairs) {
    const double a = pr[0], mu = pr[1];
    const double kappa = soliton_wavenumber(a, mu, gs);
    const ScaledSoliton ss = scaled_soliton(a, mu, gs, make_grid(4096, 30.0 / kappa));
    const double q = interaction(ss.w, ss.w);
    const double lambda = (kinetic(ss.w) - mu * q) / mass(ss.w);
    worst = std::max({worst, rel(mass(ss.w), a * a), rel(kinetic(ss.w), 0.75 * gs.C0 * gs.C1 / (mu * mu * a * a)),
                      rel(q, gs.C0 * gs.C1 / (mu * mu * mu * a * a)),
                      rel(scalar_I(mu, ss.w), gs.C0 * gs.C1 / (8.0 * mu * mu * a * a)),
                      rel(lambda, -gs.C0 * gs.C0 / (mu * mu * a * a * a * a))});
  }
  return {worst < 1e-6, fmt("worst relative error over mass, kinetic, quartic, I, lambda on 6 pairs: %.2e (<1e-6)", worst)};
}

Outcome dilation_algebra(Context&) {
  const GridPtr grid = make_grid(4096, 30.0);
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> width(0.5, 2.0), amp(0.5, 1.5);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    RadialField u(grid);
    for (int m = 0; m < 3; ++m) {
      const double c = amp(rng), sg = width(rng);
      for (std::size_t j = 0; j < grid->size(); ++j) u[j] += c * std::exp(-0.5 * std::pow(grid->node(j) / sg, 2));
    }
    const double M = mass(u), K = kinetic(u), Q = interaction(u, u);
    for (double s : {-1.0, -0.3, 0.3, 1.0}) {
      const RadialField d = dilate(s, u);
      const RadialField twice = dilate(s, dilate(0.5, u));
      const RadialField once = dilate(s + 0.5, u);
      RadialField diff(grid);
      for (std::size_t j = 0; j < grid->size(); ++j) diff[j] = twice[j] - once[j];
      worst = std::max({worst, rel(mass(d), M), rel(kinetic(d), std::exp(2 * s) * K),
                        rel(interaction(d, d), std::exp(3 * s) * Q), std::sqrt(mass(diff) / mass(once))});
    }
  }
  return {worst < 1e-6, fmt("worst relative error over mass, e^{2s}, e^{3s} and group law, 10 fields x 4 s: %.2e (<1e-6)", worst)};
}

Outcome rayleigh_k1(Context& ctx) {
  const GroundStateProfile& gs = ctx.gs();
  double worst_level = 0.0, worst_profile = 0.0;
  for (double a : {1.0, 0.5}) {
    const SystemParams p({a}, {gs.C0 / (a * a)});
    const GridPtr grid = natural_grid(p, gs);
    RadialField init(grid);
    const double width = 2.0 / soliton_wavenumber(a, p.b(0, 0), gs);
    for (std::size_t j = 0; j < grid->size(); ++j) init[j] = std::exp(-0.5 * std::pow(grid->node(j) / width, 2));
    const CriticalPoint cp = minimize_rayleigh(p, {init});
    const ScaledSoliton ss = scaled_soliton(a, p.b(0, 0), gs, grid);
    RadialField diff(grid);
    for (std::size_t j = 0; j < grid->size(); ++j) diff[j] = cp.U[0][j] - ss.w[j];
    worst_level = std::max(worst_level, rel(cp.level, gs.C1 * a * a / (8.0 * gs.C0)));
    worst_profile = std::max(worst_profile, std::sqrt(mass(diff) / mass(ss.w)));
  }
  return {worst_level < 1e-4 && worst_profile < 1e-3,
          fmt("level vs C1 a^2/(8 C0): %.2e (<1e-4), profile L2 error: %.2e (<1e-3), a in {1, 0.5}", worst_level,
              worst_profile)};
}

Outcome large_coupling(Context& ctx) {
  const GroundStateProfile& gs = ctx.gs();
  const SystemParams& p = ctx.p5();
  const CriticalPoint& cp = ctx.ground();
  bool positive = true;
  for (const auto& u : cp.U)
    for (double x : u.values) positive = positive && x > 0.0;
  const double l11 = least_energy(1, 1, gs);
  const double upper = product_upper_bound(p, gs);
  const bool ok = cp.lambda[0] < 0 && cp.lambda[1] < 0 && positive && cp.pohozaev_residual < 1e-6 && cp.level < l11 &&
                  cp.level <= upper + 1e-6;
  return {ok, fmt("beta = %.6f, lambda = (%.6f, %.6f), positive %d, |G| %.2e (<1e-6), level %.10f < l(1,1) %.6f, "
                  "<= upper %.10f + 1e-6",
                  p.b(0, 1), cp.lambda[0], cp.lambda[1], positive, cp.pohozaev_residual, cp.level, l11, upper)};
}

Outcome small_coupling(Context& ctx) {
  const GroundStateProfile& gs = ctx.gs();
  const Linking& l = ctx.linking();
  const double lmax = std::max(least_energy(1, 1, gs), least_energy(1, 1, gs));
  bool ok = l.violations.empty() && l.winding == 1 && l.boundary.sup <= lmax + l.box.eps + 1e-6 && l.saddle.cp;
  std::string cp_text = "no critical point: " + l.saddle.failure;
  if (l.saddle.cp) {
    const CriticalPoint& cp = *l.saddle.cp;
    ok = ok && cp.lambda[0] < 0 && cp.lambda[1] < 0 && cp.level > lmax && cp.morse_index == 2;
    cp_text = fmt("saddle lambda = (%.6f, %.6f), level %.8f > %.6f, Morse index %d", cp.lambda[0], cp.lambda[1],
                  cp.level, lmax, cp.morse_index.value_or(-1));
  }
  return {ok, fmt("box violations %zu, winding %d, boundary sup %.6f <= %.6f, %s", l.violations.size(), l.winding,
                  l.boundary.sup, lmax + l.box.eps + 1e-6, cp_text.c_str())};
}

Outcome ordering(Context& ctx) {
  const double l11 = least_energy(1, 1, ctx.gs());
  const double low = ctx.ground().level;
  const Linking& l = ctx.linking();
  if (!l.saddle.cp) return {false, "saddle unavailable: " + l.saddle.failure};
  const double high = l.saddle.cp->level;
  const double margin = 1e-3 * l11;
  return {low < l11 - margin && l11 < high - margin,
          fmt("%.8f < %.8f < %.8f with margins %.4f and %.4f (>%.4f)", low, l11, high, l11 - low, high - l11, margin)};
}

Outcome thresholds(Context&) {
  double worst = 0.0;
  const double cases[3][3] = {{1, 1, 1}, {1, 2, 1}, {0.5, 1.5, 2}};
  for (const auto& c : cases) worst = std::max(worst, std::abs(beta1(c[0], c[1], c[2], c[2]) - *beta1_closed(c[0], c[1], c[2], c[2])));
  auto holds = [](double b) { return condition_16(SystemParams::two(1, 1, 1, 1, b)).holds; };
  double lo = 0.0, hi = 1.0;
  const bool bracket = !holds(lo) && holds(hi);
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? hi : lo) = mid;
  }
  const double flip = 0.5 * (lo + hi);
  const double flip_err = std::abs(flip - (std::sqrt(2.0) - 1.0));
  const bool k3 = condition_16(SystemParams::symmetric(3, 1, 1, 1.5)).holds;
  return {worst < 1e-8 && bracket && flip_err < 1e-8 && k3,
          fmt("beta1 vs closed form %.2e (<1e-8), condition flips at %.12f (|err| %.1e < 1e-8), k = 3 beta = 1.5 holds %d",
              worst, flip, flip_err, k3)};
}

Outcome three_components(Context& ctx) {
  const GroundStateProfile& gs = ctx.gs();
  const SystemParams p = SystemParams::symmetric(3, 1, 1, 1.5);
  const Condition16 c16 = condition_16(p);
  const GridPtr grid = natural_grid(p, gs);
  const CriticalPoint cp = newton_refine(minimize_rayleigh(p, product_test_state(p, gs, grid)), p);
  const BoundsReport bounds = ground_state_bounds(p, gs);
  bool negative = true;
  for (double l : cp.lambda) negative = negative && l < 0;
  double min_lower = INFINITY;
  for (const auto& [subset, value] : bounds.lower_by_subset)
    if (subset.size() < p.k) min_lower = std::min(min_lower, value);
  const bool ok = c16.holds && negative && cp.level > 0 && cp.level <= bounds.upper + 1e-6 && cp.level < min_lower;
  return {ok, fmt("condition holds %d, lambda max %.6f, level %.10f in (0, %.10f], < min proper-subset lower bound %.6f",
                  c16.holds, *std::max_element(cp.lambda.begin(), cp.lambda.end()), cp.level, bounds.upper, min_lower)};
}

Outcome conservation(Context& ctx) {
  const CriticalPoint& cp = ctx.ground();
  const SystemParams& p = ctx.p5();
  double modulus = 0.0;
  double first_exceed = -1.0;
  EvolveOptions o;
  o.dt = 1e-4;
  o.sample_interval = 1e-2;
  o.observer = [&](const WaveState& w) {
    for (std::size_t i = 0; i < p.k; ++i)
      for (std::size_t j = 0; j < w.psi[i].size(); ++j) modulus = std::max(modulus, std::abs(std::abs(w.psi[i][j]) - cp.U[i][j]));
    if (first_exceed < 0 && modulus >= 1e-4) first_exceed = w.t;
  };
  const TrajectoryDiagnostics tr = evolve(cp.U, p, 1.0, o);
  double mass_drift = 0.0, energy_drift = 0.0;
  for (std::size_t s = 0; s < tr.times.size(); ++s) {
    for (std::size_t i = 0; i < p.k; ++i) mass_drift = std::max(mass_drift, rel(tr.masses[s][i], tr.masses[0][i]));
    energy_drift = std::max(energy_drift, rel(tr.energy[s], tr.energy[0]));
  }
  const bool ok = mass_drift < 1e-8 && energy_drift < 1e-6 && modulus < 1e-4;
  std::string tail = tr.blowup_flag ? fmt(", blow-up flagged at t = %.4f", *tr.blowup_time) : std::string();
  if (first_exceed >= 0) tail += fmt(", modulus drift first >= 1e-4 at t = %.2f", first_exceed);
  return {ok, fmt("mass drift %.2e (<1e-8), energy drift %.2e (<1e-6), modulus drift %.2e (<1e-4)%s", mass_drift,
                  energy_drift, modulus, tail.c_str())};
}

Outcome virial(Context& ctx) {
  const VirialReport coarse = virial_check(ctx.instability(1e-4).traj);
  const VirialReport fine = virial_check(ctx.instability(5e-5).traj);
  const double ratio = coarse.mismatch / fine.mismatch;
  return {coarse.mismatch < 1e-3 && ratio >= 3.0,
          fmt("mismatch %.3e at dt = 1e-4 (<1e-3, %zu stencils), %.3e at dt = 5e-5, ratio %.2f (>=3)", coarse.mismatch,
              coarse.samples, fine.mismatch, ratio)};
}

Outcome instability(Context& ctx) {
  const InstabilityReport& r = ctx.instability(1e-4);
  const bool ok = r.delta > 0 && r.negative_G && r.below_parabola && r.breakdown && r.energy_gap_bound;
  return {ok, fmt("delta %.6f > 0, G <= -delta + tol %d, below parabola %d (root %.4f), blow-up %d at t = %.5f, kinetic "
                  "growth %.1f, G <= J - d %d",
                  r.delta, r.negative_G, r.below_parabola, r.parabola_root, r.traj.blowup_flag,
                  r.traj.blowup_time.value_or(-1.0), r.kinetic_growth, r.energy_gap_bound)};
}

struct Criterion {
  int id;
  const char* title;
  Outcome (*run)(Context&);
};

constexpr Criterion kCriteria[] = {
    {1, "scalar soliton identity chain", scalar_chain},
    {2, "scaled soliton closed forms", closed_forms},
    {3, "dilation algebra", dilation_algebra},
    {4, "k = 1 Rayleigh equivalence", rayleigh_k1},
    {5, "ground state for large coupling", large_coupling},
    {6, "linking saddle for small coupling", small_coupling},
    {7, "level ordering", ordering},
    {8, "coupling thresholds", thresholds},
    {9, "k = 3 ground state", three_components},
    {10, "standing-wave conservation", conservation},
    {11, "virial identity", virial},
    {12, "instability signature", instability},
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
  Context ctx;
  std::vector<CriterionResult> out;
  for (const Criterion& c : kCriteria) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), c.id) == opts.only.end()) continue;
    CriterionResult r;
    r.id = c.id;
    r.title = c.title;
    const auto start = std::chrono::steady_clock::now();
    try {
      Outcome o = c.run(ctx);
      r.passed = o.passed;
      r.detail = std::move(o.detail);
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (opts.on_result) opts.on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  return fmt("[%s] %02d %s :: %s (%.1f s)", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str(), r.detail.c_str(),
             r.seconds);
}

}  // namespace normwave

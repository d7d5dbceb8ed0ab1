#include <cmath>
#include <random>

#include "doctest.h"
#include "normwave/error.hpp"
#include "normwave/ground_state.hpp"
#include "support.hpp"

using namespace normwave;
using nwtest::profile;
using nwtest::rel;

namespace {

constexpr std::size_t kNodes = 1024;

const CriticalPoint& strong_coupling_ground_state() {
  static const CriticalPoint cp = [] {
    const SystemParams p = SystemParams::two(1.0, 1.0, 1.0, 1.0, 5.0);
    const GridPtr g = natural_grid(p, profile(), kNodes);
    return newton_refine(minimize_rayleigh(p, product_test_state(p, profile(), g)), p);
  }();
  return cp;
}

double max_abs_diff(const RadialField& u, const RadialField& v) {
  double d = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) d = std::max(d, std::abs(u[j] - v[j]));
  return d;
}

}  // namespace

TEST_CASE("natural grid length scale") {
  const GroundStateProfile& gs = profile();
  const SystemParams p = SystemParams::two(1.0, 2.0, 1.0, 0.5, 0.25);
  // row sums beta_ij a_j^2: 1 + 0.25 * 4 = 2 and 0.25 + 0.5 * 4 = 2.25
  CHECK(rel(natural_grid(p, gs, 512)->r_max(), 30.0 * 2.25 / gs.C0) < 1e-14);
}

TEST_CASE("Pohozaev projection") {
  const GroundStateProfile& gs = profile();
  const SystemParams p = SystemParams::two(1.0, 1.5, 1.0, 2.0, 0.5);
  const GridPtr g = natural_grid(p, gs, 2048);
  FieldList U = dilate(0.4, product_test_state(p, gs, g));
  const double A = kinetic_sum(U), B = quartic_sum(U, p);
  const Projection pr = project_pohozaev(U, p);
  CHECK(rel(pr.s_star, std::log(4 * A / (3 * B))) < 1e-12);
  CHECK(std::abs(pohozaev_G(pr.U, p)) < 1e-6 * kinetic_sum(pr.U));
  CHECK(rel(energy_J(pr.U, p), rayleigh_R(U, p)) < 1e-6);
  const double top = energy_J(pr.U, p);
  CHECK(energy_J(dilate(pr.s_star + 0.1, U), p) < top);
  CHECK(energy_J(dilate(pr.s_star - 0.1, U), p) < top);
  CHECK(std::abs(project_pohozaev(pr.U, p).s_star) < 1e-8);

  const FieldList zero{RadialField(g), RadialField(g)};
  CHECK_THROWS_AS(project_pohozaev(zero, p), UndefinedQuotient);
}

TEST_CASE("product test state attains the upper bound") {
  const GroundStateProfile& gs = profile();
  const SystemParams p = SystemParams::symmetric(3, 0.8, 1.2, 0.6);
  const GridPtr g = natural_grid(p, gs, 2048);
  const FieldList U = product_test_state(p, gs, g);
  for (std::size_t i = 0; i < 3; ++i) CHECK(rel(mass(U[i]), 0.64) < 1e-8);
  CHECK(rel(rayleigh_R(U, p), product_upper_bound(p, gs)) < 1e-6);
}

TEST_CASE("multipliers of a scaled soliton") {
  const GroundStateProfile& gs = profile();
  const double a = 0.7, mu = 2.0;
  const SystemParams p({a}, {mu});
  const ScaledSoliton ss = scaled_soliton(a, mu, gs, make_grid(2048, 30.0 / soliton_wavenumber(a, mu, gs)));
  const auto lam = extract_multipliers({ss.w}, p);
  CHECK(rel(lam[0], -gs.C0 * gs.C0 / (mu * mu * a * a * a * a)) < 1e-4);
}

TEST_CASE("Newton fixes an exact soliton") {
  const GroundStateProfile& gs = profile();
  const double a = 1.0, mu = 1.0;
  const SystemParams p({a}, {mu});
  const ScaledSoliton ss = scaled_soliton(a, mu, gs, make_grid(kNodes, 30.0 / soliton_wavenumber(a, mu, gs)));
  const CriticalPoint cp = newton_refine(make_critical_point({ss.w}, p), p);
  CHECK(cp.iterations <= 3);
  CHECK(max_abs_diff(cp.U[0], ss.w) < 1e-8 * ss.w.sup_norm());
  CHECK(kkt_residual(cp.U, cp.lambda, p) < 1e-10);
}

TEST_CASE("one component: Rayleigh minimization recovers the least energy") {
  const GroundStateProfile& gs = profile();
  for (double a : {1.0, 0.6}) {
    const double mu = gs.C0 / (a * a);
    const SystemParams p({a}, {mu});
    const GridPtr g = natural_grid(p, gs, kNodes);
    // Start away from the answer: a Gaussian of the wrong width.
    RadialField init(g);
    for (std::size_t j = 0; j < g->size(); ++j) init[j] = std::exp(-std::pow(g->node(j) / (3.0 * g->r_max() / 30.0), 2));
    const CriticalPoint cp = minimize_rayleigh(p, {init});
    CHECK(rel(cp.level, least_energy(a, mu, gs)) < 1e-4);
    CHECK(cp.lambda[0] < 0.0);
    CHECK(rel(mass(cp.U[0]), a * a) < 1e-8);
  }
}

TEST_CASE("strong coupling ground state") {
  const GroundStateProfile& gs = profile();
  const SystemParams p = SystemParams::two(1.0, 1.0, 1.0, 1.0, 5.0);
  const CriticalPoint& cp = strong_coupling_ground_state();
  CHECK(cp.level > 0.0);
  CHECK(cp.level < least_energy(1.0, 1.0, gs));
  CHECK(cp.level <= product_upper_bound(p, gs) + 1e-6);
  CHECK(cp.pohozaev_residual < 1e-6 * (1 + cp.level));
  double lam_mass = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(cp.lambda[i] < 0.0);
    CHECK(rel(mass(cp.U[i]), 1.0) < 1e-8);
    for (std::size_t j = 0; j + 1 < cp.U[i].size(); ++j) REQUIRE(cp.U[i][j] > 0.0);
    lam_mass += cp.lambda[i];
  }
  CHECK(rel(lam_mass, -kinetic_sum(cp.U) / 3.0) < 1e-6);

  // The Euler-Lagrange equations -Lap u_i - sum_j beta_ij u_j^2 u_i = lambda_i u_i in the interior.
  const FieldList g = grad_J(cp.U, p);
  for (std::size_t i = 0; i < 2; ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < g[i].size() / 2; ++j) worst = std::max(worst, std::abs(g[i][j] - cp.lambda[i] * cp.U[i][j]));
    CHECK(worst < 1e-7 * std::abs(cp.lambda[i]) * cp.U[i].sup_norm());
  }
}

TEST_CASE("Newton recovers the level from a perturbed ground state") {
  const SystemParams p = SystemParams::two(1.0, 1.0, 1.0, 1.0, 5.0);
  const CriticalPoint& cp = strong_coupling_ground_state();
  std::mt19937_64 rng(42);
  FieldList U = cp.U;
  for (auto& u : U) {
    const RadialField n = nwtest::random_smooth(u.grid, rng);
    const double scale = 1e-3 * u.sup_norm() / n.sup_norm();
    for (std::size_t j = 0; j < u.size(); ++j) u[j] += scale * n[j];
  }
  const CriticalPoint again = newton_refine(make_critical_point(U, p), p);
  CHECK(rel(again.level, cp.level) < 1e-8);
}

TEST_CASE("minimization does not depend on a pre-dilation of the start") {
  const GroundStateProfile& gs = profile();
  const SystemParams p = SystemParams::two(1.0, 1.0, 1.0, 1.0, 5.0);
  const GridPtr g = natural_grid(p, gs, kNodes);
  const FieldList init = product_test_state(p, gs, g);
  const double plain = minimize_rayleigh(p, init).level;
  const double dilated = minimize_rayleigh(p, dilate(0.3, init)).level;
  CHECK(rel(plain, dilated) < 1e-6);
}

TEST_CASE("weak coupling collapses one component") {
  const GroundStateProfile& gs = profile();
  const SystemParams p = SystemParams::two(1.0, 1.0, 1.0, 1.0, 0.2);
  DescentOptions o;
  o.perturbation = 1e-3;
  o.seed = 1;
  try {
    minimize_rayleigh(p, product_test_state(p, gs, natural_grid(p, gs, kNodes)), o);
    FAIL("expected a collapse");
  } catch (const SolverError& e) {
    CHECK(e.kind() == SolverError::Kind::collapse);
  }
}

TEST_CASE("Morse index of the scalar soliton on its mass sphere") {
  // The L^2-supercritical soliton is a mountain pass on the sphere: one descent direction (dilation).
  const GroundStateProfile& gs = profile();
  const SystemParams p({1.0}, {1.0});
  const ScaledSoliton ss = scaled_soliton(1.0, 1.0, gs, make_grid(512, 30.0 / soliton_wavenumber(1.0, 1.0, gs)));
  const CriticalPoint cp = newton_refine(make_critical_point({ss.w}, p), p);
  CHECK(morse_index(cp, p, 1024) == 1);
  CHECK_FALSE(morse_index(cp, p, 256).has_value());
}

TEST_CASE("continuation from the decoupled state") {
  const GroundStateProfile& gs = profile();
  const SystemParams p0 = SystemParams::two(1.0, 1.0, 1.0, 1.0, 0.0);
  const GridPtr g = natural_grid(SystemParams::two(1.0, 1.0, 1.0, 1.0, 0.1), gs, kNodes);
  const double l = least_energy(1.0, 1.0, gs);

  const ContinuationResult single = continue_in_beta(p0, {{1, 0, 0, 1}}, gs, g);
  REQUIRE(single.branch.size() == 1);
  CHECK(rel(single.branch[0].level, 2 * l) < 1e-6);

  std::vector<std::vector<double>> path;
  for (int m = 0; m <= 10; ++m) path.push_back({1, 0.01 * m, 0.01 * m, 1});
  const ContinuationResult r = continue_in_beta(p0, path, gs, g);
  CHECK_FALSE(r.failed_at.has_value());
  REQUIRE(r.branch.size() == path.size());
  const CriticalPoint& end = r.branch.back();
  CHECK(end.level > l);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(end.lambda[i] < 0.0);
    for (std::size_t j = 0; j + 1 < end.U[i].size(); ++j) REQUIRE(end.U[i][j] > 0.0);
  }
  for (std::size_t m = 1; m < r.branch.size(); ++m) CHECK(r.branch[m].level < r.branch[m - 1].level);

  // Negative couplings are admitted along the branch.
  const ContinuationResult neg = continue_in_beta(p0, {{1, 0, 0, 1}, {1, -0.05, -0.05, 1}}, gs, g);
  CHECK_FALSE(neg.failed_at.has_value());
  CHECK(neg.branch.back().level > 2 * l);
}

TEST_CASE("subset bounds for two equal components") {
  const GroundStateProfile& gs = profile();
  const double threshold = std::sqrt(2.0) - 1.0;
  for (double beta : {0.3, threshold - 1e-6, threshold + 1e-6, 0.6, 3.0}) {
    const SystemParams p = SystemParams::two(1.0, 1.0, 1.0, 1.0, beta);
    const BoundsReport b = ground_state_bounds(p, gs);
    CHECK(b.lower_by_subset.size() == 2);
    CHECK(b.separated == (beta > threshold));
  }
  const SystemParams one({1.3}, {0.7});
  CHECK(rel(subset_lower_bound(one, gs, {0}), least_energy(1.3, 0.7, gs)) < 1e-14);
}

TEST_CASE("bounds separate for large symmetric couplings") {
  const GroundStateProfile& gs = profile();
  CHECK_FALSE(ground_state_bounds(SystemParams::symmetric(4, 1.0, 1.0, 0.1), gs).separated);
  CHECK(ground_state_bounds(SystemParams::symmetric(4, 1.0, 1.0, 10.0), gs).separated);
  CHECK(ground_state_bounds(SystemParams::symmetric(4, 1.0, 1.0, 10.0), gs).lower_by_subset.size() == 14);
}

#include <cmath>

#include "doctest.h"
#include "normwave/soliton.hpp"
#include "support.hpp"

using namespace normwave;
using nwtest::profile;
using nwtest::rel;

TEST_CASE("shooting brackets the separatrix") {
  const GroundStateProfile& gs = profile();
  ShootingOptions o;
  // Undershooting centers turn back up before reaching zero; overshooting ones cross it.
  CHECK(classify_shot(gs.b0 - 1e-3, o) == ShotOutcome::turns_up);
  CHECK(classify_shot(gs.b0 + 1e-3, o) == ShotOutcome::crosses_zero);
  CHECK(classify_shot(3.0, o) == ShotOutcome::turns_up);
  CHECK(classify_shot(5.0, o) == ShotOutcome::crosses_zero);
}

TEST_CASE("w0 profile invariants") {
  const GroundStateProfile& gs = profile();
  CHECK(gs.ode_residual < 1e-8);
  // Center value of the cubic ground state in three dimensions, from the literature.
  CHECK(std::abs(gs.b0 - 4.3373876799769) < 1e-7);
  const RadialField& w = gs.w0;
  for (std::size_t j = 0; j + 1 < w.size(); ++j) {
    if (w[j + 1] < 1e-250) break;
    REQUIRE(w[j] > 0.0);
    REQUIRE(w[j + 1] < w[j]);
  }
  CHECK(rel(mass(w), gs.C0) < 1e-12);
  CHECK(rel(interaction(w, w), gs.C1) < 1e-12);
}

TEST_CASE("Pohozaev identities of w0") {
  // Testing -Lap w + w = w^3 against w and against r w' gives K + C0 = C1 and K/2 + 3 C0 / 2 = 3 C1 / 4.
  const GroundStateProfile& gs = profile();
  const double K = kinetic(gs.w0);
  CHECK(rel(gs.C1, 4.0 * gs.C0) < 1e-9);
  CHECK(rel(K, 3.0 * gs.C0) < 1e-9);
  CHECK(rel(gs.S * gs.S * 27.0 * gs.C0 * gs.C1, 64.0) < 1e-6);
}

TEST_CASE("continuous shape matches the samples and its tail") {
  const GroundStateProfile& gs = profile();
  const SolitonShape& sh = *gs.shape;
  CHECK(sh.center() == doctest::Approx(gs.b0).epsilon(1e-14));
  for (std::size_t j = 0; j < gs.w0.size(); j += 97) {
    const double r = gs.w0.grid->node(j);
    CHECK(std::abs(sh(r) - gs.w0[j]) < 1e-10 * gs.b0);
  }
  const double rm = sh.matching_radius();
  CHECK(rel(sh(rm + 1e-9), sh(rm - 1e-9)) < 1e-6);
  CHECK(rel(sh(rm + 5.0) * (rm + 5.0), sh(rm) * rm * std::exp(-5.0)) < 1e-6);
}

TEST_CASE("scaled solitons follow the closed forms") {
  const GroundStateProfile& gs = profile();
  const double C0 = gs.C0, C1 = gs.C1;
  double first_product = 0.0;
  for (auto [a, mu] : {std::pair{1.0, 1.0}, {0.5, 3.0}, {2.0, 0.4}, {1.5, 10.0}}) {
    const double kappa = soliton_wavenumber(a, mu, gs);
    CHECK(rel(kappa, C0 / (mu * a * a)) < 1e-15);
    const ScaledSoliton ss = scaled_soliton(a, mu, gs, make_grid(4096, 30.0 / kappa));
    CHECK(ss.lambda < 0.0);
    CHECK(rel(ss.lambda, -C0 * C0 / (mu * mu * a * a * a * a)) < 1e-12);
    CHECK(rel(mass(ss.w), a * a) < 1e-8);
    CHECK(rel(kinetic(ss.w), 0.75 * C0 * C1 / (mu * mu * a * a)) < 1e-6);
    CHECK(rel(interaction(ss.w, ss.w), C0 * C1 / (mu * mu * mu * a * a)) < 1e-6);
    CHECK(std::abs(kinetic(ss.w) - 0.75 * mu * interaction(ss.w, ss.w)) < 1e-6 * kinetic(ss.w));
    CHECK(rel(scalar_I(mu, ss.w), ss.level) < 1e-6);
    CHECK(rel(ss.level, least_energy(a, mu, gs)) < 1e-15);
    const double product = ss.level * mu * mu * a * a;
    if (first_product == 0.0) first_product = product;
    CHECK(rel(product, first_product) < 1e-8);
  }
}

TEST_CASE("scaled soliton too wide for the grid") {
  const GroundStateProfile& gs = profile();
  CHECK_THROWS(scaled_soliton(1.0, 1.0, gs, make_grid(512, 0.3)));
}

TEST_CASE("dilation profiles against resampled functionals") {
  const GroundStateProfile& gs = profile();
  const double mu = 1.0, beta = 0.3;
  const ScaledSoliton ss = scaled_soliton(1.0, mu + beta, gs, make_grid(4096, 30.0 / soliton_wavenumber(1.0, mu + beta, gs)));
  const std::vector<double> s{-0.8, -0.2, 0.0, 0.4};
  const auto rows = dilation_profiles(ss.w, mu, beta, s);
  REQUIRE(rows.size() == s.size());
  for (const auto& row : rows) {
    CHECK(rel(row.phi, scalar_I(mu, dilate(row.s, ss.w))) < 1e-6);
    const double h = 1e-4;
    const double fd = (scalar_I(mu + beta, dilate(row.s + h, ss.w)) - scalar_I(mu + beta, dilate(row.s - h, ss.w))) / (2 * h);
    CHECK(std::abs(row.psi - fd) < 1e-6 * kinetic(ss.w));
  }
  // The maximum of s -> I_{mu+beta}(s * w) sits at s = 0 for the matching profile.
  CHECK(std::abs(rows[2].psi) < 1e-8 * kinetic(ss.w));
}

TEST_CASE("Gagliardo-Nirenberg quotient") {
  const GroundStateProfile& gs = profile();
  const double inv = 1.0 / (gs.S * gs.S);
  CHECK(rel(gn_quotient(gs.w0), inv) < 1e-3);
  CHECK(rel(gn_quotient(dilate(0.3, gs.w0)), gn_quotient(gs.w0)) < 1e-6);
  const auto g = gs.w0.grid;
  const RadialField gauss = nwtest::sample(g, [](double r) { return std::exp(-r * r); });
  const RadialField sech = nwtest::sample(g, [](double r) { return 1.0 / std::cosh(r); });
  const GnReport rep = gn_constant_check(gs, {gs.w0, gauss, sech});
  CHECK(rep.ok);
  CHECK(rep.violations.empty());
  CHECK(rep.quotients[1] > inv);
  CHECK(rep.quotients[2] > inv);
  CHECK_THROWS(gn_constant_check(gs, {}));
}

TEST_CASE("overlap integral agrees with grid quadrature") {
  const GroundStateProfile& gs = profile();
  const double k1 = soliton_wavenumber(1.0, 1.0, gs), k2 = soliton_wavenumber(1.0, 2.0, gs);
  const auto g = make_grid(8192, 30.0 / std::min(k1, k2));
  const ScaledSoliton a = scaled_soliton(1.0, 1.0, gs, g), b = scaled_soliton(1.0, 2.0, gs, g);
  const double amp1 = a.w[0] / gs.shape->operator()(k1 * g->node(0));
  const double amp2 = b.w[0] / gs.shape->operator()(k2 * g->node(0));
  CHECK(rel(overlap_integral(*gs.shape, amp1, k1, amp2, k2), interaction(a.w, b.w)) < 1e-8);
}

#include <cmath>

#include "doctest.h"
#include "normwave/error.hpp"
#include "normwave/linking.hpp"
#include "support.hpp"

using namespace normwave;
using nwtest::profile;
using nwtest::rel;

namespace {

const SystemParams kWeak = SystemParams::two(1.0, 1.0, 1.0, 1.0, 0.2);

}  // namespace

TEST_CASE("beta1 gate") {
  const GroundStateProfile& gs = profile();
  CHECK(beta1_gate(kWeak, gs).admissible);
  CHECK(beta1_gate(kWeak, gs).eps_max > 0.0);
  CHECK_FALSE(beta1_gate(SystemParams::two(1, 1, 1, 1, std::sqrt(2.0) - 1.0 + 1e-12), gs).admissible);
  CHECK_FALSE(beta1_gate(SystemParams::two(1, 1, 1, 1, 0.6), gs).admissible);
  // At beta = 0 the gap is 1/(a1 mu1)^2 + 1/(a2 mu2)^2 - max = the smaller term, times C0 C1 / 8.
  const LinkingGate zero = beta1_gate(SystemParams::two(1.0, 2.0, 1.0, 1.0, 0.0), gs);
  CHECK(zero.admissible);
  CHECK(rel(zero.eps_max, std::min(least_energy(1, 1, gs), least_energy(2, 1, gs))) < 1e-12);
}

TEST_CASE("box sign conditions") {
  const GroundStateProfile& gs = profile();
  const LinkingBox box = build_box(kWeak, gs);
  CHECK(box_violations(box).empty());
  for (int i = 0; i < 2; ++i) {
    const double rho = i == 0 ? box.rho1 : box.rho2, R = i == 0 ? box.R1 : box.R2;
    CHECK(rho < 0.0);
    CHECK(R > 0.0);
    CHECK(std::abs(box_phi(box, i, rho) - box.eps / 2) < 1e-10 * box.eps);
    CHECK(box_phi(box, i, R) <= 1e-12 * box.level[i]);
    CHECK(box_psi(box, i, rho) > 0.0);
    CHECK(box_psi(box, i, R) < 0.0);
  }
  CHECK(rel(box.eps, beta1_gate(kWeak, gs).eps_max / 2) < 1e-14);

  const LinkingBox tight = build_box(kWeak, gs, box.eps / 10);
  CHECK(tight.rho1 < box.rho1);
  CHECK(tight.rho2 < box.rho2);

  CHECK_THROWS_AS(build_box(kWeak, gs, 2 * beta1_gate(kWeak, gs).eps_max), InvalidArgument);
  CHECK_THROWS_AS(build_box(SystemParams::two(1, 1, 1, 1, 0.6), gs), InvalidArgument);
}

TEST_CASE("closed-form dilation profiles on the box") {
  const GroundStateProfile& gs = profile();
  const LinkingBox box = build_box(kWeak, gs);
  for (int i = 0; i < 2; ++i) {
    const double h = 1e-5;
    for (double s : {box.rho1, -0.3, 0.0, 0.5}) {
      // psi_i is the derivative of I_{mu_i + beta}, phi_i is I_{mu_i}; they differ by the beta share of the quartic.
      const double fd_phi = (box_phi(box, i, s + h) - box_phi(box, i, s - h)) / (2 * h);
      const double quartic_rate = 0.75 * box.beta * box.Q[i] * std::exp(3 * s);
      CHECK(std::abs(box_psi(box, i, s) - (fd_phi - quartic_rate)) < 1e-6 * box.K[i]);
    }
  }
}

TEST_CASE("boundary estimate") {
  const GroundStateProfile& gs = profile();
  const LinkingBox box = build_box(kWeak, gs);
  const BoundaryReport rep = boundary_sup(box, gs);
  CHECK(rep.ok);
  CHECK(rep.sup <= std::max(box.level[0], box.level[1]) + box.eps + 1e-6);
  CHECK(rep.side_max[2] <= box.level[0] + 1e-6);
  CHECK(rep.side_max[1] <= box.level[1] + 1e-6);
}

TEST_CASE("decoupled boundary reduces to the scalar sides") {
  const GroundStateProfile& gs = profile();
  const LinkingBox box = build_box(SystemParams::two(1.0, 1.0, 1.0, 1.0, 0.0), gs);
  const BoundaryReport rep = boundary_sup(box, gs, 128);
  CHECK(rel(gamma0_energy(box, gs, 0.3, -0.2), box_phi(box, 0, 0.3) + box_phi(box, 1, -0.2)) < 1e-12);
  // The top side t2 = R2 has phi_2(R2) = 0, so its maximum over t1 is l1.
  CHECK(rel(rep.side_max[2], box.level[0]) < 1e-6);
}

TEST_CASE("winding number") {
  const GroundStateProfile& gs = profile();
  const LinkingBox box = build_box(kWeak, gs);
  for (int mesh : {64, 128, 512}) CHECK(winding_number(box, mesh) == 1);
  CHECK(winding_number(box, 64, true) == -1);

  const auto trace = boundary_trace(box, 16);
  CHECK(trace.size() >= 64);

  LinkingBox bad = box;
  bad.R1 = box.rho1 / 2;
  CHECK(box_psi(bad, 0, bad.R1) > 0.0);
  CHECK_FALSE(box_violations(bad).empty());
  CHECK(winding_number(bad, 64) == 0);
}

TEST_CASE("saddle at weak coupling") {
  const GroundStateProfile& gs = profile();
  const LinkingBox box = build_box(kWeak, gs);
  SaddleOptions o;
  o.grid_nodes = 512;
  o.compute_morse = true;
  const SaddleResult res = saddle_search(kWeak, gs, box, o);
  REQUIRE(res.cp.has_value());
  const CriticalPoint& cp = *res.cp;
  const double lmax = std::max(box.level[0], box.level[1]);
  CHECK(cp.level > lmax);
  CHECK(cp.level <= res.mesh_max + 1e-6 * cp.level);
  CHECK(cp.pohozaev_residual < 1e-6 * (1 + cp.level));
  CHECK(cp.morse_index == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(cp.lambda[i] < 0.0);
    for (std::size_t j = 0; j + 1 < cp.U[i].size(); ++j) REQUIRE(cp.U[i][j] > 0.0);
  }
}

TEST_CASE("decoupled saddle is the pair of solitons") {
  const GroundStateProfile& gs = profile();
  const SystemParams p = SystemParams::two(1.0, 1.0, 1.0, 2.0, 0.0);
  SaddleOptions o;
  o.grid_nodes = 2048;
  o.compute_morse = false;
  const SaddleResult res = saddle_search(p, gs, build_box(p, gs), o);
  REQUIRE(res.cp.has_value());
  CHECK(std::abs(res.t1) < 1e-4);
  CHECK(std::abs(res.t2) < 1e-4);
  CHECK(rel(res.cp->level, least_energy(1, 1, gs) + least_energy(1, 2, gs)) < 1e-6);
}

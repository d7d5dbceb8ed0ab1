#pragma once

// Two-dimensional linking geometry for small couplings: the dilation box Q,
// the boundary energy estimate, the winding of (psi_1, psi_2) along the
// boundary, and the saddle found by maximizing over Q and refining with Newton.
//
// Everything on Q is evaluated in closed form from the scaling laws of
// w_{a,mu}; only the cross term needs a quadrature, done on the continuous
// profile so that strongly dilated states are not truncated.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "normwave/ground_state.hpp"
#include "normwave/radial.hpp"
#include "normwave/soliton.hpp"

namespace normwave {

struct LinkingGate {
  bool admissible = false;
  double eps_max = 0.0;  // C0 C1 / 8 times the gap in the defining inequality of beta1
};

/// Requires k = 2 with positive masses and diagonal couplings, beta = beta_12 >= 0.
LinkingGate beta1_gate(const SystemParams& p, const GroundStateProfile& gs);

struct LinkingBox {
  double rho1 = 0.0, rho2 = 0.0;
  double R1 = 0.0, R2 = 0.0;
  double eps = 0.0;
  double beta = 0.0;
  std::array<double, 2> mu{};     // diagonal couplings
  std::array<double, 2> a{};      // masses
  std::array<double, 2> K{};      // kinetic(w_i), w_i = w_{a_i, mu_i + beta}
  std::array<double, 2> Q{};      // int w_i^4
  std::array<double, 2> amp{};    // w_i(r) = amp_i w0(kappa_i r)
  std::array<double, 2> kappa{};
  std::array<double, 2> level{};  // l(a_i, mu_i)
};

/// phi_i(s) = I_{mu_i}(s * w_i).
double box_phi(const LinkingBox& box, int i, double s);
/// psi_i(s) = d/ds I_{mu_i + beta}(s * w_i).
double box_psi(const LinkingBox& box, int i, double s);

/// Box with phi_i(rho_i) = eps/2 and phi_i(R_i) = 0 (both by bisection).
/// eps defaults to eps_max / 2. Throws InvalidArgument when the gate fails or
/// eps is outside (0, eps_max).
LinkingBox build_box(const SystemParams& p, const GroundStateProfile& gs, std::optional<double> eps = std::nullopt);

/// Failed sign conditions of the box, empty when valid.
std::vector<std::string> box_violations(const LinkingBox& box);

/// J(t1 * w_1, t2 * w_2).
double gamma0_energy(const LinkingBox& box, const GroundStateProfile& gs, double t1, double t2);

struct BoundaryReport {
  double sup = 0.0;
  std::array<double, 4> side_max{};  // bottom (t2 = rho2), right (t1 = R1), top (t2 = R2), left (t1 = rho1)
  double bound = 0.0;                // max(l1, l2) + eps
  bool ok = false;
};

BoundaryReport boundary_sup(const LinkingBox& box, const GroundStateProfile& gs, int mesh = 256);

struct TracePoint {
  double t1, t2, F1, F2;
};

/// (psi_1(t1), psi_2(t2)) along the counter-clockwise boundary, `mesh` segments per side.
std::vector<TracePoint> boundary_trace(const LinkingBox& box, int mesh);

/// Winding number about the origin of the boundary image. Throws
/// SolverError(residual) when the polyline comes within 1e-12 of the origin.
int winding_number(const LinkingBox& box, int mesh = 64, bool reversed = false);

struct SaddleOptions {
  int mesh = 65;
  std::size_t grid_nodes = 1024;
  bool compute_morse = true;
  NewtonOptions newton;
};

struct SaddleResult {
  double t1 = 0.0;
  double t2 = 0.0;
  double mesh_max = 0.0;  // max of J(gamma0) over Q after polishing
  std::optional<CriticalPoint> cp;
  std::string failure;
};

/// Maximize J(gamma0) over Q, then Newton from gamma0(t1*, t2*) on a natural grid.
SaddleResult saddle_search(const SystemParams& p, const GroundStateProfile& gs, const LinkingBox& box,
                           const SaddleOptions& opts = {});

}  // namespace normwave

#include "normwave/linking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "normwave/error.hpp"

namespace normwave {

namespace {

void require_pair(const SystemParams& p) {
  p.validate();
  if (p.k != 2) throw InvalidArgument("linking: exactly two components are required");
  if (!(p.b(0, 1) >= 0.0)) throw InvalidArgument("linking: coupling must be non-negative");
}

double golden_max(const auto& f, double lo, double hi, int iters) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < iters; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    }
  }
  return f1 > f2 ? x1 : x2;
}

}  // namespace

LinkingGate beta1_gate(const SystemParams& p, const GroundStateProfile& gs) {
  require_pair(p);
  const double a1 = p.a[0], a2 = p.a[1], mu1 = p.b(0, 0), mu2 = p.b(1, 1), b = p.b(0, 1);
  const double lhs = std::max(1.0 / (a1 * a1 * mu1 * mu1), 1.0 / (a2 * a2 * mu2 * mu2));
  const double rhs = 1.0 / (a1 * a1 * (mu1 + b) * (mu1 + b)) + 1.0 / (a2 * a2 * (mu2 + b) * (mu2 + b));
  LinkingGate g;
  g.admissible = lhs < rhs;
  g.eps_max = g.admissible ? gs.C0 * gs.C1 / 8.0 * (rhs - lhs) : 0.0;
  return g;
}

double box_phi(const LinkingBox& box, int i, double s) {
  return 0.5 * std::exp(2.0 * s) * box.K[i] - 0.25 * std::exp(3.0 * s) * box.mu[i] * box.Q[i];
}

double box_psi(const LinkingBox& box, int i, double s) {
  return std::exp(2.0 * s) * (box.K[i] - 0.75 * std::exp(s) * (box.mu[i] + box.beta) * box.Q[i]);
}

LinkingBox build_box(const SystemParams& p, const GroundStateProfile& gs, std::optional<double> eps) {
  const LinkingGate gate = beta1_gate(p, gs);
  if (!gate.admissible) throw InvalidArgument("build_box: coupling is not below beta1");
  const double e = eps.value_or(0.5 * gate.eps_max);
  if (!(e > 0.0) || !(e < gate.eps_max)) throw InvalidArgument("build_box: eps must lie in (0, eps_max)");

  LinkingBox box;
  box.eps = e;
  box.beta = p.b(0, 1);
  for (int i = 0; i < 2; ++i) {
    const double a = p.a[i];
    const double mu = p.b(i, i);
    const double mb = mu + box.beta;
    box.a[i] = a;
    box.mu[i] = mu;
    box.K[i] = 0.75 * gs.C0 * gs.C1 / (mb * mb * a * a);
    box.Q[i] = gs.C0 * gs.C1 / (mb * mb * mb * a * a);
    box.kappa[i] = soliton_wavenumber(a, mb, gs);
    box.amp[i] = box.kappa[i] / std::sqrt(mb);
    box.level[i] = least_energy(a, mu, gs);

    // phi_i increases on (-inf, 0] from 0.
    if (!(box_phi(box, i, 0.0) > 0.5 * e)) throw InvalidArgument("build_box: eps too large for this coupling");
    double lo = -1.0;
    while (box_phi(box, i, lo) >= 0.5 * e) lo *= 2.0;
    double hi = 0.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (box_phi(box, i, mid) < 0.5 * e ? lo : hi) = mid;
    }
    (i == 0 ? box.rho1 : box.rho2) = 0.5 * (lo + hi);

    // phi_i has a single positive zero; keep the end of the bracket where phi <= 0.
    lo = 0.0;
    hi = 1.0;
    while (box_phi(box, i, hi) > 0.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (box_phi(box, i, mid) > 0.0 ? lo : hi) = mid;
    }
    (i == 0 ? box.R1 : box.R2) = hi;
  }
  return box;
}

std::vector<std::string> box_violations(const LinkingBox& box) {
  std::vector<std::string> out;
  const std::array<double, 2> rho{box.rho1, box.rho2};
  const std::array<double, 2> R{box.R1, box.R2};
  for (int i = 0; i < 2; ++i) {
    const std::string tag = "component " + std::to_string(i + 1) + ": ";
    const double pr = box_phi(box, i, rho[i]);
    if (!(pr > 0.0 && pr < box.eps)) out.push_back(tag + "phi(rho) not in (0, eps)");
    if (!(box_phi(box, i, R[i]) <= 0.0)) out.push_back(tag + "phi(R) > 0");
    if (!(box_psi(box, i, rho[i]) > 0.0)) out.push_back(tag + "psi(rho) <= 0");
    if (!(box_psi(box, i, R[i]) < 0.0)) out.push_back(tag + "psi(R) >= 0");
  }
  return out;
}

double gamma0_energy(const LinkingBox& box, const GroundStateProfile& gs, double t1, double t2) {
  double J = box_phi(box, 0, t1) + box_phi(box, 1, t2);
  if (box.beta != 0.0) {
    const double cross = overlap_integral(*gs.shape, box.amp[0] * std::exp(1.5 * t1), box.kappa[0] * std::exp(t1),
                                          box.amp[1] * std::exp(1.5 * t2), box.kappa[1] * std::exp(t2));
    J -= 0.5 * box.beta * cross;
  }
  return J;
}

BoundaryReport boundary_sup(const LinkingBox& box, const GroundStateProfile& gs, int mesh) {
  if (mesh < 1) throw InvalidArgument("boundary_sup: mesh must be positive");
  BoundaryReport rep;
  rep.side_max.fill(-std::numeric_limits<double>::infinity());
  for (int m = 0; m <= mesh; ++m) {
    const double f = static_cast<double>(m) / mesh;
    const double t1 = box.rho1 + f * (box.R1 - box.rho1);
    const double t2 = box.rho2 + f * (box.R2 - box.rho2);
    rep.side_max[0] = std::max(rep.side_max[0], gamma0_energy(box, gs, t1, box.rho2));
    rep.side_max[1] = std::max(rep.side_max[1], gamma0_energy(box, gs, box.R1, t2));
    rep.side_max[2] = std::max(rep.side_max[2], gamma0_energy(box, gs, t1, box.R2));
    rep.side_max[3] = std::max(rep.side_max[3], gamma0_energy(box, gs, box.rho1, t2));
  }
  rep.sup = *std::max_element(rep.side_max.begin(), rep.side_max.end());
  rep.bound = std::max(box.level[0], box.level[1]) + box.eps;
  rep.ok = rep.sup <= rep.bound + 1e-6;
  return rep;
}

std::vector<TracePoint> boundary_trace(const LinkingBox& box, int mesh) {
  if (mesh < 1) throw InvalidArgument("boundary_trace: mesh must be positive");
  const std::array<std::array<double, 2>, 5> corners{{{box.rho1, box.rho2},
                                                      {box.R1, box.rho2},
                                                      {box.R1, box.R2},
                                                      {box.rho1, box.R2},
                                                      {box.rho1, box.rho2}}};
  std::vector<TracePoint> out;
  out.reserve(4 * static_cast<std::size_t>(mesh) + 1);
  for (int side = 0; side < 4; ++side) {
    for (int m = 0; m < mesh; ++m) {
      const double f = static_cast<double>(m) / mesh;
      const double t1 = corners[side][0] + f * (corners[side + 1][0] - corners[side][0]);
      const double t2 = corners[side][1] + f * (corners[side + 1][1] - corners[side][1]);
      out.push_back({t1, t2, box_psi(box, 0, t1), box_psi(box, 1, t2)});
    }
  }
  out.push_back(out.front());
  return out;
}

int winding_number(const LinkingBox& box, int mesh, bool reversed) {
  std::vector<TracePoint> trace = boundary_trace(box, mesh);
  if (reversed) std::reverse(trace.begin(), trace.end());
  double angle = 0.0;
  for (std::size_t m = 0; m < trace.size(); ++m) {
    if (std::hypot(trace[m].F1, trace[m].F2) < 1e-12)
      throw SolverError(SolverError::Kind::residual, "winding_number: boundary image passes through the origin");
    if (m == 0) continue;
    const double x0 = trace[m - 1].F1, y0 = trace[m - 1].F2;
    const double x1 = trace[m].F1, y1 = trace[m].F2;
    angle += std::atan2(x0 * y1 - y0 * x1, x0 * x1 + y0 * y1);
  }
  return static_cast<int>(std::lround(angle / (2.0 * kPi)));
}

SaddleResult saddle_search(const SystemParams& p, const GroundStateProfile& gs, const LinkingBox& box,
                           const SaddleOptions& opts) {
  require_pair(p);
  if (opts.mesh < 2) throw InvalidArgument("saddle_search: mesh must be at least 2");
  SaddleResult res;
  const double h1 = (box.R1 - box.rho1) / (opts.mesh - 1);
  const double h2 = (box.R2 - box.rho2) / (opts.mesh - 1);
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < opts.mesh; ++i)
    for (int j = 0; j < opts.mesh; ++j) {
      const double t1 = box.rho1 + i * h1;
      const double t2 = box.rho2 + j * h2;
      const double v = gamma0_energy(box, gs, t1, t2);
      if (v > best) {
        best = v;
        res.t1 = t1;
        res.t2 = t2;
      }
    }

  // Alternating golden-section searches inside the best cell's neighbourhood.
  for (int round = 0; round < 4; ++round) {
    const double t2 = res.t2;
    res.t1 = golden_max([&](double t) { return gamma0_energy(box, gs, t, t2); }, std::max(box.rho1, res.t1 - h1),
                        std::min(box.R1, res.t1 + h1), 50);
    const double t1 = res.t1;
    res.t2 = golden_max([&](double t) { return gamma0_energy(box, gs, t1, t); }, std::max(box.rho2, res.t2 - h2),
                        std::min(box.R2, res.t2 + h2), 50);
  }
  res.mesh_max = gamma0_energy(box, gs, res.t1, res.t2);

  try {
    const GridPtr grid = natural_grid(p, gs, opts.grid_nodes);
    FieldList U;
    const std::array<double, 2> t{res.t1, res.t2};
    for (int i = 0; i < 2; ++i) {
      RadialField u(grid);
      const double amp = box.amp[i] * std::exp(1.5 * t[i]);
      const double kap = box.kappa[i] * std::exp(t[i]);
      for (std::size_t j = 0; j < grid->size(); ++j) u.values[j] = amp * (*gs.shape)(kap * grid->node(j));
      if (u.tail_ratio() > 1e-9) throw TailError("saddle_search: dilated profile does not fit the grid");
      U.push_back(std::move(u));
    }
    CriticalPoint cp = newton_refine(make_critical_point(std::move(U), p), p, opts.newton);
    if (opts.compute_morse) cp.morse_index = morse_index(cp, p, opts.grid_nodes);
    res.cp = std::move(cp);
  } catch (const Error& e) {
    res.failure = e.what();
  }
  return res;
}

}  // namespace normwave

#include "normwave/ground_state.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "normwave/error.hpp"

namespace normwave {

namespace {

using Kind = SolverError::Kind;

// Mass fraction that internal projections may push past r_max; the state is
// renormalized right after.
constexpr double kLooseTail = 1e-6;

std::vector<double> potential(const FieldList& U, const SystemParams& p, std::size_t i) {
  const std::size_t n = U[i].size();
  std::vector<double> pot(n, 0.0);
  for (std::size_t m = 0; m < p.k; ++m) {
    const double b = p.b(i, m);
    if (b == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) pot[j] += b * U[m].values[j] * U[m].values[j];
  }
  return pot;
}

void normalize(RadialField& u, double a) {
  for (double& x : u.values) x = std::abs(x);
  const double m = mass(u);
  if (!(m > 0.0) || !std::isfinite(m)) throw SolverError(Kind::divergence, "descent: component lost all mass");
  const double f = a / std::sqrt(m);
  for (double& x : u.values) x *= f;
}

double total_mass2(const SystemParams& p) {
  double t = 0.0;
  for (double a : p.a) t += a * a;
  return t;
}

// Kinetic energy per unit mass (a squared inverse width) relative to the
// largest one; a component spreading out while the others stay bound drives
// its share to zero.
std::vector<double> kinetic_shares(const FieldList& U, const SystemParams& p) {
  std::vector<double> eta(p.k);
  double top = 0.0;
  for (std::size_t i = 0; i < p.k; ++i) {
    eta[i] = kinetic(U[i]) / (p.a[i] * p.a[i]);
    top = std::max(top, eta[i]);
  }
  for (double& e : eta) e = top > 0.0 ? e / top : 0.0;
  return eta;
}

void perturb(FieldList& U, const DescentOptions& opts) {
  if (opts.perturbation == 0.0) return;
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (auto& u : U) {
    const double rmax = u.grid->r_max();
    std::vector<double> c(4);
    for (double& x : c) x = coef(rng);
    for (std::size_t j = 0; j < u.size(); ++j) {
      double f = 0.0;
      for (std::size_t m = 0; m < c.size(); ++m)
        f += c[m] / static_cast<double>(m + 1) * std::cos(static_cast<double>(m + 1) * kPi * u.grid->node(j) / rmax);
      u.values[j] *= 1.0 + opts.perturbation * f;
    }
  }
}

}  // namespace

namespace {

double natural_wavenumber(const SystemParams& p, const GroundStateProfile& gs) {
  double widest = 0.0;
  for (std::size_t i = 0; i < p.k; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < p.k; ++j) s += std::max(0.0, p.b(i, j)) * p.a[j] * p.a[j];
    widest = std::max(widest, s);
  }
  return gs.C0 / widest;
}

}  // namespace

GridPtr natural_grid(const SystemParams& p, const GroundStateProfile& gs, std::size_t n, double decay_lengths) {
  p.validate();
  return make_grid(n, decay_lengths / natural_wavenumber(p, gs));
}

FieldList product_test_state(const SystemParams& p, const GroundStateProfile& gs, GridPtr grid) {
  p.validate();
  const double kappa = natural_wavenumber(p, gs);
  FieldList U;
  for (std::size_t i = 0; i < p.k; ++i) {
    // log(kappa) * w_{a_i, C0/a_i^2}
    RadialField u(grid);
    const double amp = p.a[i] / std::sqrt(gs.C0) * std::pow(kappa, 1.5);
    for (std::size_t j = 0; j < grid->size(); ++j) u.values[j] = amp * (*gs.shape)(kappa * grid->node(j));
    if (u.tail_ratio() > 1e-9) throw TailError("product_test_state: profile is not negligible at r_max");
    U.push_back(std::move(u));
  }
  return U;
}

FieldList decoupled_state(const SystemParams& p, const GroundStateProfile& gs, GridPtr grid) {
  p.validate();
  FieldList U;
  for (std::size_t i = 0; i < p.k; ++i) U.push_back(scaled_soliton(p.a[i], p.b(i, i), gs, grid).w);
  return U;
}

Projection project_pohozaev(const FieldList& U, const SystemParams& p, double tail_tol) {
  const double B = quartic_sum(U, p);
  if (!(B > 0.0)) throw UndefinedQuotient("project_pohozaev: quartic term is not positive");
  const double A = kinetic_sum(U);
  Projection out;
  out.s_star = std::log(4.0 * A / (3.0 * B));
  out.U = dilate(out.s_star, U, tail_tol);
  return out;
}

std::vector<double> extract_multipliers(const FieldList& U, const SystemParams& p) {
  require_components(U, p);
  std::vector<double> lambda(p.k);
  for (std::size_t i = 0; i < p.k; ++i) {
    double q = 0.0;
    for (std::size_t j = 0; j < p.k; ++j) q += p.b(i, j) * interaction(U[i], U[j]);
    lambda[i] = (kinetic(U[i]) - q) / (p.a[i] * p.a[i]);
  }
  return lambda;
}

double constrained_grad_norm(const FieldList& U, const SystemParams& p, const std::vector<double>& lambda) {
  const FieldList g = grad_J(U, p);
  double worst = 0.0;
  for (std::size_t i = 0; i < p.k; ++i) {
    RadialField r = g[i];
    for (std::size_t j = 0; j < r.size(); ++j) r.values[j] -= lambda[i] * U[i].values[j];
    const double scale = std::abs(lambda[i]) * p.a[i];
    worst = std::max(worst, std::sqrt(std::max(0.0, mass(r))) / scale);
  }
  return worst;
}

CriticalPoint make_critical_point(FieldList U, const SystemParams& p) {
  CriticalPoint cp;
  cp.U = std::move(U);
  cp.lambda = extract_multipliers(cp.U, p);
  cp.level = energy_J(cp.U, p);
  cp.pohozaev_residual = std::abs(pohozaev_G(cp.U, p));
  cp.grad_norm = constrained_grad_norm(cp.U, p, cp.lambda);
  return cp;
}

CriticalPoint minimize_rayleigh(const SystemParams& p, const FieldList& init, const DescentOptions& opts) {
  p.validate();
  require_components(init, p);
  const GridPtr grid = init[0].grid;
  const std::size_t n = grid->size();
  const auto w = grid->weights();
  const RealBand& S = grid->stiffness();

  FieldList U = init;
  perturb(U, opts);
  for (std::size_t i = 0; i < p.k; ++i) normalize(U[i], p.a[i]);
  U = project_pohozaev(U, p, kLooseTail).U;
  for (std::size_t i = 0; i < p.k; ++i) normalize(U[i], p.a[i]);

  // Sobolev preconditioner (S + cW)^{-1} W with c the mean kinetic density.
  const double c = kinetic_sum(U) / total_mass2(p);
  RealBand P(n, kStencilHalfWidth);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t m = (j >= kStencilHalfWidth ? j - kStencilHalfWidth : 0);
         m <= std::min(n - 1, j + kStencilHalfWidth); ++m)
      P(j, m) = S(j, m) + (j == m ? c * w[j] : 0.0);
  P.factorize();

  struct Eval {
    double A, B, R;
    FieldList d;
    double slope;  // sum_i <g_i, d_i>_W
  };
  auto evaluate_at = [&](const FieldList& V) {
    Eval e;
    e.A = kinetic_sum(V);
    e.B = quartic_sum(V, p);
    if (!(e.B > 0.0)) throw UndefinedQuotient("minimize_rayleigh: quartic term is not positive");
    e.R = 8.0 * e.A * e.A * e.A / (27.0 * e.B * e.B);
    e.slope = 0.0;
    std::vector<double> Su(n), rhs(n), y(n);
    for (std::size_t i = 0; i < p.k; ++i) {
      const std::vector<double> pot = potential(V, p, i);
      S.multiply(V[i].values, Su);
      // W g_i = R (6 S u_i / A - 8 W pot u_i / B)
      for (std::size_t j = 0; j < n; ++j)
        rhs[j] = e.R * (6.0 * Su[j] / e.A - 8.0 * w[j] * pot[j] * V[i].values[j] / e.B);
      std::vector<double> z = rhs;
      P.solve_in_place(z);
      for (std::size_t j = 0; j < n; ++j) y[j] = w[j] * V[i].values[j];
      P.solve_in_place(y);
      double uz = 0.0, uy = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        uz += w[j] * V[i].values[j] * z[j];
        uy += w[j] * V[i].values[j] * y[j];
      }
      const double alpha = uz / uy;
      RadialField d(grid);
      for (std::size_t j = 0; j < n; ++j) {
        d.values[j] = z[j] - alpha * y[j];
        e.slope += rhs[j] * d.values[j];
      }
      e.d.push_back(std::move(d));
    }
    return e;
  };

  // A projection that would push mass past r_max means some component is
  // spreading out along the minimizing sequence.
  auto reproject = [&](const FieldList& V) {
    try {
      Projection pr = project_pohozaev(V, p, kLooseTail);
      for (std::size_t i = 0; i < p.k; ++i) normalize(pr.U[i], p.a[i]);
      return pr.U;
    } catch (const TailError&) {
      throw SolverError(Kind::collapse, "minimize_rayleigh: minimizing sequence escapes the truncated domain");
    }
  };

  auto check_collapse = [&](const FieldList& V) {
    const std::vector<double> eta = kinetic_shares(V, p);
    for (std::size_t i = 0; i < p.k; ++i) {
      if (eta[i] < opts.collapse_ratio || V[i].sup_norm() < 1e-6 * p.a[i])
        throw SolverError(Kind::collapse, "minimize_rayleigh: component " + std::to_string(i) +
                                              " vanishes along the minimizing sequence");
    }
  };

  Eval cur = evaluate_at(U);
  double tau = 0.1 * cur.A / cur.R;
  int stalled = 0;
  int it = 0;
  FieldList prev_U;
  FieldList prev_d;
  for (; it < opts.max_iter; ++it) {
    if (p.k > 1) check_collapse(U);
    // R is blind to dilations, so the scale is pinned by projecting back
    // onto G = 0 whenever it has drifted.
    if (std::abs(std::log(4.0 * cur.A / (3.0 * cur.B))) > 0.02) {
      U = reproject(U);
      cur = evaluate_at(U);
      prev_U.clear();
    }
    if (it > 0 && it % opts.check_every == 0) {
      const FieldList V = reproject(U);
      if (constrained_grad_norm(V, p, extract_multipliers(V, p)) < opts.grad_tol) break;
    }

    // Barzilai-Borwein step from the last secant pair.
    if (!prev_U.empty()) {
      double ss = 0.0, sy = 0.0;
      for (std::size_t i = 0; i < p.k; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const double s = U[i].values[j] - prev_U[i].values[j];
          const double yv = cur.d[i].values[j] - prev_d[i].values[j];
          ss += w[j] * s * s;
          sy += w[j] * s * yv;
        }
      if (sy > 0.0) tau = ss / sy;
    }
    tau = std::clamp(tau, 1e-6 * cur.A / cur.R, 1e3 * cur.A / cur.R);

    FieldList trial;
    Eval next;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      trial = U;
      for (std::size_t i = 0; i < p.k; ++i) {
        for (std::size_t j = 0; j < n; ++j) trial[i].values[j] -= tau * cur.d[i].values[j];
        normalize(trial[i], p.a[i]);
      }
      next = evaluate_at(trial);
      if (next.R <= cur.R - 1e-4 * tau * cur.slope || next.R <= cur.R * (1.0 - 1e-15)) {
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    if (!accepted) {
      ++stalled;
      prev_U.clear();
      if (stalled >= opts.stall_window) break;
      continue;
    }
    const double drop = (cur.R - next.R) / cur.R;
    stalled = drop < opts.rel_tol ? stalled + 1 : 0;
    prev_U = std::move(U);
    prev_d = std::move(cur.d);
    U = std::move(trial);
    cur = std::move(next);
    if (stalled >= opts.stall_window) break;
  }

  if (p.k > 1) check_collapse(U);
  CriticalPoint cp = make_critical_point(reproject(U), p);
  cp.iterations = it;
  if (!(cp.grad_norm < std::max(opts.grad_tol, 1e-4)))
    throw SolverError(Kind::no_convergence, "minimize_rayleigh: constrained gradient residual " +
                                                std::to_string(cp.grad_norm) + " after " + std::to_string(it) +
                                                " iterations");
  return cp;
}

double kkt_residual(const FieldList& U, const std::vector<double>& lambda, const SystemParams& p) {
  require_components(U, p);
  double worst = 0.0;
  for (std::size_t i = 0; i < p.k; ++i) {
    const RadialField lap = neg_laplacian(U[i]);
    const std::vector<double> pot = potential(U, p, i);
    const double scale = std::abs(lambda[i]) * U[i].sup_norm();
    for (std::size_t j = 0; j < lap.size(); ++j) {
      const double r = lap.values[j] - lambda[i] * U[i].values[j] - pot[j] * U[i].values[j];
      worst = std::max(worst, std::abs(r) / scale);
    }
    worst = std::max(worst, std::abs(mass(U[i]) - p.a[i] * p.a[i]) / (p.a[i] * p.a[i]));
  }
  return worst;
}

CriticalPoint newton_refine(const CriticalPoint& cp, const SystemParams& p, const NewtonOptions& opts) {
  p.validate();
  require_components(cp.U, p);
  if (cp.lambda.size() != p.k) throw InvalidArgument("newton_refine: multiplier count does not match k");
  const double basin = constrained_grad_norm(cp.U, p, cp.lambda);
  if (!(basin <= opts.basin_tol))
    throw SolverError(Kind::divergence, "newton_refine: initial state is outside the Newton basin (residual " +
                                            std::to_string(basin) + ")");

  const GridPtr grid = cp.U[0].grid;
  const std::size_t n = grid->size();
  const std::size_t k = p.k;
  const std::size_t N = k * n + k;
  const auto w = grid->weights();
  const RealBand& S = grid->stiffness();

  FieldList U = cp.U;
  std::vector<double> lambda = cp.lambda;

  // Unknowns are interleaved by node, (u_0(r_j), ..., u_{k-1}(r_j)), so the
  // Jacobian is banded apart from the k multiplier columns and mass rows.
  // Rows are the pointwise equations L u_i - lambda_i u_i - pot_i u_i with
  // L = W^{-1} S, followed by (|u_i|^2 - a_i^2) / (2 a_i^2).
  auto residual = [&](const FieldList& V, const std::vector<double>& lam) {
    Eigen::VectorXd F(N);
    for (std::size_t i = 0; i < k; ++i) {
      const RadialField lap = neg_laplacian(V[i]);
      const std::vector<double> pot = potential(V, p, i);
      for (std::size_t j = 0; j < n; ++j)
        F(static_cast<Eigen::Index>(j * k + i)) = lap.values[j] - lam[i] * V[i].values[j] - pot[j] * V[i].values[j];
      F(static_cast<Eigen::Index>(k * n + i)) = (mass(V[i]) - p.a[i] * p.a[i]) / (2.0 * p.a[i] * p.a[i]);
    }
    return F;
  };

  double res = kkt_residual(U, lambda, p);
  int it = 0;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::NaturalOrdering<int>> lu;
  bool pattern_ready = false;
  while (res > opts.tol) {
    if (it >= opts.max_iter)
      throw SolverError(Kind::divergence, "newton_refine: no convergence after " + std::to_string(it) +
                                              " iterations (residual " + std::to_string(res) + ")");
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(k * n * (2 * kStencilHalfWidth + 1 + k + 1) + 2 * k * n);
    for (std::size_t i = 0; i < k; ++i) {
      const std::vector<double> pot = potential(U, p, i);
      for (std::size_t j = 0; j < n; ++j) {
        const auto row = static_cast<int>(j * k + i);
        for (std::size_t m = (j >= kStencilHalfWidth ? j - kStencilHalfWidth : 0);
             m <= std::min(n - 1, j + kStencilHalfWidth); ++m) {
          double v = S(j, m) / w[j];
          if (m == j) v -= lambda[i] + pot[j] + 2.0 * p.b(i, i) * U[i].values[j] * U[i].values[j];
          trip.emplace_back(row, static_cast<int>(m * k + i), v);
        }
        for (std::size_t l = 0; l < k; ++l) {
          if (l == i || p.b(i, l) == 0.0) continue;
          trip.emplace_back(row, static_cast<int>(j * k + l), -2.0 * p.b(i, l) * U[i].values[j] * U[l].values[j]);
        }
        trip.emplace_back(row, static_cast<int>(k * n + i), -U[i].values[j]);
        trip.emplace_back(static_cast<int>(k * n + i), static_cast<int>(j * k + i),
                          w[j] * U[i].values[j] / (p.a[i] * p.a[i]));
      }
    }
    Eigen::SparseMatrix<double> J(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    J.setFromTriplets(trip.begin(), trip.end());
    J.makeCompressed();
    if (!pattern_ready) {
      lu.analyzePattern(J);
      pattern_ready = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success) throw SolverError(Kind::singular, "newton_refine: singular Jacobian");
    const Eigen::VectorXd F = residual(U, lambda);
    const Eigen::VectorXd delta = lu.solve(-F);
    if (lu.info() != Eigen::Success || !delta.allFinite())
      throw SolverError(Kind::singular, "newton_refine: linear solve failed");

    double step = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 12; ++ls) {
      FieldList V = U;
      std::vector<double> lam = lambda;
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < n; ++j) V[i].values[j] += step * delta(static_cast<Eigen::Index>(j * k + i));
        lam[i] += step * delta(static_cast<Eigen::Index>(k * n + i));
      }
      const double r = kkt_residual(V, lam, p);
      if (std::isfinite(r) && r < res) {
        U = std::move(V);
        lambda = std::move(lam);
        res = r;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    ++it;
    if (!improved)
      throw SolverError(Kind::divergence, "newton_refine: line search failed (residual " + std::to_string(res) + ")");
  }

  CriticalPoint out;
  out.U = std::move(U);
  out.lambda = std::move(lambda);
  out.level = energy_J(out.U, p);
  out.pohozaev_residual = std::abs(pohozaev_G(out.U, p));
  out.grad_norm = constrained_grad_norm(out.U, p, out.lambda);
  out.iterations = it;
  return out;
}

std::optional<int> morse_index(const CriticalPoint& cp, const SystemParams& p, std::size_t max_nodes) {
  require_components(cp.U, p);
  const GridPtr grid = cp.U[0].grid;
  const std::size_t n = grid->size();
  if (n > max_nodes) return std::nullopt;
  const std::size_t k = p.k;
  const auto N = static_cast<Eigen::Index>(k * n + k);
  const auto w = grid->weights();
  const RealBand& S = grid->stiffness();

  // Symmetrized bordered Hessian of the Lagrangian: W^{-1/2} H W^{-1/2} with
  // borders W^{1/2} u_i. Its inertia is that of the reduced Hessian plus (k, k).
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
  std::vector<double> sw(n);
  for (std::size_t j = 0; j < n; ++j) sw[j] = std::sqrt(w[j]);
  for (std::size_t i = 0; i < k; ++i) {
    const std::vector<double> pot = potential(cp.U, p, i);
    for (std::size_t j = 0; j < n; ++j) {
      const auto row = static_cast<Eigen::Index>(i * n + j);
      for (std::size_t m = (j >= kStencilHalfWidth ? j - kStencilHalfWidth : 0);
           m <= std::min(n - 1, j + kStencilHalfWidth); ++m)
        M(row, static_cast<Eigen::Index>(i * n + m)) = S(j, m) / (sw[j] * sw[m]);
      M(row, row) -= cp.lambda[i] + pot[j] + 2.0 * p.b(i, i) * cp.U[i].values[j] * cp.U[i].values[j];
      for (std::size_t l = 0; l < k; ++l)
        if (l != i) M(row, static_cast<Eigen::Index>(l * n + j)) = -2.0 * p.b(i, l) * cp.U[i].values[j] * cp.U[l].values[j];
      const auto border = static_cast<Eigen::Index>(k * n + i);
      M(row, border) = sw[j] * cp.U[i].values[j];
      M(border, row) = M(row, border);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError(Kind::no_convergence, "morse_index: eigensolver failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double tol = 1e-12 * ev.cwiseAbs().maxCoeff();
  int negative = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) < -tol) ++negative;
  return negative - static_cast<int>(k);
}

ContinuationResult continue_in_beta(const SystemParams& p0, const std::vector<std::vector<double>>& beta_path,
                                    const GroundStateProfile& gs, GridPtr grid, const NewtonOptions& opts) {
  if (beta_path.empty()) throw InvalidArgument("continue_in_beta: empty path");
  const std::size_t k = p0.k;
  SystemParams p = p0;
  p.beta = beta_path.front();
  p.validate();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (i != j && p.b(i, j) != 0.0)
        throw InvalidArgument("continue_in_beta: path must start from a diagonal coupling matrix");

  ContinuationResult out;
  CriticalPoint cur = make_critical_point(decoupled_state(p, gs, grid), p);
  cur.lambda.clear();
  for (std::size_t i = 0; i < k; ++i) cur.lambda.push_back(scaled_soliton(p.a[i], p.b(i, i), gs, grid).lambda);
  for (std::size_t s = 0; s < beta_path.size(); ++s) {
    p.beta = beta_path[s];
    try {
      p.validate();
      cur = newton_refine(cur, p, opts);
    } catch (const Error& e) {
      out.failed_at = s;
      out.failure = e.what();
      return out;
    }
    out.branch.push_back(cur);
  }
  return out;
}

double subset_lower_bound(const SystemParams& p, const GroundStateProfile& gs, const std::vector<std::size_t>& subset) {
  if (subset.empty()) throw InvalidArgument("subset_lower_bound: empty subset");
  double diag = 0.0;
  double off = 0.0;
  for (std::size_t x : subset) {
    if (x >= p.k) throw InvalidArgument("subset_lower_bound: index out of range");
    diag = std::max(diag, p.b(x, x) * p.a[x]);
    for (std::size_t y : subset)
      if (y != x) off = std::max(off, p.b(x, y) * std::sqrt(p.a[x] * p.a[y]));
  }
  const double m = static_cast<double>(subset.size());
  const double bracket = diag + (m - 1.0) / m * off;
  return gs.C0 * gs.C1 / (8.0 * bracket * bracket);
}

double product_upper_bound(const SystemParams& p, const GroundStateProfile& gs) {
  p.validate();
  double sa = 0.0;
  double sb = 0.0;
  for (std::size_t i = 0; i < p.k; ++i) {
    sa += p.a[i] * p.a[i];
    for (std::size_t j = 0; j < p.k; ++j) sb += p.b(i, j) * p.a[i] * p.a[i] * p.a[j] * p.a[j];
  }
  if (!(sb > 0.0)) throw UndefinedQuotient("product_upper_bound: quartic term is not positive");
  return gs.C0 * gs.C1 * sa * sa * sa / (8.0 * sb * sb);
}

BoundsReport ground_state_bounds(const SystemParams& p, const GroundStateProfile& gs) {
  p.validate();
  if (p.k > 20) throw InvalidArgument("ground_state_bounds: too many components for subset enumeration");
  BoundsReport rep;
  rep.upper = product_upper_bound(p, gs);
  rep.separated = true;
  const std::size_t full = (std::size_t{1} << p.k) - 1;
  for (std::size_t mask = 1; mask < full; ++mask) {
    std::vector<std::size_t> subset;
    for (std::size_t i = 0; i < p.k; ++i)
      if (mask & (std::size_t{1} << i)) subset.push_back(i);
    const double lb = subset_lower_bound(p, gs, subset);
    rep.lower_by_subset.emplace(subset, lb);
    if (!(rep.upper < lb)) rep.separated = false;
  }
  return rep;
}

}  // namespace normwave

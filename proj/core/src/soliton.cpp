#include "normwave/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "normwave/error.hpp"

namespace normwave {

namespace {

struct OdeState {
  double w;
  double p;  // w'
};

OdeState rhs(double r, OdeState y) { return {y.p, -2.0 * y.p / r + y.w - y.w * y.w * y.w}; }

OdeState rk4(double r, OdeState y, double h) {
  const OdeState k1 = rhs(r, y);
  const OdeState k2 = rhs(r + 0.5 * h, {y.w + 0.5 * h * k1.w, y.p + 0.5 * h * k1.p});
  const OdeState k3 = rhs(r + 0.5 * h, {y.w + 0.5 * h * k2.w, y.p + 0.5 * h * k2.p});
  const OdeState k4 = rhs(r + h, {y.w + h * k3.w, y.p + h * k3.p});
  return {y.w + h / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w),
          y.p + h / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p)};
}

// Regular series at the origin: w = b + c r^2 + d r^4, c = (b - b^3)/6.
OdeState series_start(double b, double r) {
  const double c = (b - b * b * b) / 6.0;
  const double d = c * (1.0 - 3.0 * b * b) / 20.0;
  return {b + c * r * r + d * r * r * r * r, 2.0 * c * r + 4.0 * d * r * r * r};
}

struct Trajectory {
  ShotOutcome outcome = ShotOutcome::undecided;
  std::vector<double> w;
  std::vector<double> p;
};

Trajectory integrate(double b, const ShootingOptions& opts, bool store) {
  Trajectory out;
  const double h = opts.step;
  const auto steps = static_cast<std::size_t>(std::ceil(opts.classify_radius / h));
  if (store) {
    out.w.reserve(steps + 1);
    out.p.reserve(steps + 1);
    out.w.push_back(b);
    out.p.push_back(0.0);
  }
  OdeState y = series_start(b, h);
  for (std::size_t m = 1; m <= steps; ++m) {
    const double r = static_cast<double>(m) * h;
    if (store) {
      out.w.push_back(y.w);
      out.p.push_back(y.p);
    }
    if (y.w < 0.0) {
      out.outcome = ShotOutcome::crosses_zero;
      return out;
    }
    if (y.p > 0.0) {
      out.outcome = ShotOutcome::turns_up;
      return out;
    }
    y = rk4(r, y, h);
  }
  return out;
}

}  // namespace

SolitonShape::SolitonShape(double step, std::vector<double> w, std::vector<double> dw)
    : step_(step), w_(std::move(w)), dw_(std::move(dw)) {
  if (w_.size() < 2 || w_.size() != dw_.size()) throw InvalidArgument("SolitonShape: bad table");
}

double SolitonShape::operator()(double r) const {
  r = std::abs(r);
  const double rm = matching_radius();
  if (r >= rm) return w_.back() * (rm / r) * std::exp(-(r - rm));
  const auto idx = static_cast<std::size_t>(r / step_);
  const std::size_t i = std::min(idx, w_.size() - 2);
  const double t = (r - static_cast<double>(i) * step_) / step_;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * w_[i] + h10 * step_ * dw_[i] + h01 * w_[i + 1] + h11 * step_ * dw_[i + 1];
}

double SolitonShape::derivative(double r) const {
  const double sign = r < 0 ? -1.0 : 1.0;
  r = std::abs(r);
  const double rm = matching_radius();
  if (r >= rm) return sign * -(*this)(r) * (1.0 + 1.0 / r);
  const auto idx = static_cast<std::size_t>(r / step_);
  const std::size_t i = std::min(idx, w_.size() - 2);
  const double t = (r - static_cast<double>(i) * step_) / step_;
  const double t2 = t * t;
  const double d00 = 6 * t2 - 6 * t;
  const double d10 = 3 * t2 - 4 * t + 1;
  const double d01 = -6 * t2 + 6 * t;
  const double d11 = 3 * t2 - 2 * t;
  return sign * (d00 * w_[i] / step_ + d10 * dw_[i] + d01 * w_[i + 1] / step_ + d11 * dw_[i + 1]);
}

ShotOutcome classify_shot(double b, const ShootingOptions& opts) { return integrate(b, opts, false).outcome; }

GridPtr reference_grid() {
  static const GridPtr grid = make_grid(4096, 30.0);
  return grid;
}

GroundStateProfile shoot_w0(GridPtr grid, const ShootingOptions& opts) {
  if (!(opts.tol > 0.0)) throw InvalidArgument("shoot_w0: tol must be positive");
  double lo = opts.b_low;
  double hi = opts.b_high;
  if (classify_shot(lo, opts) != ShotOutcome::turns_up || classify_shot(hi, opts) != ShotOutcome::crosses_zero)
    throw SolverError(SolverError::Kind::bracket, "shoot_w0: center values do not bracket the separatrix");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const ShotOutcome o = classify_shot(mid, opts);
    if (o == ShotOutcome::turns_up)
      lo = mid;
    else if (o == ShotOutcome::crosses_zero)
      hi = mid;
    else
      break;
  }

  const Trajectory under = integrate(lo, opts, true);
  const Trajectory over = integrate(hi, opts, true);
  const std::size_t common = std::min(under.w.size(), over.w.size());
  std::size_t match = 0;
  for (std::size_t m = 1; m < common; ++m) {
    const double avg = 0.5 * (under.w[m] + over.w[m]);
    const double dp = 0.5 * (under.p[m] + over.p[m]);
    if (!(avg > 0.0) || !(dp < 0.0) || std::abs(under.w[m] - over.w[m]) > opts.match_rel * avg) break;
    match = m;
  }
  if (static_cast<double>(match) * opts.step < 4.0)
    throw SolverError(SolverError::Kind::bracket, "shoot_w0: separatrix lost before the decay region");
  std::vector<double> w(match + 1);
  std::vector<double> dw(match + 1);
  for (std::size_t m = 0; m <= match; ++m) {
    w[m] = 0.5 * (under.w[m] + over.w[m]);
    dw[m] = 0.5 * (under.p[m] + over.p[m]);
  }

  GroundStateProfile gs;
  gs.shape = std::make_shared<const SolitonShape>(opts.step, std::move(w), std::move(dw));
  gs.b0 = 0.5 * (lo + hi);
  gs.step = opts.step;
  gs.w0 = RadialField(grid);
  for (std::size_t j = 0; j < grid->size(); ++j) gs.w0.values[j] = (*gs.shape)(grid->node(j));

  gs.C0 = mass(gs.w0);
  gs.C1 = interaction(gs.w0, gs.w0);
  const double K = kinetic(gs.w0);
  gs.S = std::sqrt(gs.C1 * gs.C1 / (gs.C0 * K * K * K));

  const RadialField lap = neg_laplacian(gs.w0);
  double res = 0.0;
  for (std::size_t j = 0; j < grid->size(); ++j) {
    const double x = gs.w0.values[j];
    res = std::max(res, std::abs(lap.values[j] + x - x * x * x));
  }
  gs.ode_residual = res;
  if (res > opts.tol)
    throw SolverError(SolverError::Kind::residual, "shoot_w0: ODE residual above tolerance");
  return gs;
}

double soliton_wavenumber(double a, double mu, const GroundStateProfile& gs) { return gs.C0 / (mu * a * a); }

double least_energy(double a, double mu, const GroundStateProfile& gs) {
  return gs.C0 * gs.C1 / (8.0 * mu * mu * a * a);
}

ScaledSoliton scaled_soliton(double a, double mu, const GroundStateProfile& gs, GridPtr grid, double tail_tol) {
  if (!(a > 0.0) || !(mu > 0.0)) throw InvalidArgument("scaled_soliton: a and mu must be positive");
  const double kappa = soliton_wavenumber(a, mu, gs);
  const double amp = kappa / std::sqrt(mu);
  ScaledSoliton out;
  out.a = a;
  out.mu = mu;
  out.lambda = -gs.C0 * gs.C0 / (mu * mu * a * a * a * a);
  out.level = least_energy(a, mu, gs);
  if ((*gs.shape)(kappa * grid->r_max()) > tail_tol * gs.b0)
    throw TailError("scaled_soliton: profile is not negligible at r_max (mu a^2 too large for this grid)");
  out.w = RadialField(grid);
  for (std::size_t j = 0; j < grid->size(); ++j) out.w.values[j] = amp * (*gs.shape)(kappa * grid->node(j));
  return out;
}

double scalar_I(double mu, const RadialField& w) { return 0.5 * kinetic(w) - 0.25 * mu * interaction(w, w); }

std::vector<DilationProfileRow> dilation_profiles(const RadialField& w, double mu, double beta,
                                                  const std::vector<double>& s_values) {
  const double K = kinetic(w);
  const double Q = interaction(w, w);
  std::vector<DilationProfileRow> rows;
  rows.reserve(s_values.size());
  for (double s : s_values) {
    const double e2 = std::exp(2.0 * s);
    const double e3 = std::exp(3.0 * s);
    rows.push_back({s, 0.5 * e2 * K - 0.25 * e3 * mu * Q, e2 * (K - 0.75 * std::exp(s) * (mu + beta) * Q)});
  }
  return rows;
}

double gn_quotient(const RadialField& w) {
  const double m = mass(w);
  const double k = kinetic(w);
  const double q = interaction(w, w);
  return m * k * k * k / (q * q);
}

GnReport gn_constant_check(const GroundStateProfile& gs, const FieldList& trials, double rel_tol) {
  if (trials.empty()) throw InvalidArgument("gn_constant_check: no trial fields");
  GnReport rep;
  rep.inverse_S2 = 1.0 / (gs.S * gs.S);
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const double q = gn_quotient(trials[i]);
    rep.quotients.push_back(q);
    if (q < rep.inverse_S2 * (1.0 - rel_tol)) rep.violations.push_back(i);
  }
  rep.ok = rep.violations.empty();
  return rep;
}

double overlap_integral(const SolitonShape& shape, double amp1, double kappa1, double amp2, double kappa2) {
  constexpr std::size_t kNodes = 8000;
  const double r_cut = 40.0 / (kappa1 + kappa2);
  const double h = r_cut / static_cast<double>(kNodes);
  double acc = 0.0;
  for (std::size_t j = 1; j <= kNodes; ++j) {
    const double r = static_cast<double>(j) * h;
    const double p1 = amp1 * shape(kappa1 * r);
    const double p2 = amp2 * shape(kappa2 * r);
    acc += (j == kNodes ? 0.5 : 1.0) * r * r * p1 * p1 * p2 * p2;
  }
  return 4.0 * kPi * h * acc;
}

}  // namespace normwave

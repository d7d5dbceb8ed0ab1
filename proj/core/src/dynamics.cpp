#include "normwave/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>

#include "normwave/error.hpp"

namespace normwave {

namespace {

// Time is counted in ticks of dt_base / 2^kMaxLevel so that halved steps and
// sample instants stay exactly commensurate.
constexpr int kMaxLevel = 30;

std::vector<double> frequencies(const std::vector<ComplexField>& psi, const SystemParams& p, std::size_t j) {
  const std::size_t n = psi[j].size();
  std::vector<double> nu(n, 0.0);
  for (std::size_t m = 0; m < p.k; ++m) {
    const double b = p.b(m, j);
    if (b == 0.0) continue;
    for (std::size_t r = 0; r < n; ++r) nu[r] += b * std::norm(psi[m][r]);
  }
  return nu;
}

double field_kinetic(const RadialGrid& g, const ComplexField& f) {
  const RealBand& S = g.stiffness();
  const std::size_t n = f.size();
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    Complex row{};
    for (std::size_t m = (j >= kStencilHalfWidth ? j - kStencilHalfWidth : 0);
         m <= std::min(n - 1, j + kStencilHalfWidth); ++m)
      row += S(j, m) * f[m];
    acc += std::real(std::conj(f[j]) * row);
  }
  return acc;
}

// 4 Im sum_j int conj(Phi_j) r d_r Phi_j, second-order differences.
double variance_rate(const WaveState& s) {
  const auto& g = *s.grid;
  const auto w = g.weights();
  const double h = g.spacing();
  double acc = 0.0;
  for (const auto& f : s.psi) {
    const std::size_t n = f.size();
    for (std::size_t j = 0; j < n; ++j) {
      Complex d;
      if (j == 0)
        d = (f[1] - f[0]) / h;
      else if (j + 1 == n)
        d = (f[j] - f[j - 1]) / h;
      else
        d = (f[j + 1] - f[j - 1]) / (2.0 * h);
      acc += w[j] * g.node(j) * std::imag(std::conj(f[j]) * d);
    }
  }
  return 4.0 * acc;
}

void check_components(const WaveState& s, const SystemParams& p) {
  if (!s.grid) throw InvalidArgument("wave state has no grid");
  if (s.psi.size() != p.k) throw InvalidArgument("wave state component count does not match k");
  for (const auto& f : s.psi)
    if (f.size() != s.grid->size()) throw InvalidArgument("wave state size does not match grid");
}

}  // namespace

void phase_rotate(std::vector<ComplexField>& psi, const SystemParams& p, double tau) {
  std::vector<std::vector<double>> nu(p.k);
  for (std::size_t j = 0; j < p.k; ++j) nu[j] = frequencies(psi, p, j);
  for (std::size_t j = 0; j < p.k; ++j)
    for (std::size_t r = 0; r < psi[j].size(); ++r) psi[j][r] *= std::polar(1.0, tau * nu[j][r]);
}

WaveState make_wave(const FieldList& U, double dt) {
  if (U.empty()) throw InvalidArgument("make_wave: no components");
  if (!(dt > 0.0)) throw InvalidArgument("make_wave: dt must be positive");
  WaveState s;
  s.grid = U[0].grid;
  s.dt = dt;
  for (const auto& u : U) {
    require_same_grid(U[0], u);
    s.psi.emplace_back(u.values.begin(), u.values.end());
  }
  return s;
}

std::vector<double> moduli(const ComplexField& f) {
  std::vector<double> m(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) m[j] = std::abs(f[j]);
  return m;
}

std::vector<double> wave_masses(const WaveState& s) {
  const auto w = s.grid->weights();
  std::vector<double> out;
  for (const auto& f : s.psi) {
    double acc = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) acc += w[j] * std::norm(f[j]);
    out.push_back(acc);
  }
  return out;
}

double wave_kinetic(const WaveState& s) {
  double acc = 0.0;
  for (const auto& f : s.psi) acc += field_kinetic(*s.grid, f);
  return acc;
}

double wave_quartic(const WaveState& s, const SystemParams& p) {
  check_components(s, p);
  const auto w = s.grid->weights();
  double acc = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    double local = 0.0;
    for (std::size_t a = 0; a < p.k; ++a)
      for (std::size_t b = 0; b < p.k; ++b) local += p.b(a, b) * std::norm(s.psi[a][j]) * std::norm(s.psi[b][j]);
    acc += w[j] * local;
  }
  return acc;
}

double wave_energy(const WaveState& s, const SystemParams& p) {
  return 0.5 * wave_kinetic(s) - 0.25 * wave_quartic(s, p);
}

double wave_pohozaev(const WaveState& s, const SystemParams& p) {
  return wave_kinetic(s) - 0.75 * wave_quartic(s, p);
}

double wave_variance(const WaveState& s) {
  const auto w = s.grid->weights();
  double acc = 0.0;
  for (const auto& f : s.psi)
    for (std::size_t j = 0; j < f.size(); ++j) {
      const double r = s.grid->node(j);
      acc += w[j] * r * r * std::norm(f[j]);
    }
  return acc;
}

double max_phase(const WaveState& s, const SystemParams& p, double dt) {
  double top = 0.0;
  for (std::size_t j = 0; j < p.k; ++j) {
    const std::vector<double> nu = frequencies(s.psi, p, j);
    for (double x : nu) top = std::max(top, std::abs(x));
  }
  return dt * top;
}

Propagator::Propagator(GridPtr grid, double dt, Scheme scheme)
    : grid_(std::move(grid)), dt_(dt), scheme_(scheme) {
  if (!(dt > 0.0)) throw InvalidArgument("Propagator: dt must be positive");
  const std::size_t n = grid_->size();
  const RealBand& S = grid_->stiffness();
  const auto w = grid_->weights();
  implicit_ = ComplexBand(n, kStencilHalfWidth);
  const Complex half(0.0, 0.5 * dt);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t m = (j >= kStencilHalfWidth ? j - kStencilHalfWidth : 0);
         m <= std::min(n - 1, j + kStencilHalfWidth); ++m)
      implicit_(j, m) = half * S(j, m) + (j == m ? Complex(w[j], 0.0) : Complex{});
  implicit_.factorize();
}

// out = (W - i dt/2 S) f
void Propagator::apply_explicit(const ComplexField& f, ComplexField& out) const {
  const std::size_t n = grid_->size();
  const RealBand& S = grid_->stiffness();
  const auto w = grid_->weights();
  const Complex half(0.0, 0.5 * dt_);
  for (std::size_t j = 0; j < n; ++j) {
    Complex row{};
    for (std::size_t m = (j >= kStencilHalfWidth ? j - kStencilHalfWidth : 0);
         m <= std::min(n - 1, j + kStencilHalfWidth); ++m)
      row += S(j, m) * f[m];
    out[j] = w[j] * f[j] - half * row;
  }
}

int Propagator::advance(std::vector<ComplexField>& psi, const SystemParams& p) const {
  const std::size_t n = grid_->size();
  const std::size_t k = psi.size();
  int sweeps = 1;
  if (scheme_ == Scheme::strang) {
    phase_rotate(psi, p, 0.5 * dt_);
    ComplexField rhs(n);
    for (auto& f : psi) {
      apply_explicit(f, rhs);
      implicit_.solve_in_place(rhs);
      f.swap(rhs);
    }
    phase_rotate(psi, p, 0.5 * dt_);
  } else {
    // (W + i dt/2 S) Phi' = (W - i dt/2 S) Phi + i dt W N_half (Phi' + Phi)/2,
    // N_half = sum_k beta_kj (|Phi'_k|^2 + |Phi_k|^2)/2.
    constexpr int kMaxSweeps = 80;
    const auto w = grid_->weights();
    std::vector<ComplexField> base(k, ComplexField(n));
    double scale = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      apply_explicit(psi[j], base[j]);
      for (const Complex& z : psi[j]) scale = std::max(scale, std::abs(z));
    }
    std::vector<ComplexField> next = psi;
    std::vector<ComplexField> trial(k, ComplexField(n));
    double change = 0.0;
    double prev_change = std::numeric_limits<double>::infinity();
    for (sweeps = 1; sweeps <= kMaxSweeps; ++sweeps) {
      change = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t r = 0; r < n; ++r) {
          double nu = 0.0;
          for (std::size_t m = 0; m < k; ++m)
            nu += p.b(m, j) * 0.5 * (std::norm(next[m][r]) + std::norm(psi[m][r]));
          trial[j][r] = base[j][r] + Complex(0.0, dt_ * w[r] * nu * 0.5) * (next[j][r] + psi[j][r]);
        }
        implicit_.solve_in_place(trial[j]);
      }
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t r = 0; r < n; ++r) change = std::max(change, std::abs(trial[j][r] - next[j][r]));
      next.swap(trial);
      if (!std::isfinite(change)) break;
      // Stop at the tolerance, or once rounding noise stops the contraction.
      if (change <= 1e-14 * scale || (change <= 1e-11 * scale && change >= 0.5 * prev_change)) break;
      prev_change = change;
    }
    if (!(change <= 1e-11 * scale))
      throw SolverError(SolverError::Kind::no_convergence, "step: implicit Crank-Nicolson iteration did not converge");
    psi.swap(next);
  }
  for (const auto& f : psi)
    for (const Complex& z : f)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw SolverError(SolverError::Kind::divergence, "step: non-finite values");
  return std::min(sweeps, 80);
}

WaveState step(const WaveState& state, const SystemParams& p, Scheme scheme) {
  p.validate();
  check_components(state, p);
  if (max_phase(state, p, state.dt) > kPhaseLimit)
    throw InvalidArgument("step: dt times the nonlinear frequency exceeds the phase bound");
  WaveState out = state;
  Propagator(state.grid, state.dt, scheme).advance(out.psi, p);
  out.t += state.dt;
  return out;
}

TrajectoryDiagnostics evolve(const FieldList& init, const SystemParams& p, double T, const EvolveOptions& opts) {
  require_components(init, p);
  return evolve(make_wave(init, opts.dt), p, T, opts);
}

TrajectoryDiagnostics evolve(WaveState state, const SystemParams& p, double T, const EvolveOptions& opts) {
  p.validate();
  check_components(state, p);
  if (!(T > 0.0)) throw InvalidArgument("evolve: horizon must be positive");
  if (!(opts.dt > 0.0)) throw InvalidArgument("evolve: dt must be positive");
  const double per_sample = opts.sample_interval / opts.dt;
  const auto sample_steps = static_cast<std::int64_t>(std::llround(per_sample));
  if (sample_steps < 1 || std::abs(per_sample - static_cast<double>(sample_steps)) > 1e-9 * per_sample)
    throw InvalidArgument("evolve: sample_interval must be a positive multiple of dt");
  const std::int64_t unit = std::int64_t{1} << kMaxLevel;
  const std::int64_t sample_ticks = sample_steps * unit;
  const std::int64_t end_ticks = static_cast<std::int64_t>(std::ceil(T / opts.dt - 1e-9)) * unit;

  TrajectoryDiagnostics tr;
  tr.sample_interval = opts.sample_interval;
  const double t0 = state.t;
  int level = 0;
  auto record = [&](double t) {
    state.t = t;
    tr.times.push_back(t);
    tr.masses.push_back(wave_masses(state));
    const double K = wave_kinetic(state);
    const double Q = wave_quartic(state, p);
    tr.kinetic.push_back(K);
    tr.energy.push_back(0.5 * K - 0.25 * Q);
    tr.pohozaev.push_back(K - 0.75 * Q);
    tr.variance.push_back(wave_variance(state));
    std::vector<double> sups;
    for (const auto& f : state.psi) {
      double m = 0.0;
      for (const Complex& z : f) m = std::max(m, std::abs(z));
      sups.push_back(m);
    }
    tr.sup_norms.push_back(std::move(sups));
    tr.dt.push_back(opts.dt / static_cast<double>(std::int64_t{1} << level));
    if (opts.observer) opts.observer(state);
  };
  auto sup_all = [&]() {
    double m = 0.0;
    for (const auto& f : state.psi)
      for (const Complex& z : f) m = std::max(m, std::abs(z));
    return m;
  };

  auto trace = [&](double t, double dt, double K) {
    if (!opts.record_steps) return;
    tr.step_times.push_back(t);
    tr.step_variance.push_back(wave_variance(state));
    tr.step_pohozaev.push_back(K - 0.75 * wave_quartic(state, p));
    tr.step_kinetic.push_back(K);
    tr.step_dt.push_back(dt);
  };

  record(t0);
  trace(t0, 0.0, wave_kinetic(state));
  const double sup0 = sup_all();
  const double nu0 = max_phase(state, p, 1.0);
  std::vector<std::unique_ptr<Propagator>> props(kMaxLevel + 1);
  std::int64_t ticks = 0;
  while (ticks < end_ticks) {
    double dt = opts.dt / static_cast<double>(std::int64_t{1} << level);
    if (opts.adaptive) {
      const double nu = max_phase(state, p, 1.0);
      while (level < kMaxLevel && (nu * dt > kPhaseLimit || (nu0 > 0.0 && nu * dt > opts.frequency_growth * nu0 * opts.dt))) {
        ++level;
        dt *= 0.5;
      }
      if (dt < opts.dt_floor) {
        tr.blowup_flag = true;
        tr.blowup_time = t0 + static_cast<double>(ticks) / static_cast<double>(unit) * opts.dt;
        break;
      }
    }
    if (!props[level]) props[level] = std::make_unique<Propagator>(state.grid, dt, opts.scheme);
    props[level]->advance(state.psi, p);
    ticks += std::int64_t{1} << (kMaxLevel - level);
    state.dt = dt;
    const double t = t0 + static_cast<double>(ticks) / static_cast<double>(unit) * opts.dt;
    const double K = wave_kinetic(state);
    double M = 0.0;
    for (double m : wave_masses(state)) M += m;
    const double h = state.grid->spacing();
    if (sup_all() > opts.blowup_factor * sup0 || h * h * K > opts.resolution_limit * opts.resolution_limit * M) {
      tr.blowup_flag = true;
      tr.blowup_time = t;
      record(t);
      break;
    }
    trace(t, dt, K);
    if (ticks % sample_ticks == 0) record(t);
  }
  return tr;
}

VirialReport virial_check(const TrajectoryDiagnostics& traj) {
  VirialReport rep;
  auto compare = [&](double fpp, double G, double K, double t) {
    const double target = 8.0 * G;
    const double rel = std::abs(fpp - target) / std::max(std::abs(target), 8e-6 * K);
    if (rel > rep.mismatch) {
      rep.mismatch = rel;
      rep.worst_time = t;
    }
    ++rep.samples;
  };

  const std::size_t n = traj.step_times.size();
  if (n >= 5) {
    for (std::size_t i = 2; i + 2 < n; ++i) {
      const double h = traj.step_dt[i + 2];
      if (traj.step_dt[i - 1] != h || traj.step_dt[i] != h || traj.step_dt[i + 1] != h) continue;
      const double fpp =
          (traj.step_variance[i + 2] - 2.0 * traj.step_variance[i] + traj.step_variance[i - 2]) / (4.0 * h * h);
      compare(fpp, traj.step_pohozaev[i], traj.step_kinetic[i], traj.step_times[i]);
    }
  } else {
    // A blow-up sample at the end may be off the sampling lattice and is dropped.
    std::size_t m = traj.times.size();
    if (traj.blowup_flag && m > 0) {
      const double k = (traj.times.back() - traj.times.front()) / traj.sample_interval;
      if (std::abs(k - std::round(k)) > 1e-9) --m;
    }
    const double dt2 = traj.sample_interval * traj.sample_interval;
    for (std::size_t i = 1; i + 1 < m; ++i) {
      const double fpp = (traj.variance[i + 1] - 2.0 * traj.variance[i] + traj.variance[i - 1]) / dt2;
      compare(fpp, traj.pohozaev[i], traj.kinetic[i], traj.times[i]);
    }
  }
  if (rep.samples == 0) throw InvalidArgument("virial_check: not enough samples for a centered difference");
  return rep;
}

GProfile g_profile(const FieldList& U, const SystemParams& p, int samples, double span) {
  if (samples < 3) throw InvalidArgument("g_profile: need at least three samples");
  const double A = kinetic_sum(U);
  const double B = quartic_sum(U, p);
  if (!(B > 0.0)) throw UndefinedQuotient("g_profile: quartic term is not positive");
  GProfile out;
  out.t_U = 4.0 * A / (3.0 * B);
  for (int i = 0; i < samples; ++i) {
    const double t = out.t_U * std::exp(span * (2.0 * i / (samples - 1) - 1.0));
    out.t.push_back(t);
    out.g.push_back(0.5 * t * t * A - 0.25 * t * t * t * B);
  }
  return out;
}

InstabilityReport instability_experiment(const CriticalPoint& cp, double s, const SystemParams& p,
                                         const InstabilityOptions& opts) {
  p.validate();
  require_components(cp.U, p);
  if (!(s >= 0.0)) throw InvalidArgument("instability_experiment: s must be non-negative");
  for (std::size_t i = 0; i < p.k; ++i) {
    if (!(cp.lambda.at(i) < 0.0)) throw InvalidArgument("instability_experiment: multipliers must be negative");
    for (double x : cp.U[i].values)
      if (!(x > 0.0)) throw InvalidArgument("instability_experiment: ground state must be positive");
  }
  if (!(std::abs(pohozaev_G(cp.U, p)) < opts.ground_tol * (1.0 + std::abs(cp.level))))
    throw InvalidArgument("instability_experiment: state is not on the Pohozaev manifold");

  InstabilityReport rep;
  rep.s = s;
  rep.d = cp.level;
  const FieldList U0 = dilate(s, cp.U);
  rep.J0 = energy_J(U0, p);
  rep.G0 = pohozaev_G(U0, p);
  rep.delta = rep.d - rep.J0;

  WaveState w0 = make_wave(U0, opts.evolve.dt);
  rep.f0 = wave_variance(w0);
  rep.fprime0 = variance_rate(w0);
  rep.traj = evolve(w0, p, opts.T, opts.evolve);
  rep.traj.delta = rep.delta;
  const auto& tr = rep.traj;

  double drift = 0.0;
  for (double e : tr.energy) drift = std::max(drift, std::abs(e - tr.energy.front()));
  rep.g_tolerance = 1e-3 * std::abs(rep.delta) + 3.0 * drift;

  if (rep.delta > 0.0) {
    const double b = rep.fprime0;
    rep.parabola_root = (b + std::sqrt(b * b + 16.0 * rep.delta * rep.f0)) / (8.0 * rep.delta);
  }

  rep.negative_G = true;
  rep.below_parabola = true;
  rep.energy_gap_bound = true;
  const std::size_t pre = tr.blowup_flag ? tr.times.size() - 1 : tr.times.size();
  for (std::size_t i = 0; i < pre; ++i) {
    const double t = tr.times[i] - tr.times.front();
    if (tr.pohozaev[i] > -rep.delta + rep.g_tolerance) rep.negative_G = false;
    const double bound = rep.f0 + rep.fprime0 * t - 4.0 * rep.delta * t * t;
    if (tr.variance[i] > bound + 1e-6 * rep.f0 + 4.0 * rep.g_tolerance * t * t) rep.below_parabola = false;
    if (tr.pohozaev[i] < 0.0 && tr.pohozaev[i] > tr.energy[i] - rep.d + rep.g_tolerance) rep.energy_gap_bound = false;
  }
  double kmax = 0.0;
  for (double k : tr.kinetic) kmax = std::max(kmax, k);
  rep.kinetic_growth = kmax / tr.kinetic.front();
  const bool early = tr.blowup_flag && rep.delta > 0.0 && *tr.blowup_time - tr.times.front() < rep.parabola_root;
  rep.breakdown = early || rep.kinetic_growth >= 10.0;
  rep.passed = rep.delta > 0.0 && rep.negative_G && rep.below_parabola && rep.breakdown && rep.energy_gap_bound;
  return rep;
}

}  // namespace normwave

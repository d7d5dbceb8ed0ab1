#pragma once

// Radial time evolution of -i d_t Phi_j = Lap Phi_j + sum_k beta_kj |Phi_k|^2 Phi_j.
//
// The default scheme is Crank-Nicolson with the nonlinearity averaged over the
// two time levels, which conserves the discrete masses and energy and keeps
// every discrete stationary state an exact rotating wave. The implicit step is
// solved by fixed-point iteration on the linear Crank-Nicolson factorization,
// built from the same stiffness and mass matrices as the elliptic solvers.
// Strang splitting with exact phase substeps is kept as an alternative.

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "normwave/ground_state.hpp"
#include "normwave/radial.hpp"

namespace normwave {

using Complex = std::complex<double>;
using ComplexField = std::vector<Complex>;

struct WaveState {
  GridPtr grid;
  std::vector<ComplexField> psi;
  double t = 0.0;
  double dt = 1e-4;
};

WaveState make_wave(const FieldList& U, double dt);

/// Per-component discrete mass of |Phi_j|.
std::vector<double> wave_masses(const WaveState& s);
/// sum_j int |grad Phi_j|^2.
double wave_kinetic(const WaveState& s);
/// sum_{i,j} beta_ij int |Phi_i|^2 |Phi_j|^2.
double wave_quartic(const WaveState& s, const SystemParams& p);
/// Complex energy: kinetic / 2 - quartic / 4.
double wave_energy(const WaveState& s, const SystemParams& p);
/// kinetic - 3/4 quartic.
double wave_pohozaev(const WaveState& s, const SystemParams& p);
/// int |x|^2 sum_j |Phi_j|^2.
double wave_variance(const WaveState& s);
/// Largest dt * sum_k beta_kj |Phi_k|^2 over nodes and components.
double max_phase(const WaveState& s, const SystemParams& p, double dt);
std::vector<double> moduli(const ComplexField& f);

enum class Scheme { conservative, strang };

/// Exact solution of the nonlinear substep: Phi_j <- exp(i tau sum_k beta_kj |Phi_k|^2) Phi_j.
void phase_rotate(std::vector<ComplexField>& psi, const SystemParams& p, double tau);

/// Crank-Nicolson factorization for one time step, reusable across steps.
class Propagator {
 public:
  Propagator(GridPtr grid, double dt, Scheme scheme = Scheme::conservative);
  double dt() const { return dt_; }
  Scheme scheme() const { return scheme_; }
  /// One step in place. Returns the number of fixed-point sweeps (1 for Strang).
  /// Throws SolverError(divergence) on non-finite values and
  /// SolverError(no_convergence) when the implicit step does not settle.
  int advance(std::vector<ComplexField>& psi, const SystemParams& p) const;

 private:
  void apply_explicit(const ComplexField& f, ComplexField& out) const;

  GridPtr grid_;
  double dt_;
  Scheme scheme_;
  ComplexBand implicit_;
};

/// Bound on dt * max nonlinear frequency enforced by step().
inline constexpr double kPhaseLimit = 0.5;

/// One step with state.dt. Throws InvalidArgument when the phase bound is exceeded.
WaveState step(const WaveState& state, const SystemParams& p, Scheme scheme = Scheme::conservative);

struct TrajectoryDiagnostics {
  std::vector<double> times;
  std::vector<std::vector<double>> masses;  // [sample][component]
  std::vector<double> energy;
  std::vector<double> variance;             // f(t)
  std::vector<double> pohozaev;             // G(t)
  std::vector<double> kinetic;
  std::vector<std::vector<double>> sup_norms;
  std::vector<double> dt;                   // step in use at each sample
  double sample_interval = 0.0;
  // Per-step trace of f and G, used for the virial identity.
  std::vector<double> step_times;
  std::vector<double> step_variance;
  std::vector<double> step_pohozaev;
  std::vector<double> step_kinetic;
  std::vector<double> step_dt;              // step that ended at step_times[i]
  bool blowup_flag = false;
  std::optional<double> blowup_time;
  std::optional<double> delta;
};

struct EvolveOptions {
  double dt = 1e-4;
  double sample_interval = 1e-2;  // must be a multiple of dt
  double blowup_factor = 50.0;
  // Blow-up is also flagged once h * sqrt(K / M) exceeds this, where the
  // collapsing core is no longer resolved by the grid.
  double resolution_limit = 1.0 / 16.0;
  double dt_floor = 1e-9;
  // dt is halved each time the peak nonlinear frequency grows by this factor
  // over its initial value, so runs started from dt and dt/2 use nested steps.
  double frequency_growth = 2.0;
  bool adaptive = true;
  bool record_steps = true;
  Scheme scheme = Scheme::conservative;
  std::function<void(const WaveState&)> observer;  // called at every sample
};

/// Integrate to T or until blow-up is flagged. Samples at t = 0 and every
/// sample_interval; a final sample is recorded at the blow-up time.
TrajectoryDiagnostics evolve(const FieldList& init, const SystemParams& p, double T, const EvolveOptions& opts = {});
TrajectoryDiagnostics evolve(WaveState init, const SystemParams& p, double T, const EvolveOptions& opts = {});

struct VirialReport {
  double mismatch = 0.0;     // max relative |f'' - 8G|
  std::size_t samples = 0;   // interior samples compared
  double worst_time = 0.0;
};

/// Centered second differences of f against 8G before blow-up, relative to
/// |8G| (floored at 8e-6 times the kinetic energy). With a per-step trace the
/// stencil spans two steps on each side, which cancels the period-two ringing
/// of stiff modes under Crank-Nicolson, and stencils crossing a change of step
/// are skipped. Otherwise the uniform samples are used. Throws InvalidArgument
/// when no stencil fits.
VirialReport virial_check(const TrajectoryDiagnostics& traj);

struct GProfile {
  double t_U = 0.0;
  std::vector<double> t;
  std::vector<double> g;
};

/// g(t) = t^2 A / 2 - t^3 B / 4 on `samples` log-spaced points of [t_U e^{-span}, t_U e^{span}].
GProfile g_profile(const FieldList& U, const SystemParams& p, int samples = 81, double span = 2.0);

struct InstabilityOptions {
  double T = 5.0;
  EvolveOptions evolve;
  double ground_tol = 1e-6;  // |G| tolerance for accepting the ground state
};

struct InstabilityReport {
  double s = 0.0;
  double d = 0.0;        // ground-state level
  double J0 = 0.0;       // J(s * u)
  double G0 = 0.0;
  double delta = 0.0;    // d - J(s * u)
  double f0 = 0.0;
  double fprime0 = 0.0;
  double parabola_root = 0.0;
  double kinetic_growth = 0.0;
  double g_tolerance = 0.0;
  bool negative_G = false;     // G(t) <= -delta + tolerance on all pre-blow-up samples
  bool below_parabola = false; // f(t) <= f0 + f'(0) t - 4 delta t^2 + tolerance
  bool breakdown = false;      // blow-up before the parabola root, or kinetic growth >= 10
  bool energy_gap_bound = false;  // G <= J - d wherever G < 0
  bool passed = false;
  TrajectoryDiagnostics traj;
};

/// Evolve s * u from a ground state and audit the virial signature of blow-up.
/// Throws InvalidArgument when cp is not a converged ground state.
InstabilityReport instability_experiment(const CriticalPoint& cp, double s, const SystemParams& p,
                                         const InstabilityOptions& opts = {});

}  // namespace normwave

#pragma once

// The scalar soliton w0 of -Lap w + w = w^3 and everything that follows from
// it by scaling: the constants C0 = int w0^2, C1 = int w0^4, the prescribed-mass
// profiles w_{a,mu}, the least-energy level l(a,mu) and the Gagliardo-Nirenberg
// constant.

#include <memory>
#include <optional>
#include <vector>

#include "normwave/radial.hpp"

namespace normwave {

/// Continuous representation of w0: dense RK4 samples with cubic Hermite
/// interpolation, continued beyond the matching radius by the exact decaying
/// solution c e^{-r}/r of the linearized equation.
class SolitonShape {
 public:
  SolitonShape(double step, std::vector<double> w, std::vector<double> dw);

  double operator()(double r) const;
  double derivative(double r) const;
  double matching_radius() const { return step_ * static_cast<double>(w_.size() - 1); }
  double center() const { return w_.front(); }

 private:
  double step_;
  std::vector<double> w_;
  std::vector<double> dw_;
};

using ShapePtr = std::shared_ptr<const SolitonShape>;

struct ShootingOptions {
  double tol = 1e-8;            // bound on the discrete ODE residual
  double step = 1.5e-4;         // RK4 step
  double classify_radius = 25;  // integrate at most this far when classifying
  double b_low = 2.0;           // bisection bracket on w(0)
  double b_high = 6.0;
  double match_rel = 1e-9;      // relative spread of the final bracket where the tail takes over
};

/// Outcome of integrating the radial IVP from a given center value.
enum class ShotOutcome { crosses_zero, turns_up, undecided };

ShotOutcome classify_shot(double b, const ShootingOptions& opts);

struct GroundStateProfile {
  ShapePtr shape;
  RadialField w0;
  double b0 = 0.0;
  double C0 = 0.0;
  double C1 = 0.0;
  double S = 0.0;
  double ode_residual = 0.0;
  double step = 0.0;
};

/// Bisection on w(0) for the positive decaying solution; constants by
/// quadrature on `grid`. Throws SolverError on bracket failure or when the
/// residual exceeds opts.tol.
GroundStateProfile shoot_w0(GridPtr grid, const ShootingOptions& opts = {});

/// Default reference grid: 4096 nodes on (0, 30].
GridPtr reference_grid();

/// Natural wavenumber C0 / (mu a^2) of w_{a,mu}; its frequency is -kappa^2.
double soliton_wavenumber(double a, double mu, const GroundStateProfile& gs);

/// l(a, mu) = C0 C1 / (8 mu^2 a^2).
double least_energy(double a, double mu, const GroundStateProfile& gs);

struct ScaledSoliton {
  double a = 0.0;
  double mu = 0.0;
  double lambda = 0.0;
  double level = 0.0;
  RadialField w;
};

/// w_{a,mu}(r) = (C0 / (mu^{3/2} a^2)) w0(C0 r / (mu a^2)) sampled on `grid`.
/// Throws TailError when the profile is not negligible at r_max.
ScaledSoliton scaled_soliton(double a, double mu, const GroundStateProfile& gs, GridPtr grid,
                             double tail_tol = 1e-9);

/// I_mu(w) = kinetic/2 - mu int w^4 / 4.
double scalar_I(double mu, const RadialField& w);

struct DilationProfileRow {
  double s;
  double phi;  // I_mu(s * w)
  double psi;  // d/ds I_{mu+beta}(s * w)
};

/// Closed forms in s with K = kinetic(w), Q = int w^4 taken by quadrature.
std::vector<DilationProfileRow> dilation_profiles(const RadialField& w, double mu, double beta,
                                                  const std::vector<double>& s_values);

/// (int w^2)(int |grad w|^2)^3 / (int w^4)^2, bounded below by 1/S^2.
double gn_quotient(const RadialField& w);

struct GnReport {
  double inverse_S2 = 0.0;
  std::vector<double> quotients;
  std::vector<std::size_t> violations;  // trials below 1/S^2 beyond tolerance
  bool ok = true;
};

GnReport gn_constant_check(const GroundStateProfile& gs, const FieldList& trials, double rel_tol = 1e-6);

/// 4 pi int p1^2 p2^2 r^2 dr for p_i(r) = amp_i * w0(kappa_i r), evaluated on an
/// auxiliary grid adapted to the two length scales (no truncation by a solver grid).
double overlap_integral(const SolitonShape& shape, double amp1, double kappa1, double amp2, double kappa2);

}  // namespace normwave

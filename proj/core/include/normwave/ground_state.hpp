#pragma once

// Ground states of the k-component system by minimization of the
// dilation-invariant quotient R = 8A^3/(27B^2) over products of L^2 spheres,
// Pohozaev projection, multiplier extraction, Newton refinement of the
// discrete KKT system, and continuation in the coupling matrix.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "normwave/radial.hpp"
#include "normwave/soliton.hpp"

namespace normwave {

struct CriticalPoint {
  FieldList U;
  std::vector<double> lambda;
  double level = 0.0;
  double pohozaev_residual = 0.0;
  double grad_norm = 0.0;
  std::optional<int> morse_index;
  int iterations = 0;
};

/// Grid whose truncation radius is `decay_lengths` times the widest natural
/// soliton length of the system, 1/kappa with kappa = C0 / max_i sum_j beta_ij a_j^2.
GridPtr natural_grid(const SystemParams& p, const GroundStateProfile& gs, std::size_t n = 4096,
                     double decay_lengths = 30.0);

/// Product test state (w_{a_i, C0/a_i^2})_i, dilated to the natural length scale
/// of the system (the quotient R does not see the dilation).
FieldList product_test_state(const SystemParams& p, const GroundStateProfile& gs, GridPtr grid);

/// Decoupled state (w_{a_i, beta_ii})_i.
FieldList decoupled_state(const SystemParams& p, const GroundStateProfile& gs, GridPtr grid);

struct Projection {
  double s_star = 0.0;
  FieldList U;
};

/// Unique dilation onto G = 0: e^{s*} = 4A/(3B). Throws UndefinedQuotient if B <= 0.
Projection project_pohozaev(const FieldList& U, const SystemParams& p, double tail_tol = 1e-10);

/// lambda_i = (kinetic(u_i) - sum_j beta_ij int u_i^2 u_j^2) / a_i^2.
std::vector<double> extract_multipliers(const FieldList& U, const SystemParams& p);

/// Relative constrained-gradient residual max_i |g_i - lambda_i u_i| / (|lambda_i| a_i).
double constrained_grad_norm(const FieldList& U, const SystemParams& p, const std::vector<double>& lambda);

/// Fill multipliers, level and residuals for a state.
CriticalPoint make_critical_point(FieldList U, const SystemParams& p);

struct DescentOptions {
  int max_iter = 20000;
  double grad_tol = 1e-8;        // constrained-gradient residual of the projected state
  int check_every = 25;
  double rel_tol = 1e-13;        // stall criterion on the relative decrease of R
  int stall_window = 20;         // consecutive stalled iterations required
  double collapse_ratio = 1e-2;  // kinetic-per-mass ratio signalling a component spreading out
  double perturbation = 0.0;     // relative amplitude of seeded smooth noise on init
  std::uint64_t seed = 0;
};

/// Renormalized, preconditioned Riemannian descent on R followed by Pohozaev
/// projection. Throws SolverError(no_convergence) or SolverError(collapse).
CriticalPoint minimize_rayleigh(const SystemParams& p, const FieldList& init, const DescentOptions& opts = {});

struct NewtonOptions {
  int max_iter = 40;
  double tol = 1e-10;        // relative pointwise residual of the Euler-Lagrange equations
  double basin_tol = 0.5;    // reject inputs whose constrained-gradient residual exceeds this
};

/// Newton on the square system (U, lambda): equations plus mass constraints.
/// Throws SolverError(singular) or SolverError(divergence).
CriticalPoint newton_refine(const CriticalPoint& cp, const SystemParams& p, const NewtonOptions& opts = {});

/// Relative residual used by newton_refine.
double kkt_residual(const FieldList& U, const std::vector<double>& lambda, const SystemParams& p);

/// Number of negative eigenvalues of the Hessian of the Lagrangian restricted to
/// the tangent space of the mass constraints. Empty for grids above `max_nodes`.
std::optional<int> morse_index(const CriticalPoint& cp, const SystemParams& p, std::size_t max_nodes = 1024);

struct ContinuationResult {
  std::vector<CriticalPoint> branch;
  std::optional<std::size_t> failed_at;
  std::string failure;
};

/// Newton continuation from the exact decoupled state along `beta_path`
/// (row-major k x k matrices, first one diagonal). Newton failure ends the branch.
ContinuationResult continue_in_beta(const SystemParams& p0, const std::vector<std::vector<double>>& beta_path,
                                    const GroundStateProfile& gs, GridPtr grid, const NewtonOptions& opts = {});

struct BoundsReport {
  double upper = 0.0;
  std::map<std::vector<std::size_t>, double> lower_by_subset;
  bool separated = false;  // upper < every proper-subset lower bound
};

/// C0 C1 / (8 [max_j beta_jj a_j + ((m-1)/m) max_{i!=j} beta_ij sqrt(a_i a_j)]^2) over
/// an index subset of size m; negative cross couplings do not raise the bound.
double subset_lower_bound(const SystemParams& p, const GroundStateProfile& gs, const std::vector<std::size_t>& subset);

/// C0 C1 (sum a_i^2)^3 / (8 (sum_ij beta_ij a_i^2 a_j^2)^2), the quotient at the product test state.
double product_upper_bound(const SystemParams& p, const GroundStateProfile& gs);

BoundsReport ground_state_bounds(const SystemParams& p, const GroundStateProfile& gs);

}  // namespace normwave

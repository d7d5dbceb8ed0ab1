#pragma once

// Radial discretization of H^1_rad(R^3).
//
// Nodes are r_j = j*h, j = 1..n, with r_n = r_max. Functions are handled through
// v = r*u, which is odd in r and vanishes at the origin; the Laplacian is an
// eighth-order centered stencil acting on v with odd reflection at r = 0 and
// homogeneous Dirichlet data beyond r_max. Quadrature is the trapezoid rule in
// r^2 dr with Gregory corrections at the truncation radius (the integrand
// r^2 f(r) of an even f needs none at the origin).

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "normwave/banded.hpp"

namespace normwave {

inline constexpr double kPi = 3.14159265358979323846;

/// Half-width of the Laplacian stencil.
inline constexpr std::size_t kStencilHalfWidth = 4;

class RadialGrid {
 public:
  RadialGrid(std::size_t n, double r_max);

  std::size_t size() const { return nodes_.size(); }
  double r_max() const { return r_max_; }
  double spacing() const { return h_; }
  double node(std::size_t j) const { return nodes_[j]; }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

  /// Stiffness matrix S with u^T S u the discrete integral of |grad u|^2.
  const RealBand& stiffness() const { return stiffness_; }

  /// Samples of the second-derivative stencil, c_0..c_4 (unscaled by h^2).
  static std::span<const double> stencil();

 private:
  double r_max_;
  double h_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  RealBand stiffness_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr make_grid(std::size_t n, double r_max);

/// Real samples u(r_j) of a radial function on a shared grid.
struct RadialField {
  GridPtr grid;
  std::vector<double> values;

  RadialField() = default;
  explicit RadialField(GridPtr g);
  RadialField(GridPtr g, std::vector<double> v);

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t j) const { return values[j]; }
  double& operator[](std::size_t j) { return values[j]; }

  double sup_norm() const;
  bool finite() const;
  /// |u(r_n)| relative to the sup norm.
  double tail_ratio() const;
};

using FieldList = std::vector<RadialField>;

/// Component count, masses a_i and the symmetric coupling matrix beta_ij.
struct SystemParams {
  std::size_t k = 1;
  std::vector<double> a;
  std::vector<double> beta;  // row-major k x k

  SystemParams() = default;
  SystemParams(std::vector<double> masses, std::vector<double> couplings);

  double b(std::size_t i, std::size_t j) const { return beta[i * k + j]; }
  double& b(std::size_t i, std::size_t j) { return beta[i * k + j]; }

  /// Two components: mu1 = beta_11, mu2 = beta_22, beta = beta_12.
  static SystemParams two(double a1, double a2, double mu1, double mu2, double beta12);
  /// Equal masses a, equal diagonal mu, equal off-diagonal beta.
  static SystemParams symmetric(std::size_t k, double a, double mu, double beta_off);

  /// Throws InvalidArgument unless the matrix is symmetric with positive diagonal
  /// and all masses are positive.
  void validate() const;
};

/// Discrete integral of u^2 over R^3.
double mass(const RadialField& u);
/// Discrete integral of |grad u|^2.
double kinetic(const RadialField& u);
/// Discrete integral of u^2 v^2.
double interaction(const RadialField& u, const RadialField& v);
double inner(const RadialField& u, const RadialField& v);

/// A = sum_i kinetic(u_i).
double kinetic_sum(const FieldList& U);
/// B = sum_{i,j} beta_ij interaction(u_i, u_j), over ordered pairs.
double quartic_sum(const FieldList& U, const SystemParams& p);

double energy_J(const FieldList& U, const SystemParams& p);
double pohozaev_G(const FieldList& U, const SystemParams& p);
/// 8 A^3 / (27 B^2). Throws UndefinedQuotient when B <= 0.
double rayleigh_R(const FieldList& U, const SystemParams& p);

/// (s * u)(r) = e^{3s/2} u(e^s r), resampled by eighth-order Lagrange
/// interpolation of r*u. Throws TailError when more than `tail_tol` of the
/// mass would be dropped beyond r_max.
RadialField dilate(double s, const RadialField& u, double tail_tol = 1e-10);
FieldList dilate(double s, const FieldList& U, double tail_tol = 1e-10);

/// Interpolated value u(rho) for 0 < rho; zero beyond r_max.
double evaluate(const RadialField& u, double rho);

/// -Laplacian in the quadrature inner product: W^{-1} S u.
RadialField neg_laplacian(const RadialField& u);

/// L^2 gradient of J: g_i = -Lap u_i - sum_j beta_ij u_j^2 u_i.
FieldList grad_J(const FieldList& U, const SystemParams& p);

/// Shared-grid check; throws InvalidArgument on mismatch.
void require_same_grid(const RadialField& u, const RadialField& v);
void require_components(const FieldList& U, const SystemParams& p);

}  // namespace normwave

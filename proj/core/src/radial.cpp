#include "normwave/radial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "normwave/error.hpp"

namespace normwave {

namespace {

// Eighth-order centered second derivative.
constexpr std::array<double, 5> kD2 = {-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0,
                                       -1.0 / 560.0};

// Gregory end-correction coefficients for backward differences of order 1..5.
constexpr std::array<double, 5> kGregory = {1.0 / 12.0, 1.0 / 24.0, 19.0 / 720.0, 3.0 / 160.0,
                                            863.0 / 60480.0};

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

double stencil_at(std::size_t m) { return m < kD2.size() ? kD2[m] : 0.0; }

}  // namespace

RadialGrid::RadialGrid(std::size_t n, double r_max) : r_max_(r_max) {
  if (n < 32) throw InvalidArgument("RadialGrid: need at least 32 nodes");
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw InvalidArgument("RadialGrid: r_max must be positive");
  h_ = r_max / static_cast<double>(n);
  nodes_.resize(n);
  for (std::size_t j = 0; j < n; ++j) nodes_[j] = static_cast<double>(j + 1) * h_;
  nodes_.back() = r_max;

  // Trapezoid in r^2 dr from r = 0 plus right-end Gregory corrections.
  std::vector<double> factor(n, 1.0);
  factor[n - 1] = 0.5;
  for (std::size_t order = 1; order <= kGregory.size(); ++order) {
    for (std::size_t i = 0; i <= order; ++i) {
      const double sign = (i % 2 == 0) ? 1.0 : -1.0;
      factor[n - 1 - i] -= kGregory[order - 1] * sign * binomial(static_cast<int>(order), static_cast<int>(i));
    }
  }
  weights_.resize(n);
  for (std::size_t j = 0; j < n; ++j) weights_[j] = 4.0 * kPi * h_ * nodes_[j] * nodes_[j] * factor[j];

  // S_jk = 4 pi h r_j r_k A_jk with A = -D2 on v = r u, odd reflection at the origin.
  stiffness_ = RealBand(n, kStencilHalfWidth);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t lo = j >= kStencilHalfWidth ? j - kStencilHalfWidth : 0;
    const std::size_t hi = std::min(n - 1, j + kStencilHalfWidth);
    for (std::size_t k = lo; k <= hi; ++k) {
      const std::size_t diff = j > k ? j - k : k - j;
      const double a = -(stencil_at(diff) - stencil_at(j + k + 2));
      stiffness_(j, k) = 4.0 * kPi * h_ * static_cast<double>(j + 1) * static_cast<double>(k + 1) * a;
    }
  }
}

std::span<const double> RadialGrid::stencil() { return kD2; }

GridPtr make_grid(std::size_t n, double r_max) { return std::make_shared<const RadialGrid>(n, r_max); }

RadialField::RadialField(GridPtr g) : grid(std::move(g)), values(grid->size(), 0.0) {}

RadialField::RadialField(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid->size()) throw InvalidArgument("RadialField: value count does not match grid");
}

double RadialField::sup_norm() const {
  double m = 0.0;
  for (double x : values) m = std::max(m, std::abs(x));
  return m;
}

bool RadialField::finite() const {
  return std::all_of(values.begin(), values.end(), [](double x) { return std::isfinite(x); });
}

double RadialField::tail_ratio() const {
  const double s = sup_norm();
  return s > 0.0 ? std::abs(values.back()) / s : 0.0;
}

SystemParams::SystemParams(std::vector<double> masses, std::vector<double> couplings)
    : k(masses.size()), a(std::move(masses)), beta(std::move(couplings)) {
  if (beta.size() != k * k) throw InvalidArgument("SystemParams: beta must be k x k");
}

SystemParams SystemParams::two(double a1, double a2, double mu1, double mu2, double beta12) {
  return SystemParams({a1, a2}, {mu1, beta12, beta12, mu2});
}

SystemParams SystemParams::symmetric(std::size_t k, double a, double mu, double beta_off) {
  std::vector<double> b(k * k, beta_off);
  for (std::size_t i = 0; i < k; ++i) b[i * k + i] = mu;
  return SystemParams(std::vector<double>(k, a), std::move(b));
}

void SystemParams::validate() const {
  if (k == 0) throw InvalidArgument("SystemParams: k must be at least 1");
  if (a.size() != k || beta.size() != k * k) throw InvalidArgument("SystemParams: size mismatch");
  for (std::size_t i = 0; i < k; ++i) {
    if (!(a[i] > 0.0)) throw InvalidArgument("SystemParams: masses must be positive");
    if (!(b(i, i) > 0.0)) throw InvalidArgument("SystemParams: diagonal couplings must be positive");
    for (std::size_t j = 0; j < i; ++j) {
      const double scale = std::max({1.0, std::abs(b(i, j)), std::abs(b(j, i))});
      if (std::abs(b(i, j) - b(j, i)) > 1e-14 * scale)
        throw InvalidArgument("SystemParams: beta must be symmetric");
    }
  }
}

void require_same_grid(const RadialField& u, const RadialField& v) {
  if (!u.grid || u.grid != v.grid) {
    if (!u.grid || !v.grid || u.grid->size() != v.grid->size() || u.grid->r_max() != v.grid->r_max())
      throw InvalidArgument("fields live on different grids");
  }
}

void require_components(const FieldList& U, const SystemParams& p) {
  if (U.size() != p.k)
    throw InvalidArgument("expected " + std::to_string(p.k) + " components, got " + std::to_string(U.size()));
  for (std::size_t i = 1; i < U.size(); ++i) require_same_grid(U[0], U[i]);
}

double mass(const RadialField& u) {
  const auto w = u.grid->weights();
  double acc = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) acc += w[j] * u.values[j] * u.values[j];
  return acc;
}

double inner(const RadialField& u, const RadialField& v) {
  require_same_grid(u, v);
  const auto w = u.grid->weights();
  double acc = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) acc += w[j] * u.values[j] * v.values[j];
  return acc;
}

double kinetic(const RadialField& u) {
  const auto& S = u.grid->stiffness();
  const std::size_t n = u.size();
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t lo = j >= kStencilHalfWidth ? j - kStencilHalfWidth : 0;
    const std::size_t hi = std::min(n - 1, j + kStencilHalfWidth);
    double row = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) row += S(j, k) * u.values[k];
    acc += u.values[j] * row;
  }
  return acc;
}

double interaction(const RadialField& u, const RadialField& v) {
  require_same_grid(u, v);
  const auto w = u.grid->weights();
  double acc = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double uv = u.values[j] * v.values[j];
    acc += w[j] * uv * uv;
  }
  return acc;
}

double kinetic_sum(const FieldList& U) {
  double a = 0.0;
  for (const auto& u : U) a += kinetic(u);
  return a;
}

double quartic_sum(const FieldList& U, const SystemParams& p) {
  require_components(U, p);
  double b = 0.0;
  for (std::size_t i = 0; i < p.k; ++i) {
    b += p.b(i, i) * interaction(U[i], U[i]);
    for (std::size_t j = i + 1; j < p.k; ++j) b += (p.b(i, j) + p.b(j, i)) * interaction(U[i], U[j]);
  }
  return b;
}

double energy_J(const FieldList& U, const SystemParams& p) {
  require_components(U, p);
  return 0.5 * kinetic_sum(U) - 0.25 * quartic_sum(U, p);
}

double pohozaev_G(const FieldList& U, const SystemParams& p) {
  require_components(U, p);
  return kinetic_sum(U) - 0.75 * quartic_sum(U, p);
}

double rayleigh_R(const FieldList& U, const SystemParams& p) {
  const double B = quartic_sum(U, p);
  if (!(B > 0.0)) throw UndefinedQuotient("rayleigh_R: quartic term is not positive");
  const double A = kinetic_sum(U);
  return 8.0 * A * A * A / (27.0 * B * B);
}

namespace {

// v = r u at integer lattice index m (r = m h), odd about 0, zero beyond n.
double lattice_v(const RadialField& u, long m) {
  const long n = static_cast<long>(u.size());
  if (m == 0 || m > n || m < -n) return 0.0;
  if (m < 0) return -lattice_v(u, -m);
  return u.grid->node(static_cast<std::size_t>(m - 1)) * u.values[static_cast<std::size_t>(m - 1)];
}

double interpolate_v(const RadialField& u, double rho) {
  const double h = u.grid->spacing();
  const double x = rho / h;
  const double fl = std::floor(x);
  const long base = static_cast<long>(fl);
  if (x == fl) return lattice_v(u, base);
  constexpr int kPoints = 8;
  double acc = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const long mi = base - 3 + i;
    double li = 1.0;
    for (int j = 0; j < kPoints; ++j) {
      if (j == i) continue;
      const long mj = base - 3 + j;
      li *= (x - static_cast<double>(mj)) / static_cast<double>(mi - mj);
    }
    acc += li * lattice_v(u, mi);
  }
  return acc;
}

}  // namespace

double evaluate(const RadialField& u, double rho) {
  if (!(rho > 0.0)) throw InvalidArgument("evaluate: radius must be positive");
  if (rho > u.grid->r_max() + u.grid->spacing() * static_cast<double>(kStencilHalfWidth)) return 0.0;
  return interpolate_v(u, rho) / rho;
}

RadialField dilate(double s, const RadialField& u, double tail_tol) {
  if (s == 0.0) return u;
  const auto& g = *u.grid;
  const double es = std::exp(s);
  if (es < 1.0) {
    const double cutoff = es * g.r_max();
    const auto w = g.weights();
    double lost = 0.0;
    double total = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double m = w[j] * u.values[j] * u.values[j];
      total += m;
      if (g.node(j) > cutoff) lost += m;
    }
    if (total > 0.0 && lost > tail_tol * total)
      throw TailError("dilate: dilation pushes non-negligible mass beyond r_max");
  }
  RadialField out(u.grid);
  const double amp = std::exp(1.5 * s);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double rho = es * g.node(j);
    out.values[j] = rho > g.r_max() ? 0.0 : amp * interpolate_v(u, rho) / rho;
  }
  return out;
}

FieldList dilate(double s, const FieldList& U, double tail_tol) {
  FieldList out;
  out.reserve(U.size());
  for (const auto& u : U) out.push_back(dilate(s, u, tail_tol));
  return out;
}

RadialField neg_laplacian(const RadialField& u) {
  RadialField out(u.grid);
  u.grid->stiffness().multiply(u.values, out.values);
  const auto w = u.grid->weights();
  for (std::size_t j = 0; j < out.size(); ++j) out.values[j] /= w[j];
  return out;
}

FieldList grad_J(const FieldList& U, const SystemParams& p) {
  require_components(U, p);
  FieldList g;
  g.reserve(p.k);
  for (std::size_t i = 0; i < p.k; ++i) {
    RadialField gi = neg_laplacian(U[i]);
    for (std::size_t j = 0; j < gi.size(); ++j) {
      double pot = 0.0;
      for (std::size_t m = 0; m < p.k; ++m) pot += p.b(i, m) * U[m].values[j] * U[m].values[j];
      gi.values[j] -= pot * U[i].values[j];
    }
    g.push_back(std::move(gi));
  }
  return g;
}

}  // namespace normwave

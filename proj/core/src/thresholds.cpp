#include "normwave/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <string>

#include "normwave/error.hpp"
#include "normwave/ground_state.hpp"

namespace normwave {

namespace {

void require_positive(std::initializer_list<double> xs, const char* who) {
  for (double x : xs)
    if (!(x > 0.0) || !std::isfinite(x)) throw InvalidArgument(std::string(who) + ": parameters must be positive");
}

double beta1_lhs(double a1, double a2, double mu1, double mu2) {
  return std::max(1.0 / (a1 * a1 * mu1 * mu1), 1.0 / (a2 * a2 * mu2 * mu2));
}

double beta1_rhs(double a1, double a2, double mu1, double mu2, double b) {
  return 1.0 / (a1 * a1 * (mu1 + b) * (mu1 + b)) + 1.0 / (a2 * a2 * (mu2 + b) * (mu2 + b));
}

// I_mu(s * w_{a,mu}) = l (3 e^{2s} - 2 e^{3s}).
double scalar_fiber(double l, double s) { return l * (3.0 * std::exp(2.0 * s) - 2.0 * std::exp(3.0 * s)); }

}  // namespace

double beta1(double a1, double a2, double mu1, double mu2) {
  require_positive({a1, a2, mu1, mu2}, "beta1");
  const double lhs = beta1_lhs(a1, a2, mu1, mu2);
  double lo = 0.0;
  double hi = std::max(mu1, mu2);
  while (beta1_rhs(a1, a2, mu1, mu2, hi) > lhs) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (beta1_rhs(a1, a2, mu1, mu2, mid) > lhs ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::optional<double> beta1_closed(double a1, double a2, double mu1, double mu2) {
  require_positive({a1, a2, mu1, mu2}, "beta1_closed");
  if (mu1 != mu2) return std::nullopt;
  const double lo = std::min(a1, a2);
  const double hi = std::max(a1, a2);
  return mu1 * (std::sqrt(1.0 + lo * lo / (hi * hi)) - 1.0);
}

double beta1_residual(double a1, double a2, double mu1, double mu2, double beta) {
  const double lhs = beta1_lhs(a1, a2, mu1, mu2);
  return std::abs(beta1_rhs(a1, a2, mu1, mu2, beta) - lhs) / lhs;
}

Beta2Estimate beta2_estimate(double a1, double a2, double mu1, double mu2, const GroundStateProfile& gs) {
  require_positive({a1, a2, mu1, mu2}, "beta2_estimate");
  Beta2Estimate out;
  out.l1 = least_energy(a1, mu1, gs);
  out.l2 = least_energy(a2, mu2, gs);
  const double eps = std::min(out.l1, out.l2);

  // The fiber sum increases from 0 at s = -inf up to its maximum for s <= 0
  // and exceeds eps at s = 0, so the left root lies in (-inf, 0).
  auto sum = [&](double s) { return scalar_fiber(out.l1, s) + scalar_fiber(out.l2, s); };
  double lo = -1.0;
  while (sum(lo) >= eps) lo *= 2.0;
  double hi = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (sum(mid) < eps ? lo : hi) = mid;
  }
  out.s_eps = 0.5 * (lo + hi);

  const double k1 = soliton_wavenumber(a1, mu1, gs);
  const double k2 = soliton_wavenumber(a2, mu2, gs);
  out.C2 = overlap_integral(*gs.shape, k1 / std::sqrt(mu1), k1, k2 / std::sqrt(mu2), k2);
  out.value = (out.l1 + out.l2 - eps) * 2.0 * std::exp(-3.0 * out.s_eps) / out.C2;
  return out;
}

Condition16 condition_16(const SystemParams& p) {
  p.validate();
  if (p.k < 2) throw InvalidArgument("condition_16: needs at least two components");
  if (p.k > 12) throw InvalidArgument("condition_16: subset enumeration is capped at k = 12");
  double sa = 0.0;
  double sb = 0.0;
  for (std::size_t i = 0; i < p.k; ++i) {
    sa += p.a[i] * p.a[i];
    for (std::size_t j = 0; j < p.k; ++j) sb += p.b(i, j) * p.a[i] * p.a[i] * p.a[j] * p.a[j];
  }
  if (!(sb > 0.0)) throw UndefinedQuotient("condition_16: quartic term is not positive");

  Condition16 out;
  out.lhs = sa * sa * sa / (sb * sb);
  out.margin = std::numeric_limits<double>::infinity();
  const double frac = static_cast<double>(p.k - 2) / static_cast<double>(p.k - 1);
  const std::size_t full = (std::size_t{1} << p.k) - 1;
  for (std::size_t mask = 1; mask < full; ++mask) {
    std::vector<std::size_t> subset;
    for (std::size_t i = 0; i < p.k; ++i)
      if (mask & (std::size_t{1} << i)) subset.push_back(i);
    double diag = 0.0;
    double off = 0.0;
    for (std::size_t x : subset) {
      diag = std::max(diag, p.b(x, x) * p.a[x]);
      for (std::size_t y : subset)
        if (y != x) off = std::max(off, p.b(x, y) * std::sqrt(p.a[x] * p.a[y]));
    }
    const double bracket = diag + frac * off;
    const double margin = 1.0 / (bracket * bracket) - out.lhs;
    if (margin < out.margin) {
      out.margin = margin;
      out.worst_subset = subset;
    }
  }
  out.holds = out.margin > 0.0;
  return out;
}

BoundsComparison condition_16_vs_bounds(const SystemParams& p, const GroundStateProfile& gs) {
  p.validate();
  BoundsComparison out;
  if (p.k == 1) return out;
  const Condition16 c16 = condition_16(p);
  out.condition16 = c16.holds;
  const BoundsReport b = ground_state_bounds(p, gs);
  out.chain_holds = b.separated;
  if (c16.holds)
    for (const auto& [subset, lower] : b.lower_by_subset)
      if (!(b.upper < lower)) out.disagreements.push_back(subset);
  return out;
}

ThresholdReport threshold_report(const SystemParams& p, const GroundStateProfile& gs) {
  p.validate();
  ThresholdReport rep;
  if (p.k == 2) {
    const double a1 = p.a[0], a2 = p.a[1], mu1 = p.b(0, 0), mu2 = p.b(1, 1);
    rep.beta1 = beta1(a1, a2, mu1, mu2);
    rep.beta1_closed = beta1_closed(a1, a2, mu1, mu2);
    rep.beta2 = beta2_estimate(a1, a2, mu1, mu2, gs);
  }
  if (p.k >= 2 && p.k <= 12) {
    rep.condition16 = condition_16(p);
    rep.comparison = condition_16_vs_bounds(p, gs);
  }
  return rep;
}

}  // namespace normwave

#include <cmath>
#include <random>

#include "doctest.h"
#include "normwave/error.hpp"
#include "normwave/thresholds.hpp"
#include "support.hpp"

using namespace normwave;
using nwtest::profile;
using nwtest::rel;

TEST_CASE("beta1 root and closed form") {
  CHECK(rel(beta1(1, 1, 1, 1), std::sqrt(2.0) - 1.0) < 1e-10);
  for (auto [a1, a2, mu] : {std::tuple{1.0, 1.0, 1.0}, {0.5, 1.0, 2.0}, {2.0, 0.7, 0.3}, {1.0, 3.0, 5.0}}) {
    const double b = beta1(a1, a2, mu, mu);
    const double lo = std::min(a1, a2), hi = std::max(a1, a2);
    CHECK(rel(b, mu * (std::sqrt(1 + lo * lo / (hi * hi)) - 1)) < 1e-8);
    REQUIRE(beta1_closed(a1, a2, mu, mu).has_value());
    CHECK(rel(*beta1_closed(a1, a2, mu, mu), b) < 1e-8);
    CHECK(std::abs(beta1_residual(a1, a2, mu, mu, b)) < 1e-12);
    // Equal-mu thresholds only see the mass ratio.
    CHECK(rel(beta1(3 * a1, 3 * a2, mu, mu), b) < 1e-8);
  }
  CHECK_FALSE(beta1_closed(1, 1, 1, 2).has_value());
}

TEST_CASE("beta1 with unequal couplings solves its defining equation") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(0.2, 3.0);
  for (int t = 0; t < 20; ++t) {
    const double a1 = U(rng), a2 = U(rng), m1 = U(rng), m2 = U(rng);
    const double b = beta1(a1, a2, m1, m2);
    CHECK(b > 0.0);
    const double lhs = std::max(1 / std::pow(a1 * m1, 2), 1 / std::pow(a2 * m2, 2));
    const double rhs = 1 / std::pow(a1 * (m1 + b), 2) + 1 / std::pow(a2 * (m2 + b), 2);
    CHECK(rel(rhs, lhs) < 1e-12);
  }
}

TEST_CASE("beta2 reproduces its formula") {
  const GroundStateProfile& gs = profile();
  for (auto [a1, a2, m1, m2] : {std::tuple{1.0, 1.0, 1.0, 1.0}, {1.0, 0.8, 1.0, 1.5}}) {
    const Beta2Estimate e = beta2_estimate(a1, a2, m1, m2, gs);
    CHECK(e.value > 0.0);
    CHECK(e.s_eps < 0.0);
    CHECK(rel(e.l1, least_energy(a1, m1, gs)) < 1e-14);
    CHECK(rel(e.l2, least_energy(a2, m2, gs)) < 1e-14);
    const double lmin = std::min(e.l1, e.l2);
    CHECK(rel(e.value, (e.l1 + e.l2 - lmin) * 2 * std::exp(-3 * e.s_eps) / e.C2) < 1e-14);

    // s_eps is a root of the summed dilation profiles, from the scaling laws of each soliton.
    auto I = [&](double a, double mu, double s) {
      const double l = least_energy(a, mu, gs);
      return 3 * l * std::exp(2 * s) - 2 * l * std::exp(3 * s);
    };
    CHECK(std::abs(I(a1, m1, e.s_eps) + I(a2, m2, e.s_eps) - lmin) < 1e-9 * lmin);
  }
  const Beta2Estimate sym = beta2_estimate(1, 1, 1, 1, gs);
  CHECK(rel(sym.value, sym.l1 * 2 * std::exp(-3 * sym.s_eps) / sym.C2) < 1e-14);
}

TEST_CASE("condition 16 for two equal components flips at sqrt(2) - 1") {
  const double t = std::sqrt(2.0) - 1.0;
  for (double mu : {1.0, 2.5}) {
    CHECK_FALSE(condition_16(SystemParams::two(1, 1, mu, mu, (t - 1e-6) * mu)).holds);
    CHECK(condition_16(SystemParams::two(1, 1, mu, mu, (t + 1e-6) * mu)).holds);
  }
  CHECK_FALSE(condition_16(SystemParams::two(1, 1, 1, 1, 0.0)).holds);
}

TEST_CASE("condition 16 for symmetric couplings") {
  CHECK(condition_16(SystemParams::symmetric(3, 1, 1, 10)).holds);
  CHECK_FALSE(condition_16(SystemParams::symmetric(3, 1, 1, 0.1)).holds);
  const Condition16 c = condition_16(SystemParams::symmetric(5, 1, 1, 0.2));
  CHECK(c.margin < 0.0);
  CHECK_FALSE(c.worst_subset.empty());
  CHECK_THROWS_AS(condition_16(SystemParams::symmetric(13, 1, 1, 1)), InvalidArgument);
}

TEST_CASE("condition 16 against an independent subset enumeration") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0.2, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t k = 2 + trial % 3;
    std::vector<double> a(k), beta(k * k);
    for (auto& x : a) x = U(rng);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i; j < k; ++j) beta[i * k + j] = beta[j * k + i] = U(rng) * (i == j ? 1.0 : 2.0);
    const SystemParams p(a, beta);

    double num = 0, den = 0;
    for (std::size_t i = 0; i < k; ++i) num += a[i] * a[i];
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) den += beta[i * k + j] * a[i] * a[i] * a[j] * a[j];
    const double lhs = num * num * num / (den * den);
    double rhs_min = INFINITY;
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) > k - 1) continue;
      double diag = 0, off = 0;
      for (std::size_t i = 0; i < k; ++i) {
        if (!(mask >> i & 1)) continue;
        diag = std::max(diag, beta[i * k + i] * a[i]);
        for (std::size_t j = 0; j < k; ++j)
          if (j != i && (mask >> j & 1)) off = std::max(off, beta[i * k + j] * std::sqrt(a[i] * a[j]));
      }
      const double d = diag + double(k - 2) / double(k - 1) * off;
      rhs_min = std::min(rhs_min, 1 / (d * d));
    }
    const Condition16 c = condition_16(p);
    CHECK(c.holds == (lhs < rhs_min));
    CHECK(rel(c.lhs, lhs) < 1e-13);
    CHECK(std::abs(c.margin - (rhs_min - lhs)) < 1e-12 * std::max(1.0, rhs_min));

    // Raising an off-diagonal coupling lowers the left side; it can only break the gate
    // through a subset that contains both indices.
    if (c.holds) {
      SystemParams q = p;
      q.b(0, 1) *= 1.5;
      q.b(1, 0) = q.b(0, 1);
      const Condition16 d = condition_16(q);
      const bool pair_is_worst = std::find(d.worst_subset.begin(), d.worst_subset.end(), 0) != d.worst_subset.end() &&
                                 std::find(d.worst_subset.begin(), d.worst_subset.end(), 1) != d.worst_subset.end();
      if (!pair_is_worst) CHECK(d.holds);
    }
  }
}

TEST_CASE("condition 16 against the subset bounds") {
  const GroundStateProfile& gs = profile();
  const BoundsComparison two = condition_16_vs_bounds(SystemParams::two(1, 1, 1, 1, 0.5), gs);
  CHECK(two.chain_holds == two.condition16);
  CHECK(two.disagreements.empty());
  const BoundsComparison three = condition_16_vs_bounds(SystemParams::symmetric(3, 1, 1, 1.5), gs);
  CHECK(three.condition16);
  CHECK(three.chain_holds);
  const BoundsComparison one = condition_16_vs_bounds(SystemParams({1.0}, {1.0}), gs);
  CHECK(one.chain_holds);
}

TEST_CASE("threshold report") {
  const GroundStateProfile& gs = profile();
  const ThresholdReport two = threshold_report(SystemParams::two(1, 1, 1, 1, 4), gs);
  CHECK(two.beta1.has_value());
  CHECK(two.beta1_closed.has_value());
  CHECK(two.beta2.has_value());
  CHECK(two.condition16->holds);
  const ThresholdReport three = threshold_report(SystemParams::symmetric(3, 1, 1, 1), gs);
  CHECK_FALSE(three.beta1.has_value());
  CHECK(three.condition16.has_value());
}

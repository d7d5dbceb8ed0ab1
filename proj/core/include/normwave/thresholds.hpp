#pragma once

// Coupling thresholds for the two-component problem and the many-component
// condition on (a_i, beta_ij) under which the ground state has no vanishing
// component.

#include <cstddef>
#include <optional>
#include <vector>

#include "normwave/radial.hpp"
#include "normwave/soliton.hpp"

namespace normwave {

/// Positive root of max{1/(a1 mu1)^2, 1/(a2 mu2)^2} = 1/(a1 (mu1+b))^2 + 1/(a2 (mu2+b))^2.
double beta1(double a1, double a2, double mu1, double mu2);

/// mu (sqrt(1 + a_min^2/a_max^2) - 1), defined when mu1 == mu2.
std::optional<double> beta1_closed(double a1, double a2, double mu1, double mu2);

/// Residual of the defining equation of beta1, relative to its left side.
double beta1_residual(double a1, double a2, double mu1, double mu2, double beta);

struct Beta2Estimate {
  double value = 0.0;
  double s_eps = 0.0;  // left root of I_mu1(s*w1) + I_mu2(s*w2) = min(l1, l2)
  double C2 = 0.0;     // int w_{a1,mu1}^2 w_{a2,mu2}^2
  double l1 = 0.0;
  double l2 = 0.0;
};

/// (l1 + l2 - min(l1, l2)) 2 e^{-3 s_eps} / C2 at eps = min(l1, l2).
Beta2Estimate beta2_estimate(double a1, double a2, double mu1, double mu2, const GroundStateProfile& gs);

struct Condition16 {
  bool holds = false;
  double lhs = 0.0;
  double margin = 0.0;  // min over subsets of rhs - lhs
  std::vector<std::size_t> worst_subset;
};

/// (sum a_i^2)^3 / (sum beta_ij a_i^2 a_j^2)^2 against
/// 1 / [max_{j in I} beta_jj a_j + ((k-2)/(k-1)) max_{i != j in I} beta_ij sqrt(a_i a_j)]^2
/// over every nonempty I with |I| <= k-1. Requires 2 <= k <= 12.
Condition16 condition_16(const SystemParams& p);

struct BoundsComparison {
  bool chain_holds = true;     // product upper bound < every subset lower bound (factor (m-1)/m)
  bool condition16 = true;
  std::vector<std::vector<std::size_t>> disagreements;  // subsets passing condition_16 but failing the chain
};

BoundsComparison condition_16_vs_bounds(const SystemParams& p, const GroundStateProfile& gs);

struct ThresholdReport {
  std::optional<double> beta1;
  std::optional<double> beta1_closed;
  std::optional<Beta2Estimate> beta2;
  std::optional<Condition16> condition16;
  std::optional<BoundsComparison> comparison;
};

/// beta1 and beta2 for k = 2; condition_16 and its comparison for k >= 2.
ThresholdReport threshold_report(const SystemParams& p, const GroundStateProfile& gs);

}  // namespace normwave

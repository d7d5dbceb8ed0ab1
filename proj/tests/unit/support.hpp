#pragma once

#include <cmath>
#include <random>

#include "normwave/radial.hpp"
#include "normwave/soliton.hpp"

namespace nwtest {

// Shooting is the slowest shared input, so every suite reuses one profile.
inline const normwave::GroundStateProfile& profile() {
  static const normwave::GroundStateProfile gs = normwave::shoot_w0(normwave::reference_grid());
  return gs;
}

inline double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

// Sum of a few Gaussians with random centers, widths and signs; decays well inside r_max = 30.
inline normwave::RadialField random_smooth(normwave::GridPtr g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0), width(0.8, 2.5), center(0.0, 3.0);
  normwave::RadialField u(g);
  for (int m = 0; m < 3; ++m) {
    const double A = amp(rng), w = width(rng), c = center(rng);
    for (std::size_t j = 0; j < g->size(); ++j) {
      const double r = g->node(j);
      u[j] += A * (std::exp(-(r - c) * (r - c) / (w * w)) + std::exp(-(r + c) * (r + c) / (w * w)));
    }
  }
  return u;
}

inline normwave::RadialField sample(normwave::GridPtr g, double (*f)(double)) {
  normwave::RadialField u(g);
  for (std::size_t j = 0; j < g->size(); ++j) u[j] = f(g->node(j));
  return u;
}

}  // namespace nwtest

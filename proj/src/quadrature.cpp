#include "hypermetric/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "hypermetric/errors.hpp"

namespace hypermetric {

GaussLegendre::GaussLegendre(int order) {
  if (order < 1) throw ArgumentError("quadrature order must be positive");
  const auto n = static_cast<std::size_t>(order);
  nodes.resize(n);
  weights.resize(n);
  // Newton on P_n from the Chebyshev-like initial guesses; roots are symmetric.
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1, 1] to [0, 1].
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = n - 1 - lo;
    nodes[lo] = 0.5 * (1.0 - x);
    nodes[hi] = 0.5 * (1.0 + x);
    weights[lo] = 0.5 * w;
    weights[hi] = 0.5 * w;
  }
}

}  // namespace hypermetric

#pragma once

#include <vector>

namespace hypermetric {

/// Gauss-Legendre rule on [0, 1].
struct GaussLegendre {
  explicit GaussLegendre(int order);

  std::vector<double> nodes;
  std::vector<double> weights;

  template <class F>
  double integrate(F&& f, double a = 0.0, double b = 1.0) const {
    const double h = b - a;
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(a + h * nodes[i]);
    return h * sum;
  }
};

}  // namespace hypermetric

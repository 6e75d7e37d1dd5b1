#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "hypermetric/types.hpp"

namespace hypermetric {

/// Halton points in [0,1)^dims with a seeded Cranley-Patterson shift.
class HaltonSequence {
 public:
  HaltonSequence(int dims, std::uint64_t seed);

  int dims() const { return static_cast<int>(bases_.size()); }
  /// Writes the i-th point (i >= 0) into out[0..dims).
  void point(std::uint64_t i, double* out) const;

 private:
  std::vector<int> bases_;
  std::vector<double> shift_;
};

/// `count` seeded directions in C^n, uniform on the unit sphere of R^{2n}.
std::vector<Vector> random_unit_directions(int n, std::size_t count, std::uint64_t seed);

}  // namespace hypermetric

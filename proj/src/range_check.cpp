#include <algorithm>
#include <cmath>
#include <limits>

#include "hypermetric/domains.hpp"
#include "hypermetric/holomap.hpp"

namespace hypermetric {

RangeEvidence range_check(const HoloMap& f, const Domain& source, const Domain& target,
                          std::size_t samples, std::uint64_t seed, double floor) {
  if (f.input_dim() != source.dim() || f.output_dim() != target.dim()) {
    throw ArgumentError("range_check: map is C^" + std::to_string(f.input_dim()) + " -> C^" +
                        std::to_string(f.output_dim()) + " but domains have dimensions " +
                        std::to_string(source.dim()) + " and " + std::to_string(target.dim()));
  }
  RangeEvidence ev;
  ev.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& x : sample(source, samples, seed)) {
    ++ev.checked;
    double margin = 0.0;
    try {
      const Point y = f.eval(x);
      if (contains(target, y)) {
        margin = boundary_distance(target, y);
      } else {
        // Escaped: record how far outside (product targets) or just the sign.
        double excess = 0.0;
        if (target.is_product()) {
          excess = ((y - target.centers()).cwiseAbs() - target.radii()).maxCoeff();
        }
        if (std::isnan(excess)) excess = std::numeric_limits<double>::infinity();
        margin = -std::max(excess, std::numeric_limits<double>::min());
      }
    } catch (const SingularityError&) {
      margin = -std::numeric_limits<double>::infinity();
    }
    if (margin < ev.worst_margin) {
      ev.worst_margin = margin;
      if (margin < 0.0) ev.witness = x;
    }
  }
  if (ev.worst_margin < 0.0) {
    ev.verdict = RangeVerdict::Refuted;
  } else if (ev.worst_margin >= floor) {
    ev.verdict = RangeVerdict::Supported;
  } else {
    ev.verdict = RangeVerdict::Inconclusive;
  }
  return ev;
}

}  // namespace hypermetric

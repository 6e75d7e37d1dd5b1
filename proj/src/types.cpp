#include "hypermetric/types.hpp"

#include <string>

#include "hypermetric/errors.hpp"

namespace hypermetric {

void check_point(const Point& p, const char* what) {
  if (p.size() < 1) throw ArgumentError(std::string(what) + " must have dimension >= 1");
  if (!all_finite(p)) throw ArgumentError(std::string(what) + " has a non-finite coordinate");
}

void check_tangent(const Point& base, const Vector& dir) {
  check_point(base, "base point");
  if (dir.size() != base.size()) {
    throw ArgumentError("tangent vector has dimension " + std::to_string(dir.size()) +
                        ", base point has dimension " + std::to_string(base.size()));
  }
  if (!all_finite(dir)) throw ArgumentError("tangent vector has a non-finite component");
}

}  // namespace hypermetric

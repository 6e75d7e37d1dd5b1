#pragma once

#include <complex>

#include <Eigen/Core>

namespace hypermetric {

using Complex = std::complex<double>;

/// A point of C^n.
using Point = Eigen::VectorXcd;
/// A complex direction in C^n (element of the tangent space at some point).
using Vector = Eigen::VectorXcd;

struct TangentVector {
  Point base;
  Vector dir;
};

/// Throws ArgumentError unless `p` is nonempty with finite coordinates.
void check_point(const Point& p, const char* what = "point");

/// Throws ArgumentError unless base and dir have equal dimension and are finite.
void check_tangent(const Point& base, const Vector& dir);

inline bool all_finite(const Eigen::VectorXcd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
  }
  return true;
}

}  // namespace hypermetric

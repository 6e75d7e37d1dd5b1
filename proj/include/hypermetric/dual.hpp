#pragma once

#include <complex>

namespace hypermetric {

/// Dual number a + b·eps with eps^2 = 0 over a (possibly complex) scalar.
///
/// Propagating Dual<std::complex<double>> through a holomorphic expression
/// with eps-parts set to a direction v yields f(p) + f'(p)·v eps, i.e. the
/// Jacobian-vector product, exact up to rounding.
template <class Scalar>
struct Dual {
  Scalar val{};
  Scalar eps{};

  constexpr Dual() = default;
  constexpr Dual(Scalar v) : val(v) {}  // NOLINT(google-explicit-constructor)
  constexpr Dual(Scalar v, Scalar d) : val(v), eps(d) {}

  constexpr Dual operator-() const { return {-val, -eps}; }
  constexpr Dual& operator+=(const Dual& o) {
    val += o.val;
    eps += o.eps;
    return *this;
  }
  constexpr Dual& operator-=(const Dual& o) {
    val -= o.val;
    eps -= o.eps;
    return *this;
  }
  constexpr Dual& operator*=(const Dual& o) {
    eps = eps * o.val + val * o.eps;
    val *= o.val;
    return *this;
  }
  constexpr Dual& operator/=(const Dual& o) {
    Scalar q = val / o.val;
    eps = (eps - q * o.eps) / o.val;
    val = q;
    return *this;
  }

  friend constexpr Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend constexpr Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend constexpr Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend constexpr Dual operator/(Dual a, const Dual& b) { return a /= b; }
};

/// Primal part; identity on plain scalars.
template <class Scalar>
constexpr const Scalar& primal(const Dual<Scalar>& d) {
  return d.val;
}
template <class Scalar>
constexpr const Scalar& primal(const Scalar& s) {
  return s;
}

}  // namespace hypermetric

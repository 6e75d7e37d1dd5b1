#pragma once

// Oracles and generators shared by the test programs. Nothing here calls the
// library's closed forms; they are recomputed from first principles.

#include <cmath>
#include <complex>
#include <random>

#include "hypermetric/holomap.hpp"

namespace testsupport {

using hypermetric::Complex;
using hypermetric::Expr;

/// Hyperbolic distance on the unit disk via the log form of the cross ratio.
inline double omega(Complex z, Complex w) {
  const double d = std::abs(z - w) / std::abs(1.0 - std::conj(w) * z);
  return 0.5 * std::log((1.0 + d) / (1.0 - d));
}

/// Scaled-disk Caratheodory/Kobayashi density, max over coordinates.
inline double polydisc_metric(const Eigen::VectorXcd& c, const Eigen::VectorXd& rho,
                              const Eigen::VectorXcd& x, const Eigen::VectorXcd& v) {
  double m = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double s = std::abs(x[j] - c[j]) / rho[j];
    m = std::max(m, std::abs(v[j]) / rho[j] / (1.0 - s * s));
  }
  return m;
}

inline double polydisc_distance(const Eigen::VectorXcd& c, const Eigen::VectorXd& rho,
                                const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  double m = 0.0;
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    m = std::max(m, omega((a[j] - c[j]) / rho[j], (b[j] - c[j]) / rho[j]));
  }
  return m;
}

/// Uniform point of the disk |z| < radius.
inline Complex random_in_disk(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = radius * std::sqrt(u(rng));
  const double t = 2.0 * M_PI * u(rng);
  return std::polar(r, t);
}

inline Complex random_complex(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  const double re = u(rng);
  return {re, u(rng)};
}

/// Random rational expression over z1..z{dims}. Denominators are shifted
/// away from zero so the expression is analytic on the unit polydisc.
inline Expr random_expr(std::mt19937_64& rng, int dims, int depth) {
  std::uniform_int_distribution<int> pick(0, 9);
  if (depth <= 0) {
    if (pick(rng) < 6) return Expr::variable(std::uniform_int_distribution<int>(0, dims - 1)(rng));
    return Expr::literal(random_complex(rng, 1.0));
  }
  switch (pick(rng)) {
    case 0:
      return Expr::negate(random_expr(rng, dims, depth - 1));
    case 1:
    case 2:
      return Expr::binary(Expr::Kind::Add, random_expr(rng, dims, depth - 1),
                          random_expr(rng, dims, depth - 1));
    case 3:
      return Expr::binary(Expr::Kind::Subtract, random_expr(rng, dims, depth - 1),
                          random_expr(rng, dims, depth - 1));
    case 4:
    case 5:
      return Expr::binary(Expr::Kind::Multiply, random_expr(rng, dims, depth - 1),
                          random_expr(rng, dims, depth - 1));
    case 6: {
      // (e) / (4 + z_j * w) with |w| <= 1 keeps the denominator modulus >= 3.
      const Expr den = Expr::binary(
          Expr::Kind::Add, Expr::literal(4.0),
          Expr::binary(Expr::Kind::Multiply,
                       Expr::variable(std::uniform_int_distribution<int>(0, dims - 1)(rng)),
                       Expr::literal(std::polar(1.0, std::uniform_real_distribution<double>(
                                                         0.0, 2.0 * M_PI)(rng)))));
      return Expr::binary(Expr::Kind::Divide, random_expr(rng, dims, depth - 1), den);
    }
    case 7:
      return Expr::power(random_expr(rng, dims, depth - 1),
                         std::uniform_int_distribution<int>(0, 4)(rng));
    default:
      return random_expr(rng, dims, 0);
  }
}

/// Random self-map of the unit disk: a Mobius factor s (P - a) / (1 - conj(a) P)
/// applied to a polynomial P with coefficient l1-norm below 1.
inline Expr random_disk_self_map(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> degree(1, 4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int deg = degree(rng);
  std::vector<Complex> coef(static_cast<std::size_t>(deg) + 1);
  double total = 0.0;
  for (auto& c : coef) {
    c = random_complex(rng, 1.0);
    total += std::abs(c);
  }
  const double budget = 0.3 + 0.69 * u(rng);
  const Expr z = Expr::variable(0);
  Expr p = Expr::literal(coef[0] * budget / total);
  for (int k = 1; k <= deg; ++k) {
    p = Expr::binary(Expr::Kind::Add, p,
                     Expr::binary(Expr::Kind::Multiply,
                                  Expr::literal(coef[static_cast<std::size_t>(k)] * budget / total),
                                  Expr::power(z, k)));
  }
  const Complex a = random_in_disk(rng, 0.9);
  const Complex s = std::polar(0.2 + 0.79 * u(rng), 2.0 * M_PI * u(rng));
  const Expr num = Expr::binary(Expr::Kind::Subtract, p, Expr::literal(a));
  const Expr den = Expr::binary(Expr::Kind::Subtract, Expr::literal(1.0),
                                Expr::binary(Expr::Kind::Multiply, Expr::literal(std::conj(a)), p));
  return Expr::binary(Expr::Kind::Multiply, Expr::literal(s),
                      Expr::binary(Expr::Kind::Divide, num, den));
}

}  // namespace testsupport

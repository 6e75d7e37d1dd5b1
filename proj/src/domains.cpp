#include "hypermetric/domains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "hypermetric/sequence.hpp"

namespace hypermetric {

namespace {

constexpr int kRayMarchSteps = 64;
constexpr int kRayBisections = 60;
constexpr std::size_t kRandomRays = 32;
constexpr std::uint64_t kRaySeed = 0x5eedb0a7d15ULL;

void require_dim(const Domain& d, const Point& p, const char* op) {
  if (p.size() != d.dim()) {
    throw ArgumentError(std::string(op) + ": point has dimension " + std::to_string(p.size()) +
                        ", domain has dimension " + std::to_string(d.dim()));
  }
}

bool in_box(const Box& b, const Point& p) {
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    if (!(p[j].real() > b.lo[j].real() && p[j].real() < b.hi[j].real())) return false;
    if (!(p[j].imag() > b.lo[j].imag() && p[j].imag() < b.hi[j].imag())) return false;
  }
  return true;
}

Box product_box(const Eigen::VectorXcd& c, const Eigen::VectorXd& rho) {
  Box b;
  b.lo.resize(c.size());
  b.hi.resize(c.size());
  for (Eigen::Index j = 0; j < c.size(); ++j) {
    b.lo[j] = c[j] - Complex(rho[j], rho[j]);
    b.hi[j] = c[j] + Complex(rho[j], rho[j]);
  }
  return b;
}

void require_bounded(const Domain& d, const char* op) {
  if (!d.box().bounded()) {
    throw UnsupportedDomainError(std::string(op) + ": domain has an unbounded box");
  }
}

}  // namespace

// ---- Box -------------------------------------------------------------------

bool Box::bounded() const { return all_finite(lo) && all_finite(hi); }

Point Box::center() const { return (lo + hi) / 2.0; }

double Box::diagonal() const { return (hi - lo).norm(); }

Eigen::VectorXd Box::half_diagonals() const { return (hi - lo).cwiseAbs() / 2.0; }

// ---- Domain ----------------------------------------------------------------

Domain Domain::disk(Complex center, double radius) {
  Domain d = polydisc(Eigen::VectorXcd::Constant(1, center), Eigen::VectorXd::Constant(1, radius));
  d.kind_ = DomainKind::Disk;
  return d;
}

Domain Domain::polydisc(Eigen::VectorXcd centers, Eigen::VectorXd radii) {
  if (centers.size() < 1) throw ArgumentError("polydisc needs dimension >= 1");
  if (centers.size() != radii.size()) {
    throw ArgumentError("polydisc: " + std::to_string(centers.size()) + " centers but " +
                        std::to_string(radii.size()) + " radii");
  }
  if (!all_finite(centers)) throw ArgumentError("polydisc: centers must be finite");
  for (Eigen::Index j = 0; j < radii.size(); ++j) {
    if (!(radii[j] > 0.0) || !std::isfinite(radii[j])) {
      throw ArgumentError("polydisc: radii must be finite and strictly positive");
    }
  }
  Domain d;
  d.kind_ = DomainKind::Polydisc;
  d.dim_ = static_cast<int>(centers.size());
  d.box_ = product_box(centers, radii);
  d.centers_ = std::move(centers);
  d.radii_ = std::move(radii);
  return d;
}

Domain Domain::semianalytic(int dim, std::vector<Constraint> constraints, Box box) {
  if (dim < 1) throw ArgumentError("semianalytic domain needs dimension >= 1");
  if (box.lo.size() != dim || box.hi.size() != dim) {
    throw ArgumentError("semianalytic: box dimension does not match the domain");
  }
  for (int j = 0; j < dim; ++j) {
    if (!(box.lo[j].real() < box.hi[j].real()) || !(box.lo[j].imag() < box.hi[j].imag())) {
      throw ArgumentError("semianalytic: box must satisfy lo < hi in every real coordinate");
    }
  }
  for (const auto& c : constraints) {
    if (c.g.input_dim() != dim || c.g.output_dim() != 1) {
      throw ArgumentError("semianalytic: constraint " + to_string(c.g) +
                          " must map C^" + std::to_string(dim) + " to C");
    }
    if (!(c.threshold > 0.0) || !std::isfinite(c.threshold)) {
      throw ArgumentError("semianalytic: thresholds must be finite and positive");
    }
  }
  Domain d;
  d.kind_ = DomainKind::SemiAnalytic;
  d.dim_ = dim;
  d.constraints_ = std::move(constraints);
  d.box_ = std::move(box);
  return d;
}

const char* to_string(DomainKind k) {
  switch (k) {
    case DomainKind::Disk:
      return "disk";
    case DomainKind::Polydisc:
      return "polydisc";
    case DomainKind::SemiAnalytic:
      return "semianalytic";
  }
  return "?";
}

// ---- geometry --------------------------------------------------------------

bool contains(const Domain& d, const Point& p) {
  require_dim(d, p, "contains");
  if (!all_finite(p)) return false;
  if (d.is_product()) {
    for (int j = 0; j < d.dim(); ++j) {
      if (!(std::abs(p[j] - d.centers()[j]) < d.radii()[j])) return false;
    }
    return true;
  }
  if (!in_box(d.box(), p)) return false;
  for (const auto& c : d.constraints()) {
    try {
      if (!(std::abs(c.g.eval(p)[0]) < c.threshold)) return false;
    } catch (const SingularityError&) {
      return false;
    }
  }
  return true;
}

double ray_exit(const Domain& d, const Point& p, const Vector& u, double limit) {
  const double h = limit / kRayMarchSteps;
  for (int k = 1; k <= kRayMarchSteps; ++k) {
    const double t = k * h;
    if (contains(d, p + t * u)) continue;
    double lo = t - h;
    double hi = t;
    for (int it = 0; it < kRayBisections && hi - lo > 1e-15 * limit; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (contains(d, p + mid * u)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return lo;
  }
  return limit;
}

double boundary_distance(const Domain& d, const Point& p) {
  require_dim(d, p, "boundary_distance");
  if (!contains(d, p)) throw ArgumentError("boundary_distance: point is not in the domain");
  if (d.is_product()) {
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < d.dim(); ++j) {
      best = std::min(best, d.radii()[j] - std::abs(p[j] - d.centers()[j]));
    }
    return best;
  }
  require_bounded(d, "boundary_distance");
  const int n = d.dim();
  const double limit = d.box().diagonal();
  double best = limit;
  Vector u = Vector::Zero(n);
  for (int j = 0; j < n; ++j) {
    for (Complex dir : {Complex(1, 0), Complex(-1, 0), Complex(0, 1), Complex(0, -1)}) {
      u.setZero();
      u[j] = dir;
      best = std::min(best, ray_exit(d, p, u, limit));
    }
  }
  for (const auto& dir : random_unit_directions(n, kRandomRays, kRaySeed)) {
    best = std::min(best, ray_exit(d, p, dir, limit));
  }
  return kSampledSafety * best;
}

double diameter_bound(const Domain& U, std::size_t /*samples*/, std::uint64_t /*seed*/) {
  if (U.is_product()) return 2.0 * U.radii().norm();
  require_bounded(U, "diameter_bound");
  return U.box().diagonal();
}

double inner_gap(const Domain& U, const Domain& X, std::size_t samples, std::uint64_t seed) {
  if (U.dim() != X.dim()) {
    throw ArgumentError("inner_gap: U has dimension " + std::to_string(U.dim()) +
                        ", X has dimension " + std::to_string(X.dim()));
  }
  double gap = std::numeric_limits<double>::infinity();
  if (U.is_product() && X.is_product()) {
    for (int j = 0; j < U.dim(); ++j) {
      gap = std::min(gap, X.radii()[j] - U.radii()[j] -
                              std::abs(X.centers()[j] - U.centers()[j]));
    }
  } else {
    for (const auto& p : sample(U, samples, seed)) {
      if (!contains(X, p)) {
        throw InclusionError("inner_gap: a sampled point of U lies outside X");
      }
      gap = std::min(gap, boundary_distance(X, p));
    }
    gap *= kSampledSafety;
  }
  if (!(gap > kGapFloor)) {
    throw InclusionError("inner_gap: U is not relatively compact in X (gap " +
                         std::to_string(gap) + ")");
  }
  return gap;
}

InclusionGeometry inclusion_geometry(const Domain& U, const Domain& X, std::size_t samples,
                                     std::uint64_t seed) {
  return {diameter_bound(U, samples, seed), inner_gap(U, X, samples, seed)};
}

std::vector<Point> sample(const Domain& d, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw ArgumentError("sample: count must be positive");
  const int n = d.dim();
  std::vector<Point> out;
  out.reserve(count);
  HaltonSequence seq(2 * n, seed);
  std::vector<double> u(static_cast<std::size_t>(2 * n));
  const std::size_t max_attempts = 1000 * count + 10000;

  if (d.is_product()) {
    out.push_back(d.centers());
    for (std::uint64_t i = 0; out.size() < count; ++i) {
      if (i > max_attempts) throw SamplingExhaustedError("sample: membership kept failing");
      seq.point(i, u.data());
      const bool near_boundary = out.size() % 4 == 3;
      Point p(n);
      for (int j = 0; j < n; ++j) {
        const double a = u[static_cast<std::size_t>(2 * j)];
        const double b = u[static_cast<std::size_t>(2 * j + 1)];
        double s = near_boundary ? 1.0 - 0.01 * (1.0 - a) : std::sqrt(a);
        s = std::min(s, 1.0 - 1e-9);
        p[j] = d.centers()[j] + d.radii()[j] * s * std::polar(1.0, 2.0 * std::numbers::pi * b);
      }
      if (contains(d, p)) out.push_back(std::move(p));
    }
    return out;
  }

  require_bounded(d, "sample");
  const Box& box = d.box();
  const double limit = box.diagonal();
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (const Point c = box.center(); contains(d, c)) out.push_back(c);
  for (std::uint64_t i = 0; out.size() < count; ++i) {
    if (i > max_attempts) {
      throw SamplingExhaustedError("sample: found only " + std::to_string(out.size()) + " of " +
                                   std::to_string(count) + " points");
    }
    seq.point(i, u.data());
    Point q(n);
    for (int j = 0; j < n; ++j) {
      const Complex lo = box.lo[j];
      const Complex hi = box.hi[j];
      q[j] = Complex(lo.real() + u[static_cast<std::size_t>(2 * j)] * (hi.real() - lo.real()),
                     lo.imag() + u[static_cast<std::size_t>(2 * j + 1)] * (hi.imag() - lo.imag()));
    }
    if (!contains(d, q)) continue;
    if (out.size() % 4 == 3) {
      const Vector dir = random_unit_directions(n, 1, rng())[0];
      const double t = ray_exit(d, q, dir, limit);
      const double w = 1.0 - unit(rng);  // (0, 1]
      Point p = q + t * (1.0 - 0.01 * w) * dir;
      out.push_back(contains(d, p) ? std::move(p) : std::move(q));
    } else {
      out.push_back(std::move(q));
    }
  }
  return out;
}

Domain as_semianalytic(const Domain& d) {
  if (!d.is_product()) return d;
  std::vector<Constraint> cons;
  for (int j = 0; j < d.dim(); ++j) {
    Expr g = Expr::binary(Expr::Kind::Subtract, Expr::variable(j), Expr::literal(d.centers()[j]));
    cons.push_back({HoloMap(d.dim(), {g}), d.radii()[j]});
  }
  return Domain::semianalytic(d.dim(), std::move(cons), d.box());
}

}  // namespace hypermetric

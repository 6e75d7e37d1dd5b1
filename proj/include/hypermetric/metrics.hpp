#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "hypermetric/domains.hpp"
#include "hypermetric/errors.hpp"
#include "hypermetric/types.hpp"

namespace hypermetric {

enum class BoundKind { Exact, Lower, Upper };

/// A numerically estimated quantity together with the direction in which
/// it is known to be correct.
///
/// exact: |value - true| <= tol.  lower: value <= true + tol.
/// upper: true <= value + tol.  `caveat` marks values whose direction is not
/// certified (e.g. path lengths integrated from a lower-bound metric).
struct Bound {
  double value = 0.0;
  BoundKind kind = BoundKind::Exact;
  double tol = 0.0;
  bool caveat = false;

  static Bound exact(double v, double tol = 0.0) { return {v, BoundKind::Exact, tol, false}; }
  static Bound lower(double v, double tol = 0.0) { return {v, BoundKind::Lower, tol, false}; }
  static Bound upper(double v, double tol = 0.0) { return {v, BoundKind::Upper, tol, false}; }

  /// Certified upper side of the true value, if this bound provides one.
  std::optional<double> upper_side() const {
    if (caveat || kind == BoundKind::Lower) return std::nullopt;
    return value + tol;
  }
  /// Certified lower side of the true value, if this bound provides one.
  std::optional<double> lower_side() const {
    if (caveat || kind == BoundKind::Upper) return std::nullopt;
    return value - tol;
  }
};

const char* to_string(BoundKind k);

// ---- unit disk ---------------------------------------------------------------

/// Poincare distance atanh |(z - w) / (1 - conj(w) z)| on the unit disk.
template <class Real>
Real poincare_distance(std::complex<Real> z, std::complex<Real> w) {
  if (!(std::abs(z) < Real(1)) || !(std::abs(w) < Real(1))) {
    throw DomainError("poincare_distance: arguments must lie in the open unit disk");
  }
  if (z == w) return Real(0);
  const Real q = std::abs(z - w) / std::abs(Real(1) - std::conj(w) * z);
  return std::atanh(std::min(q, std::nextafter(Real(1), Real(0))));
}

/// Infinitesimal Poincare metric |v| / (1 - |z|^2).
template <class Real>
Real poincare_metric(std::complex<Real> z, std::complex<Real> v) {
  if (!(std::abs(z) < Real(1))) {
    throw DomainError("poincare_metric: base point must lie in the open unit disk");
  }
  return std::abs(v) / (Real(1) - std::norm(z));
}

// ---- Caratheodory / Kobayashi -------------------------------------------------

struct CompetitorOptions {
  /// Random complex-linear functional directions beyond the coordinate axes.
  std::size_t directions = 64;
  std::uint64_t seed = 0;
};

struct KobayashiOptions {
  /// Bisection tolerance on the radius of affine analytic disks.
  double radius_tol = 1e-6;
  /// Angles sampled per circle when testing disk membership.
  int angles = 64;
  /// Optional relatively compact subdomain; when it contains the base point,
  /// disks in it are enlarged by the dilation factor 1 + r/R.
  std::optional<Domain> inner;
  std::size_t samples = 512;
  std::uint64_t seed = 0;
};

/// Holomorphic maps from a SemiAnalytic domain into the unit disk used to
/// bound Caratheodory quantities from below: the normalized defining
/// functions g_i / t_i, and complex-linear functionals scaled by the
/// enclosing box.
class CompetitorFamily {
 public:
  explicit CompetitorFamily(const Domain& d, const CompetitorOptions& opts = {});

  /// sup over the family of |(m o phi)'(x) v| with m a disk automorphism
  /// sending phi(x) to 0.
  double metric(const Point& x, const Vector& v) const;
  /// sup over the family of omega(phi(a), phi(b)).
  double distance(const Point& a, const Point& b) const;

  std::size_t size() const {
    return constraints_.size() + static_cast<std::size_t>(functionals_.rows());
  }

 private:
  std::vector<Constraint> constraints_;
  Eigen::MatrixXcd functionals_;  // rows already divided by the box sup
  Point origin_;
};

Bound caratheodory_metric(const Domain& d, const Point& x, const Vector& v,
                          const CompetitorOptions& opts = {});
Bound kobayashi_metric(const Domain& d, const Point& x, const Vector& v,
                       const KobayashiOptions& opts = {});
Bound caratheodory_distance(const Domain& d, const Point& a, const Point& b,
                            const CompetitorOptions& opts = {});

enum class MetricKind { Caratheodory, Kobayashi };

const char* to_string(MetricKind k);

/// An infinitesimal metric bound to a domain, with any per-domain setup
/// (competitor family) precomputed.
class InfinitesimalMetric {
 public:
  InfinitesimalMetric(Domain d, MetricKind kind, CompetitorOptions comp = {},
                      KobayashiOptions kob = {});

  const Domain& domain() const { return domain_; }
  MetricKind kind() const { return kind_; }
  /// The kind every evaluation on this domain returns.
  BoundKind bound_kind() const;

  Bound operator()(const Point& x, const Vector& v) const;

 private:
  Domain domain_;
  MetricKind kind_;
  KobayashiOptions kob_;
  std::shared_ptr<const CompetitorFamily> family_;
};

// ---- path lengths -------------------------------------------------------------

struct Polyline {
  std::vector<Point> vertices;
  /// Gauss-Legendre order per segment.
  int order = 32;
};

struct QuadratureOptions {
  /// Stop doubling sub-intervals when successive lengths agree to this.
  double rel_tol = 1e-6;
  int max_refinements = 10;
};

/// Metric length of a polyline by Gauss-Legendre quadrature per segment.
Bound path_length(const InfinitesimalMetric& metric, const Polyline& path,
                  const QuadratureOptions& opts = {});

struct PathOptions {
  int segments = 8;
  /// Vertex-doubling rounds after the initial one.
  int refinements = 5;
  /// Stop refining when a round improves the length by less than this.
  double rel_tol = 1e-6;
  /// Gauss-Legendre order used inside the optimizer.
  int descent_order = 12;
  int max_sweeps = 400;
  int order = 32;
  QuadratureOptions quad;
};

struct OptimizedPath {
  Bound length;
  Polyline path;
};

/// Minimizes the metric length over polylines from a to b.
OptimizedPath shortest_polyline(const InfinitesimalMetric& metric, const Point& a,
                                const Point& b, const PathOptions& opts = {});

/// Integrated pseudodistance (c^i for the Caratheodory metric, k for the
/// Kobayashi metric), approximated from above.
Bound integrated_distance(const InfinitesimalMetric& metric, const Point& a, const Point& b,
                          const PathOptions& opts = {});

}  // namespace hypermetric

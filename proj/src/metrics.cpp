#include "hypermetric/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <string>

#include "hypermetric/quadrature.hpp"
#include "hypermetric/sequence.hpp"

namespace hypermetric {

namespace {

void require_member(const Domain& d, const Point& x, const char* op) {
  if (x.size() != d.dim()) {
    throw ArgumentError(std::string(op) + ": point has dimension " + std::to_string(x.size()) +
                        ", domain has dimension " + std::to_string(d.dim()));
  }
  if (!contains(d, x)) throw DomainError(std::string(op) + ": point is not in the domain");
}

void require_vector(const Domain& d, const Vector& v, const char* op) {
  if (v.size() != d.dim()) {
    throw ArgumentError(std::string(op) + ": vector has dimension " + std::to_string(v.size()) +
                        ", domain has dimension " + std::to_string(d.dim()));
  }
  if (!all_finite(v)) throw ArgumentError(std::string(op) + ": vector is not finite");
}

// rho |v| / (rho^2 - |x - c|^2) maximized over coordinates.
double product_metric(const Domain& d, const Point& x, const Vector& v) {
  double best = 0.0;
  for (int j = 0; j < d.dim(); ++j) {
    const double rho = d.radii()[j];
    const double s = std::abs(x[j] - d.centers()[j]);
    best = std::max(best, rho * std::abs(v[j]) / ((rho - s) * (rho + s)));
  }
  return best;
}

double product_distance(const Domain& d, const Point& a, const Point& b) {
  double best = 0.0;
  for (int j = 0; j < d.dim(); ++j) {
    const double rho = d.radii()[j];
    const Complex c = d.centers()[j];
    best = std::max(best, poincare_distance((a[j] - c) / rho, (b[j] - c) / rho));
  }
  return best;
}

// Largest radius (from below, to radius_tol) of the affine disk
// zeta -> x + zeta * rho * u that stays in d on sampled circles.
double affine_disk_radius(const Domain& d, const Point& x, const Vector& u,
                          const KobayashiOptions& opts, double* upper_radius) {
  const int angles = std::max(opts.angles, 4);
  auto inside = [&](double rho) {
    for (double frac : {1.0, 0.75, 0.5, 0.25}) {
      const double offset = frac == 1.0 ? 0.0 : 0.5;
      for (int k = 0; k < angles; ++k) {
        const double theta = 2.0 * std::numbers::pi * (k + offset) / angles;
        if (!contains(d, x + (frac * rho) * std::polar(1.0, theta) * u)) return false;
      }
    }
    return true;
  };
  double lo = 0.0;
  double hi = d.box().bounded() ? d.box().diagonal() : 1.0;
  while (inside(hi)) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) {
      throw UnsupportedDomainError("kobayashi_metric: domain contains arbitrarily large disks");
    }
  }
  for (int it = 0; it < 2000 && (hi - lo > opts.radius_tol || lo == 0.0); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (inside(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (upper_radius) *upper_radius = hi;
  return lo;
}

}  // namespace

const char* to_string(BoundKind k) {
  switch (k) {
    case BoundKind::Exact:
      return "exact";
    case BoundKind::Lower:
      return "lower";
    case BoundKind::Upper:
      return "upper";
  }
  return "?";
}

const char* to_string(MetricKind k) {
  return k == MetricKind::Caratheodory ? "caratheodory" : "kobayashi";
}

// ---- CompetitorFamily -----------------------------------------------------------

CompetitorFamily::CompetitorFamily(const Domain& d, const CompetitorOptions& opts)
    : constraints_(d.constraints()) {
  const int n = d.dim();
  if (!d.box().bounded()) {
    functionals_.resize(0, n);
    origin_ = Point::Zero(n);
    return;
  }
  origin_ = d.box().center();
  const Eigen::VectorXd half = d.box().half_diagonals();
  std::vector<Vector> dirs;
  for (int j = 0; j < n; ++j) dirs.push_back(Vector::Unit(n, j));
  for (auto& u : random_unit_directions(n, opts.directions, opts.seed)) dirs.push_back(u);
  functionals_.resize(static_cast<Eigen::Index>(dirs.size()), n);
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    // sup over the box of |a . (z - origin)| is at most sum_j |a_j| half_j.
    const double sup = dirs[k].cwiseAbs().dot(half);
    functionals_.row(static_cast<Eigen::Index>(k)) = dirs[k].transpose() / sup;
  }
}

double CompetitorFamily::metric(const Point& x, const Vector& v) const {
  double best = 0.0;
  for (const auto& c : constraints_) {
    try {
      const Complex w = c.g.eval(x)[0] / c.threshold;
      const double m = 1.0 - std::norm(w);
      if (!(m > 0.0)) continue;
      best = std::max(best, std::abs(c.g.jvp(x, v)[0]) / c.threshold / m);
    } catch (const SingularityError&) {
    }
  }
  const Point shifted = x - origin_;
  for (Eigen::Index k = 0; k < functionals_.rows(); ++k) {
    const Complex w = (functionals_.row(k) * shifted)(0);
    const double m = 1.0 - std::norm(w);
    if (!(m > 0.0)) continue;
    best = std::max(best, std::abs((functionals_.row(k) * v)(0)) / m);
  }
  return best;
}

double CompetitorFamily::distance(const Point& a, const Point& b) const {
  double best = 0.0;
  auto consider = [&](Complex wa, Complex wb) {
    if (std::abs(wa) < 1.0 && std::abs(wb) < 1.0) {
      best = std::max(best, poincare_distance(wa, wb));
    }
  };
  for (const auto& c : constraints_) {
    try {
      consider(c.g.eval(a)[0] / c.threshold, c.g.eval(b)[0] / c.threshold);
    } catch (const SingularityError&) {
    }
  }
  const Vector la = functionals_ * (a - origin_);
  const Vector lb = functionals_ * (b - origin_);
  for (Eigen::Index k = 0; k < la.size(); ++k) consider(la[k], lb[k]);
  return best;
}

// ---- metric evaluators -------------------------------------------------------------

Bound caratheodory_metric(const Domain& d, const Point& x, const Vector& v,
                          const CompetitorOptions& opts) {
  require_member(d, x, "caratheodory_metric");
  require_vector(d, v, "caratheodory_metric");
  if (d.is_product()) return Bound::exact(product_metric(d, x, v));
  return Bound::lower(CompetitorFamily(d, opts).metric(x, v));
}

Bound kobayashi_metric(const Domain& d, const Point& x, const Vector& v,
                       const KobayashiOptions& opts) {
  require_member(d, x, "kobayashi_metric");
  require_vector(d, v, "kobayashi_metric");
  if (d.is_product()) return Bound::exact(product_metric(d, x, v));
  const double norm = v.norm();
  if (norm == 0.0) return Bound::exact(0.0);
  const Vector u = v / norm;
  double hi = 0.0;
  const double lo = affine_disk_radius(d, x, u, opts, &hi);
  double value = lo > 0.0 ? norm / lo : std::numeric_limits<double>::infinity();
  double tol = lo > 0.0 ? value - norm / hi : 0.0;

  if (opts.inner && opts.inner->dim() == d.dim() && contains(*opts.inner, x)) {
    const Domain& U = *opts.inner;
    const InclusionGeometry geo = inclusion_geometry(U, d, opts.samples, opts.seed);
    const double k = geo.R / (geo.R + geo.r);
    KobayashiOptions inner_opts = opts;
    inner_opts.inner.reset();
    const Bound in_u = kobayashi_metric(U, x, v, inner_opts);
    const double candidate = k * in_u.value;
    if (candidate < value) {
      value = candidate;
      tol = k * in_u.tol;
    }
  }
  return Bound::upper(value, tol);
}

Bound caratheodory_distance(const Domain& d, const Point& a, const Point& b,
                            const CompetitorOptions& opts) {
  require_member(d, a, "caratheodory_distance");
  require_member(d, b, "caratheodory_distance");
  if (a == b) return Bound::exact(0.0);
  if (d.is_product()) return Bound::exact(product_distance(d, a, b));
  return Bound::lower(CompetitorFamily(d, opts).distance(a, b));
}

InfinitesimalMetric::InfinitesimalMetric(Domain d, MetricKind kind, CompetitorOptions comp,
                                         KobayashiOptions kob)
    : domain_(std::move(d)), kind_(kind), kob_(std::move(kob)) {
  if (!domain_.is_product() && kind_ == MetricKind::Caratheodory) {
    family_ = std::make_shared<CompetitorFamily>(domain_, comp);
  }
}

BoundKind InfinitesimalMetric::bound_kind() const {
  if (domain_.is_product()) return BoundKind::Exact;
  return kind_ == MetricKind::Caratheodory ? BoundKind::Lower : BoundKind::Upper;
}

Bound InfinitesimalMetric::operator()(const Point& x, const Vector& v) const {
  if (domain_.is_product()) {
    if (x.size() != domain_.dim() || v.size() != domain_.dim()) {
      throw ArgumentError("metric: dimension mismatch");
    }
    if (!contains(domain_, x)) throw DomainError("metric: point is not in the domain");
    return Bound::exact(product_metric(domain_, x, v));
  }
  if (kind_ == MetricKind::Kobayashi) return kobayashi_metric(domain_, x, v, kob_);
  require_member(domain_, x, "caratheodory_metric");
  require_vector(domain_, v, "caratheodory_metric");
  return Bound::lower(family_->metric(x, v));
}

// ---- path length ---------------------------------------------------------------------

namespace {

// Integral of E(a + t(b - a), b - a) over [0, 1] split into `pieces`.
double segment_length(const InfinitesimalMetric& metric, const GaussLegendre& gl,
                      const Point& a, const Point& b, int pieces, bool check_nodes) {
  const Vector dir = b - a;
  const double h = 1.0 / pieces;
  double total = 0.0;
  Point x(a.size());
  for (int p = 0; p < pieces; ++p) {
    double piece = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double t = (p + gl.nodes[i]) * h;
      x = a + t * dir;
      if (check_nodes && !contains(metric.domain(), x)) {
        throw PathInvalidError("path_length: a quadrature node leaves the domain");
      }
      piece += gl.weights[i] * metric(x, dir).value;
    }
    total += piece * h;
  }
  return total;
}

}  // namespace

Bound path_length(const InfinitesimalMetric& metric, const Polyline& path,
                  const QuadratureOptions& opts) {
  if (path.vertices.empty()) throw ArgumentError("path_length: polyline has no vertices");
  for (const auto& p : path.vertices) {
    if (p.size() != metric.domain().dim()) throw ArgumentError("path_length: dimension mismatch");
    if (!contains(metric.domain(), p)) {
      throw PathInvalidError("path_length: a vertex lies outside the domain");
    }
  }
  const GaussLegendre gl(path.order);
  double total = 0.0;
  double tol = 0.0;
  for (std::size_t s = 0; s + 1 < path.vertices.size(); ++s) {
    const Point& a = path.vertices[s];
    const Point& b = path.vertices[s + 1];
    if (a == b) continue;
    double prev = segment_length(metric, gl, a, b, 1, true);
    double diff = 0.0;
    for (int k = 1; k <= opts.max_refinements; ++k) {
      const double cur = segment_length(metric, gl, a, b, 1 << k, true);
      diff = std::abs(cur - prev);
      prev = cur;
      if (diff <= opts.rel_tol * std::abs(cur)) break;
    }
    total += prev;
    tol += diff;
  }
  Bound out;
  out.value = total;
  out.tol = tol;
  if (metric.bound_kind() == BoundKind::Lower) {
    out.kind = BoundKind::Lower;
    out.caveat = true;
  } else {
    out.kind = BoundKind::Upper;
  }
  return out;
}

// ---- polyline optimizer ------------------------------------------------------------

namespace {

class PathDescent {
 public:
  PathDescent(const InfinitesimalMetric& metric, const PathOptions& opts)
      : metric_(metric), gl_(opts.descent_order), convex_(metric.domain().is_product()) {}

  double segment(const Point& a, const Point& b) const {
    if (a == b) return 0.0;
    // Product domains are convex, so in-domain endpoints keep every node inside.
    if (!contains(metric_.domain(), a) || !contains(metric_.domain(), b)) {
      return std::numeric_limits<double>::infinity();
    }
    try {
      return segment_length(metric_, gl_, a, b, 1, !convex_);
    } catch (const PathInvalidError&) {
      return std::numeric_limits<double>::infinity();
    }
  }

  bool segment_inside(const Point& a, const Point& b) const {
    if (!contains(metric_.domain(), a) || !contains(metric_.domain(), b)) return false;
    if (convex_) return true;
    for (int k = 1; k < 64; ++k) {
      if (!contains(metric_.domain(), a + (k / 64.0) * (b - a))) return false;
    }
    for (double t : gl_.nodes) {
      if (!contains(metric_.domain(), a + t * (b - a))) return false;
    }
    return true;
  }

  // Coordinate descent with parabolic line steps; returns the final length.
  double optimize(std::vector<Point>& v, double scale, int max_sweeps, double rel_tol) {
    const std::size_t nseg = v.size() - 1;
    std::vector<double> cost(nseg);
    for (std::size_t s = 0; s < nseg; ++s) cost[s] = segment(v[s], v[s + 1]);
    std::vector<double> step(v.size(), 0.0);
    for (std::size_t i = 1; i < nseg; ++i) {
      step[i] = 0.25 * std::min((v[i] - v[i - 1]).norm(), (v[i + 1] - v[i]).norm());
      if (step[i] == 0.0) step[i] = 0.25 * scale / static_cast<double>(nseg);
    }
    const double min_step = 1e-6 * scale / static_cast<double>(nseg);
    const int n = static_cast<int>(v.front().size());
    double total = sum(cost);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      const double before = total;
      bool active = false;
      for (std::size_t i = 1; i < nseg; ++i) {
        if (step[i] < min_step) continue;
        active = true;
        double h = step[i];
        double moved = 0.0;
        double local = cost[i - 1] + cost[i];
        const std::vector<Vector> dirs = frame(v[i - 1], v[i + 1], n);
        // Along the neighbor chord the vertex stays strictly between its
        // neighbors; a collision puts a kink in the length that stalls descent.
        const double span = (v[i + 1] - v[i - 1]).norm();
        for (std::size_t d = 0; d < dirs.size(); ++d) {
          const Vector& dir = dirs[d];
          double lo = -std::numeric_limits<double>::infinity();
          double hi = std::numeric_limits<double>::infinity();
          if (d == 0 && span > 0.0) {
            const double along = (v[i] - v[i - 1]).dot(dir).real();
            lo = 0.1 * span - along;
            hi = 0.9 * span - along;
            if (lo >= 0.0 || hi <= 0.0) {
              // Already outside the band: allow only moves back toward it.
              lo = std::min(lo, 0.0);
              hi = std::max(hi, 0.0);
            }
          }
          auto trial = [&](double s, double& left, double& right) {
            const Point x = v[i] + s * dir;
            left = segment(v[i - 1], x);
            right = segment(x, v[i + 1]);
            return left + right;
          };
          const double hp = std::min(h, hi);
          const double hm = std::min(h, -lo);
          if (hp <= 0.0 && hm <= 0.0) continue;
          double lp = 0, rp = 0, lm = 0, rm = 0;
          const double inf = std::numeric_limits<double>::infinity();
          const double fp = hp > 0.0 ? trial(hp, lp, rp) : inf;
          const double fm = hm > 0.0 ? trial(-hm, lm, rm) : inf;
          double best = local;
          double best_s = 0.0;
          double best_l = cost[i - 1];
          double best_r = cost[i];
          if (fp < best) {
            best = fp, best_s = hp, best_l = lp, best_r = rp;
          }
          if (fm < best) {
            best = fm, best_s = -hm, best_l = lm, best_r = rm;
          }
          const double curv = fp + fm - 2.0 * local;
          if (hp == h && hm == h && curv > 0.0 && std::isfinite(curv)) {
            double s = 0.5 * h * (fm - fp) / curv;
            s = std::clamp(s, std::max(-4.0 * h, lo), std::min(4.0 * h, hi));
            if (s != 0.0 && s != h && s != -h) {
              double ls = 0, rs = 0;
              const double fs = trial(s, ls, rs);
              if (fs < best) {
                best = fs, best_s = s, best_l = ls, best_r = rs;
              }
            }
          }
          if (best_s != 0.0) {
            v[i] += best_s * dir;
            cost[i - 1] = best_l;
            cost[i] = best_r;
            local = best;
            moved = std::max(moved, std::abs(best_s));
          }
        }
        step[i] = moved > 0.0 ? std::max(0.5 * h, std::min(2.0 * moved, 4.0 * h)) : 0.25 * h;
      }
      total = sum(cost);
      if (!active) break;
      if (before - total <= 0.1 * rel_tol * total && sweep > 0) {
        // Shrink every step once a sweep stops paying off.
        bool any = false;
        for (std::size_t i = 1; i < nseg; ++i) {
          step[i] *= 0.25;
          any = any || step[i] >= min_step;
        }
        if (!any) break;
      }
    }
    return total;
  }

  // Real orthonormal directions in C^n: the unit chord from a to b first,
  // then the coordinate directions with the chord projected out.
  static std::vector<Vector> frame(const Point& a, const Point& b, int n) {
    std::vector<Vector> dirs;
    const Vector chord = b - a;
    if (chord.norm() > 0.0) dirs.push_back(chord / chord.norm());
    for (int k = 0; k < 2 * n && static_cast<int>(dirs.size()) < 2 * n; ++k) {
      Vector e = Vector::Zero(n);
      e[k / 2] = k % 2 == 0 ? Complex(1, 0) : Complex(0, 1);
      for (const Vector& q : dirs) e -= q.dot(e).real() * q;
      const double len = e.norm();
      if (len > 1e-6) dirs.push_back(e / len);
    }
    return dirs;
  }

  static double sum(const std::vector<double>& c) {
    double s = 0.0;
    for (double x : c) s += x;
    return s;
  }

 private:
  const InfinitesimalMetric& metric_;
  GaussLegendre gl_;
  bool convex_;
};

std::vector<Point> subdivide(const std::vector<Point>& anchors, int per_piece) {
  std::vector<Point> out;
  out.push_back(anchors.front());
  for (std::size_t s = 0; s + 1 < anchors.size(); ++s) {
    for (int k = 1; k <= per_piece; ++k) {
      out.push_back(anchors[s] + (static_cast<double>(k) / per_piece) * (anchors[s + 1] - anchors[s]));
    }
  }
  return out;
}

}  // namespace

OptimizedPath shortest_polyline(const InfinitesimalMetric& metric, const Point& a,
                                const Point& b, const PathOptions& opts) {
  const Domain& d = metric.domain();
  require_member(d, a, "integrated_distance");
  require_member(d, b, "integrated_distance");
  if (opts.segments < 1) throw ArgumentError("integrated_distance: segments must be positive");
  if (a == b) return {Bound::exact(0.0), Polyline{{a}, opts.order}};

  PathDescent descent(metric, opts);
  std::vector<Point> anchors;
  if (descent.segment_inside(a, b)) {
    anchors = {a, b};
  } else {
    std::vector<Point> candidates = sample(d, 64, 0);
    std::stable_sort(candidates.begin(), candidates.end(), [&](const Point& p, const Point& q) {
      return (p - a).norm() + (p - b).norm() < (q - a).norm() + (q - b).norm();
    });
    for (const auto& m : candidates) {
      if (descent.segment_inside(a, m) && descent.segment_inside(m, b)) {
        anchors = {a, m, b};
        break;
      }
    }
    if (anchors.empty()) {
      throw ConnectivityError("integrated_distance: no in-domain polyline joins the endpoints");
    }
  }
  const int per_piece =
      std::max(1, opts.segments / static_cast<int>(anchors.size() - 1));
  std::vector<Point> verts = subdivide(anchors, per_piece);

  const double scale = (b - a).norm();
  double prev = std::numeric_limits<double>::infinity();
  for (int round = 0; round <= opts.refinements; ++round) {
    const double len = descent.optimize(verts, scale, opts.max_sweeps, opts.rel_tol);
    if (round > 0 && prev - len < opts.rel_tol * len) break;
    prev = len;
    if (round < opts.refinements) verts = subdivide(verts, 2);
  }
  Polyline path{std::move(verts), opts.order};
  Bound length = path_length(metric, path, opts.quad);
  return {length, std::move(path)};
}

Bound integrated_distance(const InfinitesimalMetric& metric, const Point& a, const Point& b,
                          const PathOptions& opts) {
  return shortest_polyline(metric, a, b, opts).length;
}

}  // namespace hypermetric

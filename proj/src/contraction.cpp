#include "hypermetric/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hypermetric/sequence.hpp"

namespace hypermetric {

const char* to_string(CertificateMethod m) {
  return m == CertificateMethod::TanhDiameter ? "tanh_diameter" : "dilation";
}

const char* to_string(InequalityVerdict v) {
  switch (v) {
    case InequalityVerdict::Holds:
      return "holds";
    case InequalityVerdict::Inconclusive:
      return "inconclusive";
    case InequalityVerdict::Violated:
      return "violated";
  }
  return "?";
}

Bound caratheodory_diameter(const Domain& X, const Domain& U, const DiameterOptions& opts) {
  // Probes relative compactness; throws InclusionError.
  (void)inner_gap(U, X, opts.samples, opts.seed);

  if (!opts.sampled_only && X.is_product() && U.is_product() && X.centers() == U.centers()) {
    // Antipodal points of the closure of U are extremal in each factor.
    double m = 0.0;
    for (int j = 0; j < X.dim(); ++j) {
      m = std::max(m, 2.0 * std::atanh(U.radii()[j] / X.radii()[j]));
    }
    return Bound::exact(m, 4.0 * std::numeric_limits<double>::epsilon() * m);
  }

  const std::vector<Point> pts = sample(U, opts.samples, opts.seed);
  double best = 0.0;
  if (X.is_product()) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        best = std::max(best, caratheodory_distance(X, pts[i], pts[j]).value);
      }
    }
  } else {
    const CompetitorFamily family(X, opts.competitors);
    for (const auto& p : pts) {
      if (!contains(X, p)) throw InclusionError("caratheodory_diameter: U is not inside X");
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        best = std::max(best, family.distance(pts[i], pts[j]));
      }
    }
  }
  return Bound::lower(best);
}

double tanh_diameter_constant(const Bound& M) {
  if (!std::isfinite(M.value) || M.value < 0.0) {
    throw ArgumentError("tanh_diameter_constant: M must be finite and nonnegative");
  }
  return std::tanh(M.value);
}

double dilation_constant(double R, double r) {
  if (!(R > 0.0) || !(r > 0.0) || !std::isfinite(R) || !std::isfinite(r)) {
    throw ArgumentError("dilation_constant: R and r must be finite and positive");
  }
  return R / (R + r);
}

HoloMap dilate_disk(const HoloMap& phi, double r, double R) {
  if (phi.input_dim() != 1) {
    throw ArgumentError("dilate_disk: an analytic disk has input dimension 1, got " +
                        std::to_string(phi.input_dim()));
  }
  if (!(R > 0.0) || !(r > 0.0) || !std::isfinite(R) || !std::isfinite(r)) {
    throw ArgumentError("dilate_disk: R and r must be finite and positive");
  }
  const Expr scale = Expr::literal(1.0 + r / R);
  const Expr zero[] = {Expr::literal(0.0)};
  std::vector<Expr> comps;
  for (const auto& c : phi.components()) {
    const Expr at_origin = substitute(c, zero);
    comps.push_back(Expr::binary(
        Expr::Kind::Add,
        Expr::binary(Expr::Kind::Multiply, scale,
                     Expr::binary(Expr::Kind::Subtract, c, at_origin)),
        at_origin));
  }
  return HoloMap(1, std::move(comps));
}

ContractionCertificate certify_contraction(const Domain& X, const Domain& U,
                                           CertificateMethod method,
                                           const CertificateOptions& opts) {
  ContractionCertificate cert;
  cert.method = method;
  if (method == CertificateMethod::Dilation) {
    const InclusionGeometry geo = inclusion_geometry(U, X, opts.samples, opts.seed);
    cert.R = geo.R;
    cert.r = geo.r;
    cert.k = dilation_constant(geo.R, geo.r);
    // The box diagonal is a safe R; a sampled gap is not a certified r.
    cert.rigorous = X.is_product() && U.is_product();
  } else {
    const Bound M = caratheodory_diameter(X, U, opts.diameter);
    cert.M = M;
    cert.k = tanh_diameter_constant(M);
    cert.rigorous = M.kind == BoundKind::Exact;
  }
  if (!(cert.k < 1.0)) {
    throw InclusionError("certify_contraction: contraction constant rounds to 1");
  }
  return cert;
}

ContractionReport verify_metric_contraction(const Domain& X, const Domain& U, double k,
                                            MetricKind metric, const VerifyOptions& opts) {
  if (!(k > 0.0 && k < 1.0)) {
    throw ArgumentError("verify_metric_contraction: k must lie in (0, 1)");
  }
  if (X.dim() != U.dim()) throw ArgumentError("verify_metric_contraction: dimension mismatch");
  const int n = X.dim();
  const InfinitesimalMetric outer(X, metric, opts.competitors, opts.kobayashi);
  const InfinitesimalMetric inner(U, metric, opts.competitors, opts.kobayashi);
  const std::vector<Point> xs = sample(U, opts.samples, opts.seed);
  const std::vector<Vector> random_dirs =
      random_unit_directions(n, (xs.size() + 1) / 2, opts.seed + 1);

  ContractionReport report;
  report.samples.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Vector v = i % 2 == 0 ? Vector(Vector::Unit(n, static_cast<Eigen::Index>((i / 2) % n)))
                                : random_dirs[i / 2];
    ContractionSample s{xs[i], v, outer(xs[i], v), inner(xs[i], v), 0.0,
                        InequalityVerdict::Inconclusive};
    s.ratio = s.inner.value > 0.0 ? s.outer.value / s.inner.value : 0.0;
    const auto up = s.outer.upper_side();
    const auto lo = s.inner.lower_side();
    const double slack = opts.tol * (1.0 + std::abs(s.outer.value) + std::abs(s.inner.value));
    if (up && lo && *up <= k * *lo + slack) {
      s.verdict = InequalityVerdict::Holds;
      ++report.holds;
    } else if (s.outer.kind == BoundKind::Exact && s.inner.kind == BoundKind::Exact) {
      s.verdict = InequalityVerdict::Violated;
      ++report.violated;
    } else {
      ++report.inconclusive;
    }
    if (report.samples.empty() || s.ratio > report.max_ratio) {
      report.max_ratio = s.ratio;
      report.argmax = i;
    }
    report.samples.push_back(std::move(s));
  }
  return report;
}

}  // namespace hypermetric

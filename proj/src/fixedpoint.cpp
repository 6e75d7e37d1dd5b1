#include "hypermetric/fixedpoint.hpp"

#include <cmath>
#include <string>

namespace hypermetric {

const char* to_string(StoppingRule r) {
  return r == StoppingRule::InvariantTail ? "invariant_tail" : "euclidean_surrogate";
}

MetricKind certificate_metric(CertificateMethod m) {
  return m == CertificateMethod::Dilation ? MetricKind::Kobayashi : MetricKind::Caratheodory;
}

namespace {

Point apply(const HoloMap& f, const Point& x) {
  try {
    return f.eval(x);
  } catch (const SingularityError& e) {
    throw PreconditionError(std::string("picard_solve: map is singular on X (") + e.what() + ")");
  }
}

double upper_of(const Bound& b) { return b.value + b.tol; }

}  // namespace

FixedPointResult picard_solve(const HoloMap& f, const Domain& X, const Domain& U, const Point& x0,
                              const SolveOptions& opts) {
  if (f.input_dim() != X.dim() || f.output_dim() != X.dim() || U.dim() != X.dim()) {
    throw ArgumentError("picard_solve: map and domains must share one dimension");
  }
  if (!(opts.tol > 0.0)) throw ArgumentError("picard_solve: tol must be positive");
  if (opts.max_iter < 1) throw ArgumentError("picard_solve: max_iter must be positive");
  if (x0.size() != X.dim()) throw ArgumentError("picard_solve: x0 has the wrong dimension");
  if (!contains(X, x0)) throw ArgumentError("picard_solve: x0 is not in X");

  FixedPointResult result;
  result.evidence = range_check(f, X, U, opts.samples, opts.seed, opts.range_floor);
  if (result.evidence.verdict == RangeVerdict::Refuted) {
    throw PreconditionError("picard_solve: range evidence refuted: f(X) is not contained in U");
  }
  if (result.evidence.verdict == RangeVerdict::Inconclusive) {
    if (!opts.override_range) {
      throw PreconditionError(
          "picard_solve: range evidence inconclusive (images within the margin floor of the "
          "boundary of U); pass the range override to proceed");
    }
    result.range_overridden = true;
  }

  CertificateOptions cert_opts;
  cert_opts.samples = opts.samples;
  cert_opts.seed = opts.seed;
  cert_opts.diameter = opts.diameter;
  const ContractionCertificate cert = certify_contraction(X, U, opts.method, cert_opts);
  const double k = cert.k;
  const InfinitesimalMetric metric(X, certificate_metric(opts.method));

  IterationTrace trace;
  trace.certificate = cert;
  trace.points.push_back(x0);

  const double surrogate = opts.tol * (1.0 - k) / k;
  for (int n = 0; n < opts.max_iter; ++n) {
    const Point& x = trace.points.back();
    Point next = apply(f, x);
    if (!contains(U, next)) {
      throw PreconditionError("picard_solve: iterate " + std::to_string(n + 1) +
                              " left U; f does not map X into U");
    }
    const double step = (next - x).norm();
    trace.step_euclid.push_back(step);

    bool stop = false;
    if (n == 0 || opts.step_invariant) {
      const Bound d = integrated_distance(metric, x, next, opts.path);
      if (n == 0) trace.first_step_bound = upper_of(d);
      if (opts.step_invariant) {
        trace.step_invariant.push_back(d);
        stop = k / (1.0 - k) * upper_of(d) <= opts.tol;
      }
    }
    if (!opts.step_invariant) stop = step <= surrogate;
    trace.points.push_back(std::move(next));

    if (stop) {
      const Point& c = trace.points.back();
      const double residual = (apply(f, c) - c).norm();
      if (residual <= opts.tol) {
        result.c = c;
        result.residual = residual;
        result.iterations = n + 1;
        result.certificate = cert;
        result.stopping_rule =
            opts.step_invariant ? StoppingRule::InvariantTail : StoppingRule::EuclideanSurrogate;
        result.trace = std::move(trace);
        result.certified_tail = certify_tail(result.trace, result.iterations);
        return result;
      }
    }
  }
  throw NonConvergenceError("picard_solve: no convergence within " +
                                std::to_string(opts.max_iter) + " iterations",
                            std::move(trace));
}

IterationTrace picard_trace(const HoloMap& f, const Point& x0, int steps) {
  if (steps < 0) throw ArgumentError("picard_trace: steps must be nonnegative");
  IterationTrace trace;
  trace.points.push_back(x0);
  for (int n = 0; n < steps; ++n) {
    Point next = f.eval(trace.points.back());
    trace.step_euclid.push_back((next - trace.points.back()).norm());
    trace.points.push_back(std::move(next));
  }
  return trace;
}

double certify_tail(const IterationTrace& trace, int n) {
  if (trace.points.empty()) throw ArgumentError("certify_tail: empty trace");
  if (!trace.first_step_bound) {
    throw ConfigError("certify_tail: trace has no first-step invariant distance bound");
  }
  const double k = trace.certificate.k;
  if (!(k >= 0.0 && k < 1.0)) throw ConfigError("certify_tail: certificate k must lie in [0, 1)");
  if (n < 0) throw ArgumentError("certify_tail: n must be nonnegative");
  const double d0 = *trace.first_step_bound;
  if (d0 == 0.0) return 0.0;
  return std::pow(k, n) / (1.0 - k) * d0;
}

DecayReport verify_decay(const IterationTrace& trace, double k, const DistanceFn& distance,
                         double slack) {
  if (trace.points.size() < 3) throw ArgumentError("verify_decay: trace needs at least 3 points");
  if (!(k >= 0.0 && k < 1.0)) throw ArgumentError("verify_decay: k must lie in [0, 1)");
  DecayReport report;
  const std::size_t steps = trace.points.size() - 1;
  for (std::size_t n = 0; n < steps; ++n) {
    const Point& a = trace.points[n];
    const Point& b = trace.points[n + 1];
    report.distances.push_back(a == b ? 0.0 : upper_of(distance(a, b)));
  }
  const double d0 = report.distances.front();
  // Absolute floor for steps at the level of rounding noise.
  constexpr double kNoise = 1e-15;
  for (std::size_t n = 0; n < steps; ++n) {
    const double env = std::pow(k, static_cast<double>(n)) * d0 * (1.0 + slack);
    report.envelope.push_back(env);
    if (!(report.distances[n] <= env + kNoise)) ++report.inconsistent_steps;
    if (n + 1 < steps && report.distances[n] > 0.0) {
      report.ratios.push_back(report.distances[n + 1] / report.distances[n]);
    }
  }
  return report;
}

}  // namespace hypermetric

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "hypermetric/contraction.hpp"
#include "hypermetric/domains.hpp"
#include "hypermetric/holomap.hpp"
#include "hypermetric/metrics.hpp"

namespace hypermetric {

/// Picard iterates x_{n+1} = f(x_n) with their step sizes.
struct IterationTrace {
  std::vector<Point> points;
  /// ||x_{n+1} - x_n||; one shorter than points.
  std::vector<double> step_euclid;
  /// Invariant-distance bounds of consecutive steps (empty unless requested).
  std::vector<Bound> step_invariant;
  ContractionCertificate certificate;
  /// Upper bound d_0 on the invariant distance between x_0 and x_1.
  std::optional<double> first_step_bound;
};

enum class StoppingRule { InvariantTail, EuclideanSurrogate };

const char* to_string(StoppingRule r);

struct FixedPointResult {
  Point c;
  double residual = 0.0;
  int iterations = 0;
  ContractionCertificate certificate;
  /// k^n / (1 - k) d_0: bound on the invariant distance from c to the fixed point.
  double certified_tail = 0.0;
  RangeEvidence evidence;
  bool range_overridden = false;
  StoppingRule stopping_rule = StoppingRule::EuclideanSurrogate;
  IterationTrace trace;
};

class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, IterationTrace trace)
      : Error(what), trace_(std::move(trace)) {}
  const IterationTrace& trace() const { return trace_; }

 private:
  IterationTrace trace_;
};

struct SolveOptions {
  /// Euclidean tolerance on the residual ||f(c) - c||.
  double tol = 1e-10;
  int max_iter = 10000;
  CertificateMethod method = CertificateMethod::Dilation;
  /// Proceed when range evidence is inconclusive (never when refuted).
  bool override_range = false;
  /// Bound every step in the invariant distance and stop on the certified tail.
  bool step_invariant = false;
  std::size_t samples = 512;
  std::uint64_t seed = 0;
  double range_floor = 1e-6;
  PathOptions path;
  DiameterOptions diameter;
};

/// The invariant metric a certificate contracts: Kobayashi for the dilation
/// route, Caratheodory for the tanh-diameter route.
MetricKind certificate_metric(CertificateMethod m);

/// Iterates f from x0 until the stopping rule fires and the residual is
/// below tol. Throws PreconditionError, ArgumentError, NonConvergenceError.
FixedPointResult picard_solve(const HoloMap& f, const Domain& X, const Domain& U, const Point& x0,
                              const SolveOptions& opts = {});

/// The first `steps` Picard steps from x0 (steps + 1 points).
IterationTrace picard_trace(const HoloMap& f, const Point& x0, int steps);

/// k^n / (1 - k) d_0.
double certify_tail(const IterationTrace& trace, int n);

using DistanceFn = std::function<Bound(const Point&, const Point&)>;

struct DecayReport {
  /// d_n = distance(x_n, x_{n+1}) (upper sides).
  std::vector<double> distances;
  /// k^n d_0 (1 + slack).
  std::vector<double> envelope;
  /// d_{n+1} / d_n where d_n > 0.
  std::vector<double> ratios;
  std::size_t inconsistent_steps = 0;
  bool consistent() const { return inconsistent_steps == 0; }
};

/// Checks d_n <= k^n d_0 along a trace. Upper bounds sit on both sides, so
/// a failed check is reported as inconclusive rather than a violation.
DecayReport verify_decay(const IterationTrace& trace, double k, const DistanceFn& distance,
                         double slack = 1e-3);

}  // namespace hypermetric

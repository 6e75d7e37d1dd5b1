#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hypermetric/domains.hpp"
#include "hypermetric/holomap.hpp"
#include "hypermetric/metrics.hpp"

namespace hypermetric {

enum class CertificateMethod { TanhDiameter, Dilation };

const char* to_string(CertificateMethod m);

/// Contraction constant k < 1 for a relatively compact inclusion U in X,
/// with the ingredients it was computed from.
///
/// TanhDiameter: k = tanh(M), M the Caratheodory diameter of U in X.
/// Dilation:     k = R / (R + r), R a Euclidean diameter bound of U and r a
///               lower bound on the gap between U and the boundary of X.
struct ContractionCertificate {
  double k = 0.0;
  CertificateMethod method = CertificateMethod::Dilation;
  std::optional<Bound> M;
  std::optional<double> R;
  std::optional<double> r;
  /// False when an ingredient is only a sampled estimate in the unsafe direction.
  bool rigorous = false;
};

struct DiameterOptions {
  std::size_t samples = 256;
  std::uint64_t seed = 0;
  /// Skip the closed form on concentric product domains.
  bool sampled_only = false;
  CompetitorOptions competitors;
};

/// Caratheodory diameter of U measured in X (max over sampled pairs of U).
Bound caratheodory_diameter(const Domain& X, const Domain& U, const DiameterOptions& opts = {});

/// tanh(M).
double tanh_diameter_constant(const Bound& M);

/// R / (R + r) = 1 / (1 + r/R).
double dilation_constant(double R, double r);

/// psi(zeta) = (1 + r/R)(phi(zeta) - phi(0)) + phi(0) for an analytic disk phi.
HoloMap dilate_disk(const HoloMap& phi, double r, double R);

struct CertificateOptions {
  std::size_t samples = 512;
  std::uint64_t seed = 0;
  DiameterOptions diameter;
};

ContractionCertificate certify_contraction(const Domain& X, const Domain& U,
                                           CertificateMethod method,
                                           const CertificateOptions& opts = {});

enum class InequalityVerdict { Holds, Inconclusive, Violated };

const char* to_string(InequalityVerdict v);

struct ContractionSample {
  Point x;
  Vector v;
  Bound outer;  // metric of X at (x, v)
  Bound inner;  // metric of U at (x, v)
  double ratio;
  InequalityVerdict verdict;
};

struct ContractionReport {
  std::vector<ContractionSample> samples;
  std::size_t holds = 0;
  std::size_t inconclusive = 0;
  std::size_t violated = 0;
  double max_ratio = 0.0;
  /// Sample index attaining max_ratio.
  std::size_t argmax = 0;

  bool all_hold() const { return holds == samples.size(); }
};

struct VerifyOptions {
  std::size_t samples = 256;
  std::uint64_t seed = 0;
  /// Absolute slack on the inequality, scaled by 1 + |values|.
  double tol = 1e-12;
  CompetitorOptions competitors;
  KobayashiOptions kobayashi;
};

/// Checks metric_X(x, v) <= k metric_U(x, v) at sampled x in U, comparing
/// only the certified sides of each bound.
ContractionReport verify_metric_contraction(const Domain& X, const Domain& U, double k,
                                            MetricKind metric, const VerifyOptions& opts = {});

}  // namespace hypermetric

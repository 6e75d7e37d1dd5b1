#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "hypermetric/holomap.hpp"
#include "hypermetric/types.hpp"

namespace hypermetric {

enum class DomainKind { Disk, Polydisc, SemiAnalytic };

/// Defining inequality |g(z)| < threshold with g scalar-valued.
struct Constraint {
  HoloMap g;
  double threshold;
};

/// Axis-aligned box in C^n: lo[j].real() <= Re z_j <= hi[j].real(), same for Im.
struct Box {
  Eigen::VectorXcd lo;
  Eigen::VectorXcd hi;

  bool bounded() const;
  Point center() const;
  /// Euclidean diagonal length.
  double diagonal() const;
  /// Per-coordinate sup of |z_j - center_j| over the box.
  Eigen::VectorXd half_diagonals() const;
};

/// A bounded open subset of C^n.
///
/// Disk and Polydisc carry closed-form geometry; SemiAnalytic domains are
/// intersections of sublevel sets {|g_i| < t_i} with an enclosing box.
class Domain {
 public:
  static Domain disk(Complex center, double radius);
  static Domain unit_disk() { return disk(0.0, 1.0); }
  static Domain polydisc(Eigen::VectorXcd centers, Eigen::VectorXd radii);
  static Domain semianalytic(int dim, std::vector<Constraint> constraints, Box box);

  DomainKind kind() const { return kind_; }
  int dim() const { return dim_; }
  /// Disk or Polydisc.
  bool is_product() const { return kind_ != DomainKind::SemiAnalytic; }

  const Eigen::VectorXcd& centers() const { return centers_; }
  const Eigen::VectorXd& radii() const { return radii_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  /// Enclosing box (computed for product domains).
  const Box& box() const { return box_; }

 private:
  Domain() = default;

  DomainKind kind_ = DomainKind::Disk;
  int dim_ = 0;
  Eigen::VectorXcd centers_;
  Eigen::VectorXd radii_;
  std::vector<Constraint> constraints_;
  Box box_;
};

/// The Euclidean data behind the dilation constant: U lies in a ball of
/// radius R around each of its points, and B(x, r) lies in X for x in U.
struct InclusionGeometry {
  double R;
  double r;
};

/// Gap below which an inclusion is treated as not relatively compact.
inline constexpr double kGapFloor = 1e-12;
/// Multiplier applied to sampled (non closed-form) gaps and ray distances.
inline constexpr double kSampledSafety = 0.9;

bool contains(const Domain& d, const Point& p);

/// Lower bound on the Euclidean distance from p to the complement of d.
double boundary_distance(const Domain& d, const Point& p);

/// Upper bound on the Euclidean diameter of U.
double diameter_bound(const Domain& U, std::size_t samples = 512, std::uint64_t seed = 0);

/// Lower bound on the Euclidean gap between U and the boundary of X.
double inner_gap(const Domain& U, const Domain& X, std::size_t samples = 512,
                 std::uint64_t seed = 0);

InclusionGeometry inclusion_geometry(const Domain& U, const Domain& X, std::size_t samples = 512,
                                     std::uint64_t seed = 0);

/// Deterministic low-discrepancy points of d, boundary-biased: the first
/// point is the center (when it is a member) and every fourth point lies
/// within 1% of the boundary along its ray.
std::vector<Point> sample(const Domain& d, std::size_t count, std::uint64_t seed);

/// Re-encodes a Disk/Polydisc as the SemiAnalytic domain {|z_j - c_j| < rho_j}.
Domain as_semianalytic(const Domain& d);

/// Distance from p along unit direction u to the first non-member point,
/// found by marching then bisection; capped at `limit`.
double ray_exit(const Domain& d, const Point& p, const Vector& u, double limit);

const char* to_string(DomainKind k);

}  // namespace hypermetric

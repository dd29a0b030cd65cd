#pragma once

// Finite-dimensional normed-space geometry: points, closed convex regions,
// metric projection, inter-set distance and the cyclic index convention.

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace semicyclic {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kDefaultMembershipTol = 1e-9;

/// A point of R^n with finite coordinates.
class Point {
 public:
  explicit Point(Vector coords);
  Point(std::initializer_list<double> coords);

  const Vector& coords() const noexcept { return coords_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(coords_.size()); }
  double operator[](std::size_t i) const { return coords_[static_cast<Eigen::Index>(i)]; }

 private:
  Vector coords_;
};

/// Euclidean norm or an l_q norm with 1 < q < infinity.
class NormSpec {
 public:
  enum class Kind { euclidean, lp };

  static NormSpec euclidean() { return NormSpec(Kind::euclidean, 2.0); }
  static NormSpec lp(double exponent);

  Kind kind() const noexcept { return kind_; }
  double exponent() const noexcept { return exponent_; }
  double norm(const Vector& v) const;

  friend bool operator==(const NormSpec&, const NormSpec&) = default;

 private:
  NormSpec(Kind kind, double exponent) : kind_(kind), exponent_(exponent) {}

  Kind kind_;
  double exponent_;
};

double metric_distance(const NormSpec& norm, const Point& x, const Point& y);

struct Box {
  Vector lo;
  Vector hi;
};

struct Ball {
  Vector center;
  double radius;
};

/// { x : a x <= b }, certified nonempty by `interior`.
struct Polytope {
  Matrix a;
  Vector b;
  Vector interior;
};

/// Closed convex region with its own membership tolerance.
class ConvexRegion {
 public:
  using Shape = std::variant<Box, Ball, Polytope>;

  static ConvexRegion box(Vector lo, Vector hi, double tolerance = kDefaultMembershipTol);
  static ConvexRegion ball(Vector center, double radius, double tolerance = kDefaultMembershipTol);
  static ConvexRegion polytope(Matrix a, Vector b, Vector interior,
                               double tolerance = kDefaultMembershipTol);

  const Shape& shape() const noexcept { return shape_; }
  double tolerance() const noexcept { return tolerance_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(bbox_lo_.size()); }

  /// Box midpoint, ball centre, or the polytope's certified interior point.
  Vector center() const;
  const Vector& bbox_lo() const noexcept { return bbox_lo_; }
  const Vector& bbox_hi() const noexcept { return bbox_hi_; }

 private:
  ConvexRegion(Shape shape, double tolerance, Vector bbox_lo, Vector bbox_hi)
      : shape_(std::move(shape)),
        tolerance_(tolerance),
        bbox_lo_(std::move(bbox_lo)),
        bbox_hi_(std::move(bbox_hi)) {}

  Shape shape_;
  double tolerance_;
  Vector bbox_lo_;
  Vector bbox_hi_;
};

/// Nearest point of `region` to `x`. The l_q projection exists only for
/// boxes (it is separable); balls and polytopes need the euclidean norm.
Point project(const NormSpec& norm, const ConvexRegion& region, const Point& x);

/// inf { d(a, b) : a in A, b in B } by alternating projections.
double region_distance(const NormSpec& norm, const ConvexRegion& a, const ConvexRegion& b);

/// True iff the euclidean distance from x to the region is at most tol.
bool contains(const ConvexRegion& region, const Point& x, double tol);
inline bool contains(const ConvexRegion& region, const Point& x) {
  return contains(region, x, region.tolerance());
}

/// Successor of region i among p regions, 0-based: p-1 wraps to 0.
std::size_t cyclic_successor(std::size_t i, std::size_t p);
std::size_t cyclic_predecessor(std::size_t i, std::size_t p);

/// The ordered regions A_1..A_p together with their pairwise distances.
class CyclePartition {
 public:
  CyclePartition(NormSpec norm, std::vector<ConvexRegion> regions);

  const NormSpec& norm() const noexcept { return norm_; }
  std::size_t size() const noexcept { return regions_.size(); }
  std::size_t dim() const noexcept { return regions_.front().dim(); }
  const ConvexRegion& region(std::size_t i) const { return regions_.at(i); }
  const std::vector<ConvexRegion>& regions() const noexcept { return regions_; }

  double distance(std::size_t i, std::size_t j) const { return dist_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); }
  const Matrix& distance_matrix() const noexcept { return dist_; }
  /// d(A_i, A_{i+1}) with wraparound.
  double adjacent_gap(std::size_t i) const { return adjacent_.at(i); }
  const std::vector<double>& adjacent_gaps() const noexcept { return adjacent_; }

  /// Largest region membership tolerance.
  double membership_tolerance() const noexcept { return membership_tol_; }
  /// Some adjacent pair touches.
  bool intersecting() const noexcept { return intersecting_; }
  /// Every adjacent pair touches.
  bool all_adjacent_intersect() const noexcept;

  std::size_t successor(std::size_t i) const { return cyclic_successor(i, size()); }

  /// Region containing x: `preferred` if it contains x, else the lowest index.
  std::optional<std::size_t> locate(const Point& x, std::optional<std::size_t> preferred = {}) const;

 private:
  NormSpec norm_;
  std::vector<ConvexRegion> regions_;
  Matrix dist_;
  std::vector<double> adjacent_;
  double membership_tol_ = 0.0;
  bool intersecting_ = false;
};

}  // namespace semicyclic

#include "semicyclic/spaces.hpp"

#include "semicyclic/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace semicyclic {

namespace {

constexpr int kRegionDistanceRounds = 100000;
constexpr double kRegionDistanceStop = 1e-12;
constexpr int kPolytopeSweeps = 10000;

bool all_finite(const Vector& v) { return v.allFinite(); }

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw InvalidInput(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                       " vs " + std::to_string(b) + ")");
  }
}

double max_violation(const Polytope& poly, const Vector& y) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < poly.a.rows(); ++j) {
    const double excess = (poly.a.row(j).dot(y) - poly.b[j]) / poly.a.row(j).norm();
    worst = std::max(worst, excess);
  }
  return worst;
}

Vector project_halfspace(const Polytope& poly, Eigen::Index j, const Vector& z) {
  const auto row = poly.a.row(j);
  const double excess = row.dot(z) - poly.b[j];
  if (excess <= 0.0) return z;
  return z - (excess / row.squaredNorm()) * row.transpose();
}

// Dykstra's algorithm over the halfspaces: the limit is the euclidean
// projection onto their intersection, not merely a feasible point.
Vector project_polytope(const Polytope& poly, const Vector& x) {
  if (max_violation(poly, x) <= 0.0) return x;
  const Eigen::Index m = poly.a.rows();
  Matrix increments = Matrix::Zero(x.size(), m);
  Vector y = x;
  for (int sweep = 0; sweep < kPolytopeSweeps; ++sweep) {
    const Vector before = y;
    for (Eigen::Index j = 0; j < m; ++j) {
      const Vector shifted = y + increments.col(j);
      y = project_halfspace(poly, j, shifted);
      increments.col(j) = shifted - y;
    }
    const double scale = 1.0 + y.norm();
    if ((y - before).norm() <= 1e-15 * scale && max_violation(poly, y) <= 1e-14 * scale) break;
  }
  // Feasibility restoration for whatever Dykstra left on the table.
  for (int pass = 0; pass < 100 && max_violation(poly, y) > 0.0; ++pass) {
    for (Eigen::Index j = 0; j < m; ++j) y = project_halfspace(poly, j, y);
  }
  return y;
}

void enumerate_subsets(int m, int n, int start, std::vector<int>& current,
                       std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == n) {
    out.push_back(current);
    return;
  }
  for (int j = start; j < m; ++j) {
    current.push_back(j);
    enumerate_subsets(m, n, j + 1, current, out);
    current.pop_back();
  }
}

std::pair<Vector, Vector> polytope_bbox(const Polytope& poly) {
  const int n = static_cast<int>(poly.a.cols());
  const int m = static_cast<int>(poly.a.rows());

  // Directions that a bounded polytope must block.
  std::vector<Vector> probes;
  for (int i = 0; i < n; ++i) {
    probes.push_back(Vector::Unit(n, i));
    probes.push_back(-Vector::Unit(n, i));
  }
  for (int mask = 0; mask < (1 << n); ++mask) {
    Vector d(n);
    for (int i = 0; i < n; ++i) d[i] = (mask >> i) & 1 ? 1.0 : -1.0;
    probes.push_back(d);
  }
  for (const auto& d : probes) {
    if ((poly.a * d).maxCoeff() <= 0.0) throw InvalidInput("polytope: region is unbounded");
  }

  std::vector<std::vector<int>> subsets;
  std::vector<int> current;
  enumerate_subsets(m, n, 0, current, subsets);

  Vector lo = Vector::Constant(n, std::numeric_limits<double>::infinity());
  Vector hi = Vector::Constant(n, -std::numeric_limits<double>::infinity());
  bool found = false;
  for (const auto& subset : subsets) {
    Matrix sub(n, n);
    Vector rhs(n);
    for (int r = 0; r < n; ++r) {
      sub.row(r) = poly.a.row(subset[static_cast<std::size_t>(r)]);
      rhs[r] = poly.b[subset[static_cast<std::size_t>(r)]];
    }
    Eigen::FullPivLU<Matrix> lu(sub);
    if (!lu.isInvertible()) continue;
    const Vector vertex = lu.solve(rhs);
    const double scale = 1.0 + vertex.lpNorm<Eigen::Infinity>();
    if (max_violation(poly, vertex) > 1e-9 * scale) continue;
    lo = lo.cwiseMin(vertex);
    hi = hi.cwiseMax(vertex);
    found = true;
  }
  if (!found) throw InvalidInput("polytope: no vertices found");
  return {lo, hi};
}

double alternating_gap(const NormSpec& norm, const ConvexRegion& first, const ConvexRegion& second) {
  Point a(first.center());
  Point b = project(norm, second, a);
  double gap = metric_distance(norm, a, b);
  for (int round = 0; round < kRegionDistanceRounds; ++round) {
    a = project(norm, first, b);
    b = project(norm, second, a);
    const double next = metric_distance(norm, a, b);
    if (std::abs(gap - next) < kRegionDistanceStop) return next;
    gap = next;
  }
  throw ConvergenceFailure("region_distance: alternating projections did not settle", gap);
}

}  // namespace

Point::Point(Vector coords) : coords_(std::move(coords)) {
  if (coords_.size() < 1) throw InvalidInput("Point: dimension must be at least 1");
  if (!all_finite(coords_)) throw InvalidInput("Point: coordinates must be finite");
}

Point::Point(std::initializer_list<double> coords)
    : Point(Eigen::Map<const Vector>(coords.begin(), static_cast<Eigen::Index>(coords.size()))) {}

NormSpec NormSpec::lp(double exponent) {
  if (!(exponent > 1.0) || !std::isfinite(exponent)) {
    throw InvalidInput("NormSpec: l_q exponent must satisfy 1 < q < inf");
  }
  return NormSpec(Kind::lp, exponent);
}

double NormSpec::norm(const Vector& v) const {
  if (kind_ == Kind::euclidean) return v.norm();
  const double peak = v.lpNorm<Eigen::Infinity>();
  if (peak == 0.0) return 0.0;
  // Scaled by the largest entry.
  double sum = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) sum += std::pow(std::abs(v[i]) / peak, exponent_);
  return peak * std::pow(sum, 1.0 / exponent_);
}

double metric_distance(const NormSpec& norm, const Point& x, const Point& y) {
  require_same_dim(x.dim(), y.dim(), "metric_distance");
  return norm.norm(x.coords() - y.coords());
}

ConvexRegion ConvexRegion::box(Vector lo, Vector hi, double tolerance) {
  if (lo.size() < 1) throw InvalidInput("box: dimension must be at least 1");
  require_same_dim(static_cast<std::size_t>(lo.size()), static_cast<std::size_t>(hi.size()), "box");
  if (!all_finite(lo) || !all_finite(hi)) throw InvalidInput("box: bounds must be finite");
  if ((lo.array() > hi.array()).any()) throw InvalidInput("box: lo must not exceed hi");
  if (!(tolerance >= 0.0)) throw InvalidInput("box: tolerance must be >= 0");
  Vector bl = lo, bh = hi;
  return ConvexRegion(Box{std::move(lo), std::move(hi)}, tolerance, std::move(bl), std::move(bh));
}

ConvexRegion ConvexRegion::ball(Vector center, double radius, double tolerance) {
  if (center.size() < 1) throw InvalidInput("ball: dimension must be at least 1");
  if (!all_finite(center)) throw InvalidInput("ball: centre must be finite");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidInput("ball: radius must be > 0");
  if (!(tolerance >= 0.0)) throw InvalidInput("ball: tolerance must be >= 0");
  Vector lo = center.array() - radius;
  Vector hi = center.array() + radius;
  return ConvexRegion(Ball{std::move(center), radius}, tolerance, std::move(lo), std::move(hi));
}

ConvexRegion ConvexRegion::polytope(Matrix a, Vector b, Vector interior, double tolerance) {
  if (a.rows() < 1 || a.cols() < 1) throw InvalidInput("polytope: needs at least one halfspace");
  if (a.rows() != b.size()) throw InvalidInput("polytope: row count of a must match b");
  require_same_dim(static_cast<std::size_t>(a.cols()), static_cast<std::size_t>(interior.size()),
                   "polytope interior point");
  if (!a.allFinite() || !all_finite(b) || !all_finite(interior)) {
    throw InvalidInput("polytope: data must be finite");
  }
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    if (a.row(j).norm() == 0.0) throw InvalidInput("polytope: zero halfspace normal");
  }
  if (!(tolerance >= 0.0)) throw InvalidInput("polytope: tolerance must be >= 0");
  Polytope poly{std::move(a), std::move(b), std::move(interior)};
  if (max_violation(poly, poly.interior) > tolerance) {
    throw InvalidInput("polytope: certified interior point violates a halfspace");
  }
  auto [lo, hi] = polytope_bbox(poly);
  return ConvexRegion(std::move(poly), tolerance, std::move(lo), std::move(hi));
}

Vector ConvexRegion::center() const {
  return std::visit(
      [](const auto& s) -> Vector {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Box>) {
          return 0.5 * (s.lo + s.hi);
        } else if constexpr (std::is_same_v<S, Ball>) {
          return s.center;
        } else {
          return s.interior;
        }
      },
      shape_);
}

Point project(const NormSpec& norm, const ConvexRegion& region, const Point& x) {
  require_same_dim(region.dim(), x.dim(), "project");
  return std::visit(
      [&](const auto& s) -> Point {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Box>) {
          return Point(x.coords().cwiseMax(s.lo).cwiseMin(s.hi));
        } else if constexpr (std::is_same_v<S, Ball>) {
          if (norm.kind() != NormSpec::Kind::euclidean) {
            throw UnsupportedCapability("project: l_q projection onto a ball is not supported");
          }
          const Vector offset = x.coords() - s.center;
          const double r = offset.norm();
          if (r <= s.radius) return x;
          return Point(s.center + (s.radius / r) * offset);
        } else {
          if (norm.kind() != NormSpec::Kind::euclidean) {
            throw UnsupportedCapability("project: l_q projection onto a polytope is not supported");
          }
          return Point(project_polytope(s, x.coords()));
        }
      },
      region.shape());
}

double region_distance(const NormSpec& norm, const ConvexRegion& a, const ConvexRegion& b) {
  require_same_dim(a.dim(), b.dim(), "region_distance");
  return std::min(alternating_gap(norm, a, b), alternating_gap(norm, b, a));
}

bool contains(const ConvexRegion& region, const Point& x, double tol) {
  if (!(tol >= 0.0)) throw InvalidInput("contains: tolerance must be >= 0");
  const Point nearest = project(NormSpec::euclidean(), region, x);
  return (nearest.coords() - x.coords()).norm() <= tol;
}

std::size_t cyclic_successor(std::size_t i, std::size_t p) {
  if (p == 0 || i >= p) throw InvalidInput("cyclic_successor: index out of range");
  return i + 1 == p ? 0 : i + 1;
}

std::size_t cyclic_predecessor(std::size_t i, std::size_t p) {
  if (p == 0 || i >= p) throw InvalidInput("cyclic_predecessor: index out of range");
  return i == 0 ? p - 1 : i - 1;
}

CyclePartition::CyclePartition(NormSpec norm, std::vector<ConvexRegion> regions)
    : norm_(norm), regions_(std::move(regions)) {
  const std::size_t p = regions_.size();
  if (p < 2) throw InvalidInput("CyclePartition: at least two regions are required");
  for (const auto& r : regions_) require_same_dim(r.dim(), regions_.front().dim(), "CyclePartition");

  dist_ = Matrix::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      const double d = region_distance(norm_, regions_[i], regions_[j]);
      dist_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d;
      dist_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = d;
    }
  }
  for (std::size_t i = 0; i < p; ++i) adjacent_.push_back(distance(i, successor(i)));
  for (const auto& r : regions_) membership_tol_ = std::max(membership_tol_, r.tolerance());
  intersecting_ = *std::min_element(adjacent_.begin(), adjacent_.end()) <= membership_tol_;
}

bool CyclePartition::all_adjacent_intersect() const noexcept {
  return *std::max_element(adjacent_.begin(), adjacent_.end()) <= membership_tol_;
}

std::optional<std::size_t> CyclePartition::locate(const Point& x,
                                                  std::optional<std::size_t> preferred) const {
  if (preferred && *preferred < size() && contains(regions_[*preferred], x)) return preferred;
  for (std::size_t i = 0; i < size(); ++i) {
    if (contains(regions_[i], x)) return i;
  }
  return std::nullopt;
}

}  // namespace semicyclic

#pragma once

// Asymptotics of orbits: limit classification, the limiting set, uniqueness
// of best proximity points, and fixed points of intersecting partitions.

#include "semicyclic/orbit.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace semicyclic {

enum class LimitClass { to_D, to_zero, bounded, divergent, inconclusive };

std::string_view to_string(LimitClass c);
/// Throws InvalidInput on an unknown name.
LimitClass limit_class_from_string(std::string_view name);

struct ProximityVerdict {
  LimitClass limit_class = LimitClass::inconclusive;
  double limit_estimate = 0.0;  // max of the tail window
  double residual = 0.0;        // |estimate - target|
};

struct LimitTolerances {
  double limit = 1e-6;
  double divergence_cap = 1e12;
};

/// Classifies the final `window` entries of the trace against the gap D.
/// Requires at least 4 * window entries.
ProximityVerdict detect_limit(const DistanceTrace& trace, double gap, std::size_t window,
                              const LimitTolerances& tol = {});

/// Same, with a separate target gap per step.
ProximityVerdict detect_limit(const DistanceTrace& trace, std::span<const double> gaps,
                              std::size_t window, const LimitTolerances& tol = {});

struct LimitPoint {
  Point z;
  std::size_t region = 0;
  std::size_t residue = 0;  // orbit step index mod p
  bool terminal = false;    // first point of its region within a period
  double residual = 0.0;    // ||x_t - x_{t-p}|| at the final window
};

struct LimitingSet {
  bool conclusive = false;
  std::string reason;
  /// Final period of the orbit in cycle order.
  std::vector<LimitPoint> points;
  /// z_i per region; empty when the orbit skipped the region in its last period.
  std::vector<std::optional<Point>> terminal;
  /// Step after which set indices follow the strict cyclic pattern.
  std::optional<std::size_t> settle_step;
  double max_residual = 0.0;
  /// Largest distance between corresponding terminal points across the orbits.
  double orbit_spread = 0.0;

  const Point& z(std::size_t region) const;
};

inline constexpr std::size_t kSettlePeriods = 3;

/// Extracts the limiting set from the final period of each orbit; the result
/// describes the first orbit and records how far the others disagree.
LimitingSet extract_limiting_set(std::span<const Orbit> orbits, const SemiCyclicMapping& map,
                                 double tol = 1e-6);

/// First index from which the set indices follow i -> i + 1 to the end, if
/// that tail spans at least kSettlePeriods periods.
std::optional<std::size_t> settle_step(const Orbit& orbit, std::size_t p);

struct UniquenessResult {
  bool conclusive = false;
  bool unique = false;
  double spread = 0.0;
  std::vector<LimitingSet> sets;
};

/// Needs at least two starts and one start in every region.
UniquenessResult uniqueness_check(const SemiCyclicMapping& map, std::span<const Located> starts,
                                  std::size_t steps, double tol = 1e-6);

struct Result4Outcome {
  bool conclusive = false;
  bool holds = false;
  double tail_max = 0.0;       // max ||z_n - x_n|| over the tail
  double precondition = 0.0;   // max deviation of ||x_n - y_n||, ||z_n - y_n|| from D
};

struct Result4Tolerances {
  double precondition = 1e-4;
  double conclusion = 1e-6;
  std::size_t window = 0;  // 0: final quarter of the sequences
};

/// x_n, z_n in A and y_n in B with both gap sequences near D on the tail;
/// checks that ||z_n - x_n|| vanishes there.
Result4Outcome result4_check(const NormSpec& norm, const ConvexRegion& a, const ConvexRegion& b,
                             std::span<const Point> x, std::span<const Point> z,
                             std::span<const Point> y, double gap, const Result4Tolerances& tol = {});

struct FixedPointResult {
  Point z;
  std::size_t region = 0;
  double residual = 0.0;
  bool holds = false;
};

/// Collapses the limiting set to its centroid and evaluates d(z, T z).
/// Throws InvalidInput unless every adjacent pair of regions intersects.
FixedPointResult fixed_point_check(const SemiCyclicMapping& map, const LimitingSet& limiting,
                                   double tol = 1e-8);

}  // namespace semicyclic

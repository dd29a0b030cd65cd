#pragma once

#include "semicyclic/audit.hpp"
#include "semicyclic/classify.hpp"
#include "semicyclic/errors.hpp"
#include "semicyclic/orbit.hpp"

#include <vector>

namespace fx {

using namespace semicyclic;

inline Vector v1(double a) { return Vector::Constant(1, a); }
inline Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

inline ConvexRegion interval(double lo, double hi) { return ConvexRegion::box(v1(lo), v1(hi)); }

/// A_1 = [1, 2], A_2 = [-2, -1].
inline CyclePartition e1_partition() {
  return CyclePartition(NormSpec::euclidean(), {interval(1, 2), interval(-2, -1)});
}

inline SemiCyclicMapping e1(double k = 0.5, std::vector<double> gains = {}) {
  CyclePartition part = e1_partition();
  std::vector<Point> anchors{Point{1.0}, Point{-1.0}};
  InnerMapSpec inner = build_anchor_inner(part, anchors, {k, k});
  ImpulseSpec impulse = gains.empty() ? ImpulseSpec::identity()
                                      : build_anchor_impulse(part, anchors, GainSchedule(gains));
  return SemiCyclicMapping(std::move(part), std::move(inner), std::move(impulse));
}

/// A_1 = [0, 2], A_2 = [-2, 0], anchors at 0.
inline SemiCyclicMapping intersecting(double k = 0.5, std::vector<double> gains = {}) {
  CyclePartition part(NormSpec::euclidean(), {interval(0, 2), interval(-2, 0)});
  std::vector<Point> anchors{Point{0.0}, Point{0.0}};
  InnerMapSpec inner = build_anchor_inner(part, anchors, {k, k});
  ImpulseSpec impulse = gains.empty() ? ImpulseSpec::identity()
                                      : build_anchor_impulse(part, anchors, GainSchedule(gains));
  return SemiCyclicMapping(std::move(part), std::move(inner), std::move(impulse));
}

/// Parallel strips {x <= -1} x [-1, 1] clipped to boxes, distance 2 apart.
inline SemiCyclicMapping strips(NormSpec norm = NormSpec::euclidean(), double k = 0.5) {
  CyclePartition part(norm, {ConvexRegion::box(v2(1, -1), v2(3, 1)), ConvexRegion::box(v2(-3, -1), v2(-1, 1))});
  std::vector<Point> anchors{Point{1.0, 0.0}, Point{-1.0, 0.0}};
  InnerMapSpec inner = build_anchor_inner(part, anchors, {k, k});
  return SemiCyclicMapping(std::move(part), std::move(inner), ImpulseSpec::identity());
}

}  // namespace fx

#include "semicyclic/mappings.hpp"

#include "semicyclic/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace semicyclic {

namespace {

constexpr double kProximalChainTol = 1e-6;

void check_k_list(const CyclePartition& partition, const std::vector<double>& k_per_set) {
  if (k_per_set.size() != partition.size()) {
    throw InvalidInput("inner map: need one K per region (" + std::to_string(partition.size()) +
                       "), got " + std::to_string(k_per_set.size()));
  }
  for (std::size_t i = 0; i < k_per_set.size(); ++i) {
    if (!(k_per_set[i] >= 0.0 && k_per_set[i] <= 1.0)) {
      throw InvalidInput("inner map: K_" + std::to_string(i + 1) + " must lie in [0, 1]");
    }
  }
}

void check_anchor_membership(const CyclePartition& partition, const std::vector<Point>& anchors,
                             const char* who) {
  if (anchors.size() != partition.size()) {
    throw InvalidInput(std::string(who) + ": need one anchor per region (" +
                       std::to_string(partition.size()) + "), got " + std::to_string(anchors.size()));
  }
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    if (anchors[i].dim() != partition.dim()) {
      throw InvalidInput(std::string(who) + ": anchor " + std::to_string(i + 1) +
                         " has the wrong dimension");
    }
    if (!contains(partition.region(i), anchors[i])) {
      throw InvalidInput(std::string(who) + ": anchor " + std::to_string(i + 1) +
                         " lies outside its region");
    }
  }
}

}  // namespace

GainSchedule::GainSchedule(std::vector<double> pattern) : pattern_(std::move(pattern)) {
  if (pattern_.empty()) throw InvalidInput("GainSchedule: pattern must not be empty");
  for (double g : pattern_) {
    if (!std::isfinite(g) || g < 0.0) throw InvalidInput("GainSchedule: gains must be finite and >= 0");
  }
}

double GainSchedule::max_gain() const { return *std::max_element(pattern_.begin(), pattern_.end()); }

double InnerMapSpec::uniform_k() const {
  if (k_per_set.empty()) return 0.0;
  return *std::max_element(k_per_set.begin(), k_per_set.end());
}

InnerMapSpec build_anchor_inner(const CyclePartition& partition, std::vector<Point> anchors,
                                std::vector<double> k_per_set) {
  check_k_list(partition, k_per_set);
  check_anchor_membership(partition, anchors, "anchor inner map");
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const std::size_t next = partition.successor(i);
    const double d = metric_distance(partition.norm(), anchors[i], anchors[next]);
    if (std::abs(d - partition.adjacent_gap(i)) > kProximalChainTol) {
      throw InvalidInput("anchor inner map: anchors " + std::to_string(i + 1) + " and " +
                         std::to_string(next + 1) + " are " + std::to_string(d) +
                         " apart but the regions are " + std::to_string(partition.adjacent_gap(i)) +
                         " apart; anchors must be a best-proximity chain");
    }
  }
  return InnerMapSpec{InnerKind::anchor_segment, std::move(anchors), std::move(k_per_set)};
}

InnerMapSpec build_projection_inner(const CyclePartition& partition, std::vector<double> k_per_set) {
  check_k_list(partition, k_per_set);
  return InnerMapSpec{InnerKind::projection_contraction, {}, std::move(k_per_set)};
}

ImpulseSpec build_anchor_impulse(const CyclePartition& partition, std::vector<Point> anchors,
                                 GainSchedule schedule) {
  check_anchor_membership(partition, anchors, "anchor impulse");
  return ImpulseSpec{ImpulseKind::anchor_scaling, std::move(anchors), std::move(schedule)};
}

Located apply_inner(const InnerMapSpec& inner, const CyclePartition& partition, const Point& x,
                    std::size_t i) {
  if (i >= partition.size()) throw InvalidInput("apply_inner: region index out of range");
  if (!contains(partition.region(i), x)) {
    throw InvalidInput("apply_inner: point is not in region " + std::to_string(i + 1));
  }
  const std::size_t next = partition.successor(i);
  const double k = inner.k_per_set.at(i);
  Vector target;
  if (inner.kind == InnerKind::anchor_segment) {
    const Vector& from = inner.anchors.at(i).coords();
    const Vector& to = inner.anchors.at(next).coords();
    target = to - k * (x.coords() - from);
  } else {
    target = k * x.coords() + (1.0 - k) * partition.region(next).center();
  }
  return {project(partition.norm(), partition.region(next), Point(std::move(target))), next};
}

SemiCyclicMapping::SemiCyclicMapping(CyclePartition partition, InnerMapSpec inner, ImpulseSpec impulse)
    : partition_(std::move(partition)), inner_(std::move(inner)), impulse_(std::move(impulse)) {
  check_k_list(partition_, inner_.k_per_set);
  if (inner_.kind == InnerKind::anchor_segment) {
    check_anchor_membership(partition_, inner_.anchors, "anchor inner map");
  }
  if (impulse_.kind == ImpulseKind::anchor_scaling) {
    check_anchor_membership(partition_, impulse_.anchors, "anchor impulse");
  }
}

Point SemiCyclicMapping::apply_impulse(const Point& u, std::size_t j, std::size_t step) const {
  if (impulse_.kind == ImpulseKind::identity) return u;
  const Vector& anchor = impulse_.anchors.at(j).coords();
  return Point(anchor + impulse_.schedule.at(step) * (u.coords() - anchor));
}

Located SemiCyclicMapping::apply_composite(const Point& x, std::size_t i, std::size_t step) const {
  Point ignored = x;
  return apply_composite(x, i, step, ignored);
}

Located SemiCyclicMapping::apply_composite(const Point& x, std::size_t i, std::size_t step,
                                           Point& pre_impulse) const {
  Located inner = apply_inner(x, i);
  Point image = apply_impulse(inner.point, inner.region, step);
  const auto where = partition_.locate(image, inner.region);
  if (!where) {
    throw ImageEscape("impulse at step " + std::to_string(step) + " moved the image of region " +
                          std::to_string(i + 1) + " outside every region",
                      step);
  }
  pre_impulse = std::move(inner.point);
  return {std::move(image), *where};
}

}  // namespace semicyclic

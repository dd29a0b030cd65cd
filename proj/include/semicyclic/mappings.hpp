#pragma once

// Declarative builders for the inner cyclic map T^-, the impulsive map T^+,
// and their composite T = T^+ T^-.

#include "semicyclic/spaces.hpp"

#include <cstddef>
#include <vector>

namespace semicyclic {

/// Impulse gains applied cyclically by step index: lambda_k = pattern[k mod r].
class GainSchedule {
 public:
  GainSchedule() : pattern_{1.0} {}
  explicit GainSchedule(std::vector<double> pattern);
  static GainSchedule constant(double gain) { return GainSchedule({gain}); }

  double at(std::size_t step) const { return pattern_[step % pattern_.size()]; }
  const std::vector<double>& pattern() const noexcept { return pattern_; }
  std::size_t period() const noexcept { return pattern_.size(); }
  double max_gain() const;

 private:
  std::vector<double> pattern_;
};

enum class InnerKind { anchor_segment, projection_contraction };

struct InnerMapSpec {
  InnerKind kind = InnerKind::anchor_segment;
  std::vector<Point> anchors;     // anchor_segment only
  std::vector<double> k_per_set;  // K_1..K_p

  /// The single constant K for which the uniform contraction bound is claimed.
  double uniform_k() const;
};

enum class ImpulseKind { identity, anchor_scaling };

struct ImpulseSpec {
  ImpulseKind kind = ImpulseKind::identity;
  std::vector<Point> anchors;  // anchor_scaling only
  GainSchedule schedule;

  static ImpulseSpec identity() { return {}; }
};

/// Point with the 0-based index of the region it was assigned to.
struct Located {
  Point point;
  std::size_t region;
};

/// x in A_i goes to P_{A_{i+1}}(anchors[i+1] - K_i (x - anchors[i])): a point
/// reflection through the anchor chain, contracted by K_i. Anchors must form a
/// best-proximity chain: d(anchors[i], anchors[i+1]) = d(A_i, A_{i+1}).
InnerMapSpec build_anchor_inner(const CyclePartition& partition, std::vector<Point> anchors,
                                std::vector<double> k_per_set);

/// x in A_i goes to P_{A_{i+1}}(K_i x + (1 - K_i) c_{i+1}), c the region centre.
InnerMapSpec build_projection_inner(const CyclePartition& partition, std::vector<double> k_per_set);

/// u in A_j goes to anchors[j] + lambda_k (u - anchors[j]).
ImpulseSpec build_anchor_impulse(const CyclePartition& partition, std::vector<Point> anchors,
                                 GainSchedule schedule);

/// T^- applied to x claimed to lie in region i. Throws InvalidInput if it does not.
Located apply_inner(const InnerMapSpec& inner, const CyclePartition& partition, const Point& x,
                    std::size_t i);

/// The composite T = T^+ T^- over a cycle partition.
class SemiCyclicMapping {
 public:
  SemiCyclicMapping(CyclePartition partition, InnerMapSpec inner, ImpulseSpec impulse);

  const CyclePartition& partition() const noexcept { return partition_; }
  const InnerMapSpec& inner() const noexcept { return inner_; }
  const ImpulseSpec& impulse() const noexcept { return impulse_; }
  const NormSpec& norm() const noexcept { return partition_.norm(); }
  std::size_t size() const noexcept { return partition_.size(); }

  Located apply_inner(const Point& x, std::size_t i) const {
    return semicyclic::apply_inner(inner_, partition_, x, i);
  }

  /// T^+ at step k for a point u sitting in region j; no membership check.
  Point apply_impulse(const Point& u, std::size_t j, std::size_t step) const;

  /// T^+(T^- x) with gain lambda_step. The returned index prefers the
  /// successor of i, then the lowest region containing the image.
  /// Throws ImageEscape when the image lies in no region.
  Located apply_composite(const Point& x, std::size_t i, std::size_t step) const;

  /// Same as apply_composite but also reports the pre-impulse point T^- x.
  Located apply_composite(const Point& x, std::size_t i, std::size_t step, Point& pre_impulse) const;

 private:
  CyclePartition partition_;
  InnerMapSpec inner_;
  ImpulseSpec impulse_;
};

}  // namespace semicyclic

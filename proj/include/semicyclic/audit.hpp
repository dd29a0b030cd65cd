#pragma once

// Sampling-based verification of the defining inequalities of semi-cyclic
// impulsive maps, and estimation of the aggregate contraction constants.

#include "semicyclic/mappings.hpp"
#include "semicyclic/orbit.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace semicyclic {

/// x in A_i, y in A_{i+1}.
struct PairSample {
  Point x;
  Point y;
  std::size_t i = 0;
  double d_xy = 0.0;
};

/// Uniform point of `region`; rejection sampling inside the bounding box for
/// balls and polytopes. Throws SamplingFailure after 10^6 rejections in a row.
Point sample_in_region(const ConvexRegion& region, std::mt19937_64& rng);

/// `count` pairs for every adjacency (i, i+1), wraparound included.
std::vector<PairSample> sample_adjacent_pairs(const CyclePartition& partition, std::size_t count,
                                              std::uint64_t seed);

/// Outcome of one audited inequality written as lhs <= rhs. worst_slack is
/// the largest lhs - rhs seen; the inequality holds when it is <= tolerance.
struct Verdict {
  bool holds = true;
  double worst_slack = -std::numeric_limits<double>::infinity();
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::optional<PairSample> witness;
  std::optional<std::size_t> witness_step;

  void record(double slack, const PairSample& sample);
  void finish(double tolerance);
};

inline constexpr double kSlackTolerance = 1e-9;

enum class ContractionMode { uniform_k, per_set_k };

/// Images under T^- stay in A_{i+1}, images under T stay in A_{i+1} or A_{i+2}.
Verdict audit_membership(const SemiCyclicMapping& map, std::span<const PairSample> samples,
                         double tolerance = kSlackTolerance);

/// uniform_k: d(T^-x, T^-y) <= K d(x, y) + (1 - K) D on the pairs.
/// per_set_k: D <= d(T^- T x, T^- x) <= K_i d(T x, x) + (1 - K_i) D from
/// every sampled point. `claimed_k` overrides the map's own uniform K.
Verdict audit_inner_contraction(const SemiCyclicMapping& map, std::span<const PairSample> samples,
                                ContractionMode mode, std::optional<double> claimed_k = {},
                                double tolerance = kSlackTolerance);

struct GainAudit {
  Verdict upper;  // m_hat <= 1
  Verdict floor;  // m_hat >= D / (D + K (d(x, y) - D))
  double min_gain = std::numeric_limits<double>::infinity();
  double max_gain = 0.0;
  /// max |m_hat - 1| over pairs with d(x, y) < D + near_band.
  double near_proximity_deviation = 0.0;
  std::size_t near_proximity_pairs = 0;
};

inline constexpr double kNearProximityBand = 1e-3;

/// Empirical gain m_hat = d(Tx, Ty) / d(T^-x, T^-y) per pair, both points
/// impulsed with the same step gain.
GainAudit audit_gain(const SemiCyclicMapping& map, std::span<const PairSample> samples,
                     double tolerance = kSlackTolerance);

/// d(Tx, Ty) <= K m d(x, y) + (1 - K m) D on pairs, and
/// d(T^2 x, T x) <= K_i m d(x, T x) + m (1 - K_i) D along one-step segments.
Verdict audit_strict(const SemiCyclicMapping& map, std::span<const PairSample> samples,
                     double tolerance = kSlackTolerance);

/// d(Tx, Ty) >= D.
Verdict audit_cyclic_floor(const SemiCyclicMapping& map, std::span<const PairSample> samples,
                           double tolerance = kSlackTolerance);

struct ContractionProfile {
  double k_bar = 0.0;
  double k_hat = 0.0;
  bool k_hat_below_one = false;
  /// Per probe orbit: K_hat^(0), K_hat^(1), ...
  std::vector<std::vector<double>> k_hat_seq;
  /// Per probe orbit: the per-period factor multiplying K_hat^(j-1).
  std::vector<std::vector<double>> k_hat_factors;
  std::size_t periods_sampled = 0;
  double eps0 = 0.0;
  bool eps0_finite = true;
  bool eps0_tends_to_zero = false;
};

/// Periods with an unobservable gain are left out of the max; with none left
/// the max is taken as 1. Fills eps0 too when the orbits have >= 10p steps.
ContractionProfile estimate_khat(const SemiCyclicMapping& map, std::span<const Orbit> probe_orbits);

struct Eps0Estimate {
  double eps0 = 0.0;
  bool finite = true;
  bool tends_to_zero = false;
  double tail_abs_max = 0.0;
  /// Partial sums of the first orbit, indexed by the last summation index.
  std::vector<double> partial_sums;
};

inline constexpr double kEps0ZeroTolerance = 1e-6;

/// Partial sums sum_{k=0}^{M} (prod_{l=k-1}^{M} K_l) (m_hat_k - 1), with K_l
/// the constant of the region holding x_l. The estimate is the sup over the
/// final half of every orbit, floored at -1.
Eps0Estimate estimate_eps0(const SemiCyclicMapping& map, std::span<const Orbit> probe_orbits);

struct AuditOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  std::size_t probe_orbits = 32;
  std::size_t probe_periods = 16;
  double tolerance = kSlackTolerance;
};

struct AuditReport {
  Verdict membership;
  Verdict inner_uniform;
  Verdict inner_per_set;
  GainAudit gain;
  Verdict strict;
  Verdict cyclic_floor;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;
  std::size_t probe_escapes = 0;
  ContractionProfile profile;
};

/// Starting points for probe orbits, one region after another.
std::vector<Located> sample_starts(const CyclePartition& partition, std::size_t count,
                                   std::uint64_t seed);

AuditReport run_audit(const SemiCyclicMapping& map, const AuditOptions& options);

}  // namespace semicyclic

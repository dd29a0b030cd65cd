#pragma once

// A scalar impulsive difference equation cast as a 2-cyclic semi-cyclic map:
// operating regions A_1 = [D/2, D/2 + h] and A_2 = -A_1, plant contraction a
// towards the facing endpoints, impulses scaling the excess by lambda_k.

#include "semicyclic/proximity.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace semicyclic {

struct ImpulsiveSystemSpec {
  double a = 0.5;
  GainSchedule pattern;
  double gap = 2.0;
  double halfwidth = 1.0;
};

/// Product of a * lambda_k over lcm(r, 2) steps, r the pattern length: the
/// factor by which the excess over the gap shrinks per full cycle of both the
/// regions and the impulse pattern.
double period_factor(const ImpulsiveSystemSpec& spec);

/// Throws InvalidInput for a outside (0, 1], negative gap, or non-positive
/// halfwidth. With `probe_x0`, also iterates the excess recursion for
/// `probe_steps` steps and throws ImageEscape (with the step) if it leaves the
/// regions.
SemiCyclicMapping build_impulsive_system(const ImpulsiveSystemSpec& spec,
                                         std::optional<double> probe_x0 = {},
                                         std::size_t probe_steps = 0);

struct StabilityRun {
  ProximityVerdict verdict;
  DistanceTrace trace;
  std::optional<Orbit> orbit;
  std::optional<std::size_t> escape_step;
  double factor = 0.0;
};

/// Runs the orbit from scalar x0 and classifies the gap trace. An escaping
/// image is a reported outcome (divergent, with its step), not an error.
StabilityRun simulate_stability(const ImpulsiveSystemSpec& spec, double x0, std::size_t steps,
                                std::size_t window = 10, const LimitTolerances& tol = {});

struct SweepOptions {
  std::vector<double> a_values;
  std::vector<double> lambda_values;
  double gap = 2.0;
  double halfwidth = 1.0;
  double x0_excess = 1e-2;
  std::size_t steps = 4000;
  std::size_t window = 10;
  LimitTolerances tol;
};

/// a_i = (i + 1) / 10 and lambda_j = (1 + 19 j / 9) / 10 for i, j < 10.
SweepOptions default_sweep();

struct SweepCell {
  double a = 0.0;
  double lambda_1 = 0.0;
  double lambda_2 = 0.0;
  double factor = 0.0;
  LimitClass verdict = LimitClass::inconclusive;
  bool escaped = false;
  /// verdict is to_D exactly when the factor is below one.
  bool agrees = false;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::size_t escapes = 0;
  std::size_t compared = 0;  // non-escaping cells
  std::size_t agreements = 0;
  double agreement() const { return compared == 0 ? 0.0 : static_cast<double>(agreements) / compared; }
};

/// Grid over (a, lambda_1, lambda_2) with pattern (lambda_1, lambda_2).
SweepResult stability_sweep(const SweepOptions& options);

}  // namespace semicyclic

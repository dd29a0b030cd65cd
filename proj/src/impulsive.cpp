#include "semicyclic/impulsive.hpp"

#include "semicyclic/errors.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace semicyclic {

namespace {

void validate(const ImpulsiveSystemSpec& spec) {
  if (!(spec.a > 0.0 && spec.a <= 1.0)) throw InvalidInput("impulsive system: a must lie in (0, 1]");
  if (!(spec.gap >= 0.0) || !std::isfinite(spec.gap)) throw InvalidInput("impulsive system: gap must be >= 0");
  if (!(spec.halfwidth > 0.0) || !std::isfinite(spec.halfwidth)) {
    throw InvalidInput("impulsive system: halfwidth must be > 0");
  }
}

}  // namespace

double period_factor(const ImpulsiveSystemSpec& spec) {
  const std::size_t steps = std::lcm(spec.pattern.period(), std::size_t{2});
  double f = 1.0;
  for (std::size_t k = 0; k < steps; ++k) f *= spec.a * spec.pattern.at(k);
  return f;
}

SemiCyclicMapping build_impulsive_system(const ImpulsiveSystemSpec& spec, std::optional<double> probe_x0,
                                         std::size_t probe_steps) {
  validate(spec);
  const double half = spec.gap / 2.0;
  const double h = spec.halfwidth;
  std::vector<ConvexRegion> regions{ConvexRegion::box(Vector::Constant(1, half), Vector::Constant(1, half + h)),
                                    ConvexRegion::box(Vector::Constant(1, -half - h), Vector::Constant(1, -half))};
  CyclePartition partition(NormSpec::euclidean(), std::move(regions));
  std::vector<Point> anchors{Point{half}, Point{-half}};
  InnerMapSpec inner = build_anchor_inner(partition, anchors, {spec.a, spec.a});
  ImpulseSpec impulse = build_anchor_impulse(partition, anchors, spec.pattern);

  if (probe_x0) {
    double excess = std::abs(*probe_x0) - half;
    if (excess < -kDefaultMembershipTol || excess > h + kDefaultMembershipTol) {
      throw InvalidInput("impulsive system: probe x0 lies outside both regions");
    }
    for (std::size_t k = 0; k < probe_steps; ++k) {
      excess = spec.pattern.at(k) * std::min(spec.a * excess, h);
      if (excess > h + kDefaultMembershipTol) {
        throw ImageEscape("impulsive system: impulse at step " + std::to_string(k) + " escapes the regions", k);
      }
    }
  }
  return SemiCyclicMapping(std::move(partition), std::move(inner), std::move(impulse));
}

StabilityRun simulate_stability(const ImpulsiveSystemSpec& spec, double x0, std::size_t steps,
                                std::size_t window, const LimitTolerances& tol) {
  const SemiCyclicMapping map = build_impulsive_system(spec);
  StabilityRun run;
  run.factor = period_factor(spec);
  const Point start{x0};
  const auto region = map.partition().locate(start);
  if (!region) throw InvalidInput("simulate_stability: x0 lies outside both regions");
  try {
    run.orbit = iterate(map, start, *region, steps);
  } catch (const ImageEscape& e) {
    run.escape_step = e.step();
    run.verdict.limit_class = LimitClass::divergent;
    run.verdict.limit_estimate = std::numeric_limits<double>::infinity();
    run.verdict.residual = std::numeric_limits<double>::infinity();
    return run;
  }
  run.trace = distance_trace(*run.orbit, map.norm());
  run.verdict = detect_limit(run.trace, spec.gap, window, tol);
  return run;
}

SweepOptions default_sweep() {
  SweepOptions options;
  for (int i = 0; i < 10; ++i) {
    options.a_values.push_back((i + 1) / 10.0);
    options.lambda_values.push_back((1.0 + 19.0 * i / 9.0) / 10.0);
  }
  return options;
}

SweepResult stability_sweep(const SweepOptions& options) {
  SweepResult result;
  for (double a : options.a_values) {
    for (double l1 : options.lambda_values) {
      for (double l2 : options.lambda_values) {
        ImpulsiveSystemSpec spec{a, GainSchedule({l1, l2}), options.gap, options.halfwidth};
        const StabilityRun run =
            simulate_stability(spec, options.gap / 2.0 + options.x0_excess, options.steps, options.window, options.tol);
        SweepCell cell{a, l1, l2, run.factor, run.verdict.limit_class, run.escape_step.has_value(), false};
        cell.agrees = (cell.verdict == LimitClass::to_D) == (cell.factor < 1.0);
        if (cell.escaped) {
          ++result.escapes;
        } else {
          ++result.compared;
          if (cell.agrees) ++result.agreements;
        }
        result.cells.push_back(cell);
      }
    }
  }
  return result;
}

}  // namespace semicyclic

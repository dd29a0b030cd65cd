#include "semicyclic/proximity.hpp"

#include "semicyclic/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace semicyclic {

std::string_view to_string(LimitClass c) {
  switch (c) {
    case LimitClass::to_D:
      return "to_D";
    case LimitClass::to_zero:
      return "to_zero";
    case LimitClass::bounded:
      return "bounded";
    case LimitClass::divergent:
      return "divergent";
    case LimitClass::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

LimitClass limit_class_from_string(std::string_view name) {
  for (LimitClass c : {LimitClass::to_D, LimitClass::to_zero, LimitClass::bounded, LimitClass::divergent,
                       LimitClass::inconclusive}) {
    if (to_string(c) == name) return c;
  }
  throw InvalidInput("unknown limit class '" + std::string(name) + "'");
}

ProximityVerdict detect_limit(const DistanceTrace& trace, double gap, std::size_t window,
                              const LimitTolerances& tol) {
  const std::vector<double> gaps(trace.d.size(), gap);
  return detect_limit(trace, gaps, window, tol);
}

ProximityVerdict detect_limit(const DistanceTrace& trace, std::span<const double> gaps,
                              std::size_t window, const LimitTolerances& tol) {
  const auto& d = trace.d;
  if (window == 0) throw InvalidInput("detect_limit: window must be positive");
  if (d.size() < 4 * window) throw InvalidInput("detect_limit: trace shorter than 4 windows");
  if (gaps.size() != d.size()) throw InvalidInput("detect_limit: one gap per trace entry required");

  ProximityVerdict verdict;
  const std::size_t start = d.size() - window;
  double tail_max = 0.0;
  double dev_d = 0.0;
  double gap_max = 0.0;
  for (std::size_t k = start; k < d.size(); ++k) {
    tail_max = std::max(tail_max, d[k]);
    dev_d = std::max(dev_d, std::abs(d[k] - gaps[k]));
    gap_max = std::max(gap_max, gaps[k]);
  }
  verdict.limit_estimate = tail_max;

  const bool blown = std::any_of(d.begin(), d.end(), [&](double v) { return !std::isfinite(v) || v > tol.divergence_cap; });
  if (blown) {
    verdict.limit_class = LimitClass::divergent;
    verdict.residual = std::numeric_limits<double>::infinity();
    return verdict;
  }
  if (gap_max <= tol.limit && tail_max <= tol.limit) {
    verdict.limit_class = LimitClass::to_zero;
    verdict.residual = tail_max;
    return verdict;
  }
  verdict.residual = dev_d;
  if (dev_d <= tol.limit) {
    verdict.limit_class = LimitClass::to_D;
    return verdict;
  }
  const double head_max = *std::max_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2));
  verdict.limit_class = tail_max <= head_max + tol.limit ? LimitClass::bounded : LimitClass::inconclusive;
  return verdict;
}

const Point& LimitingSet::z(std::size_t region) const {
  if (region >= terminal.size() || !terminal[region]) {
    throw InvalidInput("limiting set has no terminal point for region " + std::to_string(region + 1));
  }
  return *terminal[region];
}

std::optional<std::size_t> settle_step(const Orbit& orbit, std::size_t p) {
  const auto& s = orbit.set_indices;
  if (s.empty()) return std::nullopt;
  std::size_t first = s.size() - 1;
  while (first > 0 && s[first] == cyclic_successor(s[first - 1], p)) --first;
  if (s.size() - 1 - first < kSettlePeriods * p) return std::nullopt;
  return first;
}

namespace {

LimitingSet extract_one(const Orbit& orbit, const SemiCyclicMapping& map, double tol) {
  const std::size_t p = map.size();
  const std::size_t n = orbit.steps();
  LimitingSet set;
  set.terminal.assign(p, std::nullopt);
  if (n < 2 * p) {
    set.reason = "orbit shorter than two periods";
    return set;
  }
  set.settle_step = settle_step(orbit, p);
  std::vector<bool> seen(p, false);
  for (std::size_t t = n - p + 1; t <= n; ++t) {
    LimitPoint lp{orbit.points[t], orbit.set_indices[t], t % p, false,
                  metric_distance(map.norm(), orbit.points[t], orbit.points[t - p])};
    set.max_residual = std::max(set.max_residual, lp.residual);
    const bool entered = t == n - p + 1 || orbit.set_indices[t - 1] != lp.region;
    if (entered && !seen[lp.region]) {
      lp.terminal = true;
      seen[lp.region] = true;
      set.terminal[lp.region] = lp.z;
    }
    set.points.push_back(std::move(lp));
  }
  if (!(set.max_residual < tol)) {
    set.reason = "period subsequences have not settled (residual " + std::to_string(set.max_residual) + ")";
    set.points.clear();
    set.terminal.assign(p, std::nullopt);
    return set;
  }
  set.conclusive = true;
  return set;
}

}  // namespace

LimitingSet extract_limiting_set(std::span<const Orbit> orbits, const SemiCyclicMapping& map, double tol) {
  if (orbits.empty()) throw InvalidInput("extract_limiting_set: no orbits");
  LimitingSet first = extract_one(orbits.front(), map, tol);
  if (!first.conclusive) return first;
  for (std::size_t o = 1; o < orbits.size(); ++o) {
    const LimitingSet other = extract_one(orbits[o], map, tol);
    if (!other.conclusive) {
      first.conclusive = false;
      first.reason = "orbit " + std::to_string(o) + ": " + other.reason;
      return first;
    }
    for (std::size_t i = 0; i < map.size(); ++i) {
      if (first.terminal[i] && other.terminal[i]) {
        first.orbit_spread =
            std::max(first.orbit_spread, metric_distance(map.norm(), *first.terminal[i], *other.terminal[i]));
      }
    }
  }
  return first;
}

UniquenessResult uniqueness_check(const SemiCyclicMapping& map, std::span<const Located> starts,
                                  std::size_t steps, double tol) {
  const std::size_t p = map.size();
  if (starts.size() < 2) throw InvalidInput("uniqueness_check: need at least two starts");
  std::vector<bool> covered(p, false);
  for (const auto& s : starts) {
    if (s.region >= p) throw InvalidInput("uniqueness_check: start region out of range");
    covered[s.region] = true;
  }
  if (std::find(covered.begin(), covered.end(), false) != covered.end()) {
    throw InvalidInput("uniqueness_check: need a start in every region");
  }

  UniquenessResult result;
  result.conclusive = true;
  for (const auto& s : starts) {
    const Orbit orbit = iterate(map, s.point, s.region, steps);
    LimitingSet set = extract_one(orbit, map, tol);
    if (!set.conclusive) result.conclusive = false;
    result.sets.push_back(std::move(set));
  }
  if (!result.conclusive) return result;
  for (std::size_t a = 0; a < result.sets.size(); ++a) {
    for (std::size_t b = a + 1; b < result.sets.size(); ++b) {
      for (std::size_t i = 0; i < p; ++i) {
        const auto& za = result.sets[a].terminal[i];
        const auto& zb = result.sets[b].terminal[i];
        if (za && zb) result.spread = std::max(result.spread, metric_distance(map.norm(), *za, *zb));
      }
    }
  }
  result.unique = result.spread < tol;
  return result;
}

Result4Outcome result4_check(const NormSpec& norm, const ConvexRegion& a, const ConvexRegion& b,
                             std::span<const Point> x, std::span<const Point> z, std::span<const Point> y,
                             double gap, const Result4Tolerances& tol) {
  if (x.size() != z.size() || x.size() != y.size() || x.empty()) {
    throw InvalidInput("result4_check: sequences must be nonempty and of equal length");
  }
  const std::size_t window = tol.window > 0 ? std::min(tol.window, x.size()) : std::max<std::size_t>(1, x.size() / 4);
  Result4Outcome out;
  bool members = true;
  for (std::size_t n = x.size() - window; n < x.size(); ++n) {
    members = members && contains(a, x[n]) && contains(a, z[n]) && contains(b, y[n]);
    out.precondition = std::max({out.precondition, std::abs(metric_distance(norm, x[n], y[n]) - gap),
                                 std::abs(metric_distance(norm, z[n], y[n]) - gap)});
    out.tail_max = std::max(out.tail_max, metric_distance(norm, z[n], x[n]));
  }
  out.conclusive = members && out.precondition <= tol.precondition;
  out.holds = out.conclusive && out.tail_max < tol.conclusion;
  return out;
}

FixedPointResult fixed_point_check(const SemiCyclicMapping& map, const LimitingSet& limiting, double tol) {
  if (!map.partition().all_adjacent_intersect()) {
    throw InvalidInput("fixed_point_check: every adjacent pair of regions must intersect");
  }
  if (!limiting.conclusive || limiting.points.empty()) {
    throw InvalidInput("fixed_point_check: limiting set is inconclusive");
  }
  Vector sum = Vector::Zero(static_cast<Eigen::Index>(map.partition().dim()));
  for (const auto& lp : limiting.points) sum += lp.z.coords();
  Point z(sum / static_cast<double>(limiting.points.size()));
  const auto region = map.partition().locate(z, limiting.points.front().region);
  if (!region) throw InvalidInput("fixed_point_check: collapsed point lies in no region");
  const Located tz = map.apply_composite(z, *region, 0);
  FixedPointResult result{z, *region, metric_distance(map.norm(), z, tz.point), false};
  result.holds = result.residual < tol;
  return result;
}

}  // namespace semicyclic

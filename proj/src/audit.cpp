#include "semicyclic/audit.hpp"

#include "semicyclic/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace semicyclic {

namespace {

constexpr std::size_t kMaxRejections = 1'000'000;

// 53 random bits in [0, 1).
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Vector uniform_in_bbox(const ConvexRegion& region, std::mt19937_64& rng) {
  const Vector& lo = region.bbox_lo();
  const Vector& hi = region.bbox_hi();
  Vector v(lo.size());
  for (Eigen::Index c = 0; c < lo.size(); ++c) v[c] = lo[c] + (hi[c] - lo[c]) * unit(rng);
  return v;
}

struct Images {
  Located inner;
  Point image;
};

Images composite_parts(const SemiCyclicMapping& map, const Point& x, std::size_t i, std::size_t step) {
  Located inner = map.apply_inner(x, i);
  Point image = map.apply_impulse(inner.point, inner.region, step);
  return {std::move(inner), std::move(image)};
}

double euclid_gap(const ConvexRegion& region, const NormSpec& norm, const Point& x) {
  return (x.coords() - project(norm, region, x).coords()).norm();
}

}  // namespace

Point sample_in_region(const ConvexRegion& region, std::mt19937_64& rng) {
  if (std::holds_alternative<Box>(region.shape())) return Point(uniform_in_bbox(region, rng));
  for (std::size_t attempt = 0; attempt < kMaxRejections; ++attempt) {
    Point candidate(uniform_in_bbox(region, rng));
    if (contains(region, candidate, 0.0)) return candidate;
  }
  throw SamplingFailure("sample_in_region: no accepted point after 10^6 draws");
}

std::vector<PairSample> sample_adjacent_pairs(const CyclePartition& partition, std::size_t count,
                                              std::uint64_t seed) {
  if (count == 0) throw InvalidInput("sample_adjacent_pairs: count must be positive");
  std::mt19937_64 rng(seed);
  std::vector<PairSample> samples;
  samples.reserve(count * partition.size());
  for (std::size_t i = 0; i < partition.size(); ++i) {
    const auto& a = partition.region(i);
    const auto& b = partition.region(partition.successor(i));
    for (std::size_t c = 0; c < count; ++c) {
      Point x = sample_in_region(a, rng);
      Point y = sample_in_region(b, rng);
      const double d = metric_distance(partition.norm(), x, y);
      samples.push_back(PairSample{std::move(x), std::move(y), i, d});
    }
  }
  return samples;
}

void Verdict::record(double slack, const PairSample& sample) {
  ++checked;
  if (slack > worst_slack) {
    worst_slack = slack;
    witness = sample;
  }
}

void Verdict::finish(double tolerance) { holds = checked == 0 || worst_slack <= tolerance; }

Verdict audit_membership(const SemiCyclicMapping& map, std::span<const PairSample> samples,
                         double tolerance) {
  const auto& partition = map.partition();
  Verdict verdict;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const PairSample& sample = samples[s];
    double worst = -std::numeric_limits<double>::infinity();
    const std::size_t next = partition.successor(sample.i);
    const std::pair<const Point*, std::size_t> starts[] = {{&sample.x, sample.i}, {&sample.y, next}};
    for (const auto& [x, i] : starts) {
      const Images parts = composite_parts(map, *x, i, s);
      const std::size_t j = parts.inner.region;
      const auto& here = partition.region(j);
      const auto& after = partition.region(partition.successor(j));
      const double inner_gap = euclid_gap(here, map.norm(), parts.inner.point) - here.tolerance();
      const double image_gap = std::min(euclid_gap(here, map.norm(), parts.image) - here.tolerance(),
                                        euclid_gap(after, map.norm(), parts.image) - after.tolerance());
      worst = std::max({worst, inner_gap, image_gap});
    }
    verdict.record(worst, sample);
  }
  verdict.finish(tolerance);
  return verdict;
}

Verdict audit_inner_contraction(const SemiCyclicMapping& map, std::span<const PairSample> samples,
                                ContractionMode mode, std::optional<double> claimed_k,
                                double tolerance) {
  const auto& partition = map.partition();
  const auto& norm = map.norm();
  Verdict verdict;
  if (mode == ContractionMode::uniform_k) {
    const double k = claimed_k.value_or(map.inner().uniform_k());
    for (const PairSample& sample : samples) {
      const double gap = partition.adjacent_gap(sample.i);
      const Point u = map.apply_inner(sample.x, sample.i).point;
      const Point v = map.apply_inner(sample.y, partition.successor(sample.i)).point;
      const double lhs = metric_distance(norm, u, v);
      verdict.record(lhs - (k * sample.d_xy + (1.0 - k) * gap), sample);
    }
    verdict.finish(tolerance);
    return verdict;
  }

  for (std::size_t s = 0; s < samples.size(); ++s) {
    const PairSample& sample = samples[s];
    const std::size_t next = partition.successor(sample.i);
    const std::pair<const Point*, std::size_t> starts[] = {{&sample.x, sample.i}, {&sample.y, next}};
    double worst = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (const auto& [x, i] : starts) {
      Point u = *x;
      std::optional<Located> step;
      try {
        step = map.apply_composite(*x, i, s, u);
      } catch (const ImageEscape&) {
        ++verdict.skipped;
        continue;
      }
      const Located& tx = *step;
      const Located utx = map.apply_inner(tx.point, tx.region);
      const double k = claimed_k.value_or(map.inner().k_per_set[i]);
      const double gap = partition.distance(i, tx.region);
      const double low_gap = partition.distance(utx.region, partition.successor(i));
      const double mid = metric_distance(norm, utx.point, u);
      const double upper = k * metric_distance(norm, tx.point, *x) + (1.0 - k) * gap;
      worst = std::max({worst, mid - upper, low_gap - mid});
      any = true;
    }
    if (any) verdict.record(worst, sample);
  }
  verdict.finish(tolerance);
  return verdict;
}

GainAudit audit_gain(const SemiCyclicMapping& map, std::span<const PairSample> samples,
                     double tolerance) {
  const auto& partition = map.partition();
  const auto& norm = map.norm();
  const double k = map.inner().uniform_k();
  GainAudit audit;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const PairSample& sample = samples[s];
    const Images px = composite_parts(map, sample.x, sample.i, s);
    const Images py = composite_parts(map, sample.y, partition.successor(sample.i), s);
    const double duv = metric_distance(norm, px.inner.point, py.inner.point);
    if (duv < kGainDenominatorFloor) {
      ++audit.upper.skipped;
      ++audit.floor.skipped;
      continue;
    }
    const double m = metric_distance(norm, px.image, py.image) / duv;
    audit.min_gain = std::min(audit.min_gain, m);
    audit.max_gain = std::max(audit.max_gain, m);
    audit.upper.record(m - 1.0, sample);

    const double gap = partition.adjacent_gap(sample.i);
    const double denom = gap + k * (sample.d_xy - gap);
    const double floor = gap > 0.0 && denom > 0.0 ? gap / denom : 0.0;
    audit.floor.record(floor - m, sample);

    if (sample.d_xy < gap + kNearProximityBand) {
      ++audit.near_proximity_pairs;
      audit.near_proximity_deviation = std::max(audit.near_proximity_deviation, std::abs(m - 1.0));
    }
  }
  audit.upper.finish(tolerance);
  audit.floor.finish(tolerance);
  if (audit.upper.checked == 0) audit.min_gain = 0.0;
  return audit;
}

Verdict audit_strict(const SemiCyclicMapping& map, std::span<const PairSample> samples,
                     double tolerance) {
  const auto& partition = map.partition();
  const auto& norm = map.norm();
  const double k = map.inner().uniform_k();
  Verdict verdict;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const PairSample& sample = samples[s];
    const std::size_t next = partition.successor(sample.i);
    double worst = -std::numeric_limits<double>::infinity();
    bool any = false;

    const Images px = composite_parts(map, sample.x, sample.i, s);
    const Images py = composite_parts(map, sample.y, next, s);
    const double duv = metric_distance(norm, px.inner.point, py.inner.point);
    if (duv >= kGainDenominatorFloor) {
      const double m = metric_distance(norm, px.image, py.image) / duv;
      const double gap = partition.adjacent_gap(sample.i);
      const double lhs = metric_distance(norm, px.image, py.image);
      worst = std::max(worst, lhs - (k * m * sample.d_xy + (1.0 - k * m) * gap));
      any = true;
    }

    const std::pair<const Point*, std::size_t> starts[] = {{&sample.x, sample.i}, {&sample.y, next}};
    for (const auto& [x, i] : starts) {
      try {
        Point u = *x;
        const Located tx = map.apply_composite(*x, i, s, u);
        Point v = tx.point;
        const Located ttx = map.apply_composite(tx.point, tx.region, s + 1, v);
        const double dpre = metric_distance(norm, v, u);
        if (dpre < kGainDenominatorFloor) continue;
        const double lhs = metric_distance(norm, ttx.point, tx.point);
        const double m = lhs / dpre;
        const double ki = map.inner().k_per_set[i];
        const double gap = partition.distance(i, tx.region);
        const double rhs = ki * m * metric_distance(norm, *x, tx.point) + m * (1.0 - ki) * gap;
        worst = std::max(worst, lhs - rhs);
        any = true;
      } catch (const ImageEscape&) {
        ++verdict.skipped;
      }
    }
    if (any) {
      verdict.record(worst, sample);
    } else {
      ++verdict.skipped;
    }
  }
  verdict.finish(tolerance);
  return verdict;
}

Verdict audit_cyclic_floor(const SemiCyclicMapping& map, std::span<const PairSample> samples,
                           double tolerance) {
  const auto& partition = map.partition();
  Verdict verdict;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const PairSample& sample = samples[s];
    const Images px = composite_parts(map, sample.x, sample.i, s);
    const Images py = composite_parts(map, sample.y, partition.successor(sample.i), s);
    const double d = metric_distance(map.norm(), px.image, py.image);
    verdict.record(partition.adjacent_gap(sample.i) - d, sample);
  }
  verdict.finish(tolerance);
  return verdict;
}

ContractionProfile estimate_khat(const SemiCyclicMapping& map, std::span<const Orbit> probe_orbits) {
  const std::size_t p = map.size();
  const auto& inner = map.inner();
  if (probe_orbits.empty()) throw InvalidInput("estimate_khat: no probe orbits");
  ContractionProfile profile;
  profile.k_bar = k_bar(inner);
  double worst = 0.0;
  for (const Orbit& orbit : probe_orbits) {
    if (orbit.steps() < 3 * p) {
      throw InvalidInput("estimate_khat: probe orbits need at least 3p steps");
    }
    const DeltaTrace trace = delta_trace(orbit, map);
    // Periods containing an unobservable gain carry no evidence.
    for (std::size_t n = 0; (n + 1) * p - 1 < trace.m_hat.size(); ++n) {
      double prod = 1.0;
      bool defined = true;
      for (std::size_t i = n * p + 1; i <= (n + 1) * p - 1; ++i) {
        prod *= trace.m_hat[i];
        defined = defined && trace.gain_defined[i];
      }
      if (!defined) continue;
      ++profile.periods_sampled;
      worst = std::max(worst, prod);
    }

    std::vector<double> seq;
    std::vector<double> factors;
    double running = 1.0;
    for (std::size_t j = 0; (j + 1) * p - 1 < trace.m_hat.size(); ++j) {
      double factor = 1.0;
      for (std::size_t i = 1; i <= p - 1; ++i) {
        const std::size_t t = i + j * p;
        factor *= trace.m_hat[t] * inner.k_per_set[orbit.set_indices[t - 1]];
      }
      running *= factor;
      factors.push_back(factor);
      seq.push_back(running);
    }
    profile.k_hat_seq.push_back(std::move(seq));
    profile.k_hat_factors.push_back(std::move(factors));
  }
  if (profile.periods_sampled == 0) worst = 1.0;
  profile.k_hat = profile.k_bar * worst;
  profile.k_hat_below_one = profile.k_hat < 1.0;

  bool long_enough = std::all_of(probe_orbits.begin(), probe_orbits.end(),
                                 [&](const Orbit& o) { return o.steps() >= 10 * p; });
  if (long_enough) {
    const Eps0Estimate eps = estimate_eps0(map, probe_orbits);
    profile.eps0 = eps.eps0;
    profile.eps0_finite = eps.finite;
    profile.eps0_tends_to_zero = eps.tends_to_zero;
  } else {
    profile.eps0 = std::numeric_limits<double>::quiet_NaN();
    profile.eps0_finite = false;
  }
  return profile;
}

Eps0Estimate estimate_eps0(const SemiCyclicMapping& map, std::span<const Orbit> probe_orbits) {
  const std::size_t p = map.size();
  const auto& ks = map.inner().k_per_set;
  if (probe_orbits.empty()) throw InvalidInput("estimate_eps0: no probe orbits");
  Eps0Estimate estimate;
  estimate.eps0 = -std::numeric_limits<double>::infinity();
  for (std::size_t o = 0; o < probe_orbits.size(); ++o) {
    const Orbit& orbit = probe_orbits[o];
    if (orbit.steps() < 10 * p) throw InvalidInput("estimate_eps0: probe orbits need at least 10p steps");
    const DeltaTrace trace = delta_trace(orbit, map);
    const std::size_t n = trace.m_hat.size();
    const auto k_at = [&](std::size_t l) { return ks[orbit.set_indices[l]]; };
    const double k_before = ks[cyclic_predecessor(orbit.start_index(), p)];

    std::vector<double> sums(n);
    double s = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      const double k_prev = m == 0 ? k_before : k_at(m - 1);
      s = k_at(m) * s + k_prev * k_at(m) * trace.m_prime[m];
      sums[m] = s;
    }
    for (std::size_t m = n / 2; m < n; ++m) {
      if (!std::isfinite(sums[m])) estimate.finite = false;
      estimate.eps0 = std::max(estimate.eps0, sums[m]);
    }
    for (std::size_t m = n - n / 4; m < n; ++m) {
      estimate.tail_abs_max = std::max(estimate.tail_abs_max, std::abs(sums[m]));
    }
    if (o == 0) estimate.partial_sums = std::move(sums);
  }
  estimate.eps0 = std::max(estimate.eps0, -1.0);
  estimate.tends_to_zero = estimate.finite && estimate.tail_abs_max < kEps0ZeroTolerance;
  return estimate;
}

std::vector<Located> sample_starts(const CyclePartition& partition, std::size_t count,
                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Located> starts;
  starts.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    const std::size_t i = c % partition.size();
    starts.push_back(Located{sample_in_region(partition.region(i), rng), i});
  }
  return starts;
}

AuditReport run_audit(const SemiCyclicMapping& map, const AuditOptions& options) {
  const auto& partition = map.partition();
  AuditReport report;
  report.seed = options.seed;
  const auto samples = sample_adjacent_pairs(partition, options.samples, options.seed);
  report.sample_count = samples.size();
  report.membership = audit_membership(map, samples, options.tolerance);
  report.inner_uniform = audit_inner_contraction(map, samples, ContractionMode::uniform_k, {}, options.tolerance);
  report.inner_per_set = audit_inner_contraction(map, samples, ContractionMode::per_set_k, {}, options.tolerance);
  report.gain = audit_gain(map, samples, options.tolerance);
  report.strict = audit_strict(map, samples, options.tolerance);
  report.cyclic_floor = audit_cyclic_floor(map, samples, options.tolerance);

  const std::size_t p = partition.size();
  const std::size_t steps = std::max<std::size_t>(options.probe_periods, 10) * p;
  std::vector<Orbit> orbits;
  for (const Located& start : sample_starts(partition, options.probe_orbits, options.seed + 1)) {
    try {
      orbits.push_back(iterate(map, start.point, start.region, steps));
    } catch (const ImageEscape&) {
      ++report.probe_escapes;
    }
  }
  if (!orbits.empty()) {
    report.profile = estimate_khat(map, orbits);
  } else {
    report.profile.k_bar = k_bar(map.inner());
    report.profile.k_hat = std::numeric_limits<double>::quiet_NaN();
    report.profile.eps0 = std::numeric_limits<double>::quiet_NaN();
    report.profile.eps0_finite = false;
  }
  return report;
}

}  // namespace semicyclic

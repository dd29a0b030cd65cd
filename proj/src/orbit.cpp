#include "semicyclic/orbit.hpp"

#include "semicyclic/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace semicyclic {

namespace {

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * (1.0 + std::abs(b)); }

}  // namespace

Orbit iterate(const SemiCyclicMapping& map, const Point& x0, std::size_t i0, std::size_t steps) {
  if (steps < 1) throw InvalidInput("iterate: need at least one step");
  if (i0 >= map.size()) throw InvalidInput("iterate: start region out of range");
  if (!contains(map.partition().region(i0), x0)) {
    throw InvalidInput("iterate: x0 is not in region " + std::to_string(i0 + 1));
  }
  Orbit orbit;
  orbit.points.reserve(steps + 1);
  orbit.pre_impulse.reserve(steps + 1);
  orbit.set_indices.reserve(steps + 1);
  orbit.points.push_back(x0);
  orbit.pre_impulse.push_back(x0);
  orbit.set_indices.push_back(i0);
  for (std::size_t k = 0; k < steps; ++k) {
    Point pre = orbit.points.back();
    Located next = [&] {
      try {
        return map.apply_composite(orbit.points.back(), orbit.set_indices.back(), k, pre);
      } catch (const InvalidInput& e) {
        // Point construction rejects non-finite coordinates.
        throw ImageEscape("iterate: step " + std::to_string(k) + ": " + e.what(), k);
      }
    }();
    orbit.points.push_back(std::move(next.point));
    orbit.pre_impulse.push_back(std::move(pre));
    orbit.set_indices.push_back(next.region);
  }
  return orbit;
}

DistanceTrace distance_trace(const Orbit& orbit, const NormSpec& norm) {
  if (orbit.points.size() < 2) throw InvalidInput("distance_trace: orbit needs at least two points");
  DistanceTrace trace;
  trace.d.reserve(orbit.steps());
  for (std::size_t k = 0; k + 1 < orbit.points.size(); ++k) {
    trace.d.push_back(metric_distance(norm, orbit.points[k + 1], orbit.points[k]));
  }
  return trace;
}

DeltaTrace delta_trace(const Orbit& orbit, const SemiCyclicMapping& map) {
  const auto& norm = map.norm();
  const auto& partition = map.partition();
  const std::size_t n = orbit.steps();
  if (n < 1) throw InvalidInput("delta_trace: orbit needs at least two points");

  DeltaTrace trace;
  trace.k = map.inner().uniform_k();
  trace.m_hat.resize(n);
  trace.m_prime.resize(n);
  trace.delta.assign(n, 0.0);
  trace.pair_gap.resize(n);
  trace.gain_defined.resize(n);

  std::vector<double> d(n);
  for (std::size_t k = 0; k < n; ++k) {
    d[k] = metric_distance(norm, orbit.points[k + 1], orbit.points[k]);
    trace.pair_gap[k] = partition.distance(orbit.set_indices[k], orbit.set_indices[k + 1]);
    const double pre = metric_distance(norm, orbit.pre_impulse[k + 1], orbit.pre_impulse[k]);
    if (pre < kGainDenominatorFloor) {
      trace.m_hat[k] = 1.0;
      trace.gain_defined[k] = false;
      ++trace.skipped;
    } else {
      trace.m_hat[k] = d[k] / pre;
      trace.gain_defined[k] = true;
    }
    trace.m_prime[k] = trace.m_hat[k] - 1.0;
  }
  for (std::size_t k = 1; k < n; ++k) {
    trace.delta[k] = trace.m_prime[k] * (trace.k * d[k - 1] + (1.0 - trace.k) * trace.gap_in(k));
  }
  return trace;
}

std::vector<double> period_gain_products(const DeltaTrace& trace, std::size_t p) {
  std::vector<double> products;
  for (std::size_t n = 0; (n + 1) * p - 1 < trace.m_hat.size(); ++n) {
    double prod = 1.0;
    for (std::size_t i = n * p + 1; i <= (n + 1) * p - 1; ++i) prod *= trace.m_hat[i];
    products.push_back(prod);
  }
  return products;
}

double k_bar(const InnerMapSpec& inner) {
  double prod = 1.0;
  for (std::size_t i = 0; i + 1 < inner.k_per_set.size(); ++i) prod *= inner.k_per_set[i];
  return prod;
}

IndicatorSets indicator_sets(const DeltaTrace& trace, const IndicatorWindow& window, std::size_t p) {
  const std::size_t span = window.n * p + window.j;
  if (span == 0) return {};
  if (window.k + span - 1 >= trace.m_prime.size()) {
    throw InvalidInput("indicator_sets: window extends past the end of the trace");
  }
  IndicatorSets sets;
  for (std::size_t i = 1; i <= span; ++i) {
    const std::size_t t = window.k + span - i;
    const double mp = trace.m_prime[t];
    if (mp > 0.0) {
      sets.plus.push_back(i);
      sets.signed_sum += trace.delta[t];
    } else if (mp < 0.0 && mp >= -1.0) {
      sets.minus.push_back(i);
      sets.signed_sum -= trace.delta[t];
    }
  }
  return sets;
}

std::string_view to_string(BoundChain chain) {
  switch (chain) {
    case BoundChain::uniform:
      return "uniform";
    case BoundChain::nonexpansive:
      return "nonexpansive";
    case BoundChain::variable:
      return "variable";
  }
  return "unknown";
}

BoundLedger bound_unroll(const Orbit& orbit, const SemiCyclicMapping& map, BoundChain chain,
                         const LedgerOptions& options) {
  const auto& inner = map.inner();
  const std::size_t p = map.size();
  const double k_uniform = inner.uniform_k();
  if (chain == BoundChain::uniform && !(k_uniform < 1.0)) {
    throw InvalidInput("bound_unroll: uniform chain needs K < 1 (use the nonexpansive chain for K = 1)");
  }
  if (chain == BoundChain::nonexpansive && k_uniform != 1.0) {
    throw InvalidInput("bound_unroll: nonexpansive chain needs K = 1");
  }

  const DistanceTrace dt = distance_trace(orbit, map.norm());
  const DeltaTrace delta = delta_trace(orbit, map);
  const auto& d = dt.d;
  const std::size_t n = d.size();
  const auto k_of = [&](std::size_t step) { return inner.k_per_set[orbit.set_indices[step]]; };

  // Closed-form inputs of the aggregate bound.
  double k_hat = 0.0;
  if (options.k_hat) {
    k_hat = *options.k_hat;
  } else {
    const auto products = period_gain_products(delta, p);
    const double worst = products.empty() ? 1.0 : *std::max_element(products.begin(), products.end());
    k_hat = k_bar(inner) * worst;
  }
  double sup_gain = 0.0;
  for (double m : delta.m_hat) sup_gain = std::max(sup_gain, std::abs(m));

  BoundLedger ledger;
  ledger.chain = chain;
  ledger.rows.reserve(n);
  ledger.min_slack = std::numeric_limits<double>::infinity();
  ledger.min_floor_slack = std::numeric_limits<double>::infinity();

  std::size_t segment = 0;  // index the current unrolling started from
  double bound = d[0];
  for (std::size_t k = 0; k < n; ++k) {
    LedgerRow row;
    row.k = k;
    row.set_index = orbit.set_indices[k];
    row.observed = d[k];
    row.delta = delta.delta[k];

    if (k == 0) {
      bound = d[0];
    } else if (!delta.gain_defined[k]) {
      // Gain unobservable; restart the unrolling from the observed value.
      bound = d[k];
      segment = k;
      row.restarted = true;
      ++ledger.restarts;
    } else {
      const double gap = delta.gap_in(k);
      switch (chain) {
        case BoundChain::uniform:
          bound = k_uniform * bound + (1.0 - k_uniform) * gap + delta.delta[k];
          break;
        case BoundChain::nonexpansive:
          bound = bound + delta.delta[k];
          break;
        case BoundChain::variable: {
          const double ki = k_of(k - 1);
          bound = delta.m_hat[k] * (ki * bound + (1.0 - ki) * gap);
          break;
        }
      }
    }
    row.upper = bound;
    row.lower = options.cyclic ? delta.pair_gap[k] : 0.0;
    row.slack = bound - d[k];

    // Closed forms, evaluated without the recursion.
    const std::size_t steps_in = k - segment;
    switch (chain) {
      case BoundChain::uniform: {
        double natural = std::pow(k_uniform, static_cast<double>(steps_in)) * d[segment];
        for (std::size_t i = 0; i < steps_in; ++i) {
          const std::size_t t = k - i;
          natural += std::pow(k_uniform, static_cast<double>(i)) *
                     ((1.0 - k_uniform) * delta.gap_in(t) + delta.delta[t]);
        }
        row.closed_form = natural;
        // Literal index range: sum_{i=1}^{M+1} K^i delta_{k+1-i}, delta at the
        // segment start taken as 0.
        const double gap = k > 0 ? delta.gap_in(k) : delta.pair_gap[0];
        const double km = std::pow(k_uniform, static_cast<double>(steps_in));
        double shifted = km * d[segment] + (1.0 - km) * gap;
        for (std::size_t i = 1; i <= steps_in + 1; ++i) {
          const std::size_t t = k + 1 - i;
          const double dl = t > segment ? delta.delta[t] : 0.0;
          shifted += std::pow(k_uniform, static_cast<double>(i)) * dl;
        }
        row.closed_form_shifted = shifted;
        break;
      }
      case BoundChain::nonexpansive: {
        double natural = d[segment];
        double shifted = d[segment];
        for (std::size_t t = segment + 1; t <= k; ++t) {
          natural += delta.delta[t];
          const double mp = delta.m_prime[t];
          if (mp > 0.0) {
            shifted += delta.delta[t];
          } else if (mp < 0.0 && mp >= -1.0) {
            shifted -= delta.delta[t];
          }
        }
        row.closed_form = natural;
        row.closed_form_shifted = shifted;
        break;
      }
      case BoundChain::variable: {
        double natural = 0.0;
        double tail = 1.0;  // prod of c_u for u = t+1..k
        for (std::size_t t = k; t > segment; --t) {
          const double ki = k_of(t - 1);
          natural += tail * delta.m_hat[t] * (1.0 - ki) * delta.gap_in(t);
          tail *= delta.m_hat[t] * ki;
        }
        natural += tail * d[segment];
        row.closed_form = natural;
        // Aggregate closed form with step index M = k: M + 1 = n p + j.
        if (k_hat < 1.0) {
          const std::size_t periods = (k + 1) / p;
          const std::size_t j = (k + 1) % p;
          double prod_k = 1.0;
          for (std::size_t l = 0; l < j; ++l) prod_k *= inner.k_per_set[(orbit.start_index() + l) % p];
          const double khn = std::pow(k_hat, static_cast<double>(periods));
          const double gap = delta.pair_gap[k];
          row.closed_form_shifted =
              prod_k * khn * d[0] +
              ((1.0 - prod_k * khn) + (1.0 - khn) / (1.0 - k_hat) * prod_k * sup_gain) * gap;
        } else {
          row.closed_form_shifted = std::numeric_limits<double>::quiet_NaN();
        }
        break;
      }
    }

    ledger.min_slack = std::min(ledger.min_slack, row.slack);
    ledger.min_floor_slack = std::min(ledger.min_floor_slack, row.observed - row.lower);
    ledger.max_closed_form_gap = std::max(ledger.max_closed_form_gap, std::abs(row.closed_form - row.upper));
    if (!close(row.closed_form_shifted, row.upper, options.tolerance)) ++ledger.index_shift_discrepancies;
    ledger.rows.push_back(row);
  }
  ledger.sound = ledger.min_slack >= -options.tolerance;
  ledger.floor_holds = ledger.min_floor_slack >= -options.tolerance;
  return ledger;
}

double tail_limsup(const DistanceTrace& trace, std::size_t window) {
  if (window == 0) throw InvalidInput("tail_limsup: window must be positive");
  if (trace.d.size() < 2 * window) throw InvalidInput("tail_limsup: trace shorter than twice the window");
  return *std::max_element(trace.d.end() - static_cast<std::ptrdiff_t>(window), trace.d.end());
}

}  // namespace semicyclic

#pragma once

// Orbits of the composite map and the step-by-step bound chains evaluated
// along them.

#include "semicyclic/mappings.hpp"

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace semicyclic {

/// x_0, T x_0, ..., T^N x_0 with the region of each point. `pre_impulse[k]`
/// is the point before the impulse that produced points[k]; pre_impulse[0]
/// is x_0 itself (step-0 convention T^0 x = x).
struct Orbit {
  std::vector<Point> points;
  std::vector<Point> pre_impulse;
  std::vector<std::size_t> set_indices;

  std::size_t steps() const noexcept { return points.empty() ? 0 : points.size() - 1; }
  const Point& x0() const { return points.front(); }
  std::size_t start_index() const { return set_indices.front(); }
};

/// Throws ImageEscape (with the offending step) if an image leaves every region.
Orbit iterate(const SemiCyclicMapping& map, const Point& x0, std::size_t i0, std::size_t steps);

/// d[k] = d(T^{k+1} x, T^k x).
struct DistanceTrace {
  std::vector<double> d;
};

DistanceTrace distance_trace(const Orbit& orbit, const NormSpec& norm);

/// Empirical impulse gains along an orbit and the correction terms they induce.
///   m_hat[k] = d(x_{k+1}, x_k) / d(u_{k+1}, u_k)   (u = pre-impulse points)
///   delta[k] = (m_hat[k] - 1) (K d[k-1] + (1 - K) gap_in[k])   for k >= 1
/// where gap_in[k] is the distance between the regions of x_{k-1} and x_k.
/// Steps whose pre-impulse displacement is below 1e-12 carry m_hat = 1 and
/// gain_defined = false.
struct DeltaTrace {
  double k = 0.0;
  std::vector<double> m_hat;
  std::vector<double> m_prime;
  std::vector<double> delta;
  std::vector<double> pair_gap;  // distance between the regions of x_k and x_{k+1}
  std::vector<bool> gain_defined;
  std::size_t skipped = 0;

  /// Gap entering the recursion for step k >= 1.
  double gap_in(std::size_t step) const { return pair_gap.at(step - 1); }
};

inline constexpr double kGainDenominatorFloor = 1e-12;

DeltaTrace delta_trace(const Orbit& orbit, const SemiCyclicMapping& map);

/// For each full period n, the product of m_hat[i] for i = n p + 1 .. (n + 1) p - 1.
std::vector<double> period_gain_products(const DeltaTrace& trace, std::size_t p);

/// prod_{i=1}^{p-1} K_i.
double k_bar(const InnerMapSpec& inner);

/// Index window (k, n, j) of the indicator sets; i ranges over 1..n p + j and
/// refers to trace index k + n p + j - i.
struct IndicatorWindow {
  std::size_t k = 0;
  std::size_t n = 1;
  std::size_t j = 0;
};

struct IndicatorSets {
  std::vector<std::size_t> plus;   // m' > 0
  std::vector<std::size_t> minus;  // -1 <= m' < 0
  double signed_sum = 0.0;         // sum over plus of delta minus sum over minus of delta
};

IndicatorSets indicator_sets(const DeltaTrace& trace, const IndicatorWindow& window, std::size_t p);

enum class BoundChain { uniform, nonexpansive, variable };

std::string_view to_string(BoundChain chain);

struct LedgerRow {
  std::size_t k = 0;
  std::size_t set_index = 0;  // region of x_k, 0-based
  double observed = 0.0;
  double delta = 0.0;
  double upper = 0.0;
  double lower = 0.0;
  double slack = 0.0;  // upper - observed
  double closed_form = 0.0;
  double closed_form_shifted = 0.0;
  bool restarted = false;
};

struct LedgerOptions {
  /// Lower bound D (cyclic) instead of 0.
  bool cyclic = false;
  /// Aggregate per-period factor for the variable chain's closed form;
  /// estimated from the orbit itself when absent.
  std::optional<double> k_hat;
  double tolerance = 1e-9;
};

struct BoundLedger {
  BoundChain chain = BoundChain::uniform;
  std::vector<LedgerRow> rows;
  double min_slack = 0.0;
  double min_floor_slack = 0.0;  // min of observed - lower
  double max_closed_form_gap = 0.0;
  std::size_t index_shift_discrepancies = 0;
  std::size_t restarts = 0;
  bool sound = true;
  bool floor_holds = true;
};

/// Upper bounds by literally unrolling the one-step recursion, with the closed
/// forms evaluated separately for cross-checking. Throws InvalidInput when the
/// chain's hypothesis on K does not match the map (uniform needs K < 1,
/// nonexpansive needs K = 1).
BoundLedger bound_unroll(const Orbit& orbit, const SemiCyclicMapping& map, BoundChain chain,
                         const LedgerOptions& options = {});

/// Max of the final `window` entries.
double tail_limsup(const DistanceTrace& trace, std::size_t window);

}  // namespace semicyclic

// Acceptance suite: one PASS/FAIL line per criterion.

#include "semicyclic/pipeline.hpp"

#include "scalar_oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace semicyclic;
namespace fs = std::filesystem;

namespace {

fs::path g_scenarios;
int g_failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
  std::printf("%s %d %s: %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

void guarded(int id, const std::string& title, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [ok, detail] = body();
    report(id, title, ok, detail);
  } catch (const std::exception& e) {
    report(id, title, false, std::string("exception: ") + e.what());
  }
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

ScenarioConfig bundled(const std::string& name) { return load_scenario((g_scenarios / (name + ".json")).string()); }

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::pair<bool, std::string> e1_exactness() {
  const auto config = bundled("e1_contractive_cyclic");
  const auto map = build_mapping(config);
  const Orbit orbit = iterate(map, Point{2.0}, 0, 60);
  const DistanceTrace trace = distance_trace(orbit, map.norm());
  const auto oracle = oracle::gaps(2.0, 2.0, 0.5, {1.0}, 21);
  double worst = 0.0;
  for (std::size_t k = 0; k <= 20; ++k) {
    worst = std::max(worst, std::abs(trace.d[k] - oracle[k]));
    worst = std::max(worst, std::abs(trace.d[k] - (2.0 + 1.5 * std::pow(0.5, static_cast<double>(k)))));
  }
  const auto verdict = detect_limit(trace, 2.0, config.window());
  const bool ok = worst <= 1e-12 && verdict.limit_class == LimitClass::to_D && verdict.residual < 1e-6;
  return {ok, fmt("max |d_k - oracle| = %.3g, class ", worst) + std::string(to_string(verdict.limit_class)) +
                  fmt(", residual %.3g", verdict.residual)};
}

// Two regions facing each other across a gap along the first axis, or three
// regions sharing a common point. Anchors form a best-proximity chain.
std::string random_scenario(std::mt19937_64& rng, std::size_t index) {
  const int dim = 1 + static_cast<int>(rng() % 3);
  const int p = 2 + static_cast<int>(rng() % 2);
  const double gap = p == 2 ? uniform(rng, 0.0, 3.0) : 0.0;
  std::vector<double> common(dim);
  for (int c = 0; c < dim; ++c) common[c] = uniform(rng, -1.0, 1.0);
  nlohmann::json regions = nlohmann::json::array();
  nlohmann::json anchors = nlohmann::json::array();
  nlohmann::json ks = nlohmann::json::array();
  for (int i = 0; i < p; ++i) {
    std::vector<double> lo(dim);
    std::vector<double> hi(dim);
    std::vector<double> anchor = common;
    for (int c = 0; c < dim; ++c) {
      lo[c] = common[c] - uniform(rng, 0.2, 2.0);
      hi[c] = common[c] + uniform(rng, 0.2, 2.0);
    }
    if (p == 2) {
      const double side = i == 0 ? 1.0 : -1.0;
      anchor[0] = common[0] + side * gap / 2;
      const double depth = uniform(rng, 0.5, 2.0);
      lo[0] = side > 0 ? anchor[0] : anchor[0] - depth;
      hi[0] = side > 0 ? anchor[0] + depth : anchor[0];
    }
    regions.push_back({{"box", {{"lo", lo}, {"hi", hi}}}});
    anchors.push_back(anchor);
    ks.push_back(uniform(rng, 0.1, 0.95));
  }
  std::vector<double> start(dim);
  for (int c = 0; c < dim; ++c) {
    start[c] = uniform(rng, regions[0]["box"]["lo"][c].get<double>(), regions[0]["box"]["hi"][c].get<double>());
  }
  nlohmann::json s = {
      {"name", "random_" + std::to_string(index)},
      {"space", {{"dimension", dim}}},
      {"regions", regions},
      {"mapping",
       {{"inner", {{"kind", "anchor_segment"}, {"anchors", anchors}, {"K", ks}}},
        {"impulse", {{"kind", "anchor_scaling"}, {"anchors", anchors}, {"gains", {uniform(rng, 0.5, 1.0)}}}}}},
      {"run", {{"iterations", 120}, {"x0", {start}}, {"seed", index}, {"samples", 200}, {"probe_orbits", 4}}}};
  return s.dump();
}

std::pair<bool, std::string> ledger_soundness() {
  std::mt19937_64 rng(20260101);
  std::size_t accepted = 0;
  std::size_t attempts = 0;
  std::size_t cyclic = 0;
  std::size_t violations = 0;
  double worst_upper = std::numeric_limits<double>::infinity();
  double worst_floor = std::numeric_limits<double>::infinity();
  while (accepted < 100 && attempts < 5000) {
    ++attempts;
    const auto config = parse_scenario(random_scenario(rng, attempts));
    const auto map = build_mapping(config);
    AuditOptions options;
    options.samples = config.run.samples;
    options.seed = config.run.seed;
    options.probe_orbits = config.run.probe_orbits;
    const AuditReport audit = run_audit(map, options);
    if (!(audit.membership.holds && audit.inner_uniform.holds && audit.gain.upper.holds)) continue;
    ++accepted;
    const bool is_cyclic = audit.cyclic_floor.holds;
    if (is_cyclic) ++cyclic;
    const auto& start = config.run.x0.front();
    const Orbit orbit = iterate(map, start.point, start.region.value_or(0), config.run.iterations);
    LedgerOptions lo;
    lo.cyclic = is_cyclic;
    const BoundLedger ledger = bound_unroll(orbit, map, BoundChain::uniform, lo);
    for (const auto& row : ledger.rows) {
      const double upper = row.upper - row.observed;
      worst_upper = std::min(worst_upper, upper);
      bool bad = upper < -1e-9;
      if (is_cyclic) {
        const double floor = row.observed - map.partition().adjacent_gap(row.set_index);
        worst_floor = std::min(worst_floor, floor);
        bad = bad || floor < -1e-9;
      }
      if (bad) ++violations;
    }
  }
  const bool ok = accepted == 100 && violations == 0;
  std::ostringstream out;
  out << accepted << " audited scenarios from " << attempts << " draws (" << cyclic << " cyclic), " << violations
      << " violating steps, min bound slack " << worst_upper << ", min floor slack " << worst_floor;
  return {ok, out.str()};
}

std::pair<bool, std::string> contraction_regime() {
  const auto config = bundled("contraction_regime");
  const auto map = build_mapping(config);
  AuditOptions options;
  options.samples = config.run.samples;
  options.seed = config.run.seed;
  const AuditReport audit = run_audit(map, options);
  const Orbit orbit = iterate(map, Point{2.0}, 0, 200);
  const DistanceTrace trace = distance_trace(orbit, map.norm());
  const auto oracle = oracle::gaps(2.0, 2.0, 0.5, {1.5, 0.4}, 200);
  double worst = 0.0;
  for (std::size_t k = 0; k < std::min(oracle.size(), trace.d.size()); ++k) worst = std::max(worst, std::abs(trace.d[k] - oracle[k]));
  const double limsup = tail_limsup(trace, config.window());
  const auto verdict = detect_limit(trace, 2.0, config.window());
  const bool bounded = verdict.limit_class != LimitClass::divergent && verdict.limit_class != LimitClass::inconclusive;
  const bool ok = audit.profile.k_hat < 1.0 && bounded && std::abs(limsup - 2.0) <= 1e-6 && worst <= 1e-12;
  return {ok, fmt("K_hat = %.6g, tail limsup = %.15g, max |d - oracle| = %.3g", audit.profile.k_hat, limsup, worst) +
                  ", class " + std::string(to_string(verdict.limit_class))};
}

std::pair<bool, std::string> intersecting() {
  const auto config = bundled("intersecting");
  const auto report = run_scenario(config);
  const auto& orbit = report.json["orbits"][0];
  const std::string cls = orbit["limit"]["class"];
  const double residual = orbit["limit"]["residual"];
  const auto& fp = report.json["fixed_point"];
  const bool have_fp = !fp.is_null();
  const double fp_residual = have_fp ? fp["residual"].get<double>() : 1.0;
  const bool ok = cls == "to_zero" && residual < 1e-8 && have_fp && fp_residual < 1e-8;
  return {ok, "class " + cls + fmt(", residual %.3g, fixed point residual %.3g", residual, fp_residual)};
}

std::pair<bool, std::string> uniqueness() {
  const auto e1 = bundled("e1_contractive_cyclic");
  const auto map = build_mapping(e1);
  const auto starts = sample_starts(map.partition(), 10, 12345);
  const auto u = uniqueness_check(map, starts, e1.run.iterations, 1e-6);
  double pair_dev = 0.0;
  for (const auto& set : u.sets) {
    if (!set.terminal[0] || !set.terminal[1]) {
      pair_dev = std::numeric_limits<double>::infinity();
      continue;
    }
    pair_dev = std::max(pair_dev, std::abs(metric_distance(map.norm(), *set.terminal[0], *set.terminal[1]) - 2.0));
  }
  const auto k1 = bundled("k1_nonexpansive_control");
  const auto kmap = build_mapping(k1);
  const auto kstarts = sample_starts(kmap.partition(), 10, 12345);
  const auto uk = uniqueness_check(kmap, kstarts, k1.run.iterations, 1e-6);
  const bool ok = u.sets.size() == 10 && u.spread < 1e-6 && pair_dev <= 1e-6 && uk.spread > 0.1;
  return {ok, fmt("E1 spread %.3g, max |d(z1,z2) - 2| %.3g, K=1 spread %.3g", u.spread, pair_dev, uk.spread)};
}

std::pair<bool, std::string> result4() {
  std::ostringstream out;
  bool ok = true;
  for (const char* name : {"e1_contractive_cyclic", "strips_2d", "strips_l3"}) {
    const auto report = run_scenario(bundled(name));
    const auto& r4 = report.json["result4"];
    const bool holds = !r4.is_null() && r4["conclusive"].get<bool>() && r4["holds"].get<bool>();
    ok = ok && holds;
    out << name << ": ";
    if (r4.is_null()) {
      out << "not evaluated; ";
    } else {
      out << "tail " << r4["tail_max"].get<double>() << " precondition " << r4["precondition"].get<double>() << "; ";
    }
  }
  return {ok, out.str()};
}

std::pair<bool, std::string> gain_floor() {
  const auto config = bundled("e1_impulsive_damped");
  const auto map = build_mapping(config);
  auto pairs = sample_adjacent_pairs(map.partition(), 500, config.run.seed);
  // Extra pairs next to the proximity points.
  std::mt19937_64 rng(config.run.seed);
  for (int t = 0; t < 100; ++t) {
    const double sx = uniform(rng, 0.0, 5e-4);
    const double sy = uniform(rng, 0.0, 5e-4);
    const bool flip = t % 2 == 1;
    const Point x{flip ? -1.0 - sx : 1.0 + sx};
    const Point y{flip ? 1.0 + sy : -1.0 - sy};
    pairs.push_back({x, y, flip ? 1u : 0u, metric_distance(map.norm(), x, y)});
  }
  const double d_gap = 2.0;
  const double k = 0.5;
  std::size_t violations = 0;
  std::size_t near = 0;
  double near_dev = 0.0;
  double min_floor_slack = std::numeric_limits<double>::infinity();
  double min_upper_slack = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < pairs.size(); ++s) {
    const auto& pair = pairs[s];
    const Point ux = map.apply_inner(pair.x, pair.i).point;
    const Point uy = map.apply_inner(pair.y, map.partition().successor(pair.i)).point;
    const double den = metric_distance(map.norm(), ux, uy);
    const std::size_t jx = map.partition().successor(pair.i);
    const std::size_t jy = map.partition().successor(jx);
    const Point tx = map.apply_impulse(ux, jx, s);
    const Point ty = map.apply_impulse(uy, jy, s);
    const double m = metric_distance(map.norm(), tx, ty) / den;
    const double d = pair.d_xy;
    const double floor = d_gap / (d_gap + k * (d - d_gap));
    min_floor_slack = std::min(min_floor_slack, m - floor);
    min_upper_slack = std::min(min_upper_slack, 1.0 - m);
    if (m < floor - 1e-9 || m > 1.0 + 1e-9) ++violations;
    if (d < d_gap + 1e-3) {
      ++near;
      near_dev = std::max(near_dev, std::abs(m - 1.0));
    }
  }
  // m_hat -> 1 as d -> D: on near pairs the floor itself is within K * 1e-3 / D of 1.
  const bool ok = violations == 0 && near >= 100 && near_dev <= k * 1e-3 / d_gap + 1e-9;
  std::ostringstream out;
  out << pairs.size() << " pairs (1000 uniform), " << violations << " violations, min floor slack " << min_floor_slack
      << ", min upper slack " << min_upper_slack << ", " << near << " near pairs with max |m - 1| " << near_dev;
  return {ok, out.str()};
}

std::vector<fs::path> bundled_files() {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(g_scenarios)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::pair<bool, std::string> strict_equivalence() {
  std::size_t applicable = 0;
  std::size_t matched = 0;
  std::ostringstream mismatches;
  for (const auto& file : bundled_files()) {
    const auto report = run_scenario(load_scenario(file.string()));
    const auto& cls = report.json["classification"];
    if (!cls["equivalence_hypotheses"].get<bool>()) continue;
    ++applicable;
    if (cls["strict_matches_nonstrict"].get<bool>()) {
      ++matched;
    } else {
      mismatches << " " << file.stem().string();
    }
  }
  const bool ok = applicable > 0 && matched == applicable;
  std::ostringstream out;
  out << matched << "/" << applicable << " applicable scenarios agree";
  if (matched != applicable) out << "; mismatched:" << mismatches.str();
  return {ok, out.str()};
}

std::pair<bool, std::string> stability() {
  const auto start = std::chrono::steady_clock::now();
  const SweepResult r = stability_sweep(default_sweep());
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = r.cells.size() == 1000 && r.compared > 0 && r.agreements == r.compared && seconds < 60.0;
  std::ostringstream out;
  out << r.cells.size() << " cells, " << r.escapes << " escapes, " << r.agreements << "/" << r.compared
      << " agree, " << seconds << " s";
  return {ok, out.str()};
}

std::pair<bool, std::string> determinism() {
  std::size_t identical = 0;
  std::size_t total = 0;
  std::ostringstream differing;
  for (const auto& file : bundled_files()) {
    const auto config = load_scenario(file.string());
    ++total;
    const std::string a = render_report(run_scenario(config));
    const std::string b = render_report(run_scenario(config));
    if (a == b) {
      ++identical;
    } else {
      differing << " " << file.stem().string();
    }
  }
  std::ostringstream out;
  out << identical << "/" << total << " bundled scenarios byte-identical";
  if (identical != total) out << "; differing:" << differing.str();
  return {total > 0 && identical == total, out.str()};
}

}  // namespace

int main(int argc, char** argv) {
  g_scenarios = argc > 1 ? fs::path(argv[1]) : fs::path("scenarios");
  guarded(1, "E1 exactness", e1_exactness);
  guarded(2, "ledger soundness", ledger_soundness);
  guarded(3, "contraction regime", contraction_regime);
  guarded(4, "intersecting convergence", intersecting);
  guarded(5, "uniqueness", uniqueness);
  guarded(6, "limiting pair property", result4);
  guarded(7, "gain floor", gain_floor);
  guarded(8, "strict versus non-strict", strict_equivalence);
  guarded(9, "stability boundary", stability);
  guarded(10, "determinism", determinism);
  std::printf("%d of 10 criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}

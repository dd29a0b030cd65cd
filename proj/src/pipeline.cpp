#include "semicyclic/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace semicyclic {

namespace {

using ojson = nlohmann::ordered_json;

ojson vec_json(const Vector& v) {
  ojson out = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

ojson verdict_json(const Verdict& v) {
  ojson out{{"holds", v.holds}, {"worst_slack", v.checked ? ojson(v.worst_slack) : ojson()},
            {"checked", v.checked}, {"skipped", v.skipped}};
  if (v.witness && !v.holds) {
    out["witness"] = {{"x", vec_json(v.witness->x.coords())},
                      {"y", vec_json(v.witness->y.coords())},
                      {"region", v.witness->i + 1}};
  }
  return out;
}

ojson ledger_json(const BoundLedger& l) {
  return {{"chain", std::string(to_string(l.chain))},
          {"sound", l.sound},
          {"floor_holds", l.floor_holds},
          {"min_slack", l.min_slack},
          {"min_floor_slack", l.min_floor_slack},
          {"max_closed_form_gap", l.max_closed_form_gap},
          {"index_shift_discrepancies", l.index_shift_discrepancies},
          {"restarts", l.restarts}};
}

ojson verdict_class_json(const ProximityVerdict& v) {
  return {{"class", std::string(to_string(v.limit_class))},
          {"estimate", v.limit_estimate},
          {"residual", v.residual}};
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct OrbitRun {
  OrbitRun(std::size_t i, Located s) : index(i), start(std::move(s)) {}

  std::size_t index = 0;
  Located start;
  std::optional<Orbit> orbit;
  std::optional<std::size_t> escape_step;
  ProximityVerdict verdict;
  double tail = 0.0;
  double target = 0.0;  // largest pair gap over the tail window
  std::optional<BoundLedger> ledger;
  std::optional<BoundLedger> variable;
  DeltaTrace delta;
};

}  // namespace

std::string ledger_csv(const BoundLedger& ledger) {
  std::string out = std::string(kTraceHeader) + "\n";
  for (const auto& row : ledger.rows) {
    out += std::to_string(row.k) + "," + std::to_string(row.set_index + 1) + "," + fmt(row.observed) + "," +
           fmt(row.delta) + "," + fmt(row.upper) + "," + fmt(row.slack) + "\n";
  }
  return out;
}

RunReport run_scenario(ScenarioConfig config, const RunOverrides& overrides) {
  if (overrides.seed) config.run.seed = *overrides.seed;
  if (overrides.iterations) {
    if (*overrides.iterations < 4 * config.window()) {
      throw InvalidInput("--iters must be at least 4 times the window (" + std::to_string(config.window()) + ")");
    }
    config.run.iterations = *overrides.iterations;
  }
  const SemiCyclicMapping map = build_mapping(config);
  const CyclePartition& partition = map.partition();
  const std::size_t p = map.size();
  const std::size_t n = config.run.iterations;
  const std::size_t window = config.window();
  const auto& tol = config.tolerances;
  const LimitTolerances limit_tol{tol.limit, tol.divergence_cap};

  RunReport report;
  ojson& out = report.json;
  out["schema"] = kReportSchema;
  out["version"] = kVersion;
  const ojson echo = scenario_to_json(config);
  out["scenario"] = echo;
  out["scenario_hash"] = sha256_hex(echo.dump());

  out["partition"] = {{"regions", p},
                      {"dimension", partition.dim()},
                      {"adjacent_gaps", partition.adjacent_gaps()},
                      {"intersecting", partition.intersecting()},
                      {"all_adjacent_intersect", partition.all_adjacent_intersect()}};

  // Audit and classification.
  AuditOptions audit_options{config.run.samples, config.run.seed, config.run.probe_orbits,
                             config.run.probe_periods, tol.slack};
  const AuditReport audit = run_audit(map, audit_options);
  const MappingClass cls = classify(map, audit);
  const auto& prof = audit.profile;
  out["audit"] = {{"seed", audit.seed},
                  {"samples", audit.sample_count},
                  {"membership", verdict_json(audit.membership)},
                  {"inner_contraction", verdict_json(audit.inner_uniform)},
                  {"inner_per_set", verdict_json(audit.inner_per_set)},
                  {"gain", verdict_json(audit.gain.upper)},
                  {"gain_floor", verdict_json(audit.gain.floor)},
                  {"gain_range", {{"min", audit.gain.min_gain}, {"max", audit.gain.max_gain}}},
                  {"near_proximity", {{"pairs", audit.gain.near_proximity_pairs},
                                      {"max_gain_deviation", audit.gain.near_proximity_deviation}}},
                  {"strict", verdict_json(audit.strict)},
                  {"cyclic_floor", verdict_json(audit.cyclic_floor)},
                  {"probe_escapes", audit.probe_escapes},
                  {"contraction", {{"k_bar", prof.k_bar},
                                   {"k_hat", prof.k_hat},
                                   {"k_hat_below_one", prof.k_hat_below_one},
                                   {"periods_sampled", prof.periods_sampled},
                                   {"eps0", prof.eps0},
                                   {"eps0_finite", prof.eps0_finite},
                                   {"eps0_tends_to_zero", prof.eps0_tends_to_zero}}}};
  ojson flags;
  for_each_flag(cls, [&](std::string_view name, const FlagEvidence& f) {
    flags[std::string(name)] = {{"value", f.value}, {"conclusive", f.conclusive}, {"samples", f.samples},
                                {"worst_slack", f.worst_slack}};
  });
  out["classification"] = {{"flags", flags},
                           {"equivalence_hypotheses", cls.equivalence_hypotheses},
                           {"strict_matches_nonstrict", cls.strict_matches_nonstrict()}};

  // Orbits, traces, bound ledgers.
  const double k_uniform = map.inner().uniform_k();
  const bool has_chain = k_uniform <= 1.0;
  const BoundChain chain = k_uniform < 1.0 ? BoundChain::uniform : BoundChain::nonexpansive;
  std::vector<OrbitRun> runs;
  std::vector<Orbit> completed;
  for (std::size_t o = 0; o < config.run.x0.size(); ++o) {
    OrbitRun run{o, Located{config.run.x0[o].point, *config.run.x0[o].region}};
    try {
      run.orbit = iterate(map, run.start.point, run.start.region, n);
    } catch (const ImageEscape& e) {
      run.escape_step = e.step();
      run.verdict.limit_class = LimitClass::divergent;
      run.verdict.limit_estimate = std::numeric_limits<double>::infinity();
      run.verdict.residual = std::numeric_limits<double>::infinity();
    }
    if (run.orbit) {
      const DistanceTrace dt = distance_trace(*run.orbit, map.norm());
      run.delta = delta_trace(*run.orbit, map);
      run.verdict = detect_limit(dt, run.delta.pair_gap, window, limit_tol);
      run.tail = tail_limsup(dt, window);
      run.target = *std::max_element(run.delta.pair_gap.end() - static_cast<std::ptrdiff_t>(window),
                                     run.delta.pair_gap.end());
      LedgerOptions lo{true, prof.k_hat_below_one ? std::optional(prof.k_hat) : std::nullopt, tol.slack};
      if (has_chain) run.ledger = bound_unroll(*run.orbit, map, chain, lo);
      run.variable = bound_unroll(*run.orbit, map, BoundChain::variable, lo);
      completed.push_back(*run.orbit);
    }
    runs.push_back(std::move(run));
  }

  ojson orbits = ojson::array();
  for (const auto& run : runs) {
    ojson o{{"start", vec_json(run.start.point.coords())}, {"start_region", run.start.region + 1}, {"steps", n}};
    o["escape_step"] = run.escape_step ? ojson(*run.escape_step) : ojson();
    o["limit"] = verdict_class_json(run.verdict);
    if (run.orbit) {
      o["tail_limsup"] = run.tail;
      o["tail_gap"] = run.target;
      o["gain"] = {{"min", *std::min_element(run.delta.m_hat.begin(), run.delta.m_hat.end())},
                   {"max", *std::max_element(run.delta.m_hat.begin(), run.delta.m_hat.end())},
                   {"undefined_steps", run.delta.skipped}};
      const BoundLedger& primary = run.ledger ? *run.ledger : *run.variable;
      const std::string csv_name = config.name + ".orbit" + std::to_string(run.index + 1) + ".csv";
      o["ledger"] = ledger_json(primary);
      o["variable_ledger"] = ledger_json(*run.variable);
      o["trace_csv"] = csv_name;
      report.files.push_back({csv_name, ledger_csv(primary)});
    }
    orbits.push_back(o);
  }
  out["orbits"] = orbits;

  // Limiting set and proximity checks.
  std::optional<LimitingSet> limiting;
  if (!completed.empty()) limiting = extract_limiting_set(completed, map, tol.limit);
  ojson lim;
  std::optional<bool> pair_proximity;
  if (limiting) {
    lim["conclusive"] = limiting->conclusive;
    if (!limiting->reason.empty()) lim["reason"] = limiting->reason;
    lim["settle_step"] = limiting->settle_step ? ojson(*limiting->settle_step) : ojson();
    lim["max_residual"] = limiting->max_residual;
    lim["orbit_spread"] = limiting->orbit_spread;
    ojson pts = ojson::array();
    for (const auto& lp : limiting->points) {
      pts.push_back({{"z", vec_json(lp.z.coords())}, {"region", lp.region + 1}, {"residue", lp.residue},
                     {"terminal", lp.terminal}, {"residual", lp.residual}});
    }
    lim["points"] = pts;
    if (limiting->conclusive) {
      ojson gaps = ojson::array();
      bool ok = true;
      for (std::size_t i = 0; i < p; ++i) {
        const auto& a = limiting->terminal[i];
        const auto& b = limiting->terminal[partition.successor(i)];
        if (!a || !b) {
          ok = false;
          gaps.push_back(nullptr);
          continue;
        }
        const double d = metric_distance(map.norm(), *a, *b);
        gaps.push_back(d);
        ok = ok && std::abs(d - partition.adjacent_gap(i)) <= tol.limit;
      }
      lim["adjacent_terminal_distances"] = gaps;
      pair_proximity = ok;
    }
  }
  out["limiting_set"] = limiting ? lim : ojson();

  // Uniqueness over seeded random starts.
  UniquenessResult uniq;
  bool uniq_escape = false;
  {
    const auto starts = sample_starts(partition, std::max(config.run.random_starts, std::max<std::size_t>(p, 2)),
                                      config.run.seed + 2);
    try {
      uniq = uniqueness_check(map, starts, n, tol.uniqueness);
    } catch (const ImageEscape&) {
      uniq_escape = true;
    }
  }
  out["uniqueness"] = {{"conclusive", uniq.conclusive && !uniq_escape},
                       {"unique", uniq.unique},
                       {"spread", uniq.spread},
                       {"starts", uniq.sets.size()},
                       {"escaped", uniq_escape}};

  std::optional<FixedPointResult> fixed;
  if (partition.all_adjacent_intersect() && limiting && limiting->conclusive) {
    fixed = fixed_point_check(map, *limiting, tol.fixed_point);
    out["fixed_point"] = {{"z", vec_json(fixed->z.coords())}, {"residual", fixed->residual}, {"holds", fixed->holds}};
  } else {
    out["fixed_point"] = nullptr;
  }

  // Result 4: two orbits from the same region, the second orbit's points as z_n.
  std::optional<Result4Outcome> r4;
  {
    const OrbitRun* first = nullptr;
    const OrbitRun* second = nullptr;
    for (const auto& run : runs) {
      if (!run.orbit) continue;
      if (!first) {
        first = &run;
      } else if (run.start.region == first->start.region) {
        second = &run;
        break;
      }
    }
    if (first && second) {
      const std::size_t i = first->start.region;
      const std::size_t j = partition.successor(i);
      std::vector<Point> xs;
      std::vector<Point> zs;
      std::vector<Point> ys;
      bool aligned = true;
      for (std::size_t t = 0; t + 1 <= n; t += p) {
        const auto& a = *first->orbit;
        const auto& b = *second->orbit;
        if (a.set_indices[t] != i || b.set_indices[t] != i || a.set_indices[t + 1] != j) {
          aligned = false;
          continue;
        }
        xs.push_back(a.points[t]);
        zs.push_back(b.points[t]);
        ys.push_back(a.points[t + 1]);
      }
      if (!xs.empty()) {
        Result4Tolerances rt{tol.result4_precondition, tol.result4, 0};
        r4 = result4_check(map.norm(), partition.region(i), partition.region(j), xs, zs, ys,
                           partition.adjacent_gap(i), rt);
      }
      out["result4"] = r4 ? ojson{{"conclusive", r4->conclusive}, {"holds", r4->holds},
                                  {"tail_max", r4->tail_max}, {"precondition", r4->precondition},
                                  {"pairs", xs.size()}, {"fully_aligned", aligned}}
                          : ojson();
    } else {
      out["result4"] = nullptr;
    }
  }

  // Stability sweep.
  std::optional<SweepResult> sweep;
  if (config.sweep) {
    sweep = stability_sweep(*config.sweep);
    std::string csv = "a,lambda_1,lambda_2,verdict\n";
    for (const auto& cell : sweep->cells) {
      csv += fmt(cell.a) + "," + fmt(cell.lambda_1) + "," + fmt(cell.lambda_2) + "," +
             (cell.escaped ? std::string("escape") : std::string(to_string(cell.verdict))) + "\n";
    }
    const std::string name = config.name + ".stability_grid.csv";
    report.files.push_back({name, csv});
    out["stability_grid"] = {{"cells", sweep->cells.size()}, {"escapes", sweep->escapes},
                             {"compared", sweep->compared}, {"agreements", sweep->agreements},
                             {"agreement", sweep->agreement()}, {"csv", name}};
  } else {
    out["stability_grid"] = nullptr;
  }

  // Checks.
  const auto all_runs = [&](auto pred) {
    return !runs.empty() && std::all_of(runs.begin(), runs.end(), pred);
  };
  ojson checks = ojson::array();
  for (const auto& check : config.checks) {
    CheckOutcome outcome{check.name, check.expect, nullptr, false};
    const auto boolean = [&](std::optional<bool> observed) {
      if (!observed) {
        outcome.observed = "inconclusive";
        return;
      }
      outcome.observed = *observed;
      outcome.passed = *observed == std::get<bool>(check.expect);
    };
    const std::string& c = check.name;
    if (c == "membership") {
      boolean(audit.membership.holds);
    } else if (c == "inner_contraction") {
      boolean(audit.inner_uniform.holds);
    } else if (c == "inner_per_set") {
      boolean(audit.inner_per_set.holds);
    } else if (c == "gain") {
      boolean(audit.gain.upper.holds);
    } else if (c == "gain_floor") {
      boolean(audit.gain.floor.holds);
    } else if (c == "strict") {
      boolean(audit.strict.holds);
    } else if (c == "cyclic_floor") {
      boolean(audit.cyclic_floor.holds);
    } else if (c == "ledger_sound") {
      boolean(all_runs([](const OrbitRun& r) { return r.orbit && (r.ledger ? r.ledger->sound : r.variable->sound); }));
    } else if (c == "trace_floor") {
      boolean(all_runs([](const OrbitRun& r) { return r.orbit && r.variable->floor_holds; }));
    } else if (c == "limit_class") {
      const std::string want = std::get<std::string>(check.expect);
      outcome.observed = runs.empty() ? std::string("none") : std::string(to_string(runs.front().verdict.limit_class));
      outcome.passed = all_runs([&](const OrbitRun& r) { return to_string(r.verdict.limit_class) == want; });
    } else if (c == "khat_below_one") {
      boolean(prof.k_hat_below_one);
    } else if (c == "eps0_bound") {
      if (!prof.eps0_finite) {
        boolean(std::nullopt);
      } else {
        boolean(all_runs([&](const OrbitRun& r) {
          return r.orbit && r.tail <= r.target * (1.0 + prof.eps0) + tol.limit;
        }));
      }
    } else if (c == "uniqueness") {
      boolean(uniq.conclusive && !uniq_escape ? std::optional(uniq.unique) : std::nullopt);
    } else if (c == "fixed_point") {
      boolean(fixed ? std::optional(fixed->holds) : std::nullopt);
    } else if (c == "result4") {
      boolean(r4 && r4->conclusive ? std::optional(r4->holds) : std::nullopt);
    } else if (c == "strict_equivalence") {
      boolean(!cls.equivalence_hypotheses || cls.strict_matches_nonstrict());
    } else if (c == "limiting_pair_proximity") {
      boolean(pair_proximity);
    } else if (c == "stability_boundary") {
      boolean(sweep && sweep->compared > 0 ? std::optional(sweep->agreements == sweep->compared) : std::nullopt);
    } else if (c.rfind("flag:", 0) == 0) {
      const std::string flag = c.substr(5);
      std::optional<bool> value;
      for_each_flag(cls, [&](std::string_view name, const FlagEvidence& f) {
        if (name == flag) value = f.conclusive ? std::optional(f.value) : std::nullopt;
      });
      boolean(value);
    }
    report.passed = report.passed && outcome.passed;
    ojson item{{"check", c}};
    std::visit([&](const auto& v) { item["expect"] = v; }, check.expect);
    item["observed"] = outcome.observed;
    item["passed"] = outcome.passed;
    checks.push_back(item);
    report.checks.push_back(std::move(outcome));
  }
  out["checks"] = checks;
  out["passed"] = report.passed;
  return report;
}

std::string render_report(const RunReport& report) { return report.json.dump(2) + "\n"; }

std::filesystem::path emit_report(const RunReport& report, const std::filesystem::path& dir,
                                  const std::string& stem) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
  const auto write = [](const std::filesystem::path& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    f << contents;
    if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
  };
  const auto report_path = dir / (stem + ".report.json");
  write(report_path, render_report(report));
  for (const auto& file : report.files) write(dir / file.name, file.contents);
  return report_path;
}

}  // namespace semicyclic

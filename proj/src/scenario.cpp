#include "semicyclic/scenario.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

namespace semicyclic {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ScenarioError(path.empty() ? "/" : path, message);
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& item : obj.items()) {
    const bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; });
    if (!ok) fail(child(path, item.key()), "unknown key");
  }
}

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) fail(child(path, key), "missing required key");
  return obj.at(key);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

std::size_t count(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    fail(path, "expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}


std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], child(path, i)));
  return out;
}

Vector vec(const json& j, const std::string& path, std::size_t dim) {
  const auto values = numbers(j, path);
  if (values.size() != dim) {
    fail(path, "expected " + std::to_string(dim) + " coordinates, got " + std::to_string(values.size()));
  }
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Point point(const json& j, const std::string& path, std::size_t dim) {
  if (j.is_number()) {
    if (dim != 1) fail(path, "a bare number is only a point in dimension 1");
    return Point{number(j, path)};
  }
  return Point(vec(j, path, dim));
}

std::vector<Point> points(const json& j, const std::string& path, std::size_t dim) {
  if (!j.is_array()) fail(path, "expected an array of points");
  std::vector<Point> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(point(j[i], child(path, i), dim));
  return out;
}

ConvexRegion parse_region(const json& j, const std::string& path, std::size_t dim) {
  check_keys(j, path, {"box", "ball", "polytope", "tolerance"});
  const double tol = j.contains("tolerance") ? number(j["tolerance"], child(path, "tolerance")) : kDefaultMembershipTol;
  const int kinds = int(j.contains("box")) + int(j.contains("ball")) + int(j.contains("polytope"));
  if (kinds != 1) fail(path, "a region needs exactly one of box, ball, polytope");
  try {
    if (j.contains("box")) {
      const std::string p = child(path, "box");
      check_keys(j["box"], p, {"lo", "hi"});
      return ConvexRegion::box(vec(require(j["box"], "lo", p), child(p, "lo"), dim),
                               vec(require(j["box"], "hi", p), child(p, "hi"), dim), tol);
    }
    if (j.contains("ball")) {
      const std::string p = child(path, "ball");
      check_keys(j["ball"], p, {"center", "radius"});
      return ConvexRegion::ball(vec(require(j["ball"], "center", p), child(p, "center"), dim),
                                number(require(j["ball"], "radius", p), child(p, "radius")), tol);
    }
    const std::string p = child(path, "polytope");
    check_keys(j["polytope"], p, {"a", "b", "interior"});
    const json& rows = require(j["polytope"], "a", p);
    if (!rows.is_array() || rows.empty()) fail(child(p, "a"), "expected a nonempty array of rows");
    Matrix a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < rows.size(); ++r) a.row(static_cast<Eigen::Index>(r)) = vec(rows[r], child(child(p, "a"), r), dim);
    Vector b = vec(require(j["polytope"], "b", p), child(p, "b"), rows.size());
    return ConvexRegion::polytope(std::move(a), std::move(b),
                                  vec(require(j["polytope"], "interior", p), child(p, "interior"), dim), tol);
  } catch (const ScenarioError&) {
    throw;
  } catch (const InvalidInput& e) {
    fail(path, e.what());
  }
}

std::vector<double> k_list(const json& j, const std::string& path, std::size_t p) {
  if (j.is_number()) return std::vector<double>(p, number(j, path));
  auto ks = numbers(j, path);
  if (ks.size() != p) fail(path, "expected one K per region (" + std::to_string(p) + ")");
  return ks;
}

std::string line_col(const std::string& source, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < source.size(); ++i) {
    if (source[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ":" + std::to_string(col);
}

void parse_run(const json& j, const std::string& path, ScenarioConfig& c) {
  check_keys(j, path, {"iterations", "x0", "seed", "samples", "window", "probe_orbits", "probe_periods",
                       "random_starts"});
  RunConfig& run = c.run;
  if (j.contains("iterations")) run.iterations = count(j["iterations"], child(path, "iterations"));
  if (run.iterations < 1) fail(child(path, "iterations"), "must be at least 1");
  if (j.contains("seed")) run.seed = j["seed"].is_number_unsigned() ? j["seed"].get<std::uint64_t>() : count(j["seed"], child(path, "seed"));
  if (j.contains("samples")) run.samples = count(j["samples"], child(path, "samples"));
  if (run.samples < 1) fail(child(path, "samples"), "must be at least 1");
  if (j.contains("window")) {
    run.window = count(j["window"], child(path, "window"));
    if (*run.window < 1) fail(child(path, "window"), "must be at least 1");
  }
  if (j.contains("probe_orbits")) run.probe_orbits = count(j["probe_orbits"], child(path, "probe_orbits"));
  if (j.contains("probe_periods")) run.probe_periods = count(j["probe_periods"], child(path, "probe_periods"));
  if (j.contains("random_starts")) run.random_starts = count(j["random_starts"], child(path, "random_starts"));

  const std::string xp = child(path, "x0");
  const json& x0 = require(j, "x0", path);
  if (!x0.is_array() || x0.empty()) fail(xp, "expected a nonempty array of starts");
  for (std::size_t i = 0; i < x0.size(); ++i) {
    const std::string sp = child(xp, i);
    StartConfig start{Point{0.0}, std::nullopt};
    if (x0[i].is_object()) {
      check_keys(x0[i], sp, {"point", "region"});
      start.point = point(require(x0[i], "point", sp), child(sp, "point"), c.dimension);
      if (x0[i].contains("region")) {
        const std::size_t r = count(x0[i]["region"], child(sp, "region"));
        if (r < 1 || r > c.regions.size()) fail(child(sp, "region"), "region index out of range (1-based)");
        start.region = r - 1;
      }
    } else {
      start.point = point(x0[i], sp, c.dimension);
    }
    const auto located = start.region ? (contains(c.regions[*start.region], start.point) ? start.region : std::nullopt)
                                      : [&]() -> std::optional<std::size_t> {
                                          for (std::size_t r = 0; r < c.regions.size(); ++r) {
                                            if (contains(c.regions[r], start.point)) return r;
                                          }
                                          return std::nullopt;
                                        }();
    if (!located) fail(sp, "start point is not in " + std::string(start.region ? "the given region" : "any region"));
    start.region = located;
    run.x0.push_back(std::move(start));
  }
  if (run.iterations < 4 * c.window()) {
    fail(child(path, "iterations"), "must be at least 4 times the window (" + std::to_string(c.window()) + ")");
  }
}

void parse_tolerances(const json& j, const std::string& path, ToleranceConfig& t) {
  check_keys(j, path, {"slack", "limit", "uniqueness", "fixed_point", "divergence_cap", "result4_precondition",
                       "result4"});
  const auto take = [&](const char* key, double& out) {
    if (!j.contains(key)) return;
    out = number(j[key], child(path, key));
    if (!(out > 0.0)) fail(child(path, key), "must be positive");
  };
  take("slack", t.slack);
  take("limit", t.limit);
  take("uniqueness", t.uniqueness);
  take("fixed_point", t.fixed_point);
  take("divergence_cap", t.divergence_cap);
  take("result4_precondition", t.result4_precondition);
  take("result4", t.result4);
}

void parse_checks(const json& j, const std::string& path, std::vector<CheckConfig>& checks) {
  if (!j.is_array()) fail(path, "expected an array of checks");
  const auto& names = known_checks();
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string cp = child(path, i);
    CheckConfig check;
    if (j[i].is_string()) {
      check.name = j[i].get<std::string>();
    } else {
      check_keys(j[i], cp, {"check", "expect"});
      check.name = text(require(j[i], "check", cp), child(cp, "check"));
      if (j[i].contains("expect")) {
        const json& e = j[i]["expect"];
        if (e.is_boolean()) {
          check.expect = e.get<bool>();
        } else if (e.is_string()) {
          check.expect = e.get<std::string>();
        } else {
          fail(child(cp, "expect"), "expected true, false or a string");
        }
      }
    }
    const bool is_flag = check.name.rfind("flag:", 0) == 0;
    if (!is_flag && std::find(names.begin(), names.end(), check.name) == names.end()) {
      fail(cp, "unknown check '" + check.name + "'");
    }
    if (check.name == "limit_class") {
      if (!std::holds_alternative<std::string>(check.expect)) fail(cp, "limit_class needs a string expectation");
      try {
        limit_class_from_string(std::get<std::string>(check.expect));
      } catch (const InvalidInput& e) {
        fail(child(cp, "expect"), e.what());
      }
    } else if (!std::holds_alternative<bool>(check.expect)) {
      fail(child(cp, "expect"), "expected true or false");
    }
    if (is_flag) {
      static const std::set<std::string> flags{"semi_cyclic", "cyclic", "nonexpansive", "contractive",
                                               "strict_semi_cyclic", "strict_cyclic", "strict_nonexpansive",
                                               "strict_contractive"};
      if (!flags.contains(check.name.substr(5))) fail(cp, "unknown flag '" + check.name.substr(5) + "'");
    }
    checks.push_back(std::move(check));
  }
}

SweepOptions parse_sweep(const json& j, const std::string& path) {
  check_keys(j, path, {"a", "lambda", "gap", "halfwidth", "x0_excess", "iterations", "window"});
  SweepOptions s = default_sweep();
  if (j.contains("a")) s.a_values = numbers(j["a"], child(path, "a"));
  if (j.contains("lambda")) s.lambda_values = numbers(j["lambda"], child(path, "lambda"));
  if (j.contains("gap")) s.gap = number(j["gap"], child(path, "gap"));
  if (j.contains("halfwidth")) s.halfwidth = number(j["halfwidth"], child(path, "halfwidth"));
  if (j.contains("x0_excess")) s.x0_excess = number(j["x0_excess"], child(path, "x0_excess"));
  if (j.contains("iterations")) s.steps = count(j["iterations"], child(path, "iterations"));
  if (j.contains("window")) s.window = count(j["window"], child(path, "window"));
  if (s.a_values.empty() || s.lambda_values.empty()) fail(path, "grid axes must be nonempty");
  for (double a : s.a_values) {
    if (!(a > 0.0 && a <= 1.0)) fail(child(path, "a"), "values must lie in (0, 1]");
  }
  for (double l : s.lambda_values) {
    if (!(l >= 0.0)) fail(child(path, "lambda"), "values must be >= 0");
  }
  if (!(s.x0_excess >= 0.0 && s.x0_excess <= s.halfwidth)) fail(child(path, "x0_excess"), "must lie in [0, halfwidth]");
  if (s.window < 1 || s.steps < 4 * s.window) fail(child(path, "iterations"), "must be at least 4 windows");
  return s;
}

ojson vector_json(const Vector& v) {
  ojson out = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

ojson region_json(const ConvexRegion& r) {
  ojson out;
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Box>) {
          out["box"] = {{"lo", vector_json(s.lo)}, {"hi", vector_json(s.hi)}};
        } else if constexpr (std::is_same_v<S, Ball>) {
          out["ball"] = {{"center", vector_json(s.center)}, {"radius", s.radius}};
        } else {
          ojson rows = ojson::array();
          for (Eigen::Index i = 0; i < s.a.rows(); ++i) rows.push_back(vector_json(s.a.row(i).transpose()));
          out["polytope"] = {{"a", rows}, {"b", vector_json(s.b)}, {"interior", vector_json(s.interior)}};
        }
      },
      r.shape());
  out["tolerance"] = r.tolerance();
  return out;
}

ojson points_json(const std::vector<Point>& pts) {
  ojson out = ojson::array();
  for (const auto& p : pts) out.push_back(vector_json(p.coords()));
  return out;
}

}  // namespace

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{
      "membership",   "inner_contraction", "inner_per_set",  "gain",        "gain_floor",
      "strict",       "cyclic_floor",      "ledger_sound",   "trace_floor", "limit_class",
      "khat_below_one", "eps0_bound",      "uniqueness",     "fixed_point", "result4",
      "strict_equivalence",      "limiting_pair_proximity", "stability_boundary"};
  return names;
}

ScenarioConfig parse_scenario(const std::string& source) {
  json root;
  try {
    root = json::parse(source);
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    if (const auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw ScenarioError(line_col(source, e.byte), msg);
  }
  const std::string top;
  check_keys(root, top, {"schema", "name", "description", "space", "regions", "mapping", "impulsive_system", "run",
                         "tolerances", "checks", "sweep"});
  if (root.contains("schema") && text(root["schema"], "/schema") != kScenarioSchema) {
    fail("/schema", std::string("unsupported schema (expected ") + kScenarioSchema + ")");
  }

  ScenarioConfig c;
  c.name = text(require(root, "name", top), "/name");
  if (c.name.empty()) fail("/name", "must not be empty");
  if (root.contains("description")) c.description = text(root["description"], "/description");

  if (root.contains("space")) {
    const json& space = root["space"];
    check_keys(space, "/space", {"dimension", "norm"});
    c.dimension = count(require(space, "dimension", "/space"), "/space/dimension");
    if (c.dimension < 1) fail("/space/dimension", "must be at least 1");
    if (space.contains("norm")) {
      const json& norm = space["norm"];
      check_keys(norm, "/space/norm", {"kind", "q"});
      const std::string kind = text(require(norm, "kind", "/space/norm"), "/space/norm/kind");
      if (kind == "euclidean") {
        if (norm.contains("q")) fail("/space/norm/q", "the euclidean norm takes no exponent");
      } else if (kind == "lp") {
        try {
          c.norm = NormSpec::lp(number(require(norm, "q", "/space/norm"), "/space/norm/q"));
        } catch (const ScenarioError&) {
          throw;
        } catch (const InvalidInput& e) {
          fail("/space/norm/q", e.what());
        }
      } else {
        fail("/space/norm/kind", "expected \"euclidean\" or \"lp\"");
      }
    }
  }

  if (root.contains("impulsive_system")) {
    if (root.contains("regions") || root.contains("mapping")) {
      fail("/impulsive_system", "an impulsive system defines its own regions and mapping");
    }
    if (c.dimension != 1 || !(c.norm == NormSpec::euclidean())) fail("/space", "an impulsive system is 1-D euclidean");
    const json& sys = root["impulsive_system"];
    const std::string p = "/impulsive_system";
    check_keys(sys, p, {"a", "gains", "gap", "halfwidth"});
    ImpulsiveSystemSpec spec;
    spec.a = number(require(sys, "a", p), p + "/a");
    try {
      spec.pattern = GainSchedule(numbers(require(sys, "gains", p), p + "/gains"));
    } catch (const ScenarioError&) {
      throw;
    } catch (const InvalidInput& e) {
      fail(p + "/gains", e.what());
    }
    if (sys.contains("gap")) spec.gap = number(sys["gap"], p + "/gap");
    if (sys.contains("halfwidth")) spec.halfwidth = number(sys["halfwidth"], p + "/halfwidth");
    try {
      const SemiCyclicMapping map = build_impulsive_system(spec);
      c.regions = map.partition().regions();
      c.inner = map.inner();
      c.impulse = map.impulse();
    } catch (const InvalidInput& e) {
      fail(p, e.what());
    }
    c.impulsive_system = spec;
  } else {
    const json& regions = require(root, "regions", top);
    if (!regions.is_array()) fail("/regions", "expected an array of regions");
    if (regions.size() < 2) fail("/regions", "need at least two regions");
    for (std::size_t i = 0; i < regions.size(); ++i) {
      c.regions.push_back(parse_region(regions[i], child("/regions", i), c.dimension));
    }
    const json& mapping = require(root, "mapping", top);
    check_keys(mapping, "/mapping", {"inner", "impulse"});
    const std::size_t p = c.regions.size();

    const json& inner = require(mapping, "inner", "/mapping");
    check_keys(inner, "/mapping/inner", {"kind", "anchors", "K"});
    const std::string kind = text(require(inner, "kind", "/mapping/inner"), "/mapping/inner/kind");
    c.inner.k_per_set = k_list(require(inner, "K", "/mapping/inner"), "/mapping/inner/K", p);
    if (kind == "anchor_segment") {
      c.inner.kind = InnerKind::anchor_segment;
      c.inner.anchors = points(require(inner, "anchors", "/mapping/inner"), "/mapping/inner/anchors", c.dimension);
    } else if (kind == "projection_contraction") {
      c.inner.kind = InnerKind::projection_contraction;
      if (inner.contains("anchors")) fail("/mapping/inner/anchors", "projection_contraction takes no anchors");
    } else {
      fail("/mapping/inner/kind", "expected \"anchor_segment\" or \"projection_contraction\"");
    }

    if (mapping.contains("impulse")) {
      const json& imp = mapping["impulse"];
      check_keys(imp, "/mapping/impulse", {"kind", "anchors", "gains"});
      const std::string ik = text(require(imp, "kind", "/mapping/impulse"), "/mapping/impulse/kind");
      if (ik == "anchor_scaling") {
        c.impulse.kind = ImpulseKind::anchor_scaling;
        c.impulse.anchors = points(require(imp, "anchors", "/mapping/impulse"), "/mapping/impulse/anchors", c.dimension);
        try {
          c.impulse.schedule = GainSchedule(numbers(require(imp, "gains", "/mapping/impulse"), "/mapping/impulse/gains"));
        } catch (const ScenarioError&) {
          throw;
        } catch (const InvalidInput& e) {
          fail("/mapping/impulse/gains", e.what());
        }
      } else if (ik != "identity") {
        fail("/mapping/impulse/kind", "expected \"identity\" or \"anchor_scaling\"");
      }
    }
    build_mapping(c);
  }

  if (root.contains("tolerances")) parse_tolerances(root["tolerances"], "/tolerances", c.tolerances);
  parse_run(require(root, "run", top), "/run", c);
  if (root.contains("checks")) parse_checks(root["checks"], "/checks", c.checks);
  if (root.contains("sweep")) c.sweep = parse_sweep(root["sweep"], "/sweep");
  for (const auto& check : c.checks) {
    if (check.name == "stability_boundary" && !c.sweep) fail("/checks", "stability_boundary needs a sweep section");
  }
  return c;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open scenario file '" + path + "'");
  std::string source((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_scenario(source);
}

SemiCyclicMapping build_mapping(const ScenarioConfig& c) {
  try {
    if (c.impulsive_system) return build_impulsive_system(*c.impulsive_system);
    CyclePartition partition(c.norm, c.regions);
    InnerMapSpec inner = c.inner.kind == InnerKind::anchor_segment
                             ? build_anchor_inner(partition, c.inner.anchors, c.inner.k_per_set)
                             : build_projection_inner(partition, c.inner.k_per_set);
    ImpulseSpec impulse = c.impulse.kind == ImpulseKind::anchor_scaling
                              ? build_anchor_impulse(partition, c.impulse.anchors, c.impulse.schedule)
                              : ImpulseSpec::identity();
    return SemiCyclicMapping(std::move(partition), std::move(inner), std::move(impulse));
  } catch (const ScenarioError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ScenarioError("/mapping", e.what());
  } catch (const UnsupportedCapability& e) {
    throw ScenarioError("/regions", e.what());
  }
}

ojson scenario_to_json(const ScenarioConfig& c) {
  ojson out;
  out["schema"] = kScenarioSchema;
  out["name"] = c.name;
  if (!c.description.empty()) out["description"] = c.description;
  ojson norm{{"kind", c.norm.kind() == NormSpec::Kind::euclidean ? "euclidean" : "lp"}};
  if (c.norm.kind() == NormSpec::Kind::lp) norm["q"] = c.norm.exponent();
  out["space"] = {{"dimension", c.dimension}, {"norm", norm}};
  if (c.impulsive_system) {
    const auto& s = *c.impulsive_system;
    out["impulsive_system"] = {{"a", s.a}, {"gains", s.pattern.pattern()}, {"gap", s.gap}, {"halfwidth", s.halfwidth}};
  } else {
    ojson regions = ojson::array();
    for (const auto& r : c.regions) regions.push_back(region_json(r));
    out["regions"] = regions;
    ojson inner;
    if (c.inner.kind == InnerKind::anchor_segment) {
      inner["kind"] = "anchor_segment";
      inner["anchors"] = points_json(c.inner.anchors);
    } else {
      inner["kind"] = "projection_contraction";
    }
    inner["K"] = c.inner.k_per_set;
    ojson impulse;
    if (c.impulse.kind == ImpulseKind::anchor_scaling) {
      impulse["kind"] = "anchor_scaling";
      impulse["anchors"] = points_json(c.impulse.anchors);
      impulse["gains"] = c.impulse.schedule.pattern();
    } else {
      impulse["kind"] = "identity";
    }
    out["mapping"] = {{"inner", inner}, {"impulse", impulse}};
  }

  ojson x0 = ojson::array();
  for (const auto& s : c.run.x0) x0.push_back({{"point", vector_json(s.point.coords())}, {"region", *s.region + 1}});
  out["run"] = {{"iterations", c.run.iterations}, {"x0", x0}, {"seed", c.run.seed},
                {"samples", c.run.samples}, {"window", c.window()}, {"probe_orbits", c.run.probe_orbits},
                {"probe_periods", c.run.probe_periods}, {"random_starts", c.run.random_starts}};
  const auto& t = c.tolerances;
  out["tolerances"] = {{"slack", t.slack}, {"limit", t.limit}, {"uniqueness", t.uniqueness},
                       {"fixed_point", t.fixed_point}, {"divergence_cap", t.divergence_cap},
                       {"result4_precondition", t.result4_precondition}, {"result4", t.result4}};
  ojson checks = ojson::array();
  for (const auto& check : c.checks) {
    ojson item{{"check", check.name}};
    std::visit([&](const auto& v) { item["expect"] = v; }, check.expect);
    checks.push_back(item);
  }
  out["checks"] = checks;
  if (c.sweep) {
    const auto& s = *c.sweep;
    out["sweep"] = {{"a", s.a_values}, {"lambda", s.lambda_values}, {"gap", s.gap}, {"halfwidth", s.halfwidth},
                    {"x0_excess", s.x0_excess}, {"iterations", s.steps}, {"window", s.window}};
  }
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256: digest failed");
  }
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    char buf[3];
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

}  // namespace semicyclic

#pragma once

// Scenario files: JSON documents describing a partition, a mapping, the run
// parameters and the checks to evaluate. See README for the schema.

#include "semicyclic/errors.hpp"
#include "semicyclic/impulsive.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace semicyclic {

inline constexpr const char* kScenarioSchema = "semicyclic-scenario/1";

/// Parse or validation failure. `where` is "line:col" for syntax errors and a
/// JSON pointer for validation errors.
class ScenarioError : public InvalidInput {
 public:
  ScenarioError(const std::string& where, const std::string& message)
      : InvalidInput(where + ": " + message), where_(where) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

struct StartConfig {
  Point point;
  std::optional<std::size_t> region;  // 0-based
};

struct RunConfig {
  std::size_t iterations = 200;
  std::vector<StartConfig> x0;
  std::uint64_t seed = 0;
  std::size_t samples = 1000;
  std::optional<std::size_t> window;  // default 5p
  std::size_t probe_orbits = 32;
  std::size_t probe_periods = 16;
  std::size_t random_starts = 10;
};

struct ToleranceConfig {
  double slack = 1e-9;
  double limit = 1e-6;
  double uniqueness = 1e-6;
  double fixed_point = 1e-8;
  double divergence_cap = 1e12;
  double result4_precondition = 1e-4;
  double result4 = 1e-6;
};

using Expectation = std::variant<bool, std::string>;

struct CheckConfig {
  std::string name;
  Expectation expect = true;
};

/// Check names a scenario may list, besides "flag:<name>".
const std::vector<std::string>& known_checks();

struct ScenarioConfig {
  std::string name;
  std::string description;
  std::size_t dimension = 1;
  NormSpec norm = NormSpec::euclidean();
  std::vector<ConvexRegion> regions;
  InnerMapSpec inner;
  ImpulseSpec impulse;
  /// When present, regions and maps come from the impulsive system instead.
  std::optional<ImpulsiveSystemSpec> impulsive_system;
  RunConfig run;
  ToleranceConfig tolerances;
  std::vector<CheckConfig> checks;
  std::optional<SweepOptions> sweep;

  std::size_t window() const { return run.window.value_or(5 * regions.size()); }
};

ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario(const std::string& path);

/// Normalized JSON form; parse_scenario(dump(scenario_to_json(c))) gives back c.
nlohmann::ordered_json scenario_to_json(const ScenarioConfig& config);

/// Builds the composite map; throws ScenarioError pointing at the mapping.
SemiCyclicMapping build_mapping(const ScenarioConfig& config);

/// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(const std::string& bytes);

}  // namespace semicyclic

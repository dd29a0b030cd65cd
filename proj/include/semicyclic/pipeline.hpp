#pragma once

// Runs a scenario end to end and renders the report and trace files.

#include "semicyclic/classify.hpp"
#include "semicyclic/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace semicyclic {

inline constexpr const char* kReportSchema = "semicyclic-report/1";
inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kTraceHeader = "k,set_index,d_k,delta_k,bound,slack";

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> iterations;
};

struct CheckOutcome {
  std::string name;
  Expectation expect;
  nlohmann::ordered_json observed;
  bool passed = false;
};

struct OutputFile {
  std::string name;
  std::string contents;
};

struct RunReport {
  nlohmann::ordered_json json;
  std::vector<OutputFile> files;  // CSV traces
  std::vector<CheckOutcome> checks;
  bool passed = true;
};

/// Applies the overrides, then audits, iterates, and evaluates every check.
RunReport run_scenario(ScenarioConfig config, const RunOverrides& overrides = {});

/// The JSON report text exactly as written to disk.
std::string render_report(const RunReport& report);

/// Rows of a bound ledger in trace CSV form, header included.
std::string ledger_csv(const BoundLedger& ledger);

/// Writes <stem>.report.json and the CSV files into `dir` (created if needed).
/// Returns the report path. Throws std::runtime_error when a file cannot be written.
std::filesystem::path emit_report(const RunReport& report, const std::filesystem::path& dir,
                                  const std::string& stem);

}  // namespace semicyclic

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "folia/fdcheck.hpp"
#include "json.hpp"

namespace folia {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr int kScenarioSchemaVersion = 1;

struct MapSpec {
  std::string source, target;
  std::vector<std::string> components;
};

struct CheckRequest {
  std::string name;
  std::string kind;
  std::string object;  // chart or map name
  nlohmann::json params = nlohmann::json::object();
  std::optional<double> tolerance;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<int> order;
  std::optional<std::string> expect_error;  // error kind that counts as a pass
};

struct Scenario {
  std::string name;
  std::map<std::string, ChartSpec> charts;
  std::map<std::string, MapSpec> maps;
  std::vector<CheckRequest> checks;
  std::string format = "json";
};

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Scenario& s);

/// Command-line overrides; unset fields fall back to the check, then to the defaults below.
struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<double> tolerance;
  std::optional<int> order;
  bool fd_check = false;
};

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr int kDefaultSamples = 50;
inline constexpr int kDefaultOrder = 3;

struct CheckResult {
  std::string name, kind, object, anchor;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  int samples = 0;
  std::uint64_t seed = 0;
  int order = 0;
  nlohmann::json details = nlohmann::json::object();
  std::optional<std::string> error_kind, error_message;
  std::optional<FdReport> fd;
};

struct Report {
  std::string scenario;
  RunOptions options;
  std::vector<CheckResult> checks;
  bool all_passed() const;
  int exit_status() const { return all_passed() ? 0 : 1; }
};

/// Names of the supported check kinds, in documentation order.
std::vector<std::string> check_kinds();

/// Loads charts and maps, then runs the checks in order.
/// Invalid references or unloadable objects raise SchemaError before any check runs.
Report run_scenario(const Scenario& s, const RunOptions& options);

nlohmann::json to_json(const Report& r);
std::string render_markdown(const Report& r);

}  // namespace folia

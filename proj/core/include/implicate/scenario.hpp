#pragma once

// Scenario configuration, execution and reporting for the command-line
// runner. Each scenario evolves or constructs its objects, runs its checks
// and writes CSV/JSON artifacts into the output directory.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "implicate/evolution.hpp"

namespace implicate {

enum class ScenarioKind {
  ground_state,
  coherent,
  free_packet,
  cubic,
  two_slit_preset,
  lattice_demo,
  filter_demo,
  spinor_demo,
};

std::string_view to_string(ScenarioKind kind) noexcept;
/// Throws Errc::config listing the valid names.
ScenarioKind parse_scenario_kind(std::string_view name);

struct ScenarioInfo {
  ScenarioKind kind;
  std::string_view name;
  std::string_view description;
};

const std::vector<ScenarioInfo>& list_scenarios();

enum class InitialKind { eigenstate, gaussian, two_gaussian };

struct InitialState {
  InitialKind kind = InitialKind::gaussian;
  int level = 0;
  double center = 0.0;
  double width = 0.7071067811865476;
  double momentum = 0.0;
  double separation = 4.0;  // two_gaussian: centres at center +- separation/2
};

struct GridConfig {
  std::size_t points = 1024;
  double half_width = 12.0;
};

struct TimeConfig {
  double dt = 1e-3;
  double dt_out = 1e-2;
  double duration = 1.0;
};

struct TrajectoryConfig {
  std::vector<double> points;
  std::size_t ensemble = 400;
};

inline constexpr int kSchemaVersion = 1;

struct ScenarioConfig {
  int schema_version = kSchemaVersion;
  ScenarioKind kind = ScenarioKind::ground_state;
  GridConfig grid;
  HamiltonianSpec hamiltonian;
  InitialState initial;
  TimeConfig time;
  TrajectoryConfig trajectories;
  std::size_t export_stride = 10;  // every n-th snapshot goes to the CSVs
  std::size_t threads = 0;
  std::uint64_t seed = 20240601;
  std::filesystem::path output_dir = "out";
  std::map<std::string, double> tolerances;

  std::size_t steps_per_snapshot() const;
  std::size_t snapshot_count() const;
};

/// The built-in parameters of a scenario.
ScenarioConfig default_config(ScenarioKind kind);

/// JSON text to config: starts from default_config of the named scenario and
/// applies every given key. Unknown keys, wrong types and failed validation
/// throw Errc::config with the offending field path in the message.
ScenarioConfig parse_config(std::string_view json_text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Rejects N not a power of two, dt >= dt_out, dt_out not a multiple of dt,
/// duration < dt_out and similar; the message names the field.
void validate_config(const ScenarioConfig& config);

/// The tolerance ids a scenario accepts in "tolerances".
std::vector<std::string> tolerance_ids(ScenarioKind kind);

struct Check {
  std::string id;
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  std::optional<double> lower;  // set for range checks: lower <= value <= tolerance
  bool passed = false;
  std::vector<int> criteria;
  std::string detail;
};

struct RunReport {
  std::string scenario;
  std::vector<Check> checks;
  std::vector<std::string> artifacts;
  std::vector<std::string> warnings;
  double runtime_seconds = 0.0;

  bool passed() const noexcept;
};

struct RunOptions {
  std::optional<std::filesystem::path> output_dir;
  std::optional<std::uint64_t> seed;
  bool write_artifacts = true;
};

RunReport run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

void write_report_json(std::ostream& out, const RunReport& report);
/// One line per check: PASS/FAIL, name, value, tolerance.
void write_report_text(std::ostream& out, const RunReport& report);

}  // namespace implicate

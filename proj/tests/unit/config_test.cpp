#include <filesystem>
#include <string>

#include "doctest.h"

#include "implicate/error.hpp"
#include "implicate/io.hpp"
#include "implicate/scenario.hpp"

using namespace implicate;

namespace {

// Message of the config error raised by `text`, or "" when it parses.
std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::config);
    return e.what();
  }
  return {};
}

bool mentions(const std::string& message, const std::string& what) {
  return message.find(what) != std::string::npos;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("every shipped config parses") {
  std::size_t seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(IMPLICATE_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    const auto cfg = load_config(entry.path());
    CHECK(to_string(cfg.kind) == entry.path().stem().string());
    ++seen;
  }
  CHECK(seen == list_scenarios().size());
}

TEST_CASE("defaults and overrides") {
  const auto cfg = parse_config(R"({"schema_version": 1, "scenario": "coherent",
      "grid": {"points": 512, "half_width": 10},
      "hamiltonian": {"mass": 2, "stiffness": 3},
      "initial": {"center": 1.5, "momentum": 0.25},
      "time": {"dt": 0.002, "dt_out": 0.02, "duration": 1},
      "trajectories": {"points": [0.5, 1], "ensemble": 150},
      "export": {"snapshot_stride": 4},
      "threads": 2, "seed": 99, "output_dir": "elsewhere",
      "tolerances": {"liouville": 0.01}})");
  CHECK(cfg.kind == ScenarioKind::coherent);
  CHECK(cfg.grid.points == 512);
  CHECK(cfg.grid.half_width == 10.0);
  CHECK(cfg.hamiltonian.mass == 2.0);
  CHECK(cfg.hamiltonian.stiffness == 3.0);
  CHECK(cfg.initial.center == 1.5);
  CHECK(cfg.initial.momentum == 0.25);
  CHECK(cfg.steps_per_snapshot() == 10);
  CHECK(cfg.snapshot_count() == 50);
  CHECK(cfg.trajectories.points == std::vector<double>{0.5, 1.0});
  CHECK(cfg.trajectories.ensemble == 150);
  CHECK(cfg.export_stride == 4);
  CHECK(cfg.threads == 2);
  CHECK(cfg.seed == 99);
  CHECK(cfg.output_dir == "elsewhere");
  CHECK(cfg.tolerances.at("liouville") == 0.01);

  const auto plain = parse_config(R"({"schema_version": 1, "scenario": "ground_state"})");
  CHECK(plain.grid.points == 1024);
  CHECK(plain.grid.half_width == 12.0);
  CHECK(plain.initial.kind == InitialKind::eigenstate);
  CHECK(plain.output_dir == std::filesystem::path("out") / "ground_state");
}

TEST_CASE("time step errors name the field") {
  const auto msg = config_error(R"({"schema_version": 1, "scenario": "coherent", "time": {"dt": 0.01, "dt_out": 0.01}})");
  CHECK(mentions(msg, "time.dt"));
  CHECK(mentions(msg, "dt_out"));
  CHECK(mentions(config_error(R"({"schema_version": 1, "scenario": "coherent", "time": {"dt": 0.003, "dt_out": 0.01}})"),
                 "time.dt_out"));
  CHECK(mentions(config_error(R"({"schema_version": 1, "scenario": "coherent", "time": {"dt": -1}})"), "time.dt"));
  CHECK(mentions(config_error(R"({"schema_version": 1, "scenario": "coherent", "time": {"duration": 0.001}})"),
                 "time.duration"));
}

TEST_CASE("structural errors") {
  CHECK(mentions(config_error(R"({"schema_version": 1, "scenario": "ground_state", "grid": {"pointz": 12}})"),
                 "grid.pointz"));
  CHECK(mentions(config_error(R"({"schema_version": 1, "scenario": "ground_state", "colour": 1})"), "colour"));
  CHECK(mentions(config_error(R"({"schema_version": 1, "scenario": "ground_state", "grid": {"points": 1000}})"),
                 "grid.points"));
  CHECK(mentions(config_error(R"({"schema_version": 1, "scenario": "ground_state", "grid": {"points": "many"}})"),
                 "grid.points"));
  CHECK(mentions(config_error(R"({"schema_version": 1, "scenario": "ground_state", "grid": {"points": -4}})"),
                 "grid.points"));
  CHECK(mentions(config_error(R"({"schema_version": 2, "scenario": "ground_state"})"), "schema_version"));
  CHECK(mentions(config_error(R"({"scenario": "ground_state"})"), "schema_version"));
  CHECK(mentions(config_error(R"({"schema_version": 1})"), "scenario"));
  CHECK(mentions(config_error(R"({"schema_version": 1, "scenario": "ground_state")"), "invalid JSON"));
  CHECK(mentions(config_error(R"([1, 2])"), "expected an object"));

  const auto unknown = config_error(R"({"schema_version": 1, "scenario": "nonsense"})");
  CHECK(mentions(unknown, "nonsense"));
  CHECK(mentions(unknown, "ground_state"));
  CHECK(mentions(unknown, "two_slit_preset"));
}

TEST_CASE("physics and tolerance errors") {
  CHECK(mentions(config_error(R"({"schema_version": 1, "scenario": "ground_state", "hamiltonian": {"mass": 0}})"),
                 "hamiltonian.mass"));
  CHECK(mentions(config_error(R"({"schema_version": 1, "scenario": "ground_state", "hamiltonian": {"potential": "quartic"}})"),
                 "hamiltonian.potential"));
  CHECK(mentions(config_error(R"({"schema_version": 1, "scenario": "ground_state", "hamiltonian": {"potential": "free"}})"),
                 "initial.state"));
  CHECK(mentions(config_error(R"({"schema_version": 1, "scenario": "coherent", "initial": {"width": 0}})"),
                 "initial.width"));
  CHECK(mentions(config_error(R"({"schema_version": 1, "scenario": "coherent", "trajectories": {"ensemble": 50}})"),
                 "trajectories.ensemble"));
  CHECK(mentions(config_error(R"({"schema_version": 1, "scenario": "coherent", "trajectories": {"points": [1, "x"]}})"),
                 "trajectories.points[1]"));
  CHECK(mentions(config_error(R"({"schema_version": 1, "scenario": "coherent", "export": {"snapshot_stride": 0}})"),
                 "export.snapshot_stride"));
  const auto tol = config_error(R"({"schema_version": 1, "scenario": "filter_demo", "tolerances": {"liouville": 1}})");
  CHECK(mentions(tol, "tolerances.liouville"));
  CHECK(mentions(tol, "probability"));
  CHECK(mentions(config_error(R"({"schema_version": 1, "scenario": "filter_demo", "tolerances": {"probability": -1}})"),
                 "tolerances.probability"));
  CHECK(config_error(R"({"schema_version": 1, "scenario": "filter_demo", "tolerances": {"probability": 1e-6}})").empty());
}

TEST_CASE("missing files are config errors") {
  try {
    load_config(std::filesystem::path(IMPLICATE_TEST_DATA_DIR) / "does_not_exist.json");
    FAIL("loaded a missing file");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::config);
  }
  CHECK(!config_error(R"({"schema_version": 1, "scenario": "coherent", "time": {"dt": 0.01, "dt_out": 0.01}})").empty());
}

TEST_CASE("scenario catalogue") {
  for (const auto& s : list_scenarios()) {
    CHECK(parse_scenario_kind(s.name) == s.kind);
    CHECK(to_string(s.kind) == s.name);
    CHECK_FALSE(s.description.empty());
    CHECK_FALSE(tolerance_ids(s.kind).empty());
  }
  CHECK_THROWS_AS(parse_scenario_kind("Ground_State"), Error);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.0, -1.5, 1e-300, 0.1, 123456.789, 2.0 / 3.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(1.0) == "1");
}

}

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>

#include "json.hpp"

#include "doctest.h"

#include "implicate/scenario.hpp"

using namespace implicate;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("implicate_test_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

RunReport run_into(ScenarioKind kind, const fs::path& dir) {
  return run_scenario(default_config(kind), RunOptions{dir, std::nullopt, true});
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("catalogue") {
  CHECK(list_scenarios().size() == 8);
  CHECK(parse_scenario_kind("cubic") == ScenarioKind::cubic);
}

TEST_CASE("demo scenarios pass and write a readable report") {
  TempDir tmp;
  for (auto kind : {ScenarioKind::spinor_demo, ScenarioKind::lattice_demo, ScenarioKind::filter_demo}) {
    const auto dir = tmp.path / std::string(to_string(kind));
    const auto report = run_into(kind, dir);
    CAPTURE(report.scenario);
    CHECK(report.passed());
    CHECK_FALSE(report.checks.empty());
    for (const auto& name : report.artifacts) CHECK(fs::exists(dir / name));

    const auto j = nlohmann::json::parse(slurp(dir / "report.json"));
    CHECK(j.at("scenario") == report.scenario);
    CHECK(j.at("passed") == true);
    CHECK(j.at("checks").size() == report.checks.size());
    for (const auto& c : j.at("checks")) {
      CHECK(c.contains("id"));
      CHECK(c.contains("tolerance"));
      CHECK(c.at("criteria").is_array());
    }
  }
}

TEST_CASE("disabled artifacts leave the directory untouched") {
  TempDir tmp;
  const auto dir = tmp.path / "none";
  const auto report = run_scenario(default_config(ScenarioKind::filter_demo), RunOptions{dir, std::nullopt, false});
  CHECK(report.passed());
  CHECK(report.artifacts.empty());
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("tolerance overrides reach the checks") {
  auto cfg = default_config(ScenarioKind::spinor_demo);
  cfg.tolerances["algebra"] = 1e-30;
  const auto report = run_scenario(cfg, RunOptions{std::nullopt, std::nullopt, false});
  CHECK_FALSE(report.passed());
}

TEST_CASE("artifacts do not depend on the thread count") {
  TempDir tmp;
  auto cfg = default_config(ScenarioKind::cubic);
  cfg.threads = 1;
  const auto a = run_scenario(cfg, RunOptions{tmp.path / "one", std::nullopt, true});
  cfg.threads = 6;
  const auto b = run_scenario(cfg, RunOptions{tmp.path / "six", std::nullopt, true});
  REQUIRE(a.artifacts == b.artifacts);
  std::size_t compared = 0;
  for (const auto& name : a.artifacts) {
    if (name == "report.json") continue;
    CAPTURE(name);
    CHECK(slurp(tmp.path / "one" / name) == slurp(tmp.path / "six" / name));
    ++compared;
  }
  CHECK(compared >= 3);
}

TEST_CASE("text report layout") {
  RunReport r;
  r.scenario = "demo";
  r.checks.push_back({"a", "first", 0.5, 1.0, std::nullopt, true, {1}, ""});
  r.checks.push_back({"b", "second", 2.0, 3.0, 1.0, true, {2}, "note"});
  r.checks.push_back({"c", "third", 1.0, 0.0, std::nullopt, false, {3}, ""});
  r.warnings.push_back("careful");
  std::ostringstream out;
  write_report_text(out, r);
  CHECK(out.str() ==
        "scenario demo\n"
        "  PASS  first: 0.5 <= 1\n"
        "  PASS  second: 2 in [1, 3]  [note]\n"
        "  FAIL  third: 1 (must be 0)\n"
        "  warning: careful\n"
        "FAIL (3 checks, 0 s)\n");
}

}

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "implicate/error.hpp"
#include "implicate/scenario.hpp"

namespace implicate {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(Errc::config, path + ": " + what);
}

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) fail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

std::string join_path(const std::string& path, const char* key) {
  return path.empty() ? key : path + "." + key;
}

void read(const json& obj, const std::string& path, const char* key, double& out) {
  if (!obj.contains(key)) return;
  const auto& v = obj.at(key);
  if (!v.is_number()) fail(join_path(path, key), "expected a number");
  out = v.get<double>();
  if (!std::isfinite(out)) fail(join_path(path, key), "must be finite");
}

template <class Int>
void read_count(const json& obj, const std::string& path, const char* key, Int& out) {
  if (!obj.contains(key)) return;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || (std::is_unsigned_v<Int> && v.get<long long>() < 0)) {
    fail(join_path(path, key), std::is_unsigned_v<Int> ? "expected a non-negative integer"
                                                        : "expected an integer");
  }
  out = v.get<Int>();
}

std::string read_string(const json& obj, const std::string& path, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_string()) fail(join_path(path, key), "expected a string");
  return v.get<std::string>();
}

PotentialKind parse_potential(const std::string& s, const std::string& path) {
  if (s == "free") return PotentialKind::free;
  if (s == "harmonic") return PotentialKind::harmonic;
  if (s == "cubic") return PotentialKind::cubic;
  fail(path, "unknown potential '" + s + "' (free, harmonic, cubic)");
}

InitialKind parse_initial(const std::string& s, const std::string& path) {
  if (s == "eigenstate") return InitialKind::eigenstate;
  if (s == "gaussian") return InitialKind::gaussian;
  if (s == "two_gaussian") return InitialKind::two_gaussian;
  fail(path, "unknown state '" + s + "' (eigenstate, gaussian, two_gaussian)");
}

}  // namespace

std::size_t ScenarioConfig::steps_per_snapshot() const {
  return static_cast<std::size_t>(std::llround(time.dt_out / time.dt));
}

std::size_t ScenarioConfig::snapshot_count() const {
  return static_cast<std::size_t>(std::ceil(time.duration / time.dt_out - 1e-9));
}

ScenarioConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(Errc::config, std::string("invalid JSON: ") + e.what());
  }
  only_keys(doc, "", {"schema_version", "scenario", "grid", "hamiltonian", "initial", "time",
                      "trajectories", "export", "threads", "seed", "output_dir", "tolerances"});
  if (!doc.contains("schema_version")) fail("schema_version", "missing");
  if (!doc.at("schema_version").is_number_integer() ||
      doc.at("schema_version").get<int>() != kSchemaVersion) {
    fail("schema_version", "must be " + std::to_string(kSchemaVersion));
  }
  if (!doc.contains("scenario")) fail("scenario", "missing");
  ScenarioKind kind;
  try {
    kind = parse_scenario_kind(read_string(doc, "", "scenario"));
  } catch (const Error& e) {
    fail("scenario", e.what());
  }
  ScenarioConfig cfg = default_config(kind);

  if (doc.contains("grid")) {
    const auto& g = doc.at("grid");
    only_keys(g, "grid", {"points", "half_width"});
    read_count(g, "grid", "points", cfg.grid.points);
    read(g, "grid", "half_width", cfg.grid.half_width);
  }
  if (doc.contains("hamiltonian")) {
    const auto& h = doc.at("hamiltonian");
    only_keys(h, "hamiltonian", {"mass", "potential", "stiffness", "cubic"});
    read(h, "hamiltonian", "mass", cfg.hamiltonian.mass);
    if (h.contains("potential")) {
      cfg.hamiltonian.kind =
          parse_potential(read_string(h, "hamiltonian", "potential"), "hamiltonian.potential");
    }
    read(h, "hamiltonian", "stiffness", cfg.hamiltonian.stiffness);
    read(h, "hamiltonian", "cubic", cfg.hamiltonian.cubic);
  }
  if (doc.contains("initial")) {
    const auto& s = doc.at("initial");
    only_keys(s, "initial", {"state", "level", "center", "width", "momentum", "separation"});
    if (s.contains("state")) cfg.initial.kind = parse_initial(read_string(s, "initial", "state"), "initial.state");
    read_count(s, "initial", "level", cfg.initial.level);
    read(s, "initial", "center", cfg.initial.center);
    read(s, "initial", "width", cfg.initial.width);
    read(s, "initial", "momentum", cfg.initial.momentum);
    read(s, "initial", "separation", cfg.initial.separation);
  }
  if (doc.contains("time")) {
    const auto& t = doc.at("time");
    only_keys(t, "time", {"dt", "dt_out", "duration"});
    read(t, "time", "dt", cfg.time.dt);
    read(t, "time", "dt_out", cfg.time.dt_out);
    read(t, "time", "duration", cfg.time.duration);
  }
  if (doc.contains("trajectories")) {
    const auto& t = doc.at("trajectories");
    only_keys(t, "trajectories", {"points", "ensemble"});
    if (t.contains("points")) {
      const auto& pts = t.at("points");
      if (!pts.is_array()) fail("trajectories.points", "expected an array of numbers");
      cfg.trajectories.points.clear();
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!pts[i].is_number()) fail("trajectories.points[" + std::to_string(i) + "]", "expected a number");
        cfg.trajectories.points.push_back(pts[i].get<double>());
      }
    }
    read_count(t, "trajectories", "ensemble", cfg.trajectories.ensemble);
  }
  if (doc.contains("export")) {
    const auto& e = doc.at("export");
    only_keys(e, "export", {"snapshot_stride"});
    read_count(e, "export", "snapshot_stride", cfg.export_stride);
  }
  read_count(doc, "", "threads", cfg.threads);
  read_count(doc, "", "seed", cfg.seed);
  if (doc.contains("output_dir")) cfg.output_dir = read_string(doc, "", "output_dir");
  if (doc.contains("tolerances")) {
    const auto& t = doc.at("tolerances");
    if (!t.is_object()) fail("tolerances", "expected an object");
    for (const auto& [key, value] : t.items()) {
      if (!value.is_number()) fail("tolerances." + key, "expected a number");
      cfg.tolerances[key] = value.get<double>();
    }
  }
  validate_config(cfg);
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::config, "cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate_config(const ScenarioConfig& c) {
  if (!is_power_of_two(c.grid.points) || c.grid.points < 16) {
    fail("grid.points", "must be a power of two >= 16, got " + std::to_string(c.grid.points));
  }
  if (!(c.grid.half_width > 0.0)) fail("grid.half_width", "must be positive");
  if (!(c.hamiltonian.mass > 0.0)) fail("hamiltonian.mass", "must be positive");
  if (c.hamiltonian.kind == PotentialKind::harmonic && !(c.hamiltonian.stiffness > 0.0)) {
    fail("hamiltonian.stiffness", "must be positive for a harmonic potential");
  }
  if (c.initial.kind == InitialKind::eigenstate && c.hamiltonian.kind != PotentialKind::harmonic) {
    fail("initial.state", "eigenstates are only available for the harmonic potential");
  }
  if (c.initial.level < 0) fail("initial.level", "must be >= 0");
  if (!(c.initial.width > 0.0)) fail("initial.width", "must be positive");
  if (!(c.time.dt > 0.0)) fail("time.dt", "must be positive");
  if (!(c.time.dt < c.time.dt_out)) fail("time.dt", "must be smaller than time.dt_out");
  const double ratio = c.time.dt_out / c.time.dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    fail("time.dt_out", "must be an integer multiple of time.dt");
  }
  if (!(c.time.duration >= c.time.dt_out)) fail("time.duration", "must be at least time.dt_out");
  if (c.trajectories.ensemble != 0 && c.trajectories.ensemble < 100) {
    fail("trajectories.ensemble", "must be 0 (off) or at least 100");
  }
  if (c.export_stride == 0) fail("export.snapshot_stride", "must be >= 1");
  const auto ids = tolerance_ids(c.kind);
  for (const auto& [key, value] : c.tolerances) {
    if (std::find(ids.begin(), ids.end(), key) == ids.end()) {
      std::string valid;
      for (const auto& id : ids) valid += (valid.empty() ? "" : ", ") + id;
      fail("tolerances." + key, "unknown check for this scenario (valid: " + valid + ")");
    }
    if (!(value > 0.0) || !std::isfinite(value)) fail("tolerances." + key, "must be positive");
  }
}

}  // namespace implicate

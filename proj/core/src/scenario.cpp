#include "implicate/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <numbers>
#include <random>

#include "json.hpp"

#include "implicate/bohm.hpp"
#include "implicate/clifford.hpp"
#include "implicate/error.hpp"
#include "implicate/explicate.hpp"
#include "implicate/io.hpp"
#include "implicate/logic.hpp"
#include "implicate/spinor.hpp"

namespace implicate {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Tolerance {
  const char* id;
  double value;
};

const std::map<ScenarioKind, std::vector<Tolerance>>& tolerance_table() {
  static const std::map<ScenarioKind, std::vector<Tolerance>> table = {
      {ScenarioKind::ground_state,
       {{"liouville", 1e-8},
        {"energy_equation", 1e-8},
        {"q_plus_v", 1e-6},
        {"q_plus_v_excited", 1e-4},
        {"qp_plus_kinetic", 1e-6},
        {"self_duality", 1e-8},
        {"continuity_x", 1e-8},
        {"qhj_x", 1e-6},
        {"qhj_p", 1e-6},
        {"projection_closure", 1e-10},
        {"static_trajectory", 1e-6}}},
      {ScenarioKind::coherent,
       {{"liouville", 1e-3},
        {"energy_equation", 1e-3},
        {"continuity_x", 1e-3},
        {"qhj_x", 1e-3},
        {"qhj_p", 1e-3},
        {"projection_closure", 1e-10},
        {"bohm_momentum", 1e-6},
        {"bohm_position", 1e-6},
        {"rigid_translation", 1e-3},
        {"ks_distance", 0.05},
        {"energy_drift", 1e-6}}},
      {ScenarioKind::free_packet,
       {{"liouville", 1e-3},
        {"continuity_x", 1e-3},
        {"centre_trajectory", 1e-6},
        {"ks_distance", 0.05}}},
      {ScenarioKind::cubic, {{"energy_drift", 1e-6}, {"continuity_x", 1e-3}}},
      {ScenarioKind::two_slit_preset, {{"continuity_x", 1e-3}, {"ks_distance", 0.05}}},
      {ScenarioKind::lattice_demo, {{"lattice", 1e-10}}},
      {ScenarioKind::filter_demo, {{"probability", 1e-12}}},
      {ScenarioKind::spinor_demo,
       {{"algebra", 1e-12}, {"dictionary", 1e-14}, {"purity", 1e-12}, {"polar", 1e-12}}},
  };
  return table;
}

// Order of convergence must land in this window for second-order schemes.
constexpr double kOrderLow = 1.8;
constexpr double kOrderHigh = 2.2;

class Runner {
 public:
  Runner(const ScenarioConfig& cfg, const RunOptions& opts, RunReport& report)
      : cfg_(cfg), report_(report), write_(opts.write_artifacts) {
    dir_ = opts.output_dir ? *opts.output_dir : cfg.output_dir;
    seed_ = opts.seed ? *opts.seed : cfg.seed;
  }

  const ScenarioConfig& cfg() const { return cfg_; }
  std::uint64_t seed() const { return seed_; }

  double tol(const std::string& id) const {
    if (auto it = cfg_.tolerances.find(id); it != cfg_.tolerances.end()) return it->second;
    for (const auto& t : tolerance_table().at(cfg_.kind)) {
      if (id == t.id) return t.value;
    }
    throw Error(Errc::invalid_argument, "no tolerance registered for " + id);
  }

  void at_most(const std::string& id, std::string name, double value, std::vector<int> criteria,
               std::string detail = {}) {
    Check c{id, std::move(name), value, tol(id), std::nullopt, false, std::move(criteria),
            std::move(detail)};
    c.passed = !std::isnan(value) && value <= c.tolerance;
    report_.checks.push_back(std::move(c));
  }

  void within(const std::string& id, std::string name, double value, double lo, double hi,
              std::vector<int> criteria, std::string detail = {}) {
    Check c{id, std::move(name), value, hi, lo, false, std::move(criteria), std::move(detail)};
    c.passed = value >= lo && value <= hi;
    report_.checks.push_back(std::move(c));
  }

  void exact(const std::string& id, std::string name, double value, std::vector<int> criteria,
             std::string detail = {}) {
    Check c{id, std::move(name), value, 0.0, std::nullopt, value == 0.0, std::move(criteria),
            std::move(detail)};
    report_.checks.push_back(std::move(c));
  }

  void warn(std::string message) { report_.warnings.push_back(std::move(message)); }

  void artifact(const std::string& name, const std::function<void(std::ostream&)>& writer) {
    if (!write_) return;
    auto out = open_output(dir_ / name);
    writer(out);
    report_.artifacts.push_back(name);
  }

  const fs::path& dir() const { return dir_; }
  bool writes() const { return write_; }

 private:
  const ScenarioConfig& cfg_;
  RunReport& report_;
  bool write_;
  fs::path dir_;
  std::uint64_t seed_;
};

// ---- evolution helpers ------------------------------------------------------

Grid config_grid(const ScenarioConfig& c) { return Grid::symmetric(c.grid.points, c.grid.half_width); }

WaveField initial_state(const ScenarioConfig& c) {
  const Grid grid = config_grid(c);
  const auto& s = c.initial;
  switch (s.kind) {
    case InitialKind::eigenstate:
      return harmonic_eigenstate(grid, s.level, c.hamiltonian.mass, c.hamiltonian.stiffness);
    case InitialKind::gaussian:
      return gaussian_packet(grid, s.center, s.width, s.momentum);
    case InitialKind::two_gaussian: {
      auto a = gaussian_packet(grid, s.center - 0.5 * s.separation, s.width, s.momentum);
      const auto b = gaussian_packet(grid, s.center + 0.5 * s.separation, s.width, s.momentum);
      for (std::size_t j = 0; j < a.values.size(); ++j) a.values[j] += b.values[j];
      a.normalize();
      return a;
    }
  }
  throw Error(Errc::invalid_argument, "unknown initial state");
}

EvolutionTrace run_evolution(const ScenarioConfig& c, std::size_t refine = 1) {
  const std::size_t stride = c.steps_per_snapshot();
  double dt = c.time.dt;
  std::size_t per_snapshot = stride;
  // Halve dt_out by taking half as many steps per snapshot when possible,
  // otherwise by halving dt as well.
  for (std::size_t r = refine; r > 1; r /= 2) {
    if (per_snapshot % 2 == 0) {
      per_snapshot /= 2;
    } else {
      dt /= 2.0;
    }
  }
  const std::size_t steps_total = static_cast<std::size_t>(
      std::llround(static_cast<double>(c.snapshot_count() * stride) * c.time.dt / dt));
  return evolve(initial_state(c), c.hamiltonian, dt, steps_total, per_snapshot);
}

template <class T>
std::vector<T> strided(const std::vector<T>& v, std::size_t stride) {
  std::vector<T> out;
  for (std::size_t i = 0; i < v.size(); i += stride) out.push_back(v[i]);
  return out;
}

EvolutionTrace strided_trace(const EvolutionTrace& t, std::size_t stride) {
  EvolutionTrace out = t;
  out.snapshots = strided(t.snapshots, stride);
  out.dt_out = t.dt_out * static_cast<double>(stride);
  return out;
}

// max |Q + V - E| over the central `fraction` of the grid, away from nodes.
double stationary_deviation(const WaveField& psi, const HamiltonianSpec& h, double energy,
                            double fraction) {
  const auto polar = polar_fields(psi);
  const bool momentum = psi.representation == Representation::momentum;
  const auto q = momentum ? quantum_potential_p(polar, h.stiffness) : quantum_potential_x(polar, h.mass);
  const std::size_t n = q.size();
  const double half = 0.5 * fraction * static_cast<double>(n);
  double worst = 0.0;
  for (std::size_t j = 2; j + 2 < n; ++j) {
    if (std::abs(static_cast<double>(j) - static_cast<double>(n / 2)) > half) continue;
    bool near_node = false;
    for (std::size_t k = j - 2; k <= j + 2; ++k) near_node = near_node || polar.node[k];
    if (near_node) continue;
    const double u = psi.grid.coordinate(j);
    const double v = momentum ? u * u / (2.0 * h.mass) : h.potential(u);
    worst = std::max(worst, std::abs(q[j] + v - energy));
  }
  return worst;
}

struct SelfDuality {
  double all = 0.0;       // every point off node in both pictures
  double resolved = 0.0;  // R >= 1e-6 max R
};

SelfDuality self_duality(std::size_t points) {
  const Grid grid = Grid::balanced(points);
  const auto psi = harmonic_eigenstate(grid, 0, 1.0, 1.0);
  const auto fx = polar_fields(psi);
  const auto fp = polar_fields(to_momentum(psi));
  const auto qx = quantum_potential_x(fx, 1.0);
  const auto qp = quantum_potential_p(fp, 1.0);
  const double peak = *std::max_element(fx.R.begin(), fx.R.end());
  SelfDuality out;
  for (std::size_t j = 0; j < qx.size(); ++j) {
    if (std::isnan(qx[j]) || std::isnan(qp[j])) continue;
    const double d = std::abs(qx[j] - qp[j]);
    out.all = std::max(out.all, d);
    if (fx.R[j] >= 1e-6 * peak) out.resolved = std::max(out.resolved, d);
  }
  return out;
}

double energy_drift(const EvolutionTrace& t) {
  const double e0 = energy_expectation(t.snapshots.front(), t.hamiltonian);
  double worst = 0.0;
  for (const auto& s : t.snapshots) {
    worst = std::max(worst, std::abs(energy_expectation(s, t.hamiltonian) - e0));
  }
  return worst / std::abs(e0);
}

void write_residuals_csv(std::ostream& out, const ResidualSeries& liouville,
                         const ResidualSeries& energy, const ExplicateResidual& cont,
                         const ExplicateResidual& qhj) {
  out << "t,liouville,energy_equation,continuity_x,qhj_x\n";
  for (std::size_t n = 0; n < liouville.times.size(); ++n) {
    out << format_double(liouville.times[n]) << ',' << format_double(liouville.values[n]) << ','
        << format_double(energy.values[n]) << ',' << format_double(cont.raw[n]) << ','
        << format_double(qhj.raw[n]) << '\n';
  }
}

// Exports the standard evolution artifacts and returns the position frames.
struct EvolutionProducts {
  EvolutionTrace trace;
  std::vector<ExplicateFrame> frames_x;
  ResidualSeries liouville;
  ResidualSeries energy;
  ExplicateResidual continuity;
  ExplicateResidual qhj;
};

EvolutionProducts analyse(Runner& run, EvolutionTrace trace) {
  EvolutionProducts p;
  p.trace = std::move(trace);
  p.frames_x = explicate_frames(p.trace);
  p.liouville = liouville_residual(p.trace);
  p.energy = energy_equation_residual(p.trace);
  p.continuity = continuity_residual_x(p.frames_x, p.trace.hamiltonian);
  p.qhj = qhj_residual_x(p.frames_x, p.trace.hamiltonian);
  if (p.qhj.node_dominated) {
    run.warn("more than 20% of the resolved region is masked as nodes");
  }
  const std::size_t stride = run.cfg().export_stride;
  run.artifact("trace.csv", [&](std::ostream& o) { write_trace_csv(o, strided_trace(p.trace, stride)); });
  run.artifact("fields_x.csv", [&](std::ostream& o) { write_fields_csv(o, strided(p.frames_x, stride)); });
  run.artifact("residuals.csv", [&](std::ostream& o) {
    write_residuals_csv(o, p.liouville, p.energy, p.continuity, p.qhj);
  });
  return p;
}

void export_momentum_fields(Runner& run, const std::vector<ExplicateFrame>& frames_p) {
  run.artifact("fields_p.csv", [&](std::ostream& o) {
    write_fields_csv(o, strided(frames_p, run.cfg().export_stride));
  });
}

std::vector<Trajectory> point_trajectories(const EvolutionTrace& trace, const std::vector<double>& x0) {
  const VelocityField field(trace);
  std::vector<Trajectory> out;
  for (std::size_t i = 0; i < x0.size(); ++i) out.push_back(integrate_trajectory(field, x0[i], i));
  return out;
}

void ensemble_checks(Runner& run, const EvolutionTrace& trace, std::vector<int> criteria,
                     std::optional<double> ks_tolerance_override = std::nullopt) {
  const std::size_t n = run.cfg().trajectories.ensemble;
  if (n == 0) return;
  const auto ens = trajectory_ensemble(trace, n, run.cfg().threads);
  run.artifact("ensemble_trajectories.csv",
               [&](std::ostream& o) { write_trajectories_csv(o, ens.trajectories); });
  run.artifact("ensemble.json", [&](std::ostream& o) { write_ensemble_json(o, ens.report); });
  run.exact("no_crossing", "ensemble ordering violations (" + std::to_string(n) + " trajectories)",
            ens.report.no_crossing ? 0.0 : 1.0, criteria,
            "smallest neighbour gap " + format_double(ens.report.min_gap));
  if (ks_tolerance_override) {
    run.within("ks_distance", "max KS distance to |psi|^2", ens.report.max_ks, 0.0,
               *ks_tolerance_override, criteria, "bound 2/sqrt(n)");
  } else {
    run.at_most("ks_distance", "max KS distance to |psi|^2", ens.report.max_ks, criteria);
  }
  if (ens.report.completed != n) {
    run.warn(std::to_string(n - ens.report.completed) + " ensemble trajectories stopped early");
  }
}

double max_projected_gap(const EvolutionTrace& trace, ProjectionAxis axis, double& qhj_gap) {
  const auto check = projected_equations_check(trace, axis);
  qhj_gap = check.qhj_gap();
  return check.continuity_gap();
}

// ---- scenarios ---------------------------------------------------------------

void run_ground_state(Runner& run) {
  const auto& c = run.cfg();
  const HamiltonianSpec& h = c.hamiltonian;
  const double omega = std::sqrt(h.stiffness / h.mass);
  const double e0 = omega * (c.initial.level + 0.5);
  auto p = analyse(run, run_evolution(c));

  run.at_most("liouville", "Liouville residual (ket form), max over t", p.liouville.max(), {4});
  run.at_most("energy_equation", "energy-equation residual (ket form), max over t", p.energy.max(), {4});

  const auto& psi0 = p.trace.snapshots.front();
  run.at_most("q_plus_v", "Q+V constant = " + format_double(e0) + ", deviation over interior 80%",
              stationary_deviation(psi0, h, e0, 0.8), {5});
  const auto excited = harmonic_eigenstate(psi0.grid, c.initial.level + 1, h.mass, h.stiffness);
  run.at_most("q_plus_v_excited",
              "Q+V constant = " + format_double(e0 + omega) + " for the next level, off-node",
              stationary_deviation(excited, h, e0 + omega, 0.8), {5});
  run.at_most("qp_plus_kinetic", "Q_p + p^2/2m constant = " + format_double(e0) + ", momentum picture",
              stationary_deviation(to_momentum(psi0), h, e0, 0.8), {6});
  const auto duality = self_duality(c.grid.points);
  run.at_most("self_duality", "Q_p(p) against Q(x) under x<->p relabelling, balanced grid",
              duality.all, {6},
              "all off-node points; restricted to R >= 1e-6 max R: " + format_double(duality.resolved));

  run.at_most("continuity_x", "position continuity residual, max over t", p.continuity.max_raw(), {7});
  run.at_most("qhj_x", "position Hamilton-Jacobi residual, max over t", p.qhj.max_raw(), {7},
              "offset removed: " + format_double(p.qhj.max_offset_removed()));
  const auto trace_p = to_momentum(p.trace);
  const auto frames_p = explicate_frames(trace_p);
  const auto qhj_p = qhj_residual_p(frames_p, h);
  run.at_most("qhj_p", "momentum Hamilton-Jacobi residual, max over t", qhj_p.max_raw(), {6, 7});
  export_momentum_fields(run, frames_p);

  double qx = 0.0, qp = 0.0;
  const double cx = max_projected_gap(p.trace, ProjectionAxis::position, qx);
  const double cp = max_projected_gap(p.trace, ProjectionAxis::momentum, qp);
  run.at_most("projection_closure", "projected-equation closure gap, max over both axes",
              std::max({cx, qx, cp, qp}), {7});

  std::vector<double> x0 = c.trajectories.points;
  const auto trajectories = point_trajectories(p.trace, x0);
  double moved = 0.0;
  for (const auto& tr : trajectories) {
    for (double x : tr.x) moved = std::max(moved, std::abs(x - tr.x0));
    if (tr.status != TrajectoryStatus::completed) moved = kNaN;
  }
  run.at_most("static_trajectory", "largest trajectory displacement", moved, {8});
  run.artifact("trajectories.csv", [&](std::ostream& o) { write_trajectories_csv(o, trajectories); });
  const double bound = 2.0 / std::sqrt(static_cast<double>(c.trajectories.ensemble));
  ensemble_checks(run, p.trace, {8}, bound);
}

// Classical centre and momentum of a harmonic coherent state.
struct Classical {
  double x, p;
};

Classical classical_orbit(const ScenarioConfig& c, double t) {
  const auto& h = c.hamiltonian;
  const double omega = std::sqrt(h.stiffness / h.mass);
  const double x0 = c.initial.center, p0 = c.initial.momentum;
  return {x0 * std::cos(omega * t) + p0 / (h.mass * omega) * std::sin(omega * t),
          p0 * std::cos(omega * t) - h.mass * omega * x0 * std::sin(omega * t)};
}

// Largest deviation of a phase-space field from a constant over the part
// of each frame where R is at least 1e-3 of its peak.
double field_uniformity(const std::vector<ExplicateFrame>& frames, bool position_field,
                        const std::function<double(double)>& expected) {
  double worst = 0.0;
  for (const auto& f : frames) {
    const double peak = *std::max_element(f.polar.R.begin(), f.polar.R.end());
    const double want = expected(f.polar.time);
    for (std::size_t j = 0; j < f.dS.size(); ++j) {
      if (f.polar.R[j] < 1e-3 * peak) continue;
      const double got = position_field ? f.dS[j] : -f.dS[j];
      worst = std::max(worst, std::abs(got - want));
    }
  }
  return worst;
}

void run_coherent(Runner& run) {
  const auto& c = run.cfg();
  const HamiltonianSpec& h = c.hamiltonian;
  auto p = analyse(run, run_evolution(c));
  const auto fine = run_evolution(c, 2);
  const auto fine_frames = explicate_frames(fine);
  const double fine_l = liouville_residual(fine).max();
  const double fine_e = energy_equation_residual(fine).max();
  const double fine_c = continuity_residual_x(fine_frames, h).max_raw();

  run.at_most("liouville", "Liouville residual (ket form), max over t", p.liouville.max(), {4});
  run.at_most("energy_equation", "energy-equation residual (ket form), max over t", p.energy.max(), {4},
              "at dt_out/2: " + format_double(fine_e));
  run.within("liouville_order", "Liouville residual order under dt_out halving",
             convergence_order(p.liouville.max(), fine_l), kOrderLow, kOrderHigh, {4});
  run.within("energy_order", "energy-equation residual order under dt_out halving",
             convergence_order(p.energy.max(), fine_e), kOrderLow, kOrderHigh, {4});

  run.at_most("continuity_x", "position continuity residual, max over t", p.continuity.max_raw(), {7});
  run.within("continuity_order", "continuity residual order under dt_out halving",
             convergence_order(p.continuity.max_raw(), fine_c), kOrderLow, kOrderHigh, {7});
  run.at_most("qhj_x", "position Hamilton-Jacobi residual, max over t", p.qhj.max_raw(), {7},
              "offset removed: " + format_double(p.qhj.max_offset_removed()));
  const auto trace_p = to_momentum(p.trace);
  const auto frames_p = explicate_frames(trace_p);
  run.at_most("qhj_p", "momentum Hamilton-Jacobi residual, max over t",
              qhj_residual_p(frames_p, h).max_raw(), {7});
  export_momentum_fields(run, frames_p);

  double qx = 0.0, qp = 0.0;
  const double cx = max_projected_gap(p.trace, ProjectionAxis::position, qx);
  const double cp = max_projected_gap(p.trace, ProjectionAxis::momentum, qp);
  run.at_most("projection_closure", "projected-equation closure gap, max over both axes",
              std::max({cx, qx, cp, qp}), {7},
              "x: " + format_double(cx) + " / " + format_double(qx) + ", p: " + format_double(cp) +
                  " / " + format_double(qp));

  run.at_most("bohm_momentum", "p_B(x,t) against the classical momentum over the packet",
              field_uniformity(p.frames_x, true, [&](double t) { return classical_orbit(c, t).p; }), {8});
  run.at_most("bohm_position", "x_B(p,t) against the classical centre over the packet",
              field_uniformity(frames_p, false, [&](double t) { return classical_orbit(c, t).x; }), {8});

  const auto trajectories = point_trajectories(p.trace, c.trajectories.points);
  double rigid = 0.0;
  const double xc0 = classical_orbit(c, p.trace.snapshots.front().time).x;
  for (const auto& tr : trajectories) {
    if (tr.status != TrajectoryStatus::completed) rigid = kNaN;
    for (std::size_t s = 0; s < tr.x.size(); ++s) {
      const double shift = classical_orbit(c, tr.t[s]).x - xc0;
      rigid = std::max(rigid, std::abs(tr.x[s] - tr.x0 - shift));
    }
  }
  run.at_most("rigid_translation", "trajectory deviation from rigid motion with the packet", rigid, {8});
  run.artifact("trajectories.csv", [&](std::ostream& o) { write_trajectories_csv(o, trajectories); });
  ensemble_checks(run, p.trace, {8});
  run.at_most("energy_drift", "relative drift of <H>", energy_drift(p.trace), {4});
}

void run_free_packet(Runner& run) {
  const auto& c = run.cfg();
  auto p = analyse(run, run_evolution(c));
  const auto fine = run_evolution(c, 2);
  const double fine_c = continuity_residual_x(explicate_frames(fine), c.hamiltonian).max_raw();
  run.at_most("liouville", "Liouville residual (ket form), max over t", p.liouville.max(), {4});
  run.at_most("continuity_x", "position continuity residual, max over t", p.continuity.max_raw(), {7});
  run.within("continuity_order", "continuity residual order under dt_out halving",
             convergence_order(p.continuity.max_raw(), fine_c), kOrderLow, kOrderHigh, {7});

  std::vector<double> x0 = c.trajectories.points;
  x0.insert(x0.begin(), c.initial.center);
  const auto trajectories = point_trajectories(p.trace, x0);
  const auto& centre = trajectories.front();
  double drift = centre.status == TrajectoryStatus::completed ? 0.0 : kNaN;
  // A moving packet carries its centre with the group velocity.
  for (std::size_t s = 0; s < centre.x.size(); ++s) {
    const double expected = c.initial.center + c.initial.momentum / c.hamiltonian.mass * centre.t[s];
    drift = std::max(drift, std::abs(centre.x[s] - expected));
  }
  run.at_most("centre_trajectory", "trajectory from the packet centre against the group motion", drift, {8});
  run.artifact("trajectories.csv", [&](std::ostream& o) { write_trajectories_csv(o, trajectories); });
  ensemble_checks(run, p.trace, {8});
}

std::size_t non_finite_off_node(const std::vector<ExplicateFrame>& frames) {
  std::size_t count = 0;
  for (const auto& f : frames) {
    for (std::size_t j = 0; j < f.dS.size(); ++j) {
      if (!f.polar.node[j] && !std::isfinite(f.dS[j])) ++count;
    }
  }
  return count;
}

void run_cubic(Runner& run) {
  const auto& c = run.cfg();
  auto p = analyse(run, run_evolution(c));
  const auto fine = run_evolution(c, 2);
  const double fine_c = continuity_residual_x(explicate_frames(fine), c.hamiltonian).max_raw();
  run.at_most("energy_drift", "relative drift of <H>", energy_drift(p.trace), {10});
  run.at_most("continuity_x", "position continuity residual, max over t", p.continuity.max_raw(), {10});
  run.within("continuity_order", "continuity residual order under dt_out halving",
             convergence_order(p.continuity.max_raw(), fine_c), kOrderLow, kOrderHigh, {10});
  const auto frames_p = explicate_frames(to_momentum(p.trace));
  export_momentum_fields(run, frames_p);
  run.exact("p_b_finite", "non-finite p_B samples off-node", static_cast<double>(non_finite_off_node(p.frames_x)), {10});
  run.exact("x_b_finite", "non-finite x_B samples off-node", static_cast<double>(non_finite_off_node(frames_p)), {10});
  if (!c.trajectories.points.empty()) {
    const auto trajectories = point_trajectories(p.trace, c.trajectories.points);
    run.artifact("trajectories.csv", [&](std::ostream& o) { write_trajectories_csv(o, trajectories); });
  }
}

void run_two_slit(Runner& run) {
  const auto& c = run.cfg();
  auto p = analyse(run, run_evolution(c));
  run.at_most("continuity_x", "position continuity residual, max over t", p.continuity.max_raw(), {7});
  const std::size_t n = c.trajectories.ensemble;
  if (n == 0) return;
  const auto ens = trajectory_ensemble(p.trace, n, c.threads);
  run.artifact("trajectories.csv", [&](std::ostream& o) { write_trajectories_csv(o, ens.trajectories); });
  run.artifact("ensemble.json", [&](std::ostream& o) { write_ensemble_json(o, ens.report); });
  run.exact("no_crossing", "ensemble ordering violations (" + std::to_string(n) + " trajectories)",
            ens.report.no_crossing ? 0.0 : 1.0, {8}, "smallest neighbour gap " + format_double(ens.report.min_gap));
  // The symmetric superposition has zero velocity on its axis, so no
  // trajectory changes side.
  std::size_t crossed = 0;
  for (const auto& tr : ens.trajectories) {
    const double side = tr.x.front() - c.initial.center;
    for (double x : tr.x) {
      if ((x - c.initial.center) * side < 0.0) {
        ++crossed;
        break;
      }
    }
  }
  run.exact("axis_crossing", "trajectories crossing the symmetry axis", static_cast<double>(crossed), {8});
  run.at_most("ks_distance", "max KS distance to |psi|^2", ens.report.max_ks, {8});
  if (ens.report.completed != n) {
    run.warn(std::to_string(n - ens.report.completed) + " trajectories stopped early");
  }
}

std::string label_of(const Projection& p, std::size_t index) {
  return p.label().empty() ? "#" + std::to_string(index) : p.label();
}

ordered_json matrix_json(const ComplexMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

struct LatticeDemo {
  ProjectionLattice lattice;
  OrthomodularReport orthomodular;
  DistributivityCounterexample counterexample;
  DistributivityTest commuting;
  std::vector<BooleanBlock> blocks;
  FilterResult filter;
};

Projection labelled(const Vec3& axis, int sign, const char* label) {
  auto p = projection_from_axis(axis, sign);
  p.set_label(label);
  return p;
}

LatticeDemo lattice_demo() {
  const auto zp = labelled(kAxisZ, +1, "P_z+"), zm = labelled(kAxisZ, -1, "P_z-");
  const auto xp = labelled(kAxisX, +1, "P_x+"), xm = labelled(kAxisX, -1, "P_x-");
  auto lattice = ProjectionLattice::generate({zp, zm, xp, xm});
  auto orth = orthomodular_check(lattice);
  auto cex = distributivity_counterexample();
  auto commuting = test_distributivity(zp, zp, zm);
  auto blocks = boolean_blocks(lattice);
  const ComplexMatrix mixed = ComplexMatrix::Identity(2, 2) * 0.5;
  auto filter = sequential_filter({zp, xp, zp}, mixed);
  return {std::move(lattice), orth, std::move(cex), std::move(commuting), std::move(blocks), std::move(filter)};
}

ordered_json lattice_json(const LatticeDemo& d) {
  ordered_json j;
  const auto& e = d.lattice.elements();
  auto& elements = j["elements"] = ordered_json::array();
  for (std::size_t i = 0; i < e.size(); ++i) {
    elements.push_back({{"label", label_of(e[i], i)}, {"rank", e[i].rank()}, {"matrix", matrix_json(e[i].matrix())}});
  }
  j["orthomodular"] = {{"comparable_pairs", d.orthomodular.comparable_pairs},
                       {"violations", d.orthomodular.violations},
                       {"max_deviation", d.orthomodular.max_deviation}};
  const auto& cx = d.counterexample;
  j["distributivity_counterexample"] = {
      {"A", cx.a.label()}, {"B", cx.b.label()}, {"C", cx.c.label()},
      {"A meet (B join C)", matrix_json(cx.test.lhs.matrix())},
      {"(A meet B) join (A meet C)", matrix_json(cx.test.rhs.matrix())},
      {"gap", cx.test.gap}, {"certified", cx.certified}};
  auto& blocks = j["boolean_blocks"] = ordered_json::array();
  for (const auto& b : d.blocks) {
    ordered_json members = ordered_json::array();
    for (std::size_t m : b.members) members.push_back(label_of(e[m], m));
    blocks.push_back({{"members", members}, {"distributive", b.distributive}});
  }
  j["filter"] = {{"stages", {"P_z+", "P_x+", "P_z+"}}, {"input", "I/2"}, {"probabilities", d.filter.probabilities}};
  return j;
}

void run_lattice_demo(Runner& run) {
  const auto d = lattice_demo();
  const auto& cx = d.counterexample;
  const double gap_lhs = (cx.test.lhs.matrix() - cx.a.matrix()).cwiseAbs().maxCoeff();
  const double gap_rhs = cx.test.rhs.matrix().cwiseAbs().maxCoeff();
  run.at_most("lattice", "A meet (B join C) against P_z+", gap_lhs, {9});
  run.at_most("lattice", "(A meet B) join (A meet C) against 0", gap_rhs, {9});
  run.exact("counterexample_certified", "distributivity counterexample certified (0 = yes)",
            cx.certified ? 0.0 : 1.0, {9}, "gap " + format_double(cx.test.gap));
  run.exact("commuting_distributive", "distributivity failures for commuting P_z+, P_z+, P_z-",
            d.commuting.holds() ? 0.0 : 1.0, {9});
  run.exact("orthomodular", "orthomodular violations over " + std::to_string(d.orthomodular.comparable_pairs) +
                                " comparable pairs",
            static_cast<double>(d.orthomodular.violations), {9});
  std::size_t bad_blocks = 0;
  for (const auto& b : d.blocks) bad_blocks += b.distributive ? 0 : 1;
  run.exact("blocks", "Boolean blocks found minus two", static_cast<double>(d.blocks.size()) - 2.0, {9},
            "lattice of " + std::to_string(d.lattice.size()) + " elements");
  run.exact("blocks_distributive", "non-distributive Boolean blocks", static_cast<double>(bad_blocks), {9});
  run.artifact("lattice.json", [&](std::ostream& o) { o << lattice_json(d).dump(2) << '\n'; });
}

void run_filter_demo(Runner& run) {
  const auto zp = labelled(kAxisZ, +1, "P_z+"), zm = labelled(kAxisZ, -1, "P_z-");
  const auto xp = labelled(kAxisX, +1, "P_x+"), xm = labelled(kAxisX, -1, "P_x-");
  const ComplexMatrix mixed = ComplexMatrix::Identity(2, 2) * 0.5;
  const auto chain = sequential_filter({zp, xp, zp}, mixed);
  double dev = 0.0;
  std::string probs;
  for (double p : chain.probabilities) {
    dev = std::max(dev, std::abs(p - 0.5));
    probs += (probs.empty() ? "" : ", ") + format_double(p);
  }
  run.at_most("probability", "stage probabilities of z+ -> x+ -> z+ on I/2 against 1/2", dev, {9},
              "(" + probs + ")");

  std::mt19937_64 rng(run.seed());
  std::normal_distribution<double> gauss;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    ColumnSpinor s{{gauss(rng), gauss(rng)}, {gauss(rng), gauss(rng)}};
    const double n = std::sqrt(s.norm_squared());
    s.up /= n;
    s.down /= n;
    for (const auto* first : {&zp, &zm}) {
      for (const auto* second : {&xp, &xm}) {
        const auto r = sequential_filter({*first, *second}, s);
        worst = std::max(worst, std::abs(r.probabilities[1] - 0.5));
      }
    }
  }
  run.at_most("probability", "z then x transition probability against 1/2, 200 random states", worst, {9});

  const auto repeat = sequential_filter({zp, zp}, ColumnSpinor{1.0, 0.0});
  run.at_most("probability", "repeated z+ on spin-up against (1, 1)",
              std::max(std::abs(repeat.probabilities[0] - 1.0), std::abs(repeat.probabilities[1] - 1.0)), {9});
  double annihilated = 1.0;
  try {
    sequential_filter({zp, zm}, ColumnSpinor{1.0, 0.0});
  } catch (const Error& e) {
    if (e.code() == Errc::zero_probability) annihilated = 0.0;
  }
  run.exact("orthogonal_filters", "z+ -> z- chain accepted (0 = rejected as zero probability)",
            annihilated, {9});
  run.artifact("filter.json", [&](std::ostream& o) {
    ordered_json j;
    j["stages"] = {"P_z+", "P_x+", "P_z+"};
    j["input"] = "I/2";
    j["probabilities"] = chain.probabilities;
    j["final_state"] = matrix_json(chain.state);
    o << j.dump(2) << '\n';
  });
}

Multivector random_multivector(const std::shared_ptr<const AlgebraTable>& alg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Multivector m(alg);
  for (std::size_t i = 0; i < alg->size(); ++i) m[i] = Complex(u(rng), u(rng));
  return m;
}

void run_spinor_demo(Runner& run) {
  std::mt19937_64 rng(run.seed());
  constexpr int kCases = 500;
  double assoc = 0.0, anti = 0.0, rev = 0.0, hom = 0.0;
  for (Signature sig : {Signature{3, 0}, Signature{0, 1}, Signature{0, 2}, Signature{1, 3}}) {
    const auto alg = make_algebra(sig);
    for (int i = 0; i < kCases; ++i) {
      const auto a = random_multivector(alg, rng), b = random_multivector(alg, rng),
                 c = random_multivector(alg, rng);
      assoc = std::max(assoc, max_abs_difference((a * b) * c, a * (b * c)));
      rev = std::max(rev, max_abs_difference(reversion(a * b), reversion(b) * reversion(a)));
      if (sig == Signature{3, 0}) {
        hom = std::max(hom, (matrix_rep(a * b) - matrix_rep(a) * matrix_rep(b)).cwiseAbs().maxCoeff());
      }
    }
    for (int i = 1; i <= sig.dimension(); ++i) {
      for (int j = 1; j <= sig.dimension(); ++j) {
        if (i == j) continue;
        const auto ei = Multivector::generator(alg, i), ej = Multivector::generator(alg, j);
        anti = std::max(anti, max_abs_coefficient(anticommutator(ei, ej)));
      }
    }
  }
  run.at_most("algebra", "associativity, 500 triples per signature", assoc, {1},
              "signatures (3,0), (0,1), (0,2), (1,3)");
  run.exact("generator_anticommutation", "generator anticommutator, all pairs i != j", anti, {1});
  run.at_most("algebra", "reversion anti-automorphism, 500 pairs per signature", rev, {1});
  run.at_most("algebra", "matrix representation homomorphism, 500 pairs", hom, {1});

  const auto ez = standard_idempotent(kAxisZ);
  std::normal_distribution<double> gauss;
  double round_trip = 0.0, purity = 0.0, polar = 0.0;
  for (int i = 0; i < 1000; ++i) {
    ColumnSpinor s{{gauss(rng), gauss(rng)}, {gauss(rng), gauss(rng)}};
    const auto back = algebraic_to_column(column_to_algebraic(s, ez));
    round_trip = std::max({round_trip, std::abs(back.up - s.up), std::abs(back.down - s.down)});
    const double n = std::sqrt(s.norm_squared());
    const ColumnSpinor unit{s.up / n, s.down / n};
    const auto psi = column_to_algebraic(unit, ez);
    const auto rho = density_element(psi);
    purity = std::max({purity, max_abs_difference(rho.element() * rho.element(), rho.element()),
                       std::abs(trace(rho.element()) - 1.0)});
    if (i < 100) {
      const auto pd = polar_decompose(psi);
      polar = std::max(polar, max_abs_difference(pd.positive * pd.unitary, psi.element()));
    }
  }
  run.at_most("dictionary", "column -> algebraic -> column round trip, 1000 spinors", round_trip, {2});
  double table = 0.0;
  const std::pair<ColumnSpinor, std::array<double, 4>> rows[] = {
      {{1.0, 0.0}, {1, 0, 0, 0}}, {{0.0, 1.0}, {0, 0, 1, 0}}, {{Complex(0, 1), 0.0}, {0, 0, 0, 1}}};
  for (const auto& [col, g] : rows) {
    const auto got = column_to_algebraic(col, ez).components();
    for (int k = 0; k < 4; ++k) table = std::max(table, std::abs(got[k] - g[k]));
  }
  run.exact("dictionary_table", "tabulated g-vectors for (1,0), (0,1), (i,0)", table, {2});
  run.at_most("purity", "rho^2 = rho and tr rho = 1, 1000 normalized spinors", purity, {3});
  const auto rho_up = density_element(column_to_algebraic(ColumnSpinor{1.0, 0.0}, ez));
  run.exact("density_up", "rho for (1,0) against (1 + sigma_3)/2",
            max_abs_difference(rho_up.element(), ez.element()), {3});
  run.at_most("polar", "polar factors R U against Psi, 100 spinors", polar, {2});
}

}  // namespace

std::string_view to_string(ScenarioKind kind) noexcept {
  for (const auto& s : list_scenarios()) {
    if (s.kind == kind) return s.name;
  }
  return "unknown";
}

ScenarioKind parse_scenario_kind(std::string_view name) {
  std::string valid;
  for (const auto& s : list_scenarios()) {
    if (s.name == name) return s.kind;
    valid += (valid.empty() ? "" : ", ") + std::string(s.name);
  }
  throw Error(Errc::config, "unknown scenario '" + std::string(name) + "' (valid: " + valid + ")");
}

const std::vector<ScenarioInfo>& list_scenarios() {
  static const std::vector<ScenarioInfo> catalogue = {
      {ScenarioKind::ground_state, "ground_state",
       "oscillator ground state: ket-equation residuals, quantum potential in x and p, static trajectories"},
      {ScenarioKind::coherent, "coherent",
       "displaced oscillator ground state: residual convergence, Bohm phase spaces, rigid trajectories"},
      {ScenarioKind::free_packet, "free_packet",
       "free Gaussian packet: continuity convergence and the centre trajectory"},
      {ScenarioKind::cubic, "cubic",
       "oscillator with a cubic term: energy drift, continuity, exported p_B and x_B"},
      {ScenarioKind::two_slit_preset, "two_slit_preset",
       "two-Gaussian superposition under free evolution: non-crossing trajectory lanes"},
      {ScenarioKind::lattice_demo, "lattice_demo",
       "projection lattice of sigma_z and sigma_x: orthomodularity, distributivity failure, Boolean blocks"},
      {ScenarioKind::filter_demo, "filter_demo",
       "sequential projective filters of incompatible properties"},
      {ScenarioKind::spinor_demo, "spinor_demo",
       "Clifford algebra axioms, the column/algebraic spinor dictionary and pure-state idempotency"},
  };
  return catalogue;
}

ScenarioConfig default_config(ScenarioKind kind) {
  ScenarioConfig c;
  c.kind = kind;
  c.output_dir = fs::path("out") / std::string(to_string(kind));
  c.hamiltonian = HamiltonianSpec::harmonic(1.0, 1.0);
  switch (kind) {
    case ScenarioKind::ground_state:
      c.initial.kind = InitialKind::eigenstate;
      c.time = {1e-4, 2e-4, 0.02};
      c.trajectories.points = {-2.0, -1.0, 0.0, 0.5, 1.5};
      break;
    case ScenarioKind::coherent:
      c.initial.center = 2.0;
      c.time = {1e-3, 1e-2, 2.0 * std::numbers::pi};
      c.trajectories.points = {1.0, 2.0, 3.0};
      break;
    case ScenarioKind::free_packet:
      c.hamiltonian = HamiltonianSpec::free_particle(1.0);
      c.initial.width = 1.0;
      c.time = {1e-3, 1e-2, 2.0};
      c.trajectories.points = {-1.0, 1.0};
      break;
    case ScenarioKind::cubic:
      c.hamiltonian = HamiltonianSpec::cubic_potential(1.0, 0.05, 1.0);
      c.time = {1e-3, 1e-2, 1.5};
      c.trajectories.points = {-0.5, 0.0, 0.5};
      break;
    case ScenarioKind::two_slit_preset:
      c.hamiltonian = HamiltonianSpec::free_particle(1.0);
      c.grid = {2048, 30.0};
      c.initial.kind = InitialKind::two_gaussian;
      c.initial.width = 0.5;
      c.initial.separation = 4.0;
      c.time = {1e-3, 1e-2, 3.0};
      c.trajectories.ensemble = 200;
      break;
    case ScenarioKind::lattice_demo:
    case ScenarioKind::filter_demo:
    case ScenarioKind::spinor_demo:
      c.trajectories.ensemble = 0;
      break;
  }
  return c;
}

std::vector<std::string> tolerance_ids(ScenarioKind kind) {
  std::vector<std::string> ids;
  for (const auto& t : tolerance_table().at(kind)) ids.emplace_back(t.id);
  return ids;
}

bool RunReport::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

RunReport run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  validate_config(config);
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.scenario = std::string(to_string(config.kind));
  Runner run(config, options, report);
  switch (config.kind) {
    case ScenarioKind::ground_state: run_ground_state(run); break;
    case ScenarioKind::coherent: run_coherent(run); break;
    case ScenarioKind::free_packet: run_free_packet(run); break;
    case ScenarioKind::cubic: run_cubic(run); break;
    case ScenarioKind::two_slit_preset: run_two_slit(run); break;
    case ScenarioKind::lattice_demo: run_lattice_demo(run); break;
    case ScenarioKind::filter_demo: run_filter_demo(run); break;
    case ScenarioKind::spinor_demo: run_spinor_demo(run); break;
  }
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (run.writes()) {
    report.artifacts.push_back("report.json");
    auto out = open_output(run.dir() / "report.json");
    write_report_json(out, report);
  }
  return report;
}

void write_report_json(std::ostream& out, const RunReport& report) {
  ordered_json j;
  j["scenario"] = report.scenario;
  j["passed"] = report.passed();
  j["runtime_seconds"] = report.runtime_seconds;
  auto& checks = j["checks"] = ordered_json::array();
  for (const auto& c : report.checks) {
    ordered_json e;
    e["id"] = c.id;
    e["name"] = c.name;
    e["value"] = std::isnan(c.value) ? ordered_json(nullptr) : ordered_json(c.value);
    if (c.lower) e["lower"] = *c.lower;
    e["tolerance"] = c.tolerance;
    e["passed"] = c.passed;
    e["criteria"] = c.criteria;
    if (!c.detail.empty()) e["detail"] = c.detail;
    checks.push_back(std::move(e));
  }
  j["warnings"] = report.warnings;
  j["artifacts"] = report.artifacts;
  out << j.dump(2) << '\n';
}

void write_report_text(std::ostream& out, const RunReport& report) {
  out << "scenario " << report.scenario << '\n';
  for (const auto& c : report.checks) {
    out << (c.passed ? "  PASS  " : "  FAIL  ") << c.name << ": " << format_double(c.value);
    if (c.lower) {
      out << " in [" << format_double(*c.lower) << ", " << format_double(c.tolerance) << "]";
    } else if (c.tolerance == 0.0) {
      out << " (must be 0)";
    } else {
      out << " <= " << format_double(c.tolerance);
    }
    if (!c.detail.empty()) out << "  [" << c.detail << "]";
    out << '\n';
  }
  for (const auto& w : report.warnings) out << "  warning: " << w << '\n';
  out << (report.passed() ? "PASS" : "FAIL") << " (" << report.checks.size() << " checks, "
      << format_double(std::round(report.runtime_seconds * 1000.0) / 1000.0) << " s)\n";
}

}  // namespace implicate

#include "implicate/bohm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include "json.hpp"

#include "implicate/error.hpp"
#include "implicate/io.hpp"

namespace implicate {

namespace {

constexpr std::size_t kEdgeCells = 2;
constexpr double kCrossingTolerance = 1e-9;

bool inside(const Grid& g, double x) {
  return x >= g.coordinate(kEdgeCells) && x <= g.coordinate(g.size - 1 - kEdgeCells);
}

// Normalized cumulative trapezoid of p at the grid points.
std::vector<double> grid_cdf(const std::vector<double>& p) {
  std::vector<double> f(p.size(), 0.0);
  for (std::size_t j = 1; j < p.size(); ++j) f[j] = f[j - 1] + 0.5 * (p[j - 1] + p[j]);
  const double total = f.back();
  if (!(total > 0.0)) throw Error(Errc::zero_field, "distribution has no mass");
  for (auto& v : f) v /= total;
  return f;
}

double cdf_at(const std::vector<double>& f, const Grid& g, double x) {
  const double s = (x - g.origin) / g.spacing;
  if (s <= 0.0) return 0.0;
  if (s >= static_cast<double>(g.size - 1)) return 1.0;
  const auto j = static_cast<std::size_t>(s);
  const double w = s - static_cast<double>(j);
  return f[j] + w * (f[j + 1] - f[j]);
}

}  // namespace

std::vector<double> bohm_momentum_field(const PolarField& f) {
  if (f.representation != Representation::position) {
    throw Error(Errc::wrong_representation, "p_B needs a position-space field");
  }
  return phase_gradient(f);
}

std::vector<double> bohm_position_field(const PolarField& f) {
  if (f.representation != Representation::momentum) {
    throw Error(Errc::wrong_representation, "x_B needs a momentum-space field");
  }
  auto x = phase_gradient(f);
  for (auto& v : x) v = -v;
  return x;
}

std::string_view to_string(TrajectoryStatus status) noexcept {
  switch (status) {
    case TrajectoryStatus::completed: return "completed";
    case TrajectoryStatus::escaped: return "escaped";
    case TrajectoryStatus::undefined_velocity: return "undefined_velocity";
  }
  return "unknown";
}

VelocityField::VelocityField(const EvolutionTrace& trace) {
  if (trace.snapshots.size() < 2) {
    throw Error(Errc::insufficient_snapshots, "trajectories need at least two snapshots");
  }
  grid_ = trace.snapshots.front().grid;
  for (const auto& s : trace.snapshots) {
    if (s.representation != Representation::position) {
      throw Error(Errc::wrong_representation, "trajectories are integrated in position space");
    }
    auto v = bohm_momentum_field(polar_fields(s));
    for (auto& e : v) e /= trace.hamiltonian.mass;
    times_.push_back(s.time);
    velocity_.push_back(std::move(v));
  }
}

std::optional<double> VelocityField::spatial(std::size_t n, double x) const {
  const double s = (x - grid_.origin) / grid_.spacing;
  if (s < 0.0 || s > static_cast<double>(grid_.size - 1)) return std::nullopt;
  const auto j = std::min(static_cast<std::size_t>(s), grid_.size - 2);
  const double w = s - static_cast<double>(j);
  const double a = velocity_[n][j], b = velocity_[n][j + 1];
  if (std::isnan(a) || std::isnan(b)) return std::nullopt;
  return a + w * (b - a);
}

std::optional<double> VelocityField::at(double x, double t) const {
  if (t < times_.front() || t > times_.back()) return std::nullopt;
  const auto upper = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t n =
      std::min(static_cast<std::size_t>(upper - times_.begin()), times_.size() - 1) - 1;
  const double w = (t - times_[n]) / (times_[n + 1] - times_[n]);
  const auto a = spatial(n, x);
  const auto b = spatial(n + 1, x);
  if (!a || !b) return std::nullopt;
  return *a + w * (*b - *a);
}

Trajectory integrate_trajectory(const VelocityField& field, double x0, std::size_t id) {
  const Grid& g = field.grid();
  if (!inside(g, x0)) {
    throw Error(Errc::domain_overflow, "initial point " + format_double(x0) + " is outside the grid interior");
  }
  const auto& times = field.times();
  Trajectory tr;
  tr.id = id;
  tr.x0 = x0;
  tr.t.push_back(times.front());
  tr.x.push_back(x0);

  double x = x0;
  for (std::size_t n = 0; n + 1 < times.size(); ++n) {
    const double t = times[n], h = times[n + 1] - times[n];
    const double mid = t + 0.5 * h;
    double k[4];
    const double xs[3] = {0.5, 0.5, 1.0};
    const double ts[4] = {t, mid, mid, times[n + 1]};
    double probe = x;
    bool ok = true;
    for (int s = 0; s < 4 && ok; ++s) {
      if (!inside(g, probe)) {
        tr.status = TrajectoryStatus::escaped;
        ok = false;
        break;
      }
      const auto v = field.at(probe, ts[s]);
      if (!v) {
        tr.status = TrajectoryStatus::undefined_velocity;
        ok = false;
        break;
      }
      k[s] = *v;
      if (s < 3) probe = x + xs[s] * h * k[s];
    }
    if (!ok) return tr;
    x += h * (k[0] + 2.0 * k[1] + 2.0 * k[2] + k[3]) / 6.0;
    if (!inside(g, x)) {
      tr.status = TrajectoryStatus::escaped;
      return tr;
    }
    tr.t.push_back(times[n + 1]);
    tr.x.push_back(x);
  }
  return tr;
}

Trajectory integrate_trajectory(const EvolutionTrace& trace, double x0) {
  return integrate_trajectory(VelocityField(trace), x0);
}

std::vector<double> quantile_points(const WaveField& psi, std::size_t n) {
  std::vector<double> p(psi.values.size());
  for (std::size_t j = 0; j < p.size(); ++j) p[j] = std::norm(psi.values[j]);
  const auto f = grid_cdf(p);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    const auto j = static_cast<std::size_t>(std::upper_bound(f.begin(), f.end(), u) - f.begin()) - 1;
    const double w = (u - f[j]) / (f[j + 1] - f[j]);
    x[i] = psi.grid.coordinate(j) + w * psi.grid.spacing;
  }
  return x;
}

double ks_distance(std::vector<double> samples, const Grid& grid, const std::vector<double>& p) {
  if (samples.empty()) return 1.0;
  std::sort(samples.begin(), samples.end());
  const auto f = grid_cdf(p);
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double c = cdf_at(f, grid, samples[i]);
    d = std::max({d, c - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - c});
  }
  return d;
}

Ensemble trajectory_ensemble(const EvolutionTrace& trace, std::size_t n, std::size_t threads) {
  if (n < 100) throw Error(Errc::invalid_argument, "ensembles need at least 100 trajectories");
  const VelocityField field(trace);
  const auto starts = quantile_points(trace.snapshots.front(), n);

  Ensemble out;
  out.trajectories.resize(n);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  const std::size_t chunk = (n + threads - 1) / threads;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w * chunk; i < std::min(n, (w + 1) * chunk); ++i) {
          out.trajectories[i] = integrate_trajectory(field, starts[i], i);
        }
      });
    }
  }

  auto& rep = out.report;
  rep.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < trace.snapshots.size(); ++s) {
    const auto& snap = trace.snapshots[s];
    std::vector<double> pos;
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& tr : out.trajectories) {
      if (s >= tr.x.size()) continue;
      pos.push_back(tr.x[s]);
      if (std::isfinite(prev)) rep.min_gap = std::min(rep.min_gap, tr.x[s] - prev);
      prev = tr.x[s];
    }
    std::vector<double> p(snap.values.size());
    for (std::size_t j = 0; j < p.size(); ++j) p[j] = std::norm(snap.values[j]);
    rep.times.push_back(snap.time);
    rep.alive.push_back(pos.size());
    rep.ks_distance.push_back(ks_distance(std::move(pos), snap.grid, p));
    rep.max_ks = std::max(rep.max_ks, rep.ks_distance.back());
  }
  rep.no_crossing = rep.min_gap >= -kCrossingTolerance;
  rep.completed = static_cast<std::size_t>(
      std::count_if(out.trajectories.begin(), out.trajectories.end(),
                    [](const Trajectory& t) { return t.status == TrajectoryStatus::completed; }));
  return out;
}

void write_trajectories_csv(std::ostream& out, const std::vector<Trajectory>& trajectories) {
  out << "trajectory_id,t,x\n";
  for (const auto& tr : trajectories) {
    for (std::size_t s = 0; s < tr.t.size(); ++s) {
      out << tr.id << ',' << format_double(tr.t[s]) << ',' << format_double(tr.x[s]) << '\n';
    }
  }
}

void write_ensemble_json(std::ostream& out, const EnsembleReport& report) {
  nlohmann::ordered_json j;
  j["max_ks_distance"] = report.max_ks;
  j["no_crossing"] = report.no_crossing;
  j["min_gap"] = report.min_gap;
  j["completed"] = report.completed;
  auto& cps = j["checkpoints"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < report.times.size(); ++i) {
    cps.push_back({{"t", report.times[i]}, {"ks_distance", report.ks_distance[i]},
                   {"alive", report.alive[i]}});
  }
  out << j.dump(2) << '\n';
}

}  // namespace implicate

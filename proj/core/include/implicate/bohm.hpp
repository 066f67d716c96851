#pragma once

// Boolean phase spaces (x, p_B(x)) and (x_B(p), p), and guidance-equation
// trajectories dx/dt = p_B(x, t) / m through an evolved trace.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "implicate/evolution.hpp"
#include "implicate/explicate.hpp"

namespace implicate {

/// p_B = dS/dx; NaN at nodes.
std::vector<double> bohm_momentum_field(const PolarField& f);
/// x_B = -dS_p/dp; NaN at nodes.
std::vector<double> bohm_position_field(const PolarField& f);

/// Velocity p_B / m on every snapshot, interpolated linearly in x and t.
class VelocityField {
 public:
  explicit VelocityField(const EvolutionTrace& trace);

  /// Empty when (x, t) is outside the sampled region or next to a node.
  std::optional<double> at(double x, double t) const;

  const Grid& grid() const noexcept { return grid_; }
  const std::vector<double>& times() const noexcept { return times_; }

 private:
  std::optional<double> spatial(std::size_t n, double x) const;

  Grid grid_;
  std::vector<double> times_;
  std::vector<std::vector<double>> velocity_;
};

enum class TrajectoryStatus { completed, escaped, undefined_velocity };

std::string_view to_string(TrajectoryStatus status) noexcept;

struct Trajectory {
  std::size_t id = 0;
  double x0 = 0.0;
  std::vector<double> t;
  std::vector<double> x;
  TrajectoryStatus status = TrajectoryStatus::completed;
};

/// Fixed-step RK4 with one step per snapshot interval. A trajectory that
/// comes within two cells of the grid edge stops as escaped; one that meets
/// a velocity sample masked at a node stops as undefined_velocity. Throws
/// if x0 is not inside the grid interior.
Trajectory integrate_trajectory(const VelocityField& field, double x0, std::size_t id = 0);
Trajectory integrate_trajectory(const EvolutionTrace& trace, double x0);

/// Points x_i with F(x_i) = (i + 1/2)/n for the piecewise-linear CDF F of
/// |psi|^2 on the grid.
std::vector<double> quantile_points(const WaveField& psi, std::size_t n);

struct EnsembleReport {
  std::vector<double> times;
  std::vector<double> ks_distance;   // against the CDF of |psi(t)|^2
  std::vector<std::size_t> alive;    // trajectories still running
  double max_ks = 0.0;
  /// Smallest x_{i+1}(t) - x_i(t) over all t for the sorted ensemble.
  double min_gap = 0.0;
  bool no_crossing = true;
  std::size_t completed = 0;
};

struct Ensemble {
  std::vector<Trajectory> trajectories;
  EnsembleReport report;
};

/// Quantile-spaced ensemble of n >= 100 trajectories. `threads` = 0 uses
/// the hardware count; results do not depend on it.
Ensemble trajectory_ensemble(const EvolutionTrace& trace, std::size_t n, std::size_t threads = 0);

/// Kolmogorov-Smirnov distance between sample points and the grid CDF of p.
double ks_distance(std::vector<double> samples, const Grid& grid, const std::vector<double>& p);

/// Header "trajectory_id,t,x".
void write_trajectories_csv(std::ostream& out, const std::vector<Trajectory>& trajectories);
void write_ensemble_json(std::ostream& out, const EnsembleReport& report);

}  // namespace implicate

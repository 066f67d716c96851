#pragma once

// One-dimensional Schrodinger evolution (hbar = 1) by symmetric split-step,
// plus residual checks of the ket-form Liouville and energy equations on the
// evolved states:
//
//   i d(rho)/dt                           = H rho - rho H
//   i [(d|psi>)<psi| - |psi>(d<psi|)]     = H rho + rho H
//
// rho = |psi><psi| is never formed; every norm is reduced to the span of psi
// and the Schrodinger residual r = i dpsi/dt - H psi.

#include <iosfwd>
#include <vector>

#include "implicate/grid.hpp"

namespace implicate {

enum class PotentialKind { free, harmonic, cubic };

std::string_view to_string(PotentialKind kind) noexcept;

/// H = p^2/2m + V(x) with V = K x^2/2 (+ c3 x^3 for the cubic kind).
struct HamiltonianSpec {
  double mass = 1.0;
  PotentialKind kind = PotentialKind::harmonic;
  double stiffness = 1.0;
  double cubic = 0.0;

  static HamiltonianSpec harmonic(double mass, double stiffness);
  static HamiltonianSpec free_particle(double mass);
  static HamiltonianSpec cubic_potential(double mass, double cubic, double stiffness = 0.0);

  double potential(double x) const noexcept;
  /// True when V is at most quadratic, so the momentum representation has
  /// a closed differential form.
  bool is_quadratic() const noexcept { return kind != PotentialKind::cubic || cubic == 0.0; }
  void validate() const;
};

/// exp(-(x-x0)^2/(4 s^2) + i p0 x), normalized; |x0 +- 6s| must lie inside
/// the grid.
WaveField gaussian_packet(const Grid& grid, double center, double width, double momentum);

/// n-th eigenfunction of p^2/2m + K x^2/2, built from the Hermite recurrence.
WaveField harmonic_eigenstate(const Grid& grid, int level, double mass, double stiffness);

/// H applied to the field in its own representation. In momentum space
/// x acts as i d/dp, which restricts this to quadratic potentials.
std::vector<Complex> apply_hamiltonian(const WaveField& psi, const HamiltonianSpec& h);

/// <psi|H|psi> / <psi|psi>
double energy_expectation(const WaveField& psi, const HamiltonianSpec& h);

/// phi(p) = (2 pi)^(-1/2) sum_j psi(x_j) exp(-i p x_j) dx on Grid::conjugate().
WaveField to_momentum(const WaveField& psi);
WaveField from_momentum(const WaveField& phi);

struct EvolutionTrace {
  std::vector<WaveField> snapshots;
  double dt = 0.0;
  double dt_out = 0.0;
  HamiltonianSpec hamiltonian;
};

/// Second-order split-step (half kinetic, full potential, half kinetic) on
/// the periodic grid, keeping every `steps_per_snapshot`-th state (the
/// initial state included). Throws Errc::unstable when the norm drifts by
/// more than 1e-6, or for cubic potentials when the packet comes within six
/// standard deviations of the grid edge.
EvolutionTrace evolve(const WaveField& initial, const HamiltonianSpec& h, double dt,
                      std::size_t n_steps, std::size_t steps_per_snapshot);

EvolutionTrace to_momentum(const EvolutionTrace& trace);

/// Position spread sqrt(<x^2> - <x>^2) and mean of |psi|^2.
struct Moments {
  double mean = 0.0;
  double spread = 0.0;
};
Moments density_moments(const WaveField& psi);

/// Decomposition of the rank-two residual operators built from psi and the
/// Schrodinger residual r = alpha psi + r_perp.
struct KetResidual {
  double psi_norm = 0.0;   // ||psi||
  Complex alpha{};         // <psi, r> / ||psi||^2
  double perp_norm = 0.0;  // ||r_perp||

  /// ||r psi^+ - psi r^+|| / ||rho||, operator norm.
  double liouville() const;
  /// ||r psi^+ + psi r^+|| / ||rho||, operator norm.
  double energy() const;
  double liouville_frobenius() const;
  double energy_frobenius() const;
  /// ||r psi^+|| / ||rho|| = ||r|| / ||psi||.
  double schrodinger() const;
};

KetResidual ket_residual(const std::vector<Complex>& psi, const std::vector<Complex>& r,
                         double spacing);

struct ResidualSeries {
  std::vector<double> times;
  std::vector<double> values;

  double max() const;
};

/// Per interior snapshot, with dpsi/dt from central differences over
/// neighbouring snapshots.
std::vector<KetResidual> ket_residuals(const EvolutionTrace& trace);
ResidualSeries liouville_residual(const EvolutionTrace& trace);
ResidualSeries energy_equation_residual(const EvolutionTrace& trace);

/// log2(coarse / fine): observed order when the step is halved.
double convergence_order(double coarse, double fine);

/// Long format, header "snapshot,t,coordinate,re_psi,im_psi".
void write_trace_csv(std::ostream& out, const EvolutionTrace& trace);

}  // namespace implicate

#pragma once

// Polar (R, S) decomposition of a wave field and the Hamilton-Jacobi form of
// the dynamics in either representation: continuity, quantum Hamilton-Jacobi
// and the quantum potential.

#include <iosfwd>
#include <vector>

#include "implicate/evolution.hpp"
#include "implicate/grid.hpp"
#include "implicate/spectral.hpp"

namespace implicate {

/// Points with R below this fraction of max R are nodes.
inline constexpr double kNodeThreshold = 1e-8;

struct PolarField {
  Representation representation = Representation::position;
  Grid grid;
  double time = 0.0;
  std::vector<double> R;
  std::vector<double> S;
  std::vector<bool> node;

  std::vector<Complex> reconstruct() const;
};

/// R = |psi|, S = arg psi unwrapped outward from the amplitude peak.
PolarField polar_fields(const WaveField& psi);

/// Shifts S by the multiple of 2 pi that keeps the phase at the amplitude
/// peak continuous with `previous`.
void anchor_phase(PolarField& field, const PolarField& previous);

/// Polar fields of every snapshot, anchored in sequence.
std::vector<PolarField> polar_fields(const EvolutionTrace& trace);

/// dS along the grid, computed as Im(psi'/psi); NaN at nodes.
std::vector<double> phase_gradient(const PolarField& f,
                                   Differentiation method = Differentiation::spectral);

/// Q = -R''/(2 m R); NaN at nodes.
std::vector<double> quantum_potential_x(const PolarField& f, double mass,
                                        Differentiation method = Differentiation::spectral);
/// Q_p = -K R_p''/(2 R_p); NaN at nodes.
std::vector<double> quantum_potential_p(const PolarField& f, double stiffness,
                                        Differentiation method = Differentiation::spectral);

struct ExplicateFrame {
  PolarField polar;
  std::vector<double> P;
  std::vector<double> dS;
  std::vector<double> Q;
};

ExplicateFrame explicate_frame(PolarField polar, const HamiltonianSpec& h,
                               Differentiation method = Differentiation::spectral);
std::vector<ExplicateFrame> explicate_frames(const EvolutionTrace& trace,
                                             Differentiation method = Differentiation::spectral);

/// Per interior frame: raw aggregate, aggregate after removing the mean
/// offset, and the pointwise profile (NaN where excluded).
struct ExplicateResidual {
  std::vector<double> times;
  std::vector<double> raw;
  std::vector<double> offset_removed;
  std::vector<std::vector<double>> pointwise;
  /// Largest fraction of masked points inside the support of P.
  double masked_fraction = 0.0;
  bool node_dominated = false;

  double max_raw() const;
  double max_offset_removed() const;
};

/// dP/dt + d/dx (P S'/m), as ||res|| / ||P|| over valid points.
ExplicateResidual continuity_residual_x(const std::vector<ExplicateFrame>& frames,
                                        const HamiltonianSpec& h);
/// dP/dt + d/dp (K P S_p'), normalized as for x.
ExplicateResidual continuity_residual_p(const std::vector<ExplicateFrame>& frames,
                                        const HamiltonianSpec& h);
/// dS/dt + S'^2/2m + Q + V, as the P-weighted RMS over valid points.
ExplicateResidual qhj_residual_x(const std::vector<ExplicateFrame>& frames,
                                 const HamiltonianSpec& h);
/// dS_p/dt + p^2/2m + (K/2) S_p'^2 + Q_p. Quadratic potentials only.
ExplicateResidual qhj_residual_p(const std::vector<ExplicateFrame>& frames,
                                 const HamiltonianSpec& h);

enum class ProjectionAxis { position, momentum };

/// The diagonal of the ket equations in a point basis, evaluated directly
/// from psi and H psi, next to the Hamilton-Jacobi residuals it should equal.
struct ProjectedCheck {
  ProjectionAxis axis = ProjectionAxis::position;
  ExplicateResidual projected_continuity;
  ExplicateResidual continuity;
  ExplicateResidual projected_qhj;
  ExplicateResidual qhj;

  /// Largest difference between the paired aggregates over all frames.
  double continuity_gap() const;
  double qhj_gap() const;
};

ProjectedCheck projected_equations_check(const EvolutionTrace& trace, ProjectionAxis axis);

/// Header "t,coordinate,P,S,Q,p_B" (x_B for momentum frames).
void write_fields_csv(std::ostream& out, const std::vector<ExplicateFrame>& frames);

}  // namespace implicate

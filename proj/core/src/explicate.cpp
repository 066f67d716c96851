#include "implicate/explicate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "implicate/error.hpp"
#include "implicate/io.hpp"

namespace implicate {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Points this close to a node, or to the periodic seam, are left out of the
// aggregates: derivative stencils there straddle the excluded region.
constexpr std::size_t kMaskMargin = 2;
constexpr double kNodeDominatedFraction = 0.2;

double wrap_to_pi(double a) { return a - kTwoPi * std::round(a / kTwoPi); }

std::size_t peak_index(const std::vector<double>& r) {
  return static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
}

void require(const PolarField& f, Representation rep, const char* what) {
  if (f.representation != rep) {
    throw Error(Errc::wrong_representation,
                std::string(what) + " expects a " + std::string(to_string(rep)) + " field");
  }
}

void require_frames(const std::vector<ExplicateFrame>& frames) {
  if (frames.size() < 3) {
    throw Error(Errc::insufficient_snapshots, "residuals need at least three frames");
  }
  for (const auto& f : frames) {
    if (!(f.polar.grid == frames.front().polar.grid) ||
        f.polar.representation != frames.front().polar.representation) {
      throw Error(Errc::grid_mismatch, "frames do not share one grid and representation");
    }
  }
}

std::vector<bool> valid_points(const std::vector<ExplicateFrame>& frames, std::size_t n) {
  const std::size_t size = frames[n].polar.R.size();
  std::vector<bool> valid(size, true);
  for (std::size_t j = 0; j < size; ++j) {
    if (j < kMaskMargin || j + kMaskMargin >= size) valid[j] = false;
  }
  for (std::size_t f = n - 1; f <= n + 1; ++f) {
    const auto& node = frames[f].polar.node;
    for (std::size_t j = 0; j < size; ++j) {
      if (!node[j]) continue;
      const std::size_t lo = j >= kMaskMargin ? j - kMaskMargin : 0;
      const std::size_t hi = std::min(size - 1, j + kMaskMargin);
      for (std::size_t k = lo; k <= hi; ++k) valid[k] = false;
    }
  }
  return valid;
}

// Nodes between the outermost resolved points; the decaying tails of a
// localized state are not counted.
double interior_mask_fraction(const PolarField& f) {
  const auto first = std::find(f.node.begin(), f.node.end(), false);
  if (first == f.node.end()) return 1.0;
  const auto last = std::find(f.node.rbegin(), f.node.rend(), false).base();
  const auto masked = std::count(first, last, true);
  return static_cast<double>(masked) / static_cast<double>(last - first);
}

enum class Aggregate { density_normalized, density_weighted };

// Shared driver: `pointwise(n, j)` is the residual at frame n, point j.
template <class Pointwise>
ExplicateResidual aggregate(const std::vector<ExplicateFrame>& frames, Aggregate mode,
                            Pointwise&& pointwise) {
  ExplicateResidual out;
  for (std::size_t n = 1; n + 1 < frames.size(); ++n) {
    const auto valid = valid_points(frames, n);
    const auto& p = frames[n].P;
    std::vector<double> profile(p.size(), kNaN);
    double sum_p = 0.0, sum_p2 = 0.0, sum_r2 = 0.0, sum_pr = 0.0, sum_pr2 = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (!valid[j]) continue;
      const double r = pointwise(n, j);
      profile[j] = r;
      sum_p += p[j];
      sum_p2 += p[j] * p[j];
      sum_r2 += r * r;
      sum_pr += p[j] * r;
      sum_pr2 += p[j] * r * r;
    }
    double raw = 0.0, centred = 0.0;
    if (mode == Aggregate::density_normalized) {
      raw = sum_p2 > 0.0 ? std::sqrt(sum_r2 / sum_p2) : 0.0;
      centred = raw;
    } else if (sum_p > 0.0) {
      const double mean = sum_pr / sum_p;
      raw = std::sqrt(sum_pr2 / sum_p);
      centred = std::sqrt(std::max(0.0, sum_pr2 / sum_p - mean * mean));
    }
    out.times.push_back(frames[n].polar.time);
    out.raw.push_back(raw);
    out.offset_removed.push_back(centred);
    out.pointwise.push_back(std::move(profile));
    out.masked_fraction = std::max(out.masked_fraction, interior_mask_fraction(frames[n].polar));
  }
  out.node_dominated = out.masked_fraction > kNodeDominatedFraction;
  return out;
}

double span(const std::vector<ExplicateFrame>& frames, std::size_t n) {
  return frames[n + 1].polar.time - frames[n - 1].polar.time;
}

// P S' times the coefficient of the kinetic term: Im(conj(psi) psi') is
// finite through nodes, unlike S'.
std::vector<std::vector<double>> flux(const std::vector<ExplicateFrame>& frames, double coeff) {
  std::vector<std::vector<double>> out;
  out.reserve(frames.size());
  for (const auto& f : frames) {
    const auto psi = f.polar.reconstruct();
    const auto d = spectral_derivatives(psi, f.polar.grid.spacing);
    std::vector<double> j(psi.size());
    for (std::size_t k = 0; k < psi.size(); ++k) j[k] = coeff * std::imag(std::conj(psi[k]) * d.first[k]);
    out.push_back(spectral_derivative(j, f.polar.grid.spacing));
  }
  return out;
}

double p_kinetic(const HamiltonianSpec& h) {
  return h.kind == PotentialKind::free ? 0.0 : h.stiffness;
}

std::vector<ExplicateFrame> frames_in(const EvolutionTrace& trace, ProjectionAxis axis) {
  return axis == ProjectionAxis::position ? explicate_frames(trace)
                                          : explicate_frames(to_momentum(trace));
}

}  // namespace

std::vector<Complex> PolarField::reconstruct() const {
  std::vector<Complex> psi(R.size());
  for (std::size_t j = 0; j < R.size(); ++j) psi[j] = std::polar(R[j], S[j]);
  return psi;
}

PolarField polar_fields(const WaveField& psi) {
  const std::size_t n = psi.values.size();
  PolarField f{psi.representation, psi.grid, psi.time, std::vector<double>(n),
               std::vector<double>(n), std::vector<bool>(n)};
  for (std::size_t j = 0; j < n; ++j) f.R[j] = std::abs(psi.values[j]);
  const std::size_t peak = n == 0 ? 0 : peak_index(f.R);
  if (n == 0 || !(f.R[peak] > 0.0)) throw Error(Errc::zero_field, "polar form of an all-zero field");

  f.S[peak] = std::arg(psi.values[peak]);
  for (std::size_t j = peak + 1; j < n; ++j) {
    f.S[j] = f.S[j - 1] + wrap_to_pi(std::arg(psi.values[j]) - std::arg(psi.values[j - 1]));
  }
  for (std::size_t j = peak; j-- > 0;) {
    f.S[j] = f.S[j + 1] + wrap_to_pi(std::arg(psi.values[j]) - std::arg(psi.values[j + 1]));
  }
  const double cutoff = kNodeThreshold * f.R[peak];
  for (std::size_t j = 0; j < n; ++j) f.node[j] = f.R[j] < cutoff;
  return f;
}

void anchor_phase(PolarField& field, const PolarField& previous) {
  const std::size_t peak = peak_index(field.R);
  const double turns = std::round((previous.S[peak] - field.S[peak]) / kTwoPi);
  if (turns == 0.0) return;
  for (auto& s : field.S) s += kTwoPi * turns;
}

std::vector<PolarField> polar_fields(const EvolutionTrace& trace) {
  std::vector<PolarField> out;
  out.reserve(trace.snapshots.size());
  for (const auto& s : trace.snapshots) {
    out.push_back(polar_fields(s));
    if (out.size() > 1) anchor_phase(out.back(), out[out.size() - 2]);
  }
  return out;
}

std::vector<double> phase_gradient(const PolarField& f, Differentiation method) {
  const auto psi = f.reconstruct();
  const auto d = derivatives(psi, f.grid.spacing, method);
  std::vector<double> out(psi.size(), kNaN);
  for (std::size_t j = 0; j < psi.size(); ++j) {
    if (!f.node[j]) out[j] = std::imag(d.first[j] / psi[j]);
  }
  return out;
}

namespace {

// -R''/R. Spectral: from psi = R e^{iS}, R''/R = Re(psi''/psi) + Im(psi'/psi)^2,
// which stays smooth where R has a kink at a sign change. Finite differences
// act on R directly.
std::vector<double> curvature_ratio(const PolarField& f, Differentiation method) {
  std::vector<double> out(f.R.size(), kNaN);
  if (method == Differentiation::spectral) {
    const auto psi = f.reconstruct();
    const auto d = spectral_derivatives(psi, f.grid.spacing);
    for (std::size_t j = 0; j < psi.size(); ++j) {
      if (f.node[j]) continue;
      const Complex g = d.first[j] / psi[j];
      out[j] = -((d.second[j] / psi[j]).real() + g.imag() * g.imag());
    }
  } else {
    const auto r2 = finite_difference_second_derivative(f.R, f.grid.spacing);
    for (std::size_t j = 0; j < f.R.size(); ++j) {
      if (!f.node[j]) out[j] = -r2[j] / f.R[j];
    }
  }
  return out;
}

}  // namespace

std::vector<double> quantum_potential_x(const PolarField& f, double mass, Differentiation method) {
  require(f, Representation::position, "quantum_potential_x");
  auto q = curvature_ratio(f, method);
  for (auto& v : q) v /= 2.0 * mass;
  return q;
}

std::vector<double> quantum_potential_p(const PolarField& f, double stiffness,
                                        Differentiation method) {
  require(f, Representation::momentum, "quantum_potential_p");
  auto q = curvature_ratio(f, method);
  for (auto& v : q) v *= 0.5 * stiffness;
  return q;
}

ExplicateFrame explicate_frame(PolarField polar, const HamiltonianSpec& h, Differentiation method) {
  ExplicateFrame frame;
  frame.P.resize(polar.R.size());
  for (std::size_t j = 0; j < polar.R.size(); ++j) frame.P[j] = polar.R[j] * polar.R[j];
  frame.dS = phase_gradient(polar, method);
  frame.Q = polar.representation == Representation::position
                ? quantum_potential_x(polar, h.mass, method)
                : quantum_potential_p(polar, p_kinetic(h), method);
  frame.polar = std::move(polar);
  return frame;
}

std::vector<ExplicateFrame> explicate_frames(const EvolutionTrace& trace, Differentiation method) {
  auto polars = polar_fields(trace);
  std::vector<ExplicateFrame> frames;
  frames.reserve(polars.size());
  for (auto& p : polars) frames.push_back(explicate_frame(std::move(p), trace.hamiltonian, method));
  return frames;
}

ExplicateResidual continuity_residual_x(const std::vector<ExplicateFrame>& frames,
                                        const HamiltonianSpec& h) {
  require_frames(frames);
  require(frames.front().polar, Representation::position, "continuity_residual_x");
  const auto div = flux(frames, 1.0 / h.mass);
  return aggregate(frames, Aggregate::density_normalized, [&](std::size_t n, std::size_t j) {
    return (frames[n + 1].P[j] - frames[n - 1].P[j]) / span(frames, n) + div[n][j];
  });
}

ExplicateResidual continuity_residual_p(const std::vector<ExplicateFrame>& frames,
                                        const HamiltonianSpec& h) {
  require_frames(frames);
  require(frames.front().polar, Representation::momentum, "continuity_residual_p");
  if (!h.is_quadratic()) {
    throw Error(Errc::unsupported_potential, "momentum-space continuity needs a quadratic potential");
  }
  const auto div = flux(frames, p_kinetic(h));
  return aggregate(frames, Aggregate::density_normalized, [&](std::size_t n, std::size_t j) {
    return (frames[n + 1].P[j] - frames[n - 1].P[j]) / span(frames, n) + div[n][j];
  });
}

ExplicateResidual qhj_residual_x(const std::vector<ExplicateFrame>& frames,
                                 const HamiltonianSpec& h) {
  require_frames(frames);
  require(frames.front().polar, Representation::position, "qhj_residual_x");
  const Grid& grid = frames.front().polar.grid;
  return aggregate(frames, Aggregate::density_weighted, [&](std::size_t n, std::size_t j) {
    const double ds_dt = (frames[n + 1].polar.S[j] - frames[n - 1].polar.S[j]) / span(frames, n);
    const double g = frames[n].dS[j];
    return ds_dt + g * g / (2.0 * h.mass) + frames[n].Q[j] + h.potential(grid.coordinate(j));
  });
}

ExplicateResidual qhj_residual_p(const std::vector<ExplicateFrame>& frames,
                                 const HamiltonianSpec& h) {
  require_frames(frames);
  require(frames.front().polar, Representation::momentum, "qhj_residual_p");
  if (!h.is_quadratic()) {
    throw Error(Errc::unsupported_potential,
                "the momentum-space Hamilton-Jacobi form needs a quadratic potential");
  }
  const Grid& grid = frames.front().polar.grid;
  const double k = p_kinetic(h);
  return aggregate(frames, Aggregate::density_weighted, [&](std::size_t n, std::size_t j) {
    const double ds_dt = (frames[n + 1].polar.S[j] - frames[n - 1].polar.S[j]) / span(frames, n);
    const double g = frames[n].dS[j];
    const double p = grid.coordinate(j);
    return ds_dt + p * p / (2.0 * h.mass) + 0.5 * k * g * g + frames[n].Q[j];
  });
}

double ExplicateResidual::max_raw() const {
  double m = 0.0;
  for (double v : raw) m = std::max(m, v);
  return m;
}

double ExplicateResidual::max_offset_removed() const {
  double m = 0.0;
  for (double v : offset_removed) m = std::max(m, v);
  return m;
}

namespace {

double largest_gap(const ExplicateResidual& a, const ExplicateResidual& b) {
  double gap = 0.0;
  for (std::size_t n = 0; n < a.raw.size(); ++n) gap = std::max(gap, std::abs(a.raw[n] - b.raw[n]));
  return gap;
}

}  // namespace

double ProjectedCheck::continuity_gap() const { return largest_gap(projected_continuity, continuity); }
double ProjectedCheck::qhj_gap() const { return largest_gap(projected_qhj, qhj); }

ProjectedCheck projected_equations_check(const EvolutionTrace& trace, ProjectionAxis axis) {
  const auto frames = frames_in(trace, axis);
  require_frames(frames);
  const HamiltonianSpec& h = trace.hamiltonian;

  // <a|psi><psi|H|a> per grid cell, from the same psi the frames carry.
  std::vector<std::vector<Complex>> psi_h_psi;
  psi_h_psi.reserve(frames.size());
  for (const auto& f : frames) {
    WaveField psi{f.polar.representation, f.polar.grid, f.polar.reconstruct(), f.polar.time};
    const auto hpsi = apply_hamiltonian(psi, h);
    std::vector<Complex> d(hpsi.size());
    for (std::size_t j = 0; j < d.size(); ++j) d[j] = std::conj(psi.values[j]) * hpsi[j];
    psi_h_psi.push_back(std::move(d));
  }

  ProjectedCheck out;
  out.axis = axis;
  out.projected_continuity = aggregate(frames, Aggregate::density_normalized, [&](std::size_t n, std::size_t j) {
    return (frames[n + 1].P[j] - frames[n - 1].P[j]) / span(frames, n) -
           2.0 * psi_h_psi[n][j].imag();
  });
  out.projected_qhj = aggregate(frames, Aggregate::density_weighted, [&](std::size_t n, std::size_t j) {
    const double p = frames[n].P[j];
    const double ds_dt = (frames[n + 1].polar.S[j] - frames[n - 1].polar.S[j]) / span(frames, n);
    return (2.0 * p * ds_dt + 2.0 * psi_h_psi[n][j].real()) / (2.0 * p);
  });
  if (axis == ProjectionAxis::position) {
    out.continuity = continuity_residual_x(frames, h);
    out.qhj = qhj_residual_x(frames, h);
  } else {
    out.continuity = continuity_residual_p(frames, h);
    out.qhj = qhj_residual_p(frames, h);
  }
  return out;
}

void write_fields_csv(std::ostream& out, const std::vector<ExplicateFrame>& frames) {
  const bool momentum =
      !frames.empty() && frames.front().polar.representation == Representation::momentum;
  out << "t,coordinate,P,S,Q," << (momentum ? "x_B" : "p_B") << '\n';
  for (const auto& f : frames) {
    const std::string t = format_double(f.polar.time);
    for (std::size_t j = 0; j < f.P.size(); ++j) {
      const double conj = momentum ? -f.dS[j] : f.dS[j];
      out << t << ',' << format_double(f.polar.grid.coordinate(j)) << ',' << format_double(f.P[j])
          << ',' << format_double(f.polar.S[j]) << ',' << format_double(f.Q[j]) << ','
          << format_double(conj) << '\n';
    }
  }
}

}  // namespace implicate

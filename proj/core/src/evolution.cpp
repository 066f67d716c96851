#include "implicate/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "implicate/error.hpp"
#include "implicate/io.hpp"
#include "implicate/spectral.hpp"

namespace implicate {

namespace {

constexpr double kInstabilityDrift = 1e-6;

void require_symmetric(const Grid& grid) {
  const double expected = -grid.spacing * static_cast<double>(grid.size / 2);
  if (std::abs(grid.origin - expected) > 1e-12 * std::max(1.0, std::abs(expected))) {
    throw Error(Errc::invalid_argument,
                "momentum transforms need a grid centred on the origin point N/2");
  }
}

// (-1)^j, applied so that index N/2 of the transform is p = 0.
void alternate_signs(std::vector<Complex>& v) {
  for (std::size_t j = 1; j < v.size(); j += 2) v[j] = -v[j];
}

double max_singular_value(const Eigen::Matrix2cd& m) {
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

std::string_view to_string(PotentialKind kind) noexcept {
  switch (kind) {
    case PotentialKind::free: return "free";
    case PotentialKind::harmonic: return "harmonic";
    case PotentialKind::cubic: return "cubic";
  }
  return "unknown";
}

HamiltonianSpec HamiltonianSpec::harmonic(double mass, double stiffness) {
  HamiltonianSpec h{mass, PotentialKind::harmonic, stiffness, 0.0};
  h.validate();
  return h;
}

HamiltonianSpec HamiltonianSpec::free_particle(double mass) {
  HamiltonianSpec h{mass, PotentialKind::free, 0.0, 0.0};
  h.validate();
  return h;
}

HamiltonianSpec HamiltonianSpec::cubic_potential(double mass, double cubic, double stiffness) {
  HamiltonianSpec h{mass, PotentialKind::cubic, stiffness, cubic};
  h.validate();
  return h;
}

double HamiltonianSpec::potential(double x) const noexcept {
  switch (kind) {
    case PotentialKind::free: return 0.0;
    case PotentialKind::harmonic: return 0.5 * stiffness * x * x;
    case PotentialKind::cubic: return 0.5 * stiffness * x * x + cubic * x * x * x;
  }
  return 0.0;
}

void HamiltonianSpec::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw Error(Errc::invalid_argument, "mass must be positive and finite");
  }
  if (!std::isfinite(stiffness) || !std::isfinite(cubic)) {
    throw Error(Errc::invalid_argument, "potential parameters must be finite");
  }
}

WaveField gaussian_packet(const Grid& grid, double center, double width, double momentum) {
  validate_grid(grid);
  if (!(width > 0.0)) throw Error(Errc::invalid_argument, "packet width must be positive");
  if (center - 6.0 * width < grid.origin || center + 6.0 * width > grid.upper()) {
    throw Error(Errc::domain_overflow, "packet centre +- 6 widths leaves the grid");
  }
  WaveField psi{Representation::position, grid, std::vector<Complex>(grid.size), 0.0};
  for (std::size_t j = 0; j < grid.size; ++j) {
    const double x = grid.coordinate(j);
    const double d = x - center;
    psi.values[j] = std::exp(Complex(-d * d / (4.0 * width * width), momentum * x));
  }
  psi.normalize();
  return psi;
}

WaveField harmonic_eigenstate(const Grid& grid, int level, double mass, double stiffness) {
  validate_grid(grid);
  if (level < 0) throw Error(Errc::invalid_argument, "eigenstate level must be >= 0");
  if (!(mass > 0.0) || !(stiffness > 0.0)) {
    throw Error(Errc::invalid_argument, "oscillator eigenstates need m > 0 and K > 0");
  }
  const double omega = std::sqrt(stiffness / mass);
  const double scale = std::sqrt(mass * omega);
  WaveField psi{Representation::position, grid, std::vector<Complex>(grid.size), 0.0};
  for (std::size_t j = 0; j < grid.size; ++j) {
    const double xi = scale * grid.coordinate(j);
    // Normalized Hermite functions: h_{n+1} = sqrt(2/(n+1)) xi h_n - sqrt(n/(n+1)) h_{n-1}.
    double prev = 0.0;
    double cur = std::exp(-0.5 * xi * xi);
    for (int n = 0; n < level; ++n) {
      const double next = std::sqrt(2.0 / (n + 1)) * xi * cur - std::sqrt(double(n) / (n + 1)) * prev;
      prev = cur;
      cur = next;
    }
    psi.values[j] = cur;
  }
  psi.normalize();
  return psi;
}

std::vector<Complex> apply_hamiltonian(const WaveField& psi, const HamiltonianSpec& h) {
  const auto d = spectral_derivatives(psi.values, psi.grid.spacing);
  std::vector<Complex> out(psi.values.size());
  if (psi.representation == Representation::position) {
    for (std::size_t j = 0; j < out.size(); ++j) {
      out[j] = -d.second[j] / (2.0 * h.mass) + h.potential(psi.grid.coordinate(j)) * psi.values[j];
    }
    return out;
  }
  if (!h.is_quadratic()) {
    throw Error(Errc::unsupported_potential,
                "momentum-space Hamiltonian is only available for quadratic potentials");
  }
  const double k = h.kind == PotentialKind::free ? 0.0 : h.stiffness;
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double p = psi.grid.coordinate(j);
    out[j] = p * p / (2.0 * h.mass) * psi.values[j] - 0.5 * k * d.second[j];
  }
  return out;
}

double energy_expectation(const WaveField& psi, const HamiltonianSpec& h) {
  const auto hpsi = apply_hamiltonian(psi, h);
  return inner_product(psi.values, hpsi, psi.grid.spacing).real() / psi.norm_squared();
}

WaveField to_momentum(const WaveField& psi) {
  if (psi.representation != Representation::position) {
    throw Error(Errc::wrong_representation, "to_momentum expects a position-space field");
  }
  validate_grid(psi.grid);
  require_symmetric(psi.grid);
  std::vector<Complex> in = psi.values;
  alternate_signs(in);
  WaveField phi{Representation::momentum, psi.grid.conjugate(), std::vector<Complex>(in.size()),
                psi.time};
  fft_forward_extended(in, phi.values);
  // The origin phase exp(-i p_k x_0) is (-1)^(k - N/2) = (-1)^k for N/2 even.
  alternate_signs(phi.values);
  const double scale = psi.grid.spacing / std::sqrt(2.0 * std::numbers::pi);
  for (auto& v : phi.values) v *= scale;
  return phi;
}

WaveField from_momentum(const WaveField& phi) {
  if (phi.representation != Representation::momentum) {
    throw Error(Errc::wrong_representation, "from_momentum expects a momentum-space field");
  }
  validate_grid(phi.grid);
  require_symmetric(phi.grid);
  std::vector<Complex> in = phi.values;
  alternate_signs(in);
  WaveField psi{Representation::position, phi.grid.conjugate(), std::vector<Complex>(in.size()),
                phi.time};
  fft_inverse_extended(in, psi.values);
  alternate_signs(psi.values);
  const double scale = phi.grid.spacing / std::sqrt(2.0 * std::numbers::pi);
  for (auto& v : psi.values) v *= scale;
  return psi;
}

EvolutionTrace evolve(const WaveField& initial, const HamiltonianSpec& h, double dt,
                      std::size_t n_steps, std::size_t steps_per_snapshot) {
  h.validate();
  validate_grid(initial.grid);
  if (initial.representation != Representation::position) {
    throw Error(Errc::wrong_representation, "evolution runs in the position representation");
  }
  if (!(dt > 0.0)) throw Error(Errc::invalid_argument, "time step must be positive");
  if (steps_per_snapshot == 0) throw Error(Errc::invalid_argument, "snapshot stride must be >= 1");

  const std::size_t n = initial.grid.size;
  const auto k = angular_wavenumbers(n, initial.grid.spacing);
  std::vector<Complex> half_kick(n), potential_kick(n);
  for (std::size_t j = 0; j < n; ++j) {
    half_kick[j] = std::exp(Complex(0.0, -k[j] * k[j] / (2.0 * h.mass) * 0.5 * dt)) /
                   static_cast<double>(n);
    potential_kick[j] = std::exp(Complex(0.0, -h.potential(initial.grid.coordinate(j)) * dt));
  }
  // Each half kick carries the 1/N of its forward/inverse transform pair.

  EvolutionTrace trace;
  trace.dt = dt;
  trace.dt_out = dt * static_cast<double>(steps_per_snapshot);
  trace.hamiltonian = h;
  trace.snapshots.reserve(n_steps / steps_per_snapshot + 1);
  trace.snapshots.push_back(initial);

  const double norm0 = initial.norm_squared();
  std::vector<Complex> psi = initial.values, coeffs(n);
  for (std::size_t step = 1; step <= n_steps; ++step) {
    fft_forward(psi, coeffs);
    for (std::size_t j = 0; j < n; ++j) coeffs[j] *= half_kick[j];
    fft_inverse(coeffs, psi);
    for (std::size_t j = 0; j < n; ++j) psi[j] *= potential_kick[j];
    fft_forward(psi, coeffs);
    for (std::size_t j = 0; j < n; ++j) coeffs[j] *= half_kick[j];
    fft_inverse(coeffs, psi);

    if (step % steps_per_snapshot != 0) continue;
    WaveField snap{Representation::position, initial.grid, psi,
                   initial.time + dt * static_cast<double>(step)};
    const double drift = std::abs(snap.norm_squared() - norm0);
    if (drift > kInstabilityDrift) {
      throw Error(Errc::unstable, "norm drifted by " + format_double(drift) + " at t = " +
                                      format_double(snap.time));
    }
    if (h.kind == PotentialKind::cubic) {
      const auto m = density_moments(snap);
      if (m.mean - 6.0 * m.spread < initial.grid.origin ||
          m.mean + 6.0 * m.spread > initial.grid.upper()) {
        throw Error(Errc::unstable, "packet escaped to the grid edge at t = " +
                                        format_double(snap.time));
      }
    }
    trace.snapshots.push_back(std::move(snap));
  }
  return trace;
}

EvolutionTrace to_momentum(const EvolutionTrace& trace) {
  EvolutionTrace out;
  out.dt = trace.dt;
  out.dt_out = trace.dt_out;
  out.hamiltonian = trace.hamiltonian;
  out.snapshots.reserve(trace.snapshots.size());
  for (const auto& s : trace.snapshots) out.snapshots.push_back(to_momentum(s));
  return out;
}

Moments density_moments(const WaveField& psi) {
  double total = 0.0, first = 0.0, second = 0.0;
  for (std::size_t j = 0; j < psi.values.size(); ++j) {
    const double p = std::norm(psi.values[j]);
    const double x = psi.grid.coordinate(j);
    total += p;
    first += p * x;
    second += p * x * x;
  }
  const double mean = first / total;
  return {mean, std::sqrt(std::max(0.0, second / total - mean * mean))};
}

double KetResidual::liouville() const {
  const double a = psi_norm, b = perp_norm;
  Eigen::Matrix2cd m;
  m << (alpha - std::conj(alpha)) * a * a, -a * b, a * b, 0.0;
  return max_singular_value(m) / (a * a);
}

double KetResidual::energy() const {
  const double a = psi_norm, b = perp_norm;
  Eigen::Matrix2cd m;
  m << 2.0 * alpha.real() * a * a, a * b, a * b, 0.0;
  return max_singular_value(m) / (a * a);
}

double KetResidual::liouville_frobenius() const {
  const double a = psi_norm, b = perp_norm;
  return std::sqrt(4.0 * alpha.imag() * alpha.imag() * a * a * a * a + 2.0 * a * a * b * b) /
         (a * a);
}

double KetResidual::energy_frobenius() const {
  const double a = psi_norm, b = perp_norm;
  return std::sqrt(4.0 * alpha.real() * alpha.real() * a * a * a * a + 2.0 * a * a * b * b) /
         (a * a);
}

double KetResidual::schrodinger() const {
  return std::sqrt(std::norm(alpha) * psi_norm * psi_norm + perp_norm * perp_norm) / psi_norm;
}

KetResidual ket_residual(const std::vector<Complex>& psi, const std::vector<Complex>& r,
                         double spacing) {
  const double psi2 = inner_product(psi, psi, spacing).real();
  if (!(psi2 > 0.0)) throw Error(Errc::zero_field, "residual of an all-zero state");
  KetResidual out;
  out.psi_norm = std::sqrt(psi2);
  out.alpha = inner_product(psi, r, spacing) / psi2;
  std::vector<Complex> perp(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) perp[j] = r[j] - out.alpha * psi[j];
  out.perp_norm = std::sqrt(inner_product(perp, perp, spacing).real());
  return out;
}

std::vector<KetResidual> ket_residuals(const EvolutionTrace& trace) {
  const auto& s = trace.snapshots;
  if (s.size() < 3) {
    throw Error(Errc::insufficient_snapshots, "residuals need at least three snapshots");
  }
  std::vector<KetResidual> out;
  out.reserve(s.size() - 2);
  const Complex i(0.0, 1.0);
  for (std::size_t n = 1; n + 1 < s.size(); ++n) {
    const auto& psi = s[n].values;
    const double span = s[n + 1].time - s[n - 1].time;
    const auto hpsi = apply_hamiltonian(s[n], trace.hamiltonian);
    std::vector<Complex> r(psi.size());
    for (std::size_t j = 0; j < psi.size(); ++j) {
      const Complex dpsi = (s[n + 1].values[j] - s[n - 1].values[j]) / span;
      r[j] = i * dpsi - hpsi[j];
    }
    out.push_back(ket_residual(psi, r, s[n].grid.spacing));
  }
  return out;
}

ResidualSeries liouville_residual(const EvolutionTrace& trace) {
  const auto parts = ket_residuals(trace);
  ResidualSeries out;
  for (std::size_t n = 0; n < parts.size(); ++n) {
    out.times.push_back(trace.snapshots[n + 1].time);
    out.values.push_back(parts[n].liouville());
  }
  return out;
}

ResidualSeries energy_equation_residual(const EvolutionTrace& trace) {
  const auto parts = ket_residuals(trace);
  ResidualSeries out;
  for (std::size_t n = 0; n < parts.size(); ++n) {
    out.times.push_back(trace.snapshots[n + 1].time);
    out.values.push_back(parts[n].energy());
  }
  return out;
}

double ResidualSeries::max() const {
  double worst = 0.0;
  for (double v : values) worst = std::max(worst, v);
  return worst;
}

double convergence_order(double coarse, double fine) { return std::log2(coarse / fine); }

void write_trace_csv(std::ostream& out, const EvolutionTrace& trace) {
  out << "snapshot,t,coordinate,re_psi,im_psi\n";
  for (std::size_t n = 0; n < trace.snapshots.size(); ++n) {
    const auto& s = trace.snapshots[n];
    const std::string t = format_double(s.time);
    for (std::size_t j = 0; j < s.values.size(); ++j) {
      out << n << ',' << t << ',' << format_double(s.grid.coordinate(j)) << ','
          << format_double(s.values[j].real()) << ',' << format_double(s.values[j].imag())
          << '\n';
    }
  }
}

}  // namespace implicate

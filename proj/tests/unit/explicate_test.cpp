#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"

#include "implicate/error.hpp"
#include "implicate/explicate.hpp"

using namespace implicate;

namespace {

const Grid kGrid = Grid::symmetric(512, 12.0);
const HamiltonianSpec kOscillator = HamiltonianSpec::harmonic(1.0, 1.0);

// Trace of the closed-form coherent state, x0 = 2, at spacing dt_out.
EvolutionTrace analytic_coherent(double dt_out, std::size_t frames) {
  EvolutionTrace t;
  t.dt = dt_out;
  t.dt_out = dt_out;
  t.hamiltonian = kOscillator;
  for (std::size_t n = 0; n < frames; ++n) {
    WaveField w{Representation::position, kGrid, std::vector<Complex>(kGrid.size), dt_out * static_cast<double>(n)};
    for (std::size_t j = 0; j < kGrid.size; ++j) w.values[j] = oracle::coherent_state(kGrid.coordinate(j), 2.0, w.time);
    t.snapshots.push_back(std::move(w));
  }
  return t;
}

// Largest |f - g| over the points where R is at least `floor` of its peak.
double gap_where_resolved(const PolarField& p, const std::vector<double>& f, const std::vector<double>& g,
                          double floor) {
  const double peak = *std::max_element(p.R.begin(), p.R.end());
  double worst = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (p.R[j] >= floor * peak) worst = std::max(worst, std::abs(f[j] - g[j]));
  }
  return worst;
}

}  // namespace

TEST_SUITE("explicate") {

TEST_CASE("polar form reconstructs the field and unwraps the phase") {
  const auto psi = gaussian_packet(kGrid, -1.0, 0.8, 3.0);
  const auto f = polar_fields(psi);
  const auto back = f.reconstruct();
  for (std::size_t j = 0; j < kGrid.size; ++j) CHECK(std::abs(back[j] - psi.values[j]) < 1e-15);
  std::size_t checked = 0;
  for (std::size_t j = 0; j + 1 < kGrid.size; ++j) {
    if (f.node[j] || f.node[j + 1]) continue;
    CHECK(f.S[j + 1] - f.S[j] == doctest::Approx(3.0 * kGrid.spacing).epsilon(1e-9));
    ++checked;
  }
  CHECK(checked > 100);
  CHECK_THROWS_AS(polar_fields(WaveField{Representation::position, kGrid, std::vector<Complex>(kGrid.size), 0.0}),
                  Error);
}

TEST_CASE("a constant phase changes S only") {
  const auto psi = gaussian_packet(kGrid, 0.5, 1.0, -2.0);
  auto rotated = psi;
  const double theta = 1.234;
  for (auto& v : rotated.values) v *= std::polar(1.0, theta);
  const auto a = explicate_frame(polar_fields(psi), kOscillator);
  const auto b = explicate_frame(polar_fields(rotated), kOscillator);
  const double peak = *std::max_element(a.polar.R.begin(), a.polar.R.end());
  for (std::size_t j = 0; j < kGrid.size; ++j) {
    CHECK(a.polar.node[j] == b.polar.node[j]);
    if (a.polar.R[j] < 1e-4 * peak) continue;
    CHECK(std::abs(a.P[j] - b.P[j]) < 1e-15);
    CHECK(std::abs(a.dS[j] - b.dS[j]) < 1e-9);
    CHECK(std::abs(a.Q[j] - b.Q[j]) < 1e-6);
    const double shift = b.polar.S[j] - a.polar.S[j] - theta;
    CHECK(std::abs(shift - 2.0 * std::numbers::pi * std::round(shift / (2.0 * std::numbers::pi))) < 1e-12);
  }
}

TEST_CASE("quantum potential of oscillator eigenstates") {
  const auto ground = polar_fields(harmonic_eigenstate(kGrid, 0, 1.0, 1.0));
  const auto q0 = quantum_potential_x(ground, 1.0);
  std::vector<double> want0(kGrid.size);
  for (std::size_t j = 0; j < kGrid.size; ++j) want0[j] = 0.5 - 0.5 * kGrid.coordinate(j) * kGrid.coordinate(j);
  CHECK(gap_where_resolved(ground, q0, want0, 1e-4) < 1e-9);

  const auto excited = polar_fields(harmonic_eigenstate(kGrid, 1, 1.0, 1.0));
  CHECK(excited.node[kGrid.size / 2]);
  const auto q1 = quantum_potential_x(excited, 1.0);
  CHECK(std::isnan(q1[kGrid.size / 2]));
  double worst = 0.0;
  for (std::size_t j = 0; j < kGrid.size; ++j) {
    if (excited.R[j] < 1e-4) continue;
    const double x = kGrid.coordinate(j);
    worst = std::max(worst, std::abs(q1[j] + 0.5 * x * x - 1.5));
  }
  CHECK(worst < 1e-8);

  // Heavier particle, stiffer spring: Q + V = omega / 2.
  const auto heavy = polar_fields(harmonic_eigenstate(kGrid, 0, 2.0, 8.0));
  const auto qh = quantum_potential_x(heavy, 2.0);
  std::vector<double> wanth(kGrid.size);
  for (std::size_t j = 0; j < kGrid.size; ++j) wanth[j] = 1.0 - 4.0 * kGrid.coordinate(j) * kGrid.coordinate(j);
  CHECK(gap_where_resolved(heavy, qh, wanth, 1e-4) < 1e-8);
}

TEST_CASE("spectral and finite-difference routes agree on smooth states") {
  const auto f = polar_fields(gaussian_packet(kGrid, 1.0, 0.9, 1.5));
  const auto qs = quantum_potential_x(f, 1.0, Differentiation::spectral);
  const auto qf = quantum_potential_x(f, 1.0, Differentiation::finite_difference);
  CHECK(gap_where_resolved(f, qs, qf, 1e-2) < 1e-4);
  const auto gs = phase_gradient(f, Differentiation::spectral);
  const auto gf = phase_gradient(f, Differentiation::finite_difference);
  CHECK(gap_where_resolved(f, gs, gf, 1e-2) < 1e-4);
  const double peak = *std::max_element(f.R.begin(), f.R.end());
  for (std::size_t j = 0; j < kGrid.size; ++j) {
    if (f.R[j] >= 1e-4 * peak) CHECK(gs[j] == doctest::Approx(1.5).epsilon(1e-9));
  }
}

TEST_CASE("momentum-picture quantum potential") {
  const auto phi = polar_fields(to_momentum(harmonic_eigenstate(kGrid, 0, 1.0, 1.0)));
  const auto qp = quantum_potential_p(phi, 1.0);
  std::vector<double> want(kGrid.size);
  for (std::size_t k = 0; k < kGrid.size; ++k) {
    const double p = phi.grid.coordinate(k);
    want[k] = 0.5 - 0.5 * p * p;
  }
  CHECK(gap_where_resolved(phi, qp, want, 1e-4) < 1e-9);
  CHECK_THROWS_AS(quantum_potential_x(phi, 1.0), Error);
  CHECK_THROWS_AS(quantum_potential_p(polar_fields(harmonic_eigenstate(kGrid, 0, 1.0, 1.0)), 1.0), Error);
}

TEST_CASE("phases stay anchored across snapshots") {
  const auto trace = evolve(gaussian_packet(kGrid, 2.0, std::sqrt(0.5), 0.0), kOscillator, 1e-3, 2000, 10);
  const auto polars = polar_fields(trace);
  for (std::size_t n = 1; n < polars.size(); ++n) {
    const auto peak = static_cast<std::size_t>(std::max_element(polars[n].R.begin(), polars[n].R.end()) - polars[n].R.begin());
    CHECK(std::abs(polars[n].S[peak] - polars[n - 1].S[peak]) < 0.5);
  }
}

TEST_CASE("Hamilton-Jacobi residuals converge at second order on the closed-form trace") {
  const auto coarse = explicate_frames(analytic_coherent(0.02, 12));
  const auto fine = explicate_frames(analytic_coherent(0.01, 23));
  const auto cc = continuity_residual_x(coarse, kOscillator);
  const auto cf = continuity_residual_x(fine, kOscillator);
  const auto qc = qhj_residual_x(coarse, kOscillator);
  const auto qf = qhj_residual_x(fine, kOscillator);
  CHECK(cc.times.size() == 10);
  CHECK_FALSE(cc.node_dominated);
  // Same physical time t = 0.2 in both.
  CHECK(cc.times[9] == doctest::Approx(cf.times[19]));
  CHECK(std::log2(cc.raw[9] / cf.raw[19]) == doctest::Approx(2.0).epsilon(0.02));
  CHECK(std::log2(qc.raw[9] / qf.raw[19]) == doctest::Approx(2.0).epsilon(0.02));
  CHECK(cf.max_raw() < 1e-3);
  CHECK(qf.max_raw() < 1e-3);
  CHECK(qf.max_offset_removed() <= qf.max_raw());
}

TEST_CASE("momentum-space residuals and potential restrictions") {
  const auto trace = evolve(gaussian_packet(kGrid, 2.0, std::sqrt(0.5), 0.0), kOscillator, 1e-3, 200, 10);
  const auto frames_p = explicate_frames(to_momentum(trace));
  CHECK(continuity_residual_p(frames_p, kOscillator).max_raw() < 1e-3);
  CHECK(qhj_residual_p(frames_p, kOscillator).max_raw() < 1e-3);
  const auto cubic = HamiltonianSpec::cubic_potential(1.0, 0.05, 1.0);
  try {
    qhj_residual_p(frames_p, cubic);
    FAIL("cubic accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unsupported_potential);
  }
  CHECK_THROWS_AS(continuity_residual_p(frames_p, cubic), Error);
  CHECK_THROWS_AS(continuity_residual_x(frames_p, kOscillator), Error);
  auto two = frames_p;
  two.resize(2);
  CHECK_THROWS_AS(qhj_residual_p(two, kOscillator), Error);
}

TEST_CASE("projected diagonal equations close on their Hamilton-Jacobi forms") {
  const auto trace = evolve(gaussian_packet(kGrid, 2.0, std::sqrt(0.5), 0.0), kOscillator, 1e-3, 300, 10);
  for (auto axis : {ProjectionAxis::position, ProjectionAxis::momentum}) {
    const auto check = projected_equations_check(trace, axis);
    CHECK(check.continuity_gap() < 1e-10);
    CHECK(check.qhj_gap() < 1e-10);
    CHECK(check.projected_continuity.raw.size() == check.continuity.raw.size());
  }
}

TEST_CASE("masked fraction inside the support") {
  const auto trace = evolve(harmonic_eigenstate(kGrid, 1, 1.0, 1.0), kOscillator, 1e-3, 30, 10);
  const auto res = qhj_residual_x(explicate_frames(trace), kOscillator);
  CHECK(res.masked_fraction > 0.0);
  CHECK(res.masked_fraction < 0.05);
  CHECK_FALSE(res.node_dominated);
  CHECK(std::isnan(res.pointwise[0][kGrid.size / 2]));
  CHECK(std::isnan(res.pointwise[0][kGrid.size / 2 + 2]));
  CHECK(std::isnan(res.pointwise[0][0]));
}

TEST_CASE("field export layout") {
  const auto trace = evolve(harmonic_eigenstate(Grid::symmetric(32, 8.0), 0, 1.0, 1.0), kOscillator, 0.01, 2, 1);
  std::ostringstream x, p;
  write_fields_csv(x, explicate_frames(trace));
  write_fields_csv(p, explicate_frames(to_momentum(trace)));
  const std::string xs = x.str(), ps = p.str();
  CHECK(xs.substr(0, xs.find('\n')) == "t,coordinate,P,S,Q,p_B");
  CHECK(ps.substr(0, ps.find('\n')) == "t,coordinate,P,S,Q,x_B");
  CHECK(std::count(xs.begin(), xs.end(), '\n') == 1 + 3 * 32);
}

}

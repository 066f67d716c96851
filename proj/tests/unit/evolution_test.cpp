#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"

#include "implicate/error.hpp"
#include "implicate/evolution.hpp"

using namespace implicate;

namespace {

const Grid kGrid = Grid::symmetric(512, 12.0);

double max_gap(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
  return worst;
}

}  // namespace

TEST_SUITE("evolution") {

TEST_CASE("Gaussian packets are normalized and placed") {
  const auto psi = gaussian_packet(kGrid, 1.5, 0.8, 2.0);
  CHECK(psi.norm_squared() == doctest::Approx(1.0).epsilon(1e-14));
  const auto m = density_moments(psi);
  CHECK(m.mean == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(m.spread == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(energy_expectation(psi, HamiltonianSpec::free_particle(1.0)) ==
        doctest::Approx(0.5 * (4.0 + 1.0 / (4.0 * 0.64))).epsilon(1e-10));
  try {
    gaussian_packet(kGrid, 10.0, 1.0, 0.0);
    FAIL("packet beyond the edge accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::domain_overflow);
  }
}

TEST_CASE("oscillator eigenstates are orthonormal with energy n + 1/2") {
  const auto h = HamiltonianSpec::harmonic(1.0, 1.0);
  std::vector<WaveField> states;
  for (int n = 0; n < 6; ++n) states.push_back(harmonic_eigenstate(kGrid, n, 1.0, 1.0));
  for (int a = 0; a < 6; ++a) {
    CHECK(energy_expectation(states[a], h) == doctest::Approx(a + 0.5).epsilon(1e-10));
    for (int b = 0; b < 6; ++b) {
      const Complex ip = inner_product(states[a].values, states[b].values, kGrid.spacing);
      CHECK(std::abs(ip - (a == b ? 1.0 : 0.0)) < 1e-12);
    }
  }
  // First excited state is sqrt(2) pi^(-1/4) x exp(-x^2/2).
  const auto& e1 = states[1];
  for (std::size_t j = 0; j < kGrid.size; j += 37) {
    const double x = kGrid.coordinate(j);
    CHECK(e1.values[j].real() == doctest::Approx(std::sqrt(2.0) * std::pow(std::numbers::pi, -0.25) * x *
                                                 std::exp(-0.5 * x * x)).epsilon(1e-12));
  }
  // Scaled oscillator: E = omega / 2.
  const auto stiff = harmonic_eigenstate(kGrid, 0, 2.0, 8.0);
  CHECK(energy_expectation(stiff, HamiltonianSpec::harmonic(2.0, 8.0)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(harmonic_eigenstate(kGrid, -1, 1.0, 1.0), Error);
}

TEST_CASE("Hamiltonian application in both pictures") {
  const auto h = HamiltonianSpec::harmonic(1.0, 1.0);
  const auto psi = harmonic_eigenstate(kGrid, 2, 1.0, 1.0);
  const auto hx = apply_hamiltonian(psi, h);
  const auto phi = to_momentum(psi);
  const auto hp = apply_hamiltonian(phi, h);
  for (std::size_t j = 0; j < kGrid.size; ++j) {
    CHECK(std::abs(hx[j] - 2.5 * psi.values[j]) < 1e-10);
    CHECK(std::abs(hp[j] - 2.5 * phi.values[j]) < 1e-9);
  }
  try {
    apply_hamiltonian(phi, HamiltonianSpec::cubic_potential(1.0, 0.1, 1.0));
    FAIL("cubic momentum Hamiltonian accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unsupported_potential);
  }
}

TEST_CASE("momentum transform against direct summation and the analytic Gaussian") {
  const Grid g = Grid::symmetric(128, 10.0);
  const auto psi = gaussian_packet(g, 0.7, 0.9, -1.2);
  const auto phi = to_momentum(psi);
  const Grid pg = g.conjugate();
  CHECK(phi.representation == Representation::momentum);
  CHECK(phi.grid == pg);
  const auto direct = oracle::direct_momentum_transform(psi.values, g.origin, g.spacing, pg.origin, pg.spacing);
  CHECK(max_gap(phi.values, direct) < 1e-14);
  // |phi(p)|^2 is a normal density in p with spread 1/(2 s).
  const double sp = 1.0 / (2.0 * 0.9);
  for (std::size_t k = 0; k < pg.size; ++k) {
    const double p = pg.coordinate(k);
    const double want = std::exp(-(p + 1.2) * (p + 1.2) / (2.0 * sp * sp)) / std::sqrt(2.0 * std::numbers::pi * sp * sp);
    CHECK(std::abs(std::norm(phi.values[k]) - want) < 1e-12);
  }
  CHECK(phi.norm_squared() == doctest::Approx(1.0).epsilon(1e-13));
  const auto back = from_momentum(phi);
  CHECK(back.grid == g);
  CHECK(max_gap(back.values, psi.values) < 1e-14);
  CHECK_THROWS_AS(from_momentum(psi), Error);
  CHECK_THROWS_AS(to_momentum(phi), Error);
  WaveField shifted = psi;
  shifted.grid.origin += 0.1;
  CHECK_THROWS_AS(to_momentum(shifted), Error);
}

TEST_CASE("eigenstates are stationary and coherent states follow the closed form") {
  const auto h = HamiltonianSpec::harmonic(1.0, 1.0);
  const auto ground = harmonic_eigenstate(kGrid, 0, 1.0, 1.0);
  const auto still = evolve(ground, h, 1e-3, 1000, 100);
  REQUIRE(still.snapshots.size() == 11);
  for (const auto& s : still.snapshots) {
    const Complex phase = std::polar(1.0, -0.5 * s.time);
    double gap = 0.0;
    for (std::size_t j = 0; j < kGrid.size; ++j) gap = std::max(gap, std::abs(s.values[j] - phase * ground.values[j]));
    CHECK(gap < 1e-6);
  }

  const auto coherent = evolve(gaussian_packet(kGrid, 2.0, std::sqrt(0.5), 0.0), h, 1e-3, 3000, 500);
  for (const auto& s : coherent.snapshots) {
    double gap = 0.0;
    for (std::size_t j = 0; j < kGrid.size; ++j) {
      gap = std::max(gap, std::abs(s.values[j] - oracle::coherent_state(kGrid.coordinate(j), 2.0, s.time)));
    }
    CAPTURE(s.time);
    CHECK(gap < 1e-5);
    CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("split-step error is second order in dt") {
  const auto h = HamiltonianSpec::harmonic(1.0, 1.0);
  const auto psi0 = gaussian_packet(kGrid, 1.0, std::sqrt(0.5), 0.5);
  auto error_at = [&](double dt, std::size_t steps) {
    const auto t = evolve(psi0, h, dt, steps, steps);
    const auto& last = t.snapshots.back();
    double worst = 0.0;
    const auto ref = evolve(psi0, h, dt / 8.0, steps * 8, steps * 8).snapshots.back();
    for (std::size_t j = 0; j < kGrid.size; ++j) worst = std::max(worst, std::abs(last.values[j] - ref.values[j]));
    return worst;
  };
  const double coarse = error_at(0.02, 50), fine = error_at(0.01, 100);
  CHECK(convergence_order(coarse, fine) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("unstable and malformed runs are reported") {
  const auto h = HamiltonianSpec::harmonic(1.0, 1.0);
  const auto psi = gaussian_packet(kGrid, 0.0, 1.0, 0.0);
  CHECK_THROWS_AS(evolve(psi, h, 0.0, 10, 1), Error);
  CHECK_THROWS_AS(evolve(psi, h, 1e-3, 10, 0), Error);
  CHECK_THROWS_AS(evolve(to_momentum(psi), h, 1e-3, 10, 1), Error);
  // A cubic well tips over; the packet runs for the edge.
  const auto steep = HamiltonianSpec::cubic_potential(1.0, 0.5, 1.0);
  try {
    evolve(gaussian_packet(kGrid, -3.0, 0.5, 0.0), steep, 1e-3, 20000, 100);
    FAIL("escape not detected");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unstable);
  }
  CHECK_THROWS_AS(HamiltonianSpec::harmonic(-1.0, 1.0), Error);
  CHECK_THROWS_AS(HamiltonianSpec::free_particle(std::nan("")), Error);
}

TEST_CASE("ket residual decomposition matches dense operators") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g;
  const double dx = 0.3;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Complex> psi(48), r(48);
    for (auto& v : psi) v = Complex(g(rng), g(rng));
    for (auto& v : r) v = Complex(g(rng), g(rng)) * 1e-3;
    if (trial == 0) {
      for (std::size_t j = 0; j < r.size(); ++j) r[j] = Complex(0.0, 0.2) * psi[j];  // r parallel to psi
    }
    const auto k = ket_residual(psi, r, dx);
    const auto d = oracle::dense_ket_residual(psi, r, dx);
    CHECK(k.liouville() == doctest::Approx(d.liouville).epsilon(1e-10));
    CHECK(k.energy() == doctest::Approx(d.energy).epsilon(1e-10));
    CHECK(k.liouville_frobenius() == doctest::Approx(d.liouville_frobenius).epsilon(1e-10));
    CHECK(k.energy_frobenius() == doctest::Approx(d.energy_frobenius).epsilon(1e-10));
  }
  // A pure phase error i*c*psi is invisible to the anticommutator form.
  std::vector<Complex> psi(16, 1.0), r(16, Complex(0.0, 0.5));
  CHECK(ket_residual(psi, r, 1.0).liouville() == doctest::Approx(1.0));
  CHECK(ket_residual(psi, r, 1.0).energy() < 1e-15);
  std::vector<Complex> real_shift(16, 0.25);
  CHECK(ket_residual(psi, real_shift, 1.0).energy() == doctest::Approx(0.5));
  CHECK(ket_residual(psi, real_shift, 1.0).liouville() < 1e-15);
  CHECK_THROWS_AS(ket_residual(std::vector<Complex>(4), r, 1.0), Error);
}

TEST_CASE("trace residual series") {
  const auto h = HamiltonianSpec::harmonic(1.0, 1.0);
  const auto trace = evolve(harmonic_eigenstate(kGrid, 0, 1.0, 1.0), h, 1e-4, 20, 2);
  const auto l = liouville_residual(trace);
  const auto e = energy_equation_residual(trace);
  REQUIRE(l.times.size() == trace.snapshots.size() - 2);
  CHECK(l.times.front() == doctest::Approx(2e-4));
  CHECK(l.max() < 1e-8);
  CHECK(e.max() < 1e-8);
  EvolutionTrace short_trace = trace;
  short_trace.snapshots.resize(2);
  try {
    liouville_residual(short_trace);
    FAIL("two snapshots accepted");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::insufficient_snapshots);
  }
  CHECK(convergence_order(4.0, 1.0) == doctest::Approx(2.0));
}

TEST_CASE("trace CSV layout") {
  const auto h = HamiltonianSpec::harmonic(1.0, 1.0);
  const auto trace = evolve(harmonic_eigenstate(Grid::symmetric(16, 8.0), 0, 1.0, 1.0), h, 0.1, 2, 1);
  std::ostringstream out;
  write_trace_csv(out, trace);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "snapshot,t,coordinate,re_psi,im_psi");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3 * 16);
}

}

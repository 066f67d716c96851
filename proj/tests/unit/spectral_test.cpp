#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "implicate/error.hpp"
#include "implicate/grid.hpp"
#include "implicate/spectral.hpp"

using namespace implicate;

namespace {

std::vector<Complex> random_samples(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Complex> v(n);
  for (auto& c : v) c = Complex(g(rng), g(rng));
  return v;
}

double max_gap(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
  return worst;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("transforms agree with direct summation") {
  for (std::size_t n : {8u, 64u, 256u}) {
    CAPTURE(n);
    const auto in = random_samples(n, static_cast<unsigned>(n));
    std::vector<Complex> fwd(n), inv(n), fwd_ext(n), inv_ext(n);
    fft_forward(in, fwd);
    fft_inverse(in, inv);
    fft_forward_extended(in, fwd_ext);
    fft_inverse_extended(in, inv_ext);
    const auto want_fwd = oracle::direct_dft(in, -1);
    const auto want_inv = oracle::direct_dft(in, +1);
    const double scale = std::sqrt(static_cast<double>(n));
    CHECK(max_gap(fwd, want_fwd) < 1e-13 * scale * 4);
    CHECK(max_gap(inv, want_inv) < 1e-13 * scale * 4);
    CHECK(max_gap(fwd_ext, want_fwd) < 1e-15 * scale * 4);
    CHECK(max_gap(inv_ext, want_inv) < 1e-15 * scale * 4);
  }
}

TEST_CASE("transform size errors") {
  std::vector<Complex> a(8), b(4);
  CHECK_THROWS_AS(fft_forward(a, b), Error);
}

TEST_CASE("wavenumbers are in FFT order") {
  const auto k = angular_wavenumbers(8, 0.5);
  const double dk = 2.0 * std::numbers::pi / 4.0;
  const double expected[] = {0, 1, 2, 3, -4, -3, -2, -1};
  for (std::size_t j = 0; j < 8; ++j) CHECK(k[j] == doctest::Approx(expected[j] * dk));
}

TEST_CASE("derivatives of band-limited and smooth functions") {
  const std::size_t n = 128;
  const double L = 2.0 * std::numbers::pi, dx = L / n;
  std::vector<Complex> f(n);
  std::vector<double> real(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = dx * j;
    f[j] = std::polar(1.0, 3.0 * x);
    real[j] = std::sin(2.0 * x);
  }
  const auto d = spectral_derivatives(f, dx);
  const auto fd = finite_difference_derivatives(f, dx);
  const auto dr = spectral_derivative(real, dx);
  const auto fdr = finite_difference_derivative(real, dx);
  const auto fdr2 = finite_difference_second_derivative(real, dx);
  double spec = 0.0, spec2 = 0.0, fd4 = 0.0, spec_r = 0.0, fd_r = 0.0, fd_r2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = dx * j;
    spec = std::max(spec, std::abs(d.first[j] - Complex(0, 3) * f[j]));
    spec2 = std::max(spec2, std::abs(d.second[j] + 9.0 * f[j]));
    fd4 = std::max(fd4, std::abs(fd.second[j] + 9.0 * f[j]));
    spec_r = std::max(spec_r, std::abs(dr[j] - 2.0 * std::cos(2.0 * x)));
    fd_r = std::max(fd_r, std::abs(fdr[j] - 2.0 * std::cos(2.0 * x)));
    fd_r2 = std::max(fd_r2, std::abs(fdr2[j] + 4.0 * std::sin(2.0 * x)));
  }
  CHECK(spec < 1e-12);
  // Input rounding is amplified by k_max^2 = 4096.
  CHECK(spec2 < 4096.0 * 1e-14);
  // Fourth-order truncation error k^6 dx^4 / 90 for the second derivative.
  CHECK(fd4 < 729.0 * std::pow(dx, 4) / 90.0 * 1.1);
  CHECK(fd4 > 729.0 * std::pow(dx, 4) / 90.0 * 0.9);
  CHECK(spec_r < 1e-12);
  CHECK(fd_r < 1e-5);
  CHECK(fd_r2 < 1e-5);
}

TEST_CASE("finite differences converge at fourth order") {
  auto err = [](std::size_t n) {
    const double dx = 2.0 * std::numbers::pi / static_cast<double>(n);
    std::vector<double> f(n);
    for (std::size_t j = 0; j < n; ++j) f[j] = std::sin(dx * j);
    const auto d = finite_difference_derivative(f, dx);
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(d[j] - std::cos(dx * j)));
    return worst;
  };
  CHECK(std::log2(err(32) / err(64)) == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("grids") {
  const auto g = Grid::symmetric(1024, 12.0);
  CHECK(g.coordinate(512) == 0.0);
  CHECK(g.coordinate(0) == -12.0);
  CHECK(g.upper() == doctest::Approx(12.0));
  const auto p = g.conjugate();
  CHECK(p.spacing == doctest::Approx(2.0 * std::numbers::pi / 24.0));
  CHECK(p.coordinate(512) == 0.0);
  const auto b = Grid::balanced(256);
  CHECK(b.conjugate().spacing == doctest::Approx(b.spacing).epsilon(1e-15));
  CHECK(b.conjugate().origin == doctest::Approx(b.origin).epsilon(1e-15));
  CHECK_THROWS_AS(validate_grid(Grid{0.0, 1.0, 100}), Error);
  CHECK_THROWS_AS(validate_grid(Grid{0.0, -1.0, 64}), Error);
  CHECK(is_power_of_two(64));
  CHECK_FALSE(is_power_of_two(96));
}

}

#pragma once

// FFT-backed kernels on periodic grids. Transforms used for time stepping run
// in double precision; derivative kernels run in extended precision so that
// ratios such as psi''/psi stay accurate where |psi| is many orders below its
// peak.

#include <complex>
#include <span>
#include <vector>

namespace implicate {

using Complex = std::complex<double>;

/// Unnormalized forward DFT: out_k = sum_j in_j exp(-2 pi i jk/N).
void fft_forward(std::span<const Complex> in, std::span<Complex> out);
/// Unnormalized inverse DFT: out_j = sum_k in_k exp(+2 pi i jk/N).
void fft_inverse(std::span<const Complex> in, std::span<Complex> out);

/// Same transforms evaluated in extended precision and rounded to double.
void fft_forward_extended(std::span<const Complex> in, std::span<Complex> out);
void fft_inverse_extended(std::span<const Complex> in, std::span<Complex> out);

/// Angular wavenumbers in FFT order for N points of the given spacing.
std::vector<double> angular_wavenumbers(std::size_t n, double spacing);

struct Derivatives {
  std::vector<Complex> first;
  std::vector<Complex> second;
};

enum class Differentiation { spectral, finite_difference };

/// First and second derivatives of a periodic sample sequence.
Derivatives spectral_derivatives(std::span<const Complex> f, double spacing);

/// Fourth-order central differences, periodic wrap-around.
Derivatives finite_difference_derivatives(std::span<const Complex> f, double spacing);

Derivatives derivatives(std::span<const Complex> f, double spacing, Differentiation method);

/// d/dx of a real periodic sequence.
std::vector<double> spectral_derivative(std::span<const double> f, double spacing);
std::vector<double> finite_difference_derivative(std::span<const double> f, double spacing);
std::vector<double> finite_difference_second_derivative(std::span<const double> f,
                                                        double spacing);

}  // namespace implicate

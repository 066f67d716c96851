#include "implicate/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "implicate/error.hpp"

namespace implicate {

namespace {

using LongComplex = std::complex<long double>;

// FFTW's planner is not re-entrant; plans are created under a lock and then
// run through the new-array interface, which is safe to call concurrently.
// FFTW_ESTIMATE keeps plan choice (and so the arithmetic) deterministic.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    for (auto& [key, plan] : long_plans_) fftwl_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    auto& plan = plans_[{n, sign}];
    if (plan == nullptr) {
      std::vector<Complex> a(n), b(n);
      plan = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(a.data()),
                              reinterpret_cast<fftw_complex*>(b.data()), sign,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    return plan;
  }

  fftwl_plan get_long(std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    auto& plan = long_plans_[{n, sign}];
    if (plan == nullptr) {
      std::vector<LongComplex> a(n), b(n);
      plan = fftwl_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftwl_complex*>(a.data()),
                               reinterpret_cast<fftwl_complex*>(b.data()), sign,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
  std::map<std::pair<std::size_t, int>, fftwl_plan> long_plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void transform(std::span<const Complex> in, std::span<Complex> out, int sign) {
  if (in.size() != out.size() || in.empty()) {
    throw Error(Errc::invalid_argument, "FFT input and output sizes differ");
  }
  if (in.data() == out.data()) {
    throw Error(Errc::invalid_argument, "FFT plans are out-of-place");
  }
  fftw_plan plan = plan_cache().get(in.size(), sign);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

void transform_long(std::vector<LongComplex>& in, std::vector<LongComplex>& out, int sign) {
  fftwl_plan plan = plan_cache().get_long(in.size(), sign);
  fftwl_execute_dft(plan, reinterpret_cast<fftwl_complex*>(in.data()),
                    reinterpret_cast<fftwl_complex*>(out.data()));
}

std::vector<long double> long_wavenumbers(std::size_t n, double spacing) {
  const long double dk = 2.0L * std::numbers::pi_v<long double> /
                         (static_cast<long double>(n) * static_cast<long double>(spacing));
  std::vector<long double> k(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto signed_index = (j < n / 2) ? static_cast<long double>(j)
                                          : static_cast<long double>(j) - static_cast<long double>(n);
    k[j] = dk * signed_index;
  }
  return k;
}

}  // namespace

void fft_forward(std::span<const Complex> in, std::span<Complex> out) {
  transform(in, out, FFTW_FORWARD);
}

void fft_inverse(std::span<const Complex> in, std::span<Complex> out) {
  transform(in, out, FFTW_BACKWARD);
}

namespace {

void transform_extended(std::span<const Complex> in, std::span<Complex> out, int sign) {
  if (in.size() != out.size() || in.empty()) {
    throw Error(Errc::invalid_argument, "FFT input and output sizes differ");
  }
  std::vector<LongComplex> a(in.size()), b(in.size());
  for (std::size_t j = 0; j < in.size(); ++j) a[j] = LongComplex(in[j].real(), in[j].imag());
  transform_long(a, b, sign);
  for (std::size_t j = 0; j < in.size(); ++j) {
    out[j] = Complex(static_cast<double>(b[j].real()), static_cast<double>(b[j].imag()));
  }
}

}  // namespace

void fft_forward_extended(std::span<const Complex> in, std::span<Complex> out) {
  transform_extended(in, out, FFTW_FORWARD);
}

void fft_inverse_extended(std::span<const Complex> in, std::span<Complex> out) {
  transform_extended(in, out, FFTW_BACKWARD);
}

std::vector<double> angular_wavenumbers(std::size_t n, double spacing) {
  const auto k = long_wavenumbers(n, spacing);
  return {k.begin(), k.end()};
}

Derivatives spectral_derivatives(std::span<const Complex> f, double spacing) {
  const std::size_t n = f.size();
  if (n < 4) throw Error(Errc::invalid_argument, "spectral derivative needs at least 4 points");
  std::vector<LongComplex> samples(n), coeffs(n), work(n), back(n);
  for (std::size_t j = 0; j < n; ++j) samples[j] = LongComplex(f[j].real(), f[j].imag());
  transform_long(samples, coeffs, FFTW_FORWARD);

  const auto k = long_wavenumbers(n, spacing);
  const long double inv_n = 1.0L / static_cast<long double>(n);
  Derivatives out{std::vector<Complex>(n), std::vector<Complex>(n)};

  // First derivative: the Nyquist mode has no odd partner and is dropped.
  for (std::size_t j = 0; j < n; ++j) {
    work[j] = (j == n / 2) ? LongComplex{} : coeffs[j] * LongComplex(0.0L, k[j]);
  }
  transform_long(work, back, FFTW_BACKWARD);
  for (std::size_t j = 0; j < n; ++j) {
    out.first[j] = Complex(static_cast<double>(back[j].real() * inv_n),
                           static_cast<double>(back[j].imag() * inv_n));
  }

  for (std::size_t j = 0; j < n; ++j) work[j] = -coeffs[j] * (k[j] * k[j]);
  transform_long(work, back, FFTW_BACKWARD);
  for (std::size_t j = 0; j < n; ++j) {
    out.second[j] = Complex(static_cast<double>(back[j].real() * inv_n),
                            static_cast<double>(back[j].imag() * inv_n));
  }
  return out;
}

Derivatives finite_difference_derivatives(std::span<const Complex> f, double spacing) {
  const std::size_t n = f.size();
  if (n < 5) throw Error(Errc::invalid_argument, "finite differences need at least 5 points");
  Derivatives out{std::vector<Complex>(n), std::vector<Complex>(n)};
  const double h = spacing;
  for (std::size_t j = 0; j < n; ++j) {
    const Complex m2 = f[(j + n - 2) % n], m1 = f[(j + n - 1) % n], c = f[j];
    const Complex p1 = f[(j + 1) % n], p2 = f[(j + 2) % n];
    out.first[j] = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    out.second[j] = (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h);
  }
  return out;
}

Derivatives derivatives(std::span<const Complex> f, double spacing, Differentiation method) {
  return method == Differentiation::spectral ? spectral_derivatives(f, spacing)
                                             : finite_difference_derivatives(f, spacing);
}

std::vector<double> spectral_derivative(std::span<const double> f, double spacing) {
  std::vector<Complex> c(f.begin(), f.end());
  const auto d = spectral_derivatives(c, spacing);
  std::vector<double> out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = d.first[j].real();
  return out;
}

std::vector<double> finite_difference_derivative(std::span<const double> f, double spacing) {
  std::vector<Complex> c(f.begin(), f.end());
  const auto d = finite_difference_derivatives(c, spacing);
  std::vector<double> out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = d.first[j].real();
  return out;
}

std::vector<double> finite_difference_second_derivative(std::span<const double> f,
                                                        double spacing) {
  std::vector<Complex> c(f.begin(), f.end());
  const auto d = finite_difference_derivatives(c, spacing);
  std::vector<double> out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = d.second[j].real();
  return out;
}

}  // namespace implicate

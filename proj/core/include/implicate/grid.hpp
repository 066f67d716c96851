#pragma once

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

namespace implicate {

using Complex = std::complex<double>;

enum class Representation { position, momentum };

std::string_view to_string(Representation rep) noexcept;

/// Uniform periodic grid: points origin + j * spacing for j in [0, size).
struct Grid {
  double origin = 0.0;
  double spacing = 1.0;
  std::size_t size = 0;

  double coordinate(std::size_t j) const noexcept {
    return origin + spacing * static_cast<double>(j);
  }
  double length() const noexcept { return spacing * static_cast<double>(size); }
  /// One period past the last point.
  double upper() const noexcept { return origin + length(); }

  /// N points covering [-half_width, half_width); x = 0 is the point N/2.
  static Grid symmetric(std::size_t size, double half_width);
  /// Symmetric grid with spacing sqrt(2 pi / N), which makes the position
  /// and momentum grids identical point for point.
  static Grid balanced(std::size_t size);

  /// Momentum grid paired with this one by the discrete Fourier transform:
  /// spacing 2 pi / (N dx), centred on p = 0 at index N/2.
  Grid conjugate() const;

  friend bool operator==(const Grid&, const Grid&) = default;
};

/// Throws unless `size` is a power of two no smaller than 4.
void validate_grid(const Grid& grid);

bool is_power_of_two(std::size_t n) noexcept;

struct WaveField {
  Representation representation = Representation::position;
  Grid grid;
  std::vector<Complex> values;
  double time = 0.0;

  /// sum |psi|^2 * spacing
  double norm_squared() const noexcept;
  void normalize();
};

/// <a, b> = sum conj(a_j) b_j * spacing
Complex inner_product(const std::vector<Complex>& a, const std::vector<Complex>& b,
                      double spacing);

}  // namespace implicate

#include "implicate/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "implicate/error.hpp"

namespace implicate {

std::string_view to_string(Representation rep) noexcept {
  return rep == Representation::position ? "position" : "momentum";
}

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

void validate_grid(const Grid& grid) {
  if (!is_power_of_two(grid.size) || grid.size < 4) {
    throw Error(Errc::invalid_argument,
                "grid size must be a power of two >= 4, got " + std::to_string(grid.size));
  }
  if (!(grid.spacing > 0.0) || !std::isfinite(grid.spacing) || !std::isfinite(grid.origin)) {
    throw Error(Errc::invalid_argument, "grid spacing must be positive and finite");
  }
}

Grid Grid::symmetric(std::size_t size, double half_width) {
  Grid g{-half_width, 2.0 * half_width / static_cast<double>(size), size};
  validate_grid(g);
  return g;
}

Grid Grid::balanced(std::size_t size) {
  const double spacing = std::sqrt(2.0 * std::numbers::pi / static_cast<double>(size));
  return symmetric(size, 0.5 * spacing * static_cast<double>(size));
}

Grid Grid::conjugate() const {
  const double dp = 2.0 * std::numbers::pi / length();
  return Grid{-dp * static_cast<double>(size / 2), dp, size};
}

double WaveField::norm_squared() const noexcept {
  double sum = 0.0;
  for (const auto& v : values) sum += std::norm(v);
  return sum * grid.spacing;
}

void WaveField::normalize() {
  const double n2 = norm_squared();
  if (!(n2 > 0.0)) throw Error(Errc::zero_field, "cannot normalize an all-zero field");
  const double scale = 1.0 / std::sqrt(n2);
  for (auto& v : values) v *= scale;
}

Complex inner_product(const std::vector<Complex>& a, const std::vector<Complex>& b,
                      double spacing) {
  Complex sum{};
  for (std::size_t j = 0; j < a.size(); ++j) sum += std::conj(a[j]) * b[j];
  return sum * spacing;
}

}  // namespace implicate

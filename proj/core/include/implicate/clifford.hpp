#pragma once

// Dense complex Clifford algebras C(p,q) with blades encoded as bitmasks over
// the generators. Bit i of a mask stands for generator e_{i+1}; the first p
// generators square to +1 and the remaining q to -1.

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace implicate {

using Complex = std::complex<double>;
using BladeMask = std::uint32_t;

inline constexpr int kMaxGenerators = 6;

struct Signature {
  int p = 0;
  int q = 0;

  int dimension() const noexcept { return p + q; }
  std::size_t blade_count() const noexcept { return std::size_t{1} << dimension(); }

  friend bool operator==(Signature, Signature) = default;
};

std::string to_string(Signature sig);

int blade_grade(BladeMask blade) noexcept;

/// Human-readable blade label: "1", "e1", "e1e3", ...
std::string blade_name(BladeMask blade);

/// Product table of the algebra. Entry (a, b) is the sign s such that
/// blade(a) * blade(b) = s * blade(a ^ b).
class AlgebraTable {
 public:
  explicit AlgebraTable(Signature sig);

  Signature signature() const noexcept { return sig_; }
  std::size_t size() const noexcept { return size_; }

  /// Blades sorted by grade, then lexicographically by generator index.
  std::span<const BladeMask> blades() const noexcept { return blades_; }

  int product_sign(BladeMask a, BladeMask b) const noexcept {
    return signs_[static_cast<std::size_t>(a) * size_ + b];
  }

 private:
  Signature sig_;
  std::size_t size_;
  std::vector<BladeMask> blades_;
  std::vector<std::int8_t> signs_;
};

/// Returns the (shared, immutable) table for `sig`. Tables are built once per
/// signature and may be read from any thread.
std::shared_ptr<const AlgebraTable> make_algebra(Signature sig);

class Multivector {
 public:
  explicit Multivector(std::shared_ptr<const AlgebraTable> algebra);

  static Multivector scalar(std::shared_ptr<const AlgebraTable> algebra, Complex value);
  static Multivector blade(std::shared_ptr<const AlgebraTable> algebra, BladeMask blade,
                           Complex value = 1.0);
  /// Generator e_index, 1-based like the usual notation.
  static Multivector generator(std::shared_ptr<const AlgebraTable> algebra, int index);

  const AlgebraTable& algebra() const noexcept { return *algebra_; }
  const std::shared_ptr<const AlgebraTable>& algebra_ptr() const noexcept { return algebra_; }
  Signature signature() const noexcept { return algebra_->signature(); }

  Complex operator[](BladeMask blade) const { return coeffs_.at(blade); }
  Complex& operator[](BladeMask blade) { return coeffs_.at(blade); }

  std::span<const Complex> coefficients() const noexcept { return coeffs_; }
  Complex scalar_part() const noexcept { return coeffs_[0]; }

  Multivector& operator+=(const Multivector& other);
  Multivector& operator-=(const Multivector& other);
  Multivector& operator*=(Complex factor);

  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator*(Multivector a, Complex s) { return a *= s; }
  friend Multivector operator*(Complex s, Multivector a) { return a *= s; }
  friend Multivector operator*(const Multivector& a, const Multivector& b);

 private:
  std::shared_ptr<const AlgebraTable> algebra_;
  std::vector<Complex> coeffs_;
};

Multivector geometric_product(const Multivector& a, const Multivector& b);

/// The tilde operation: generator order reversed in every blade and the
/// coefficients complex-conjugated. In C(3,0) this is the Hermitian
/// conjugate of the Pauli-matrix image.
Multivector reversion(const Multivector& a);

Multivector grade_project(const Multivector& a, int grade);

Multivector commutator(const Multivector& a, const Multivector& b);
Multivector anticommutator(const Multivector& a, const Multivector& b);

/// Largest coefficient deviation over all blades.
double max_abs_difference(const Multivector& a, const Multivector& b);
double max_abs_coefficient(const Multivector& a);

// ---- C(3,0) and the Pauli matrices ----------------------------------------

/// e1, e2, e3 -> sigma_1, sigma_2, sigma_3, extended as an algebra map.
Eigen::Matrix2cd matrix_rep(const Multivector& a);

/// Unique preimage of `m` with real blade coefficients (the real algebra
/// C(3,0) is isomorphic to the 2x2 complex matrices).
Multivector from_pauli_matrix(const Eigen::Matrix2cd& m);

/// Matrix trace of the Pauli image: 2 (scalar + i pseudoscalar part).
Complex trace(const Multivector& a);

}  // namespace implicate

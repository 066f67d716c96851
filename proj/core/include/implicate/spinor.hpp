#pragma once

// Pauli algebraic spinors: elements of the minimal left ideal C(3,0) E
// generated by a primitive idempotent E = (1 + n.sigma)/2, their link to
// ordinary two-component spinors, and the density element rho = Psi Psi~.

#include <array>
#include <complex>

#include <Eigen/Core>

#include "implicate/clifford.hpp"

namespace implicate {

using Vec3 = std::array<double, 3>;

inline constexpr Vec3 kAxisX{1.0, 0.0, 0.0};
inline constexpr Vec3 kAxisZ{0.0, 0.0, 1.0};

class Idempotent {
 public:
  const Multivector& element() const noexcept { return element_; }
  const Vec3& axis() const noexcept { return axis_; }

 private:
  friend Idempotent standard_idempotent(const Vec3& axis);
  Idempotent(Multivector element, Vec3 axis) : element_(std::move(element)), axis_(axis) {}

  Multivector element_;
  Vec3 axis_;
};

/// (1 + n1 e1 + n2 e2 + n3 e3) / 2 for a unit vector n (|n| = 1 within 1e-12).
Idempotent standard_idempotent(const Vec3& axis);

struct ColumnSpinor {
  Complex up;
  Complex down;

  double norm_squared() const noexcept { return std::norm(up) + std::norm(down); }
};

/// Psi = (g0 + g1 e2e3 + g2 e1e3 + g3 e1e2) E with real g, in the ideal of the
/// z-axis idempotent.
class AlgebraicSpinor {
 public:
  /// Validates Psi E = Psi and that `element` lies in C(3,0).
  static AlgebraicSpinor from_element(Multivector element, const Idempotent& idempotent);
  static AlgebraicSpinor from_components(const std::array<double, 4>& g,
                                         const Idempotent& idempotent);

  const Multivector& element() const noexcept { return element_; }
  const Idempotent& idempotent() const noexcept { return idempotent_; }
  /// The four real rotor coordinates (g0, g1, g2, g3).
  const std::array<double, 4>& components() const noexcept { return g_; }

  double norm_squared() const noexcept;

 private:
  AlgebraicSpinor(Multivector element, Idempotent idempotent, std::array<double, 4> g)
      : element_(std::move(element)), idempotent_(std::move(idempotent)), g_(g) {}

  Multivector element_;
  Idempotent idempotent_;
  std::array<double, 4> g_;
};

AlgebraicSpinor column_to_algebraic(const ColumnSpinor& psi, const Idempotent& idempotent);
ColumnSpinor algebraic_to_column(const AlgebraicSpinor& psi);

struct PolarDecomposition {
  Multivector positive;  // R: Hermitian positive semi-definite image
  Multivector unitary;   // U: unitary image
  bool unique = true;    // false when R is singular and U is one of many choices
};

/// Psi = R U with R = sqrt(Psi Psi~). Ideal elements always have rank one,
/// so `unique` is false for them; U is then completed to an SU(2) element.
PolarDecomposition polar_decompose(const AlgebraicSpinor& psi);
PolarDecomposition polar_decompose(const Multivector& a);

class DensityElement {
 public:
  const Multivector& element() const noexcept { return element_; }
  const Vec3& axis() const noexcept { return axis_; }

 private:
  friend DensityElement density_element(const AlgebraicSpinor& psi);
  friend DensityElement make_density_element(Multivector element, const Vec3& axis);
  DensityElement(Multivector element, Vec3 axis) : element_(std::move(element)), axis_(axis) {}

  Multivector element_;
  Vec3 axis_;
};

/// rho_c = Psi Psi~ for a spinor of unit norm (tolerance 1e-9).
DensityElement density_element(const AlgebraicSpinor& psi);

/// Wraps an arbitrary C(3,0) element, e.g. the maximally mixed 1/2, so that
/// purity can be tested on things that are not built from a spinor.
DensityElement make_density_element(Multivector element, const Vec3& axis = kAxisZ);

/// max blade deviation of rho^2 from rho below `tol`.
bool is_pure(const DensityElement& rho, double tol = 1e-12);

// ---- rotors ---------------------------------------------------------------

/// Even-grade unit element R with R e3 R~ = n.e (rotation taking z onto n).
Multivector rotor_from_z(const Vec3& axis);

/// R a R~.
Multivector rotate(const Multivector& a, const Multivector& rotor);

/// The normalized spinor whose density element is standard_idempotent(n).
ColumnSpinor spin_up_along(const Vec3& axis);

}  // namespace implicate

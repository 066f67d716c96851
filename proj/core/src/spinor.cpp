#include "implicate/spinor.hpp"

#include <cmath>

#include <Eigen/SVD>

#include "implicate/error.hpp"

namespace implicate {

namespace {

constexpr BladeMask kE1 = 1, kE2 = 2, kE3 = 4;
constexpr double kUnitTolerance = 1e-12;
constexpr double kNormTolerance = 1e-9;

const std::shared_ptr<const AlgebraTable>& pauli_algebra() {
  static const auto algebra = make_algebra({3, 0});
  return algebra;
}

double length(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

void require_unit(const Vec3& n) {
  if (std::abs(length(n) - 1.0) > kUnitTolerance) {
    throw Error(Errc::non_unit_vector, "axis must have unit length, got |n| = " +
                                           std::to_string(length(n)));
  }
}

bool is_z_axis(const Vec3& n) {
  return std::abs(n[0]) <= kUnitTolerance && std::abs(n[1]) <= kUnitTolerance &&
         std::abs(n[2] - 1.0) <= kUnitTolerance;
}

Multivector vector_element(const Vec3& n) {
  Multivector v(pauli_algebra());
  v[kE1] = n[0];
  v[kE2] = n[1];
  v[kE3] = n[2];
  return v;
}

Multivector rotor_part(const std::array<double, 4>& g) {
  Multivector r(pauli_algebra());
  r[0] = g[0];
  r[kE2 | kE3] = g[1];
  r[kE1 | kE3] = g[2];
  r[kE1 | kE2] = g[3];
  return r;
}

// SU(2) completion of a unit vector: (-conj b, conj a).
Eigen::Vector2cd orthogonal_partner(const Eigen::Vector2cd& v) {
  return Eigen::Vector2cd(-std::conj(v(1)), std::conj(v(0)));
}

}  // namespace

Idempotent standard_idempotent(const Vec3& axis) {
  require_unit(axis);
  Multivector e = Multivector::scalar(pauli_algebra(), 0.5);
  e[kE1] = 0.5 * axis[0];
  e[kE2] = 0.5 * axis[1];
  e[kE3] = 0.5 * axis[2];
  return Idempotent(std::move(e), axis);
}

AlgebraicSpinor AlgebraicSpinor::from_components(const std::array<double, 4>& g,
                                                 const Idempotent& idempotent) {
  if (!is_z_axis(idempotent.axis())) {
    throw Error(Errc::wrong_idempotent, "the rotor dictionary is defined for E = (1 + e3)/2");
  }
  return AlgebraicSpinor(rotor_part(g) * idempotent.element(), idempotent, g);
}

AlgebraicSpinor AlgebraicSpinor::from_element(Multivector element, const Idempotent& idempotent) {
  if (element.signature() != Signature{3, 0}) {
    throw Error(Errc::unsupported_signature, "algebraic spinors live in C(3,0)");
  }
  if (!is_z_axis(idempotent.axis())) {
    throw Error(Errc::wrong_idempotent, "the rotor dictionary is defined for E = (1 + e3)/2");
  }
  const double scale = std::max(1.0, max_abs_coefficient(element));
  if (max_abs_difference(element * idempotent.element(), element) > 1e-12 * scale) {
    throw Error(Errc::not_in_ideal, "element is not fixed by right multiplication with E");
  }
  // The first column of the Pauli image is (g0 + i g3, g2 + i g1).
  const Eigen::Matrix2cd m = matrix_rep(element);
  const std::array<double, 4> g{m(0, 0).real(), m(1, 0).imag(), m(1, 0).real(), m(0, 0).imag()};
  auto rebuilt = rotor_part(g) * idempotent.element();
  if (max_abs_difference(rebuilt, element) > 1e-12 * scale) {
    throw Error(Errc::not_in_ideal, "element is not of the form (real rotor) * E");
  }
  return AlgebraicSpinor(std::move(element), idempotent, g);
}

double AlgebraicSpinor::norm_squared() const noexcept {
  return g_[0] * g_[0] + g_[1] * g_[1] + g_[2] * g_[2] + g_[3] * g_[3];
}

AlgebraicSpinor column_to_algebraic(const ColumnSpinor& psi, const Idempotent& idempotent) {
  const Complex i(0.0, 1.0);
  const Complex p1 = psi.up, p2 = psi.down;
  const std::array<double, 4> g{
      ((std::conj(p1) + p1) / 2.0).real(),
      (i * (std::conj(p2) - p2) / 2.0).real(),
      ((std::conj(p2) + p2) / 2.0).real(),
      (i * (std::conj(p1) - p1) / 2.0).real(),
  };
  return AlgebraicSpinor::from_components(g, idempotent);
}

ColumnSpinor algebraic_to_column(const AlgebraicSpinor& psi) {
  const auto& g = psi.components();
  return ColumnSpinor{Complex(g[0], g[3]), Complex(g[2], g[1])};
}

PolarDecomposition polar_decompose(const Multivector& a) {
  const Eigen::Matrix2cd m = matrix_rep(a);
  if (m.cwiseAbs().maxCoeff() == 0.0) {
    throw Error(Errc::zero_spinor, "cannot polar-decompose the zero element");
  }
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector2d sigma = svd.singularValues();
  Eigen::Matrix2cd left = svd.matrixU();
  Eigen::Matrix2cd right = svd.matrixV();

  PolarDecomposition out{Multivector(a.algebra_ptr()), Multivector(a.algebra_ptr()), true};
  if (sigma(1) <= 1e-12 * sigma(0)) {
    out.unique = false;
    left.col(1) = orthogonal_partner(left.col(0));
    right.col(1) = orthogonal_partner(right.col(0));
  }
  const Eigen::Matrix2cd r = left * sigma.asDiagonal() * left.adjoint();
  const Eigen::Matrix2cd u = left * right.adjoint();
  out.positive = from_pauli_matrix(r);
  out.unitary = from_pauli_matrix(u);
  return out;
}

PolarDecomposition polar_decompose(const AlgebraicSpinor& psi) {
  return polar_decompose(psi.element());
}

DensityElement density_element(const AlgebraicSpinor& psi) {
  const double n2 = psi.norm_squared();
  if (std::abs(n2 - 1.0) > kNormTolerance) {
    throw Error(Errc::not_normalized,
                "density element needs a unit spinor, got norm^2 = " + std::to_string(n2));
  }
  return DensityElement(psi.element() * reversion(psi.element()), psi.idempotent().axis());
}

DensityElement make_density_element(Multivector element, const Vec3& axis) {
  return DensityElement(std::move(element), axis);
}

bool is_pure(const DensityElement& rho, double tol) {
  return max_abs_difference(rho.element() * rho.element(), rho.element()) < tol;
}

Multivector rotor_from_z(const Vec3& axis) {
  require_unit(axis);
  const double c = axis[2];
  if (1.0 + c < 1e-12) {
    // Antiparallel: half-turn in the e1e3 plane.
    return Multivector::blade(pauli_algebra(), kE1 | kE3);
  }
  // (1 + n e3) / sqrt(2 (1 + n.e3)) maps e3 onto n under R a R~.
  Multivector r = Multivector::scalar(pauli_algebra(), 1.0) +
                  vector_element(axis) * Multivector::blade(pauli_algebra(), kE3);
  return r * Complex(1.0 / std::sqrt(2.0 * (1.0 + c)));
}

Multivector rotate(const Multivector& a, const Multivector& rotor) {
  return rotor * a * reversion(rotor);
}

ColumnSpinor spin_up_along(const Vec3& axis) {
  const Eigen::Matrix2cd m = matrix_rep(rotor_from_z(axis));
  return ColumnSpinor{m(0, 0), m(1, 0)};
}

}  // namespace implicate

#pragma once

// Projection lattices of small Hilbert spaces (d <= 4): meet, join and
// orthocomplement, orthomodularity, Boolean blocks, and sequential
// projective filtering.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "implicate/spinor.hpp"

namespace implicate {

using ComplexMatrix = Eigen::MatrixXcd;

class Projection {
 public:
  /// Throws Errc::not_a_projection unless m is Hermitian and idempotent to
  /// 1e-12 with eigenvalues in {0, 1} to 1e-10.
  explicit Projection(ComplexMatrix m, std::string label = {});

  static Projection zero(std::size_t dimension);
  static Projection identity(std::size_t dimension);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  std::size_t rank() const;
  const std::string& label() const noexcept { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

 private:
  ComplexMatrix m_;
  std::string label_;
};

/// (I + sign n.sigma)/2, the matrix image of standard_idempotent(sign n).
Projection projection_from_axis(const Vec3& axis, int sign);

Projection complement(const Projection& p);
/// Projection onto range(P) intersect range(Q).
Projection meet(const Projection& p, const Projection& q);
Projection join(const Projection& p, const Projection& q);

bool equivalent(const Projection& p, const Projection& q, double tol = 1e-10);
/// P <= Q, i.e. range(P) inside range(Q).
bool less_equal(const Projection& p, const Projection& q, double tol = 1e-10);
bool commute(const Projection& p, const Projection& q, double tol = 1e-10);

class ProjectionLattice {
 public:
  static constexpr std::size_t kMaxElements = 64;

  /// Closure of {0, I} and the generators under meet, join and complement.
  /// Throws Errc::lattice_too_large past kMaxElements.
  static ProjectionLattice generate(const std::vector<Projection>& generators);
  /// Takes the set as given; checks that need closure test it themselves.
  static ProjectionLattice from_elements(std::vector<Projection> elements);

  const std::vector<Projection>& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  /// Index of the element equivalent to p, or size() when absent.
  std::size_t find(const Projection& p) const;
  bool is_closed() const;

 private:
  explicit ProjectionLattice(std::vector<Projection> elements) : elements_(std::move(elements)) {}
  std::vector<Projection> elements_;
};

struct OrthomodularReport {
  std::size_t comparable_pairs = 0;
  std::size_t violations = 0;
  double max_deviation = 0.0;
  bool passed() const noexcept { return violations == 0; }
};

/// For every P <= Q checks Q = P v (Q ^ P'). Throws Errc::lattice_not_closed
/// on an open set.
OrthomodularReport orthomodular_check(const ProjectionLattice& lattice);

struct DistributivityTest {
  Projection lhs;  // A ^ (B v C)
  Projection rhs;  // (A ^ B) v (A ^ C)
  double gap = 0.0;
  bool holds() const noexcept { return gap <= 1e-10; }
};

DistributivityTest test_distributivity(const Projection& a, const Projection& b,
                                       const Projection& c);

struct DistributivityCounterexample {
  Projection a, b, c;
  DistributivityTest test;
  /// lhs equals A and rhs equals 0.
  bool certified = false;
};

/// A = P_z+, B = P_x+, C = P_x-.
DistributivityCounterexample distributivity_counterexample();

struct BooleanBlock {
  std::vector<std::size_t> members;  // indices into the lattice
  bool distributive = false;
};

/// Maximal mutually commuting subsets, each swept for distributivity over
/// all of its triples.
std::vector<BooleanBlock> boolean_blocks(const ProjectionLattice& lattice);

struct FilterResult {
  ComplexMatrix state;
  std::vector<double> probabilities;
};

/// Lueders update per stage: p = tr(P rho P), rho -> P rho P / p. Throws
/// Errc::zero_probability when a stage passes less than 1e-12.
FilterResult sequential_filter(const std::vector<Projection>& filters, const ComplexMatrix& rho);
FilterResult sequential_filter(const std::vector<Projection>& filters, const ColumnSpinor& psi);

/// tr(rho E).
double expectation(const ComplexMatrix& rho, const Projection& e);

}  // namespace implicate

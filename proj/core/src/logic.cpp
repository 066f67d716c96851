#include "implicate/logic.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "implicate/error.hpp"

namespace implicate {

namespace {

constexpr double kStructureTol = 1e-12;
constexpr double kSpectrumTol = 1e-10;
constexpr double kNullThreshold = 1e-10;
constexpr double kMinProbability = 1e-12;

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

void same_dimension(const Projection& p, const Projection& q) {
  if (p.dimension() != q.dimension()) {
    throw Error(Errc::dimension_mismatch, "projections act on spaces of different dimension");
  }
}

}  // namespace

Projection::Projection(ComplexMatrix m, std::string label) : m_(std::move(m)), label_(std::move(label)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1 || m_.rows() > 4) {
    throw Error(Errc::not_a_projection, "projection must be square with dimension 1 to 4");
  }
  if (max_abs(m_ - m_.adjoint()) > kStructureTol) {
    throw Error(Errc::not_a_projection, "matrix is not Hermitian");
  }
  if (max_abs(m_ * m_ - m_) > kStructureTol) {
    throw Error(Errc::not_a_projection, "matrix is not idempotent");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(m_, Eigen::EigenvaluesOnly);
  for (double ev : eig.eigenvalues()) {
    if (std::min(std::abs(ev), std::abs(ev - 1.0)) > kSpectrumTol) {
      throw Error(Errc::not_a_projection, "eigenvalue outside {0, 1}");
    }
  }
}

Projection Projection::zero(std::size_t dimension) {
  const auto d = static_cast<Eigen::Index>(dimension);
  return Projection(ComplexMatrix::Zero(d, d), "0");
}

Projection Projection::identity(std::size_t dimension) {
  const auto d = static_cast<Eigen::Index>(dimension);
  return Projection(ComplexMatrix::Identity(d, d), "I");
}

std::size_t Projection::rank() const {
  return static_cast<std::size_t>(std::lround(m_.trace().real()));
}

Projection projection_from_axis(const Vec3& axis, int sign) {
  if (sign != 1 && sign != -1) throw Error(Errc::invalid_argument, "sign must be +1 or -1");
  const Vec3 n{sign * axis[0], sign * axis[1], sign * axis[2]};
  const ComplexMatrix m = matrix_rep(standard_idempotent(n).element());
  return Projection(m);
}

Projection complement(const Projection& p) {
  const auto d = static_cast<Eigen::Index>(p.dimension());
  return Projection(ComplexMatrix::Identity(d, d) - p.matrix());
}

Projection meet(const Projection& p, const Projection& q) {
  same_dimension(p, q);
  const auto d = static_cast<Eigen::Index>(p.dimension());
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  // x is in both ranges iff ((I - P) + (I - Q)) x = 0; the sum is positive
  // semi-definite, so its null space is exactly the intersection.
  const ComplexMatrix sum = (id - p.matrix()) + (id - q.matrix());
  Eigen::JacobiSVD<ComplexMatrix> svd(sum, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    if (sv(k) < kNullThreshold) {
      const auto v = svd.matrixV().col(k);
      out += v * v.adjoint();
    }
  }
  return Projection(out);
}

Projection join(const Projection& p, const Projection& q) {
  return complement(meet(complement(p), complement(q)));
}

bool equivalent(const Projection& p, const Projection& q, double tol) {
  return p.dimension() == q.dimension() && max_abs(p.matrix() - q.matrix()) <= tol;
}

bool less_equal(const Projection& p, const Projection& q, double tol) {
  same_dimension(p, q);
  return max_abs(q.matrix() * p.matrix() - p.matrix()) <= tol;
}

bool commute(const Projection& p, const Projection& q, double tol) {
  same_dimension(p, q);
  return max_abs(p.matrix() * q.matrix() - q.matrix() * p.matrix()) <= tol;
}

ProjectionLattice ProjectionLattice::generate(const std::vector<Projection>& generators) {
  if (generators.empty()) throw Error(Errc::invalid_argument, "lattice needs at least one generator");
  const std::size_t d = generators.front().dimension();
  ProjectionLattice lattice({Projection::zero(d), Projection::identity(d)});
  auto add = [&](const Projection& p) {
    same_dimension(p, lattice.elements_.front());
    if (lattice.find(p) != lattice.size()) return false;
    if (lattice.size() == kMaxElements) {
      throw Error(Errc::lattice_too_large,
                  "closure exceeds " + std::to_string(kMaxElements) + " elements");
    }
    lattice.elements_.push_back(p);
    return true;
  };
  for (const auto& g : generators) add(g);

  // Fixed point: every pass applies all three operations to all elements.
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t i = 0; i < lattice.size(); ++i) {
      grew |= add(complement(lattice.elements_[i]));
      for (std::size_t j = i + 1; j < lattice.size(); ++j) {
        const Projection a = lattice.elements_[i], b = lattice.elements_[j];
        grew |= add(meet(a, b));
        grew |= add(join(a, b));
      }
    }
  }
  return lattice;
}

ProjectionLattice ProjectionLattice::from_elements(std::vector<Projection> elements) {
  if (elements.empty()) throw Error(Errc::invalid_argument, "lattice needs at least one element");
  for (const auto& e : elements) same_dimension(e, elements.front());
  return ProjectionLattice(std::move(elements));
}

std::size_t ProjectionLattice::find(const Projection& p) const {
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (equivalent(elements_[i], p, 1e-9)) return i;
  }
  return elements_.size();
}

bool ProjectionLattice::is_closed() const {
  const std::size_t d = elements_.front().dimension();
  if (find(Projection::zero(d)) == size() || find(Projection::identity(d)) == size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (find(complement(elements_[i])) == size()) return false;
    for (std::size_t j = i + 1; j < size(); ++j) {
      if (find(meet(elements_[i], elements_[j])) == size()) return false;
      if (find(join(elements_[i], elements_[j])) == size()) return false;
    }
  }
  return true;
}

OrthomodularReport orthomodular_check(const ProjectionLattice& lattice) {
  if (!lattice.is_closed()) {
    throw Error(Errc::lattice_not_closed, "orthomodularity is checked on closed lattices only");
  }
  OrthomodularReport report;
  const auto& e = lattice.elements();
  for (const auto& p : e) {
    for (const auto& q : e) {
      if (!less_equal(p, q)) continue;
      ++report.comparable_pairs;
      const Projection rebuilt = join(p, meet(q, complement(p)));
      const double dev = max_abs(rebuilt.matrix() - q.matrix());
      report.max_deviation = std::max(report.max_deviation, dev);
      if (dev > 1e-10) ++report.violations;
    }
  }
  return report;
}

DistributivityTest test_distributivity(const Projection& a, const Projection& b,
                                       const Projection& c) {
  Projection lhs = meet(a, join(b, c));
  Projection rhs = join(meet(a, b), meet(a, c));
  const double gap = max_abs(lhs.matrix() - rhs.matrix());
  return {std::move(lhs), std::move(rhs), gap};
}

DistributivityCounterexample distributivity_counterexample() {
  Projection a = projection_from_axis(kAxisZ, +1);
  Projection b = projection_from_axis(kAxisX, +1);
  Projection c = projection_from_axis(kAxisX, -1);
  a.set_label("P_z+");
  b.set_label("P_x+");
  c.set_label("P_x-");
  auto test = test_distributivity(a, b, c);
  const bool certified = equivalent(test.lhs, a) && equivalent(test.rhs, Projection::zero(2)) &&
                         !test.holds();
  return {std::move(a), std::move(b), std::move(c), std::move(test), certified};
}

namespace {

// Bron-Kerbosch with pivoting over an adjacency matrix.
void maximal_cliques(const std::vector<std::vector<bool>>& adj, std::vector<std::size_t> r,
                     std::vector<std::size_t> p, std::vector<std::size_t> x,
                     std::vector<std::vector<std::size_t>>& out) {
  if (p.empty() && x.empty()) {
    std::sort(r.begin(), r.end());
    out.push_back(std::move(r));
    return;
  }
  std::size_t pivot = p.empty() ? x.front() : p.front();
  std::size_t best = 0;
  for (const auto* set : {&p, &x}) {
    for (std::size_t u : *set) {
      const auto deg = static_cast<std::size_t>(
          std::count_if(p.begin(), p.end(), [&](std::size_t v) { return adj[u][v]; }));
      if (deg >= best) {
        best = deg;
        pivot = u;
      }
    }
  }
  const std::vector<std::size_t> candidates = p;
  for (std::size_t v : candidates) {
    if (adj[pivot][v]) continue;
    std::vector<std::size_t> r2 = r, p2, x2;
    r2.push_back(v);
    for (std::size_t u : p) if (adj[v][u]) p2.push_back(u);
    for (std::size_t u : x) if (adj[v][u]) x2.push_back(u);
    maximal_cliques(adj, std::move(r2), std::move(p2), std::move(x2), out);
    p.erase(std::find(p.begin(), p.end(), v));
    x.push_back(v);
  }
}

}  // namespace

std::vector<BooleanBlock> boolean_blocks(const ProjectionLattice& lattice) {
  const auto& e = lattice.elements();
  const std::size_t n = e.size();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) adj[i][j] = i != j && commute(e[i], e[j]);
  }
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  std::vector<std::vector<std::size_t>> cliques;
  maximal_cliques(adj, {}, all, {}, cliques);
  std::sort(cliques.begin(), cliques.end());

  std::vector<BooleanBlock> blocks;
  for (auto& members : cliques) {
    BooleanBlock block{std::move(members), true};
    for (std::size_t a : block.members) {
      for (std::size_t b : block.members) {
        for (std::size_t c : block.members) {
          if (!test_distributivity(e[a], e[b], e[c]).holds()) block.distributive = false;
        }
      }
    }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

FilterResult sequential_filter(const std::vector<Projection>& filters, const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols()) throw Error(Errc::dimension_mismatch, "density matrix must be square");
  if (std::abs(rho.trace().real() - 1.0) > 1e-9) {
    throw Error(Errc::not_normalized, "input state must have unit trace");
  }
  FilterResult out{rho, {}};
  for (std::size_t s = 0; s < filters.size(); ++s) {
    const auto& p = filters[s].matrix();
    if (p.rows() != out.state.rows()) {
      throw Error(Errc::dimension_mismatch, "filter and state dimensions differ");
    }
    const ComplexMatrix next = p * out.state * p;
    const double prob = next.trace().real();
    if (prob < kMinProbability) {
      throw Error(Errc::zero_probability,
                  "filter stage " + std::to_string(s + 1) + " passes nothing");
    }
    out.probabilities.push_back(prob);
    out.state = next / prob;
  }
  return out;
}

FilterResult sequential_filter(const std::vector<Projection>& filters, const ColumnSpinor& psi) {
  Eigen::Vector2cd v(psi.up, psi.down);
  return sequential_filter(filters, ComplexMatrix(v * v.adjoint()));
}

double expectation(const ComplexMatrix& rho, const Projection& e) {
  return (rho * e.matrix()).trace().real();
}

}  // namespace implicate

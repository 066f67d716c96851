#include "implicate/clifford.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>

#include "implicate/error.hpp"

namespace implicate {

namespace {

// Sign from moving the generators of b leftwards past those of a into
// canonical order.
int reorder_sign(BladeMask a, BladeMask b) noexcept {
  int swaps = 0;
  a >>= 1;
  while (a != 0) {
    swaps += std::popcount(a & b);
    a >>= 1;
  }
  return (swaps & 1) ? -1 : 1;
}

void require_same_algebra(const Multivector& a, const Multivector& b) {
  if (a.signature() != b.signature()) {
    throw Error(Errc::signature_mismatch, "multivectors from " + to_string(a.signature()) +
                                              " and " + to_string(b.signature()));
  }
}

void require_pauli(const Multivector& a) {
  if (a.signature() != Signature{3, 0}) {
    throw Error(Errc::unsupported_signature,
                "Pauli-matrix representation needs C(3,0), got " + to_string(a.signature()));
  }
}

const std::array<Eigen::Matrix2cd, 8>& pauli_blade_images() {
  static const std::array<Eigen::Matrix2cd, 8> images = [] {
    const Complex i(0.0, 1.0);
    std::array<Eigen::Matrix2cd, 3> sigma;
    sigma[0] << 0, 1, 1, 0;
    sigma[1] << 0, -i, i, 0;
    sigma[2] << 1, 0, 0, -1;
    std::array<Eigen::Matrix2cd, 8> out;
    for (BladeMask blade = 0; blade < 8; ++blade) {
      Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
      for (int g = 0; g < 3; ++g) {
        if (blade & (1u << g)) m = m * sigma[g];
      }
      out[blade] = m;
    }
    return out;
  }();
  return images;
}

}  // namespace

std::string to_string(Signature sig) {
  return "C(" + std::to_string(sig.p) + "," + std::to_string(sig.q) + ")";
}

int blade_grade(BladeMask blade) noexcept { return std::popcount(blade); }

std::string blade_name(BladeMask blade) {
  if (blade == 0) return "1";
  std::string name;
  for (int g = 0; g < 32; ++g) {
    if (blade & (1u << g)) name += "e" + std::to_string(g + 1);
  }
  return name;
}

AlgebraTable::AlgebraTable(Signature sig) : sig_(sig) {
  if (sig.p < 0 || sig.q < 0) {
    throw Error(Errc::invalid_argument, "negative signature " + to_string(sig));
  }
  if (sig.dimension() > kMaxGenerators) {
    throw Error(Errc::signature_too_large, to_string(sig) + " has more than " +
                                               std::to_string(kMaxGenerators) + " generators");
  }
  size_ = sig.blade_count();
  blades_.resize(size_);
  for (std::size_t b = 0; b < size_; ++b) blades_[b] = static_cast<BladeMask>(b);
  std::sort(blades_.begin(), blades_.end(), [](BladeMask x, BladeMask y) {
    const int gx = blade_grade(x), gy = blade_grade(y);
    if (gx != gy) return gx < gy;
    // Lexicographic by generator index: the lowest differing bit decides.
    const BladeMask diff = x ^ y;
    const BladeMask lowest = diff & (~diff + 1);
    return (x & lowest) != 0;
  });

  const BladeMask negative = ((BladeMask{1} << sig.q) - 1) << sig.p;
  signs_.resize(size_ * size_);
  for (BladeMask a = 0; a < size_; ++a) {
    for (BladeMask b = 0; b < size_; ++b) {
      int sign = reorder_sign(a, b);
      if (std::popcount(a & b & negative) & 1) sign = -sign;
      signs_[static_cast<std::size_t>(a) * size_ + b] = static_cast<std::int8_t>(sign);
    }
  }
}

std::shared_ptr<const AlgebraTable> make_algebra(Signature sig) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const AlgebraTable>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{sig.p, sig.q}];
  if (!slot) slot = std::make_shared<const AlgebraTable>(sig);
  return slot;
}

Multivector::Multivector(std::shared_ptr<const AlgebraTable> algebra)
    : algebra_(std::move(algebra)), coeffs_(algebra_->size(), Complex{}) {}

Multivector Multivector::scalar(std::shared_ptr<const AlgebraTable> algebra, Complex value) {
  Multivector m(std::move(algebra));
  m.coeffs_[0] = value;
  return m;
}

Multivector Multivector::blade(std::shared_ptr<const AlgebraTable> algebra, BladeMask blade,
                               Complex value) {
  Multivector m(std::move(algebra));
  m[blade] = value;
  return m;
}

Multivector Multivector::generator(std::shared_ptr<const AlgebraTable> algebra, int index) {
  if (index < 1 || index > algebra->signature().dimension()) {
    throw Error(Errc::invalid_argument, "generator e" + std::to_string(index) + " not in " +
                                            to_string(algebra->signature()));
  }
  return blade(std::move(algebra), BladeMask{1} << (index - 1));
}

Multivector& Multivector::operator+=(const Multivector& other) {
  require_same_algebra(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

Multivector& Multivector::operator-=(const Multivector& other) {
  require_same_algebra(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

Multivector& Multivector::operator*=(Complex factor) {
  for (auto& c : coeffs_) c *= factor;
  return *this;
}

Multivector operator*(const Multivector& a, const Multivector& b) {
  require_same_algebra(a, b);
  const auto& table = a.algebra();
  const std::size_t n = table.size();
  Multivector out(a.algebra_ptr());
  for (BladeMask x = 0; x < n; ++x) {
    const Complex ax = a.coeffs_[x];
    if (ax == Complex{}) continue;
    for (BladeMask y = 0; y < n; ++y) {
      const Complex by = b.coeffs_[y];
      if (by == Complex{}) continue;
      out.coeffs_[x ^ y] += static_cast<double>(table.product_sign(x, y)) * ax * by;
    }
  }
  return out;
}

Multivector geometric_product(const Multivector& a, const Multivector& b) { return a * b; }

Multivector reversion(const Multivector& a) {
  Multivector out(a.algebra_ptr());
  for (BladeMask blade = 0; blade < a.algebra().size(); ++blade) {
    const int k = blade_grade(blade);
    const double sign = ((k * (k - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
    out[blade] = sign * std::conj(a[blade]);
  }
  return out;
}

Multivector grade_project(const Multivector& a, int grade) {
  Multivector out(a.algebra_ptr());
  for (BladeMask blade = 0; blade < a.algebra().size(); ++blade) {
    if (blade_grade(blade) == grade) out[blade] = a[blade];
  }
  return out;
}

Multivector commutator(const Multivector& a, const Multivector& b) { return a * b - b * a; }

Multivector anticommutator(const Multivector& a, const Multivector& b) { return a * b + b * a; }

double max_abs_difference(const Multivector& a, const Multivector& b) {
  require_same_algebra(a, b);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.coefficients().size(); ++i) {
    worst = std::max(worst, std::abs(a.coefficients()[i] - b.coefficients()[i]));
  }
  return worst;
}

double max_abs_coefficient(const Multivector& a) {
  double worst = 0.0;
  for (const auto& c : a.coefficients()) worst = std::max(worst, std::abs(c));
  return worst;
}

Eigen::Matrix2cd matrix_rep(const Multivector& a) {
  require_pauli(a);
  const auto& images = pauli_blade_images();
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  for (BladeMask blade = 0; blade < 8; ++blade) m += a[blade] * images[blade];
  return m;
}

Multivector from_pauli_matrix(const Eigen::Matrix2cd& m) {
  const auto& images = pauli_blade_images();
  // m = a0 I + a_k sigma_k with a = tr(sigma^dagger m) / 2. The imaginary
  // parts go to the blades whose images are i*I and i*sigma_k.
  auto coordinate = [&](BladeMask blade) { return (images[blade].adjoint() * m).trace() / 2.0; };
  constexpr BladeMask e1 = 1, e2 = 2, e3 = 4;
  const Complex a0 = coordinate(0), a1 = coordinate(e1), a2 = coordinate(e2), a3 = coordinate(e3);

  Multivector out(make_algebra({3, 0}));
  out[0] = a0.real();
  out[e1 | e2 | e3] = a0.imag();  // e1e2e3 -> i I
  out[e1] = a1.real();
  out[e2 | e3] = a1.imag();  // e2e3 -> i sigma_1
  out[e2] = a2.real();
  out[e1 | e3] = -a2.imag();  // e1e3 -> -i sigma_2
  out[e3] = a3.real();
  out[e1 | e2] = a3.imag();  // e1e2 -> i sigma_3
  return out;
}

Complex trace(const Multivector& a) {
  require_pauli(a);
  // e1e2e3 maps to i times the identity.
  return 2.0 * (a.scalar_part() + Complex(0.0, 1.0) * a[0b111]);
}

}  // namespace implicate

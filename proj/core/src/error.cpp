#include "implicate/error.hpp"

namespace implicate {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::signature_too_large: return "signature-too-large";
    case Errc::signature_mismatch: return "signature-mismatch";
    case Errc::unsupported_signature: return "unsupported-signature";
    case Errc::non_unit_vector: return "non-unit-vector";
    case Errc::wrong_idempotent: return "wrong-idempotent";
    case Errc::not_in_ideal: return "ideal-membership-violation";
    case Errc::zero_spinor: return "zero-spinor";
    case Errc::not_normalized: return "non-normalized-input";
    case Errc::domain_overflow: return "domain-overflow";
    case Errc::unstable: return "instability";
    case Errc::insufficient_snapshots: return "insufficient-snapshots";
    case Errc::wrong_representation: return "wrong-representation";
    case Errc::zero_field: return "all-zero-field";
    case Errc::unsupported_potential: return "unsupported-potential";
    case Errc::grid_mismatch: return "grid-mismatch";
    case Errc::dimension_mismatch: return "dimension-mismatch";
    case Errc::not_a_projection: return "not-a-projection";
    case Errc::lattice_not_closed: return "lattice-not-closed";
    case Errc::lattice_too_large: return "lattice-too-large";
    case Errc::zero_probability: return "zero-probability-stage";
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::config: return "config-validation";
  }
  return "unknown";
}

}  // namespace implicate

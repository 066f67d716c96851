#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace implicate {

enum class Errc {
  signature_too_large,
  signature_mismatch,
  unsupported_signature,
  non_unit_vector,
  wrong_idempotent,
  not_in_ideal,
  zero_spinor,
  not_normalized,
  domain_overflow,
  unstable,
  insufficient_snapshots,
  wrong_representation,
  zero_field,
  unsupported_potential,
  grid_mismatch,
  dimension_mismatch,
  not_a_projection,
  lattice_not_closed,
  lattice_too_large,
  zero_probability,
  invalid_argument,
  config,
};

std::string_view to_string(Errc code) noexcept;

// All library failures are reported through this type; code() lets callers
// and tests distinguish failure classes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace implicate

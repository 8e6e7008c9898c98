#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace toph {

enum class Errc {
  // distributions
  empty_input,
  negative_probability,
  non_finite_input,
  normalization_out_of_tolerance,
  non_positive_temperature,
  empty_subset,
  zero_mass_subset,
  index_out_of_range,
  dimension_mismatch,
  gamma_out_of_range,
  non_positive_probability,
  mass_overflow,
  // truncation
  alpha_out_of_range,
  zero_k,
  nucleus_out_of_range,
  p_base_out_of_range,
  eta_out_of_range,
  invalid_candidate_cap,
  // ecmm oracle
  vocabulary_too_large,
  // hardness
  invalid_instance,
  narrow_range_violated,
  theta_out_of_bounds,
  k_too_small,
  precision_insufficient,
  wrong_cardinality,
  wrong_mass,
  too_many_heavy_items,
  // synthgen / io
  invalid_parameters,
  malformed_record,
  mixed_schema,
  io_failure,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace toph

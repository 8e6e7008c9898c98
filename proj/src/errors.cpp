#include "toph/errors.hpp"

namespace toph {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::empty_input: return "EmptyInput";
    case Errc::negative_probability: return "NegativeProbability";
    case Errc::non_finite_input: return "NonFiniteInput";
    case Errc::normalization_out_of_tolerance: return "NormalizationOutOfTolerance";
    case Errc::non_positive_temperature: return "NonPositiveTemperature";
    case Errc::empty_subset: return "EmptySubset";
    case Errc::zero_mass_subset: return "ZeroMassSubset";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::gamma_out_of_range: return "GammaOutOfRange";
    case Errc::non_positive_probability: return "NonPositiveProbability";
    case Errc::mass_overflow: return "MassOverflow";
    case Errc::alpha_out_of_range: return "AlphaOutOfRange";
    case Errc::zero_k: return "ZeroK";
    case Errc::nucleus_out_of_range: return "NucleusOutOfRange";
    case Errc::p_base_out_of_range: return "PBaseOutOfRange";
    case Errc::eta_out_of_range: return "EtaOutOfRange";
    case Errc::invalid_candidate_cap: return "InvalidCandidateCap";
    case Errc::vocabulary_too_large: return "VocabularyTooLarge";
    case Errc::invalid_instance: return "InvalidInstance";
    case Errc::narrow_range_violated: return "NarrowRangeViolated";
    case Errc::theta_out_of_bounds: return "ThetaOutOfBounds";
    case Errc::k_too_small: return "KTooSmall";
    case Errc::precision_insufficient: return "PrecisionInsufficient";
    case Errc::wrong_cardinality: return "WrongCardinality";
    case Errc::wrong_mass: return "WrongMass";
    case Errc::too_many_heavy_items: return "TooManyHeavyItems";
    case Errc::invalid_parameters: return "InvalidParameters";
    case Errc::malformed_record: return "MalformedRecord";
    case Errc::mixed_schema: return "MixedSchema";
    case Errc::io_failure: return "IoFailure";
  }
  return "Unknown";
}

}  // namespace toph

#pragma once

// JSON form of the reduction artifacts. Integers are decimal strings,
// rationals are {"num": "...", "den": "..."} objects and high-precision reals
// are decimal strings with full round-trip precision.
//
//   {"schema_version": 1, "kind": "ccss", "weights": ["3", "5", "7"], "tau": "15", "K": 3}
//   {"schema_version": 1, "kind": "ecme", "K": 21, "tau": "...", "heavy_weights": [...],
//    "heavy_probs": [...], "booster_count": "...", "booster_prob": {...}, "beta": {...},
//    "heavy_entropy": "...", "booster_entropy": "...", "entropy": "...", "budget": "...",
//    "constants": {"gamma_K", "theta_K", "delta_K", "epsilon_K", "lambda_K", "B", "w_b", "W"}}
//
// Parsing takes every stored field at face value, so an edited budget is
// what the verifiers see.

#include "json.hpp"

#include "toph/hardness.hpp"

namespace toph::hardness {

inline constexpr int kHardnessSchemaVersion = 1;

nlohmann::ordered_json to_json(const CcssInstance& instance);
nlohmann::ordered_json to_json(const EcmeInstance& instance);

/// "ccss" or "ecme"; throws Errc::invalid_instance for anything else.
std::string instance_kind(const nlohmann::json& value);

/// Throw Errc::invalid_instance on missing or ill-typed fields.
CcssInstance ccss_from_json(const nlohmann::json& value);
EcmeInstance ecme_from_json(const nlohmann::json& value);

std::string to_string(const HighFloat& value);

}  // namespace toph::hardness

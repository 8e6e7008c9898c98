#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toph/distributions.hpp"

namespace toph {

enum class Family { zipf, dirichlet, gaussian_logits, one_hot_mix, uniform };

std::string_view family_name(Family family) noexcept;
std::optional<Family> parse_family(std::string_view name) noexcept;

struct GeneratorSpec {
  Family family = Family::zipf;
  std::size_t n = 15;
  /// Zipf exponent s > 0: p_i proportional to (i + 1)^-s.
  double zipf_exponent = 1.1;
  /// Permute Zipf ranks across token ids (the only randomness in that family).
  bool shuffle = false;
  /// Symmetric Dirichlet concentration a > 0.
  double concentration = 1.0;
  /// Gaussian logit scale sigma > 0 and softmax temperature T > 0.
  double sigma = 1.0;
  double temperature = 1.0;
  /// one_hot_mix: mass on a random peak token, in (0, 1]; the rest is spread
  /// by a Dirichlet(1) draw over all tokens.
  double peak_mass = 0.9;
  std::uint64_t seed = 0;
};

void validate(const GeneratorSpec& spec);

/// Distribution number `index` of the batch. Uses CounterRng(spec.seed, index),
/// so any member can be regenerated alone.
ProbabilityDistribution generate_one(const GeneratorSpec& spec, std::uint64_t index);

/// generate_one for indices 0 .. count-1.
std::vector<ProbabilityDistribution> generate(const GeneratorSpec& spec, std::size_t count);

/// One JSON Lines record: {"id", "probs"} or {"id", "logits", "temperature"}.
struct DatasetRecord {
  std::string id;
  ProbabilityDistribution dist;
};

/// Reads a .jsonl dataset. A file must use a single record kind (probs or
/// logits); blank lines are skipped. Errors carry the 1-based line number.
std::vector<DatasetRecord> read_dataset(const std::filesystem::path& path);

/// Writes {"schema_version":1,"id":...,"probs":[...]} per record with
/// 17-significant-digit floats.
void write_dataset(const std::filesystem::path& path, const std::vector<DatasetRecord>& records);

}  // namespace toph

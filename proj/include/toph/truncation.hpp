#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "toph/distributions.hpp"

namespace toph {

enum class Method { top_h, top_k, top_p, min_p, eta };

std::string_view method_name(Method method) noexcept;
std::optional<Method> parse_method(std::string_view name) noexcept;

/// How top-H evaluates H(q) after each addition.
enum class EntropyUpdate {
  incremental,  // O(1) per step via EntropyAccumulator
  recompute,    // renormalize the prefix and sum -q ln q from scratch
};

struct TruncationConfig {
  Method method = Method::top_h;
  double alpha = 0.4;
  std::size_t k = 20;
  double p_nucleus = 0.9;
  double p_base = 0.1;
  double eta = 0.0002;
  /// Only the highest-probability `candidate_cap` tokens are considered; the
  /// capped vector is renormalized before the method runs.
  std::size_t candidate_cap = 100;
  /// Added to the top-H threshold before the strict `>` test.
  double entropy_slack = 0.0;
  EntropyUpdate entropy_update = EntropyUpdate::incremental;
  bool record_trace = false;
};

/// One top-H step: token `index` was tried, bringing the running mass to
/// `gamma` and the renormalized entropy to `entropy`.
struct TraceStep {
  std::size_t index = 0;
  double p = 0.0;
  double gamma = 0.0;
  double entropy = 0.0;
  bool accepted = false;
};

struct TruncationResult {
  Method method = Method::top_h;
  /// Token ids in descending probability, ties by ascending id.
  std::vector<std::size_t> selected;
  /// Renormalization of the input distribution over `selected`.
  SubsetDistribution subset;
  /// Entropy of the (capped, renormalized) candidate distribution.
  double h_p = 0.0;
  double h_q = 0.0;
  /// alpha * h_p; top-H only.
  std::optional<double> threshold;
  std::vector<TraceStep> trace;

  double gamma() const noexcept { return subset.gamma; }
};

/// Token ids with non-zero probability, sorted by descending probability with
/// ties broken by ascending id.
std::vector<std::size_t> descending_order(const ProbabilityDistribution& p);

TruncationResult top_h_truncate(const ProbabilityDistribution& p, const TruncationConfig& config);
TruncationResult top_k_truncate(const ProbabilityDistribution& p, const TruncationConfig& config);
TruncationResult top_p_truncate(const ProbabilityDistribution& p, const TruncationConfig& config);
TruncationResult min_p_truncate(const ProbabilityDistribution& p, const TruncationConfig& config);
/// Keeps tokens with p_i >= min(eta, sqrt(eta) * exp(-H(p))), the threshold
/// from Hewitt et al., "Truncation Sampling as Language Model Desmoothing".
TruncationResult eta_truncate(const ProbabilityDistribution& p, const TruncationConfig& config);

/// Dispatches on config.method.
TruncationResult truncate(const ProbabilityDistribution& p, const TruncationConfig& config);

/// Checks the parameters `config.method` needs; throws toph::Error otherwise.
void validate(const TruncationConfig& config);

/// Draws one token from result.subset by inverse CDF over `selected` order,
/// using the uniform CounterRng::at(seed, 0, draw_index). No generator state
/// survives between calls.
std::size_t sample_token(const TruncationResult& result, std::uint64_t seed, std::uint64_t draw_index);

}  // namespace toph

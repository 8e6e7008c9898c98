#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace toph {

/// Inputs whose sum is within this distance of 1 are accepted and renormalized.
inline constexpr double kInputNormalizationTolerance = 1e-6;

enum class InputMode { probs, logits };

/// A validated probability vector over a vocabulary of n >= 1 tokens.
///
/// Entries are non-negative and sum to 1 within 1e-9. Immutable after
/// construction.
class ProbabilityDistribution {
 public:
  /// Validates `values` as probabilities and renormalizes them to unit mass.
  static ProbabilityDistribution from_probs(std::span<const double> values);

  /// softmax(logits / temperature). Logits of -inf map to probability 0.
  static ProbabilityDistribution from_logits(std::span<const double> logits, double temperature);

  static ProbabilityDistribution uniform(std::size_t n);

  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }

 private:
  explicit ProbabilityDistribution(std::vector<double> probs) : probs_(std::move(probs)) {}

  std::vector<double> probs_;
};

ProbabilityDistribution make_distribution(std::span<const double> values, InputMode mode,
                                          double temperature = 1.0);

/// Shannon entropy in nats with 0 ln 0 = 0.
double entropy(const ProbabilityDistribution& p);

/// Entropy of `weights` after renormalizing them to unit mass. Zero entries
/// are skipped; the result is 0 for fewer than two positive entries.
double normalized_entropy(std::span<const double> weights);

/// q = p restricted to a token subset and renormalized by its mass gamma.
struct SubsetDistribution {
  std::vector<std::size_t> parent_indices;
  std::vector<double> q;
  double gamma = 0.0;

  std::size_t size() const noexcept { return q.size(); }
  double entropy() const { return normalized_entropy(q); }
};

/// Restricts `p` to `indices` (kept in the given order) and renormalizes.
SubsetDistribution renormalize(const ProbabilityDistribution& p, std::span<const std::size_t> indices);

/// Jensen-Shannon divergence between p and q, evaluated term by term through
/// the midpoint M = (p + q) / 2.
double jsd_direct(const ProbabilityDistribution& p, const SubsetDistribution& q);

/// JSD between p and its renormalized restriction to a subset of mass gamma.
/// Depends on gamma only: ln 2 + (gamma ln gamma - (1 + gamma) ln(1 + gamma)) / 2.
double jsd_closed_form(double gamma);

/// Running (mass, sum p ln p) over a growing token set, giving the entropy
/// of the renormalized set in O(1) per update.
class EntropyAccumulator {
 public:
  /// Adds a token of probability p_j > 0.
  void push(double p_j);

  /// Removes a previously pushed token by subtracting its contribution.
  void pop(double p_j);

  /// ln(gamma) - h / gamma; exactly 0 for zero or one selected tokens.
  double entropy() const;

  double gamma() const noexcept { return gamma_; }
  double h() const noexcept { return h_; }
  std::size_t count() const noexcept { return count_; }

 private:
  double gamma_ = 0.0;
  double h_ = 0.0;
  std::size_t count_ = 0;
};

}  // namespace toph

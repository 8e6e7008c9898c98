#pragma once

// Executable construction of the reduction from cardinality-constrained subset
// sum (CCSS) to the decision version of entropy-constrained mass maximization
// (ECME): padding to the narrow weight range, lifting K to at least 20, the
// booster construction, and checkers for each structural property the
// reduction relies on.
//
// Integers and probabilities are exact (cpp_int / cpp_rational). Entropies
// are transcendental and use 100-digit binary floats.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace toph::hardness {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using HighFloat = boost::multiprecision::cpp_bin_float_100;

/// Smallest cardinality the reduction accepts.
inline constexpr std::size_t kMinReductionK = 20;
/// decide_ecme_small enumerates C(m, K) subsets; C(24, 12) is about 2.7M.
inline constexpr std::size_t kMaxDecideHeavyItems = 24;
/// decide_ecme_full enumerates all 2^m heavy subsets.
inline constexpr std::size_t kMaxFullDecideHeavyItems = 24;
/// Window margins below this are indistinguishable from rounding error.
inline const HighFloat kMarginResolution{"1e-60"};

/// Does some subset of exactly K weights sum to tau?
struct CcssInstance {
  std::vector<BigInt> weights;
  BigInt tau;
  std::size_t K = 0;

  std::size_t size() const noexcept { return weights.size(); }
  /// Throws Errc::invalid_instance unless weights >= 1, tau >= 1, 3 <= K <= m.
  void validate() const;
};

/// tau/(K+1) < w_i < tau/(K-1) for every weight, by exact integer comparison.
bool satisfies_narrow_range(const CcssInstance& instance);

/// Adds M = (K+1) * max(tau, max w) to every weight and K*M to tau. The
/// result satisfies the narrow range and has the same K-subset solutions.
CcssInstance pad_to_narrow_range(const CcssInstance& instance);

struct Duplication {
  std::size_t factor = 1;
  CcssInstance instance;
};

/// For K < 20: d = ceil(20/K) copies of the weight list (copy j holds
/// weights[i] at index j*m + i), K1 = dK, tau1 = d*tau. Identity for K >= 20.
Duplication duplicate_to_k20(const CcssInstance& instance);

/// duplicate_to_k20 followed by pad_to_narrow_range; identity for K >= 20.
CcssInstance scale_to_k20(const CcssInstance& instance);

/// scale_to_k20(pad_to_narrow_range(x)): the input form reduce_to_ecme expects.
CcssInstance prepare(const CcssInstance& instance);

struct ReductionConstants {
  Rational gamma_K;   // 1 / (16 K^2)
  HighFloat theta_K;  // ln m - H(heavy weights normalized)
  HighFloat delta_K;  // 5 theta_K / (2 ln K)
  HighFloat epsilon_K;  // (0.0384 + gamma_K) / ln K
  std::int64_t lambda_K = 0;  // ceil((0.7333 - epsilon_K + delta_K) / 0.133)
  BigInt B;           // ceil(K^lambda_K) booster count
  Rational w_b;       // tau / (2B) booster weight
  Rational W;         // total weight: sum of heavy weights + tau / 2
};

/// m heavy items with probabilities w_i / W plus B identical boosters of
/// probability w_b / W (never materialized). Question: is there a subset of
/// mass exactly beta whose renormalized entropy is at most budget?
struct EcmeInstance {
  std::vector<BigInt> heavy_weights;
  BigInt tau;
  std::size_t K = 0;

  std::vector<Rational> heavy_probs;
  BigInt booster_count;
  Rational booster_prob;
  Rational beta;

  HighFloat heavy_entropy;    // -sum over heavy items of p ln p
  HighFloat booster_entropy;  // -B p_b ln p_b
  HighFloat entropy;          // H(p) = heavy_entropy + booster_entropy
  HighFloat budget;           // 0.4 H(p)

  ReductionConstants constants;

  std::size_t heavy_count() const noexcept { return heavy_weights.size(); }
  Rational total_mass() const;
};

/// Builds the ECME instance. Requires K >= 20 and the narrow range.
/// Throws KTooSmall, NarrowRangeViolated or ThetaOutOfBounds.
EcmeInstance reduce_to_ecme(const CcssInstance& instance);

struct WindowCheck {
  bool holds = false;
  HighFloat lower_bound;   // ln K - gamma_K
  HighFloat upper_bound;   // ln(K + 1)
  HighFloat lower_margin;  // budget - lower_bound
  HighFloat upper_margin;  // upper_bound - budget
};

/// ln K - gamma_K < budget < ln(K + 1), evaluated on the instance's stored
/// budget. Throws PrecisionInsufficient when a margin is below kMarginResolution.
WindowCheck verify_budget_window(const EcmeInstance& instance);

/// Exact mass of `heavy` plus `boosters` booster items.
Rational subset_mass(const EcmeInstance& instance, std::span<const std::size_t> heavy, const BigInt& boosters = 0);

/// Entropy of the renormalized set made of `heavy` plus `boosters` boosters.
HighFloat subset_entropy(const EcmeInstance& instance, std::span<const std::size_t> heavy,
                         const BigInt& boosters = 0);

struct GapCheck {
  bool holds = false;
  HighFloat entropy;
  HighFloat bound;  // ln K - gamma_K
};

/// H(S) <= ln K - gamma_K for a K-subset of heavy items with weight tau.
/// Throws WrongCardinality or WrongMass for other subsets.
GapCheck verify_entropy_gap(const EcmeInstance& instance, std::span<const std::size_t> heavy_subset);

struct BoosterCheck {
  bool holds = false;  // entropy > budget
  HighFloat entropy;
  HighFloat budget;
};

/// Entropy of `heavy` plus `boosters` (>= 1) boosters against the budget.
BoosterCheck verify_booster_blowup(const EcmeInstance& instance, std::span<const std::size_t> heavy_subset,
                                   const BigInt& boosters);

struct CardinalityLockCheck {
  bool holds = true;
  std::uint64_t exact_mass_subsets = 0;  // booster-free subsets with mass beta
  std::vector<std::size_t> counterexample;
};

/// Enumerates every booster-free subset and checks that mass beta forces
/// exactly K items. Requires m <= 24.
CardinalityLockCheck verify_cardinality_lock(const EcmeInstance& instance);

struct Decision {
  bool yes = false;
  std::vector<std::size_t> witness;  // ascending heavy indices
  BigInt witness_boosters;
  std::uint64_t subsets_examined = 0;
};

/// Booster-free K-subsets only, in lexicographic order; the first one with
/// mass beta and entropy <= budget is the witness. Requires m <= 24.
Decision decide_ecme_small(const EcmeInstance& instance);

/// Every heavy subset, completed by the unique booster count (if any) that
/// brings its mass to beta. Requires m <= 24.
Decision decide_ecme_full(const EcmeInstance& instance);

}  // namespace toph::hardness
